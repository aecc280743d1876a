use std::collections::BTreeMap;
use std::fmt;

use crate::polyhedra::cone::box_points;
use crate::polyhedra::{Cone, Int};

/// A labelled cone of a fan in base coordinates.
#[derive(Debug, Clone)]
pub struct FanCone {
    pub label: String,
    pub cone: Cone,
}

/// A finite collection of cones in one orthant, closed under faces implicitly.
#[derive(Debug, Clone)]
pub struct Fan {
    pub coords: Vec<String>,
    pub cones: Vec<FanCone>,
    /// Whether every point with all coordinates positive should lie in the
    /// relative interior of exactly one labelled cone.
    pub labels_open_stratum: bool,
}

impl Fan {
    /// For each cone, the other cones it is a proper face of.
    pub fn face_relation(&self) -> Vec<Vec<usize>> {
        (0..self.cones.len())
            .map(|i| {
                (0..self.cones.len())
                    .filter(|&j| j != i && self.cones[i].cone != self.cones[j].cone)
                    .filter(|&j| self.cones[i].cone.is_face_of(&self.cones[j].cone))
                    .collect()
            })
            .collect()
    }

    /// Cones that are not faces of other cones.
    pub fn maximal(&self) -> Vec<usize> {
        self.face_relation()
            .iter()
            .enumerate()
            .filter(|(_, sup)| sup.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Every face of every cone, deduplicated.
    pub fn face_closure(&self) -> Vec<Cone> {
        face_closure(self.cones.iter().map(|c| &c.cone))
    }
}

pub fn face_closure<'a>(cones: impl Iterator<Item = &'a Cone>) -> Vec<Cone> {
    let mut seen: BTreeMap<Vec<Vec<Int>>, Cone> = BTreeMap::new();
    for c in cones {
        if seen.contains_key(c.rays()) {
            continue;
        }
        for f in c.faces() {
            seen.entry(f.rays().to_vec()).or_insert(f);
        }
    }
    seen.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckOutcome {
    pub fn pass(name: &str) -> Self {
        CheckOutcome { name: name.into(), passed: true, witness: None }
    }

    pub fn fail(name: &str, witness: String) -> Self {
        CheckOutcome { name: name.into(), passed: false, witness: Some(witness) }
    }

    pub fn from_first_failure(name: &str, failure: Option<String>) -> Self {
        match failure {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, if self.passed { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn point_str(p: &[i64]) -> String {
    format!("({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// Each point of the box lies in the relative interior of exactly one of `cones`.
pub fn unique_relint(cones: &[Cone], n: usize, bound: i64, within: Option<&Cone>) -> Option<String> {
    for p in box_points(n, bound) {
        if within.is_some_and(|w| !w.contains_i64(&p)) {
            continue;
        }
        let count = cones.iter().filter(|c| c.relint_contains_i64(&p)).count();
        if count != 1 {
            return Some(format!("point {} lies in {count} relative interiors", point_str(&p)));
        }
    }
    None
}

/// Pairwise intersections, face covering of the box, dimensions, and the
/// labelled open stratum.
pub fn verify_subdivision(fan: &Fan, bound: i64) -> Report {
    let n = fan.coords.len();
    let mut checks = Vec::new();

    let mut failure = None;
    'pairs: for i in 0..fan.cones.len() {
        if fan.cones[i].cone.coords() != fan.coords.as_slice() {
            failure = Some(format!("{} has foreign coordinates", fan.cones[i].label));
            break;
        }
        for j in i + 1..fan.cones.len() {
            let (a, b) = (&fan.cones[i].cone, &fan.cones[j].cone);
            let meet = a.intersect(b).expect("same coordinates");
            if !meet.is_face_of(a) || !meet.is_face_of(b) {
                failure = Some(format!("{} and {} meet in {meet}", fan.cones[i].label, fan.cones[j].label));
                break 'pairs;
            }
        }
    }
    checks.push(CheckOutcome::from_first_failure("intersections are faces", failure));

    let mut failure = None;
    for i in 0..fan.cones.len() {
        for j in i + 1..fan.cones.len() {
            if fan.cones[i].cone == fan.cones[j].cone {
                failure = Some(format!("{} and {} coincide", fan.cones[i].label, fan.cones[j].label));
            }
        }
    }
    checks.push(CheckOutcome::from_first_failure("cones are distinct", failure));

    let failure = fan
        .maximal()
        .into_iter()
        .find(|&i| !fan.cones[i].cone.is_full_dimensional())
        .map(|i| format!("maximal cone {} has dimension {}", fan.cones[i].label, fan.cones[i].cone.dim()));
    checks.push(CheckOutcome::from_first_failure("maximal cones are full-dimensional", failure));

    let closure = fan.face_closure();
    checks.push(CheckOutcome::from_first_failure("box points covered once", unique_relint(&closure, n, bound, None)));

    if fan.labels_open_stratum {
        let mut failure = None;
        for p in box_points(n, bound).filter(|p| p.iter().all(|&x| x > 0)) {
            let hits: Vec<&str> = fan
                .cones
                .iter()
                .filter(|c| c.cone.relint_contains_i64(&p))
                .map(|c| c.label.as_str())
                .collect();
            if hits.len() != 1 {
                failure = Some(format!("point {} is labelled by {} cones {:?}", point_str(&p), hits.len(), hits));
                break;
            }
        }
        checks.push(CheckOutcome::from_first_failure("open stratum labelled once", failure));
    }
    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::cone::rat_vec;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("l{i}")).collect()
    }

    #[test]
    fn orthant_alone_passes() {
        let fan = Fan {
            coords: names(2),
            cones: vec![FanCone { label: "all".into(), cone: Cone::from_constraints(names(2), &[], &[]) }],
            labels_open_stratum: true,
        };
        assert!(verify_subdivision(&fan, 4).passed());
    }

    #[test]
    fn overlapping_halves_fail() {
        let half = |c: [i64; 2]| Cone::from_constraints(names(2), &[], &[rat_vec(&c)]);
        let good = Fan {
            coords: names(2),
            cones: vec![
                FanCone { label: "a".into(), cone: half([1, -1]) },
                FanCone { label: "b".into(), cone: half([-1, 1]) },
            ],
            labels_open_stratum: false,
        };
        assert!(verify_subdivision(&good, 3).passed());
        let bad = Fan {
            cones: vec![
                FanCone { label: "a".into(), cone: half([1, -2]) },
                FanCone { label: "b".into(), cone: half([-1, 1]) },
            ],
            ..good
        };
        let report = verify_subdivision(&bad, 3);
        assert!(!report.passed());
        assert!(report.failures()[0].witness.is_some());
    }
}
