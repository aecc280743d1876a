use std::path::Path;

use anyhow::{Context, Result};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use twistfan::fan::lift::EquidimensionalLift;
use twistfan::fan::verify::{CheckOutcome, Fan};
use twistfan::fan::twist::DivTriple;
use twistfan::polyhedra::{Cone, Int};
use twistfan::Graph;

use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FanKind {
    Div,
    Rub,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRecord {
    pub label: String,
    /// Base edges subdivided in the model carrying the cone.
    pub model: Vec<String>,
    pub divisor: Vec<(String, i64)>,
    pub flow: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<String>,
    pub dim: usize,
    pub equations: Vec<String>,
    pub inequalities: Vec<String>,
    pub rays: Vec<Vec<i64>>,
    pub sublattice: Vec<Vec<i64>>,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<&CheckOutcome> for CheckRecord {
    fn from(c: &CheckOutcome) -> Self {
        CheckRecord { name: c.name.clone(), passed: c.passed, witness: c.witness.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub box_bound: i64,
    pub summary: String,
    pub checks: Vec<CheckRecord>,
}

impl Verification {
    pub fn new(box_bound: i64, checks: &[CheckOutcome]) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Verification {
            box_bound,
            summary: if passed { "pass".into() } else { "fail".into() },
            checks: checks.iter().map(CheckRecord::from).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub kind: FanKind,
    pub problem: ProblemSpec,
    pub coords: Vec<String>,
    pub cones: Vec<ConeRecord>,
    /// For each cone, the cones it is a proper face of.
    pub faces: Vec<Vec<usize>>,
    /// Pairs of cones meeting in a common facet.
    pub adjacent: Vec<(usize, usize)>,
    pub verification: Verification,
}

impl FanDocument {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn pretty(&self) -> String {
        let mut out = format!(
            "{} fan in ({}), {} cones\n",
            match self.kind {
                FanKind::Div => "Div",
                FanKind::Rub => "Rub",
            },
            self.coords.join(", "),
            self.cones.len()
        );
        for (i, c) in self.cones.iter().enumerate() {
            out += &format!("[{i}] {} (dim {}, index {})\n", c.label, c.dim, c.index);
            for line in &c.equations {
                out += &format!("      {line}\n");
            }
            for line in &c.inequalities {
                out += &format!("      {line}\n");
            }
            let rays: Vec<String> = c.rays.iter().map(|r| tuple(r)).collect();
            out += &format!("      rays {}\n", rays.join(" "));
            if let Some(l) = &c.lift {
                out += &format!("      lift {l}\n");
            }
        }
        out += &format!("verification (box {}): {}\n", self.verification.box_bound, self.verification.summary);
        for c in &self.verification.checks {
            out += &format!("  {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
            if let Some(w) = &c.witness {
                out += &format!(" ({w})");
            }
            out += "\n";
        }
        out
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub(crate) fn tuple(v: &[i64]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub(crate) fn small(x: &Int) -> i64 {
    x.to_i64().expect("coordinate fits in 64 bits")
}

pub(crate) fn small_rows(rows: &[Vec<Int>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(small).collect()).collect()
}

/// Everything a record needs except the ordering data.
pub(crate) fn record(label: String, triple: &DivTriple, cone: &Cone, sublattice: &[Vec<Int>], index: &Int) -> ConeRecord {
    let (equations, inequalities): (Vec<String>, Vec<String>) =
        cone.describe().into_iter().partition(|line| line.ends_with("= 0") && !line.ends_with(">= 0"));
    ConeRecord {
        label,
        model: triple.subdivided_ids(),
        divisor: triple.divisor_entries(),
        flow: triple.flow_entries(),
        ordering: None,
        lift: None,
        dim: cone.dim(),
        equations,
        inequalities,
        rays: small_rows(cone.rays()),
        sublattice: small_rows(sublattice),
        index: index.to_u64().expect("index fits in 64 bits"),
    }
}

pub(crate) fn describe_lift(lift: &EquidimensionalLift, model: &Graph) -> String {
    let cuts: Vec<String> =
        lift.cuts.iter().map(|c| format!("{}@{}", model.edge(c.edge).id, c.level)).collect();
    let contracted: Vec<&str> = lift.contracted.iter().map(|&e| model.edge(e).id.as_str()).collect();
    format!(
        "{} levels; cuts [{}]; contracted [{}]",
        lift.line.vertex_count(),
        cuts.join(", "),
        contracted.join(", ")
    )
}

/// The face relation of `fan` and the pairs of cones sharing a facet.
pub(crate) fn incidence(fan: &Fan) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let faces = fan.face_relation();
    let mut adjacent = Vec::new();
    for i in 0..fan.cones.len() {
        for j in i + 1..fan.cones.len() {
            let (a, b) = (&fan.cones[i].cone, &fan.cones[j].cone);
            if a.dim() != b.dim() || a.dim() == 0 {
                continue;
            }
            let meet = a.intersect(b).expect("same coordinates");
            if meet.dim() + 1 == a.dim() {
                adjacent.push((i, j));
            }
        }
    }
    (faces, adjacent)
}
