//! Command implementations behind the `twistfan` binary. Every command returns
//! a value; `main` only does file and terminal IO.

pub mod document;
pub mod problem;
pub mod slice;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use twistfan::fan::rub::refine;
use twistfan::fan::twist::{build_div_fan, enumerate_triples};
use twistfan::fan::verify::CheckOutcome;
use twistfan::oracle::check_oracle;
use twistfan::stability::{format_rational, suggest_theta};
use twistfan::verify_subdivision;

pub use document::{ConeRecord, FanDocument, FanKind, Verification};
pub use problem::{Problem, ProblemSpec};
pub use slice::{render_svg, SliceDocument};

use document::{describe_lift, incidence, record, tuple, CheckRecord};

pub const DEFAULT_BOX: i64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub model: Vec<String>,
    pub divisor: Vec<(String, i64)>,
    pub flow: Vec<(String, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowListing {
    pub problem: ProblemSpec,
    pub triples: Vec<TripleRecord>,
}

impl FlowListing {
    pub fn pretty(&self) -> String {
        let on_graph = self.triples.iter().filter(|t| t.model.is_empty()).count();
        let mut out = format!(
            "{} triples: {on_graph} on the graph, {} on subdivided models\n",
            self.triples.len(),
            self.triples.len() - on_graph
        );
        for t in &self.triples {
            let entries = |xs: &[(String, i64)]| xs.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
            out += &format!("model {{{}}}  D [{}]  s [{}]\n", t.model.join(","), entries(&t.divisor), entries(&t.flow));
        }
        out
    }
}

pub fn cmd_flows(problem: &Problem) -> Result<FlowListing> {
    let triples = enumerate_triples(&problem.graph, &problem.a, &problem.theta)?
        .iter()
        .map(|t| TripleRecord { model: t.subdivided_ids(), divisor: t.divisor_entries(), flow: t.flow_entries() })
        .collect();
    Ok(FlowListing { problem: problem.spec.clone(), triples })
}

pub fn cmd_div_fan(problem: &Problem, box_bound: i64) -> Result<FanDocument> {
    let div = build_div_fan(&problem.graph, &problem.a, &problem.theta)?;
    let cones = div
        .cones
        .iter()
        .enumerate()
        .map(|(i, dc)| {
            let lattice = dc.cone.base.ray_lattice();
            record(div.label(i), &dc.triple, &dc.cone.base, lattice.basis(), &lattice.index())
        })
        .collect();
    let fan = div.to_fan();
    let (faces, adjacent) = incidence(&fan);
    let report = verify_subdivision(&fan, box_bound);
    Ok(FanDocument {
        kind: FanKind::Div,
        problem: problem.spec.clone(),
        coords: div.coords.clone(),
        cones,
        faces,
        adjacent,
        verification: Verification::new(box_bound, &report.checks),
    })
}

pub fn cmd_rub_fan(problem: &Problem, box_bound: i64) -> Result<FanDocument> {
    let rub = twistfan::build_rub_fan(&problem.graph, &problem.a, &problem.theta)?;
    let mut cones = Vec::new();
    for (i, c) in rub.cones.iter().enumerate() {
        let triple = &rub.div.cones[c.div].triple;
        let Some(lattice) = &c.lattice else {
            bail!("{} is not simplicial", rub.label(i));
        };
        let mut r = record(rub.label(i), triple, &c.cone.base, lattice.by_integrality.basis(), &lattice.index());
        r.ordering = Some(c.ordering.describe(triple.model.graph()));
        r.lift = Some(describe_lift(&c.lift, triple.model.graph()));
        cones.push(r);
    }
    let fan = rub.to_fan();
    let (faces, adjacent) = incidence(&fan);
    let mut checks = verify_subdivision(&fan, box_bound).checks;
    checks.push(rub.check_bijective_over_div(box_bound));
    checks.push(rub.check_smooth());
    checks.push(rub.check_lattice_methods());
    Ok(FanDocument {
        kind: FanKind::Rub,
        problem: problem.spec.clone(),
        coords: rub.div.coords.clone(),
        cones,
        faces,
        adjacent,
        verification: Verification::new(box_bound, &checks),
    })
}

pub fn cmd_slice(doc: &FanDocument, weights: Option<&[i64]>) -> Result<SliceDocument> {
    slice::slice(doc, weights)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub box_bound: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if let Some(s) = &self.skipped {
            out += &format!("skipped {s}\n");
        }
        for c in &self.checks {
            out += &format!("{}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
            if let Some(w) = &c.witness {
                out += &format!(" ({w})");
            }
            out += "\n";
        }
        out += if self.passed { "all checks pass\n" } else { "some checks FAIL\n" };
        out
    }
}

/// Runs every property check on both fans. `skip` drops one Div cone first,
/// as a negative control.
pub fn cmd_check(problem: &Problem, box_bound: i64, skip: Option<usize>) -> Result<CheckReport> {
    let mut div = build_div_fan(&problem.graph, &problem.a, &problem.theta)?;
    let mut skipped = None;
    if let Some(i) = skip {
        if i >= div.cones.len() {
            bail!("cannot skip cone {i}: the Div fan has {} cones", div.cones.len());
        }
        skipped = Some(div.label(i));
        div.cones.remove(i);
    }
    let prefixed = |prefix: &str, c: CheckOutcome| CheckOutcome { name: format!("{prefix}: {}", c.name), ..c };
    let mut checks: Vec<CheckOutcome> =
        verify_subdivision(&div.to_fan(), box_bound).checks.into_iter().map(|c| prefixed("div", c)).collect();
    let rub = refine(div)?;
    let mut rub_checks = verify_subdivision(&rub.to_fan(), box_bound).checks;
    rub_checks.push(rub.check_bijective_over_div(box_bound));
    rub_checks.push(rub.check_smooth());
    rub_checks.push(rub.check_lattice_methods());
    rub_checks.push(rub.check_stable_lifts());
    rub_checks.extend(check_oracle(&rub, box_bound));
    checks.extend(rub_checks.into_iter().map(|c| prefixed("rub", c)));
    Ok(CheckReport {
        box_bound,
        skipped,
        passed: checks.iter().all(|c| c.passed),
        checks: checks.iter().map(CheckRecord::from).collect(),
    })
}

/// Fills in a generic stability condition with the requested sign per vertex
/// (in graph order), totalling the degree of `A`.
pub fn cmd_suggest_theta(spec: &ProblemSpec, signs: &[i8]) -> Result<ProblemSpec> {
    let (graph, a) = spec.graph_and_divisor()?;
    if signs.len() != graph.vertex_count() {
        bail!("expected {} signs, got {}", graph.vertex_count(), signs.len());
    }
    let Some(theta) = suggest_theta(&graph, signs, a.degree()) else {
        bail!("no generic condition found with signs {}", tuple(&signs.iter().map(|&s| s as i64).collect::<Vec<_>>()));
    };
    let mut out = spec.clone();
    out.theta = graph.vertices().iter().map(|v| v.id.clone()).zip(theta.0.iter().map(format_rational)).collect();
    out.validate()?;
    Ok(out)
}
