use super::lift::{equidimensional_lift, has_product_shape, rub_lattice, EquidimensionalLift, RubLattice};
use super::ordering::{maximal_orderings, ordering_cone, Ordering};
use super::twist::{build_div_fan, DivFan, ProjectedCone};
use super::verify::{face_closure, unique_relint, CheckOutcome, Fan, FanCone};
use crate::error::Result;
use crate::flow::Divisor;
use crate::graph::Graph;
use crate::stability::StabilityCondition;

/// A maximal cone of the smooth refinement.
#[derive(Debug, Clone)]
pub struct RubCone {
    /// Index of the carrying cone in the Div fan.
    pub div: usize,
    pub ordering: Ordering,
    pub cone: ProjectedCone,
    pub lift: EquidimensionalLift,
    /// `None` when the cone is not simplicial.
    pub lattice: Option<RubLattice>,
}

#[derive(Debug, Clone)]
pub struct RubFan {
    pub div: DivFan,
    pub cones: Vec<RubCone>,
}

/// Refines every full-dimensional Div cone by its maximal ordering cones.
pub fn build_rub_fan(g: &Graph, a: &Divisor, theta: &StabilityCondition) -> Result<RubFan> {
    refine(build_div_fan(g, a, theta)?)
}

pub fn refine(div: DivFan) -> Result<RubFan> {
    let mut cones = Vec::new();
    for (i, dc) in div.cones.iter().enumerate() {
        if !dc.cone.base.is_full_dimensional() {
            continue;
        }
        let model = &dc.triple.model;
        let f = &dc.triple.flow;
        for kappa in maximal_orderings(model.graph(), f, &dc.cone.extended)? {
            let cone = ordering_cone(model, f, &kappa, &dc.cone)?;
            if !cone.base.is_full_dimensional() {
                continue;
            }
            let lift = equidimensional_lift(model, f, &kappa, &cone)?;
            let lattice = rub_lattice(&lift, &cone.base).ok();
            cones.push(RubCone { div: i, ordering: kappa, cone, lift, lattice });
        }
    }
    Ok(RubFan { div, cones })
}

impl DivFan {
    pub fn label(&self, i: usize) -> String {
        self.cones[i].triple.to_string()
    }

    pub fn to_fan(&self) -> Fan {
        Fan {
            coords: self.coords.clone(),
            cones: (0..self.cones.len())
                .map(|i| FanCone { label: self.label(i), cone: self.cones[i].cone.base.clone() })
                .collect(),
            labels_open_stratum: true,
        }
    }
}

impl RubFan {
    pub fn label(&self, i: usize) -> String {
        let c = &self.cones[i];
        format!("{} k[{}]", self.div.label(c.div), c.ordering.describe(self.div.cones[c.div].triple.model.graph()))
    }

    pub fn to_fan(&self) -> Fan {
        Fan {
            coords: self.div.coords.clone(),
            cones: (0..self.cones.len())
                .map(|i| FanCone { label: self.label(i), cone: self.cones[i].cone.base.clone() })
                .collect(),
            labels_open_stratum: false,
        }
    }

    /// Indices of the Rub cones over a Div cone.
    pub fn over(&self, div: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| self.cones[i].div == div).collect()
    }

    /// Over each full-dimensional Div cone, its lattice points lie in exactly
    /// one relative interior among the ordering cones and their faces.
    pub fn check_bijective_over_div(&self, bound: i64) -> CheckOutcome {
        let n = self.div.coords.len();
        for (d, dc) in self.div.cones.iter().enumerate() {
            if !dc.cone.base.is_full_dimensional() {
                continue;
            }
            let over = self.over(d);
            let closure = face_closure(over.iter().map(|&i| &self.cones[i].cone.base));
            if let Some(w) = unique_relint(&closure, n, bound, Some(&dc.cone.base)) {
                return CheckOutcome::fail("ordering cones biject onto Div cones", format!("{}: {w}", self.div.label(d)));
            }
        }
        CheckOutcome::pass("ordering cones biject onto Div cones")
    }

    /// Simplicial, unimodular against the attached lattice, and of product shape.
    pub fn check_smooth(&self) -> CheckOutcome {
        let name = "maximal cones are smooth";
        for (i, c) in self.cones.iter().enumerate() {
            let Some(lat) = &c.lattice else {
                return CheckOutcome::fail(name, format!("{} is not simplicial", self.label(i)));
            };
            if !lat.is_unimodular() {
                return CheckOutcome::fail(name, format!("{} is not unimodular", self.label(i)));
            }
            if !has_product_shape(&c.lift, &c.cone, lat) {
                return CheckOutcome::fail(name, format!("{} is not a product", self.label(i)));
            }
        }
        CheckOutcome::pass(name)
    }

    pub fn check_lattice_methods(&self) -> CheckOutcome {
        let name = "lattice methods agree";
        for (i, c) in self.cones.iter().enumerate() {
            match &c.lattice {
                Some(lat) if lat.methods_agree() => {}
                Some(_) => return CheckOutcome::fail(name, format!("{} has disagreeing lattices", self.label(i))),
                None => return CheckOutcome::fail(name, format!("{} is not simplicial", self.label(i))),
            }
        }
        CheckOutcome::pass(name)
    }

    pub fn check_stable_lifts(&self) -> CheckOutcome {
        let failure = (0..self.cones.len())
            .find(|&i| !self.cones[i].lift.is_stable())
            .map(|i| format!("{} has an empty level", self.label(i)));
        CheckOutcome::from_first_failure("lifts are stable", failure)
    }
}
