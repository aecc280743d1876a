use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ordering::{alpha_from_first_leg, Ordering};
use super::twist::ProjectedCone;
use crate::error::{Error, Result};
use crate::flow::{flow_partial_order, Flow};
use crate::graph::QuasiStableModel;
use crate::polyhedra::lattice::{self, Sublattice};
use crate::polyhedra::{linalg, Cone, Int, LinearForm, Rat};

/// A chain of vertices with increasing values; edge `i` joins levels `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinatorialLine {
    /// Value of each vertex, as a form in base coordinates.
    pub levels: Vec<LinearForm>,
}

impl CombinatorialLine {
    pub fn vertex_count(&self) -> usize {
        self.levels.len()
    }

    pub fn edge_lengths(&self) -> Vec<LinearForm> {
        self.levels.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

/// A new vertex on a model edge where it crosses an intermediate level.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftCut {
    /// Model edge being subdivided.
    pub edge: usize,
    /// Level of the line the new vertex maps to.
    pub level: usize,
    /// Distance from the lower endpoint, as a form in base coordinates.
    pub position: LinearForm,
}

/// A piece of the refined graph: either a whole model edge or part of one.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftPiece {
    pub edge: usize,
    pub length: LinearForm,
    /// Edge of the line it maps onto, or `None` for contracted edges.
    pub line_edge: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquidimensionalLift {
    pub line: CombinatorialLine,
    /// Level of every model vertex.
    pub vertex_levels: Vec<usize>,
    pub cuts: Vec<LiftCut>,
    pub pieces: Vec<LiftPiece>,
    /// Model edges with slope zero.
    pub contracted: Vec<usize>,
}

impl EquidimensionalLift {
    /// Every level is hit by a model vertex.
    pub fn is_stable(&self) -> bool {
        (0..self.line.vertex_count()).all(|l| self.vertex_levels.contains(&l))
    }

    /// Lengths whose integrality defines the lattice of the lift.
    pub fn integrality_forms(&self) -> Vec<LinearForm> {
        self.pieces.iter().map(|p| p.length.clone()).collect()
    }

    /// Vertex count of the refined graph.
    pub fn refined_vertex_count(&self) -> usize {
        self.vertex_levels.len() + self.cuts.len()
    }
}

/// Subdivides the model so the PL function maps vertices onto the levels of `kappa`.
pub fn equidimensional_lift(
    model: &QuasiStableModel,
    f: &Flow,
    kappa: &Ordering,
    carrier: &ProjectedCone,
) -> Result<EquidimensionalLift> {
    let g = model.graph();
    let po = flow_partial_order(g, f)?;
    if !kappa.extends(&po) {
        return Err(Error::IncompatibleOrdering);
    }
    let alpha: Vec<LinearForm> =
        alpha_from_first_leg(g, f)?.iter().map(|a| carrier.pull_back(a)).collect();
    let levels: Vec<LinearForm> = kappa.blocks.iter().map(|b| alpha[b[0]].clone()).collect();
    let vertex_levels = kappa.block_of(g.vertex_count());
    let mut cuts = Vec::new();
    let mut pieces = Vec::new();
    let mut contracted = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let s = f.0[e];
        if s == 0 {
            contracted.push(e);
            pieces.push(LiftPiece { edge: e, length: carrier.lift_back[e].clone(), line_edge: None });
            continue;
        }
        let (low, high) = if s > 0 { (edge.tail, edge.head) } else { (edge.head, edge.tail) };
        let inv = BigRational::new(Int::one(), Int::from(s.abs()));
        let (a, b) = (vertex_levels[low], vertex_levels[high]);
        for level in a + 1..b {
            let mut position = LinearForm::zero(levels[0].len());
            position.add_scaled(&(&levels[level] - &alpha[low]), &inv);
            cuts.push(LiftCut { edge: e, level, position });
        }
        for level in a..b {
            let mut length = LinearForm::zero(levels[0].len());
            length.add_scaled(&(&levels[level + 1] - &levels[level]), &inv);
            pieces.push(LiftPiece { edge: e, length, line_edge: Some(level) });
        }
    }
    Ok(EquidimensionalLift { line: CombinatorialLine { levels }, vertex_levels, cuts, pieces, contracted })
}

/// The integral structure of a simplicial ordering cone, computed three ways.
#[derive(Debug, Clone)]
pub struct RubLattice {
    /// Primitive rays of the cone in the ambient lattice.
    pub rays: Vec<Vec<Int>>,
    /// Least multiple of each ray making every piece length integral.
    pub multiples: Vec<Int>,
    /// Lattice spanned by the primitive rays.
    pub by_rays: Sublattice,
    /// Lattice spanned by the multiples `k * ray`.
    pub by_multiples: Sublattice,
    /// Points of the saturated span where every piece length is integral.
    pub by_integrality: Sublattice,
    /// The multiples together with the integral points of their parallelepiped.
    pub by_enumeration: Sublattice,
}

impl RubLattice {
    pub fn generators(&self) -> Vec<Vec<Int>> {
        self.rays.iter().zip(&self.multiples).map(|(r, k)| r.iter().map(|x| x * k).collect()).collect()
    }

    /// Index of the attached lattice in the saturated span.
    pub fn index(&self) -> Int {
        self.by_integrality.index()
    }

    pub fn methods_agree(&self) -> bool {
        self.by_rays == self.by_multiples
            && self.by_multiples == self.by_integrality
            && self.by_integrality == self.by_enumeration
    }

    /// The rays generate the attached lattice.
    pub fn is_unimodular(&self) -> bool {
        self.by_multiples == self.by_integrality
    }
}

fn all_integral(forms: &[LinearForm], x: &[Int]) -> bool {
    forms.iter().all(|f| f.eval_int(x).is_integer())
}

pub fn rub_lattice(lift: &EquidimensionalLift, carrier: &Cone) -> Result<RubLattice> {
    if !carrier.is_simplicial() {
        return Err(Error::NonSimplicial { rays: carrier.rays().len(), dim: carrier.dim() });
    }
    let n = carrier.ambient_dim();
    let forms = lift.integrality_forms();
    let rays = carrier.rays().to_vec();
    let multiples: Vec<Int> = rays
        .iter()
        .map(|r| forms.iter().fold(Int::one(), |acc, f| acc.lcm(f.eval_int(r).denom())))
        .collect();
    let generators: Vec<Vec<Int>> =
        rays.iter().zip(&multiples).map(|(r, k)| r.iter().map(|x| x * k).collect()).collect();
    let by_rays = Sublattice::new(n, &rays);
    let by_multiples = Sublattice::new(n, &generators);
    let saturated = by_rays.saturation();
    let form_rows: Vec<Vec<Rat>> = forms.iter().map(|f| f.0.clone()).collect();
    let by_integrality = lattice::integrality_lattice(saturated.basis(), &form_rows, n);
    let mut gens = generators.clone();
    gens.extend(
        lattice::parallelepiped_points(&generators, n)?
            .into_iter()
            .filter(|p| !linalg::is_zero_vec(p) && all_integral(&forms, p)),
    );
    let by_enumeration = Sublattice::new(n, &gens);
    Ok(RubLattice { rays, multiples, by_rays, by_multiples, by_integrality, by_enumeration })
}

/// The cone is a product of one factor per line edge and one per contracted
/// edge: its dimension matches, and each generator lengthens exactly one factor.
pub fn has_product_shape(lift: &EquidimensionalLift, carrier: &ProjectedCone, lattice: &RubLattice) -> bool {
    let mut chart: Vec<LinearForm> = lift.line.edge_lengths();
    chart.extend(lift.contracted.iter().map(|&e| carrier.lift_back[e].clone()));
    if chart.len() != carrier.base.dim() {
        return false;
    }
    let mut hit = vec![false; chart.len()];
    for g in lattice.generators() {
        let values: Vec<Rat> = chart.iter().map(|c| c.eval_int(&g)).collect();
        let nonzero: Vec<usize> = (0..values.len()).filter(|&i| !values[i].is_zero()).collect();
        if nonzero.len() != 1 || !values[nonzero[0]].is_positive() || hit[nonzero[0]] {
            return false;
        }
        hit[nonzero[0]] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::ordering::{enumerate_orderings, ordering_cone};
    use crate::fan::twist::twist_cone;
    use crate::graph::tests::triangle;
    use crate::polyhedra::linalg::int;

    fn setup(kind: &str) -> (EquidimensionalLift, ProjectedCone) {
        let model = triangle().quasi_stable_model(&[1]).unwrap();
        let f = Flow(vec![2, 1, 2, 1]);
        let twist = twist_cone(&model, &f).unwrap();
        let kappa = enumerate_orderings(model.graph(), &f)
            .unwrap()
            .into_iter()
            .find(|o| o.describe(model.graph()) == kind)
            .unwrap();
        let cone = ordering_cone(&model, &f, &kappa, &twist).unwrap();
        (equidimensional_lift(&model, &f, &kappa, &cone).unwrap(), cone)
    }

    #[test]
    fn lift_below() {
        let (lift, cone) = setup("v1 < u2 < v2 < v3");
        assert!(lift.is_stable());
        // Edge 1 (slope 2) is cut at the level of u2, half of l2' from v1.
        let on_first: Vec<&LiftCut> = lift.cuts.iter().filter(|c| c.edge == 0).collect();
        assert_eq!(on_first.len(), 1);
        assert_eq!(on_first[0].position, LinearForm(crate::polyhedra::cone::rat_vec(&[-2, 2, -1])).scaled_half());
        // Edge 2'' is cut at the level of v2.
        assert!(lift.cuts.iter().any(|c| c.edge == 2 && c.level == 2));
        assert_eq!(lift.cuts.len(), 2);
        let lat = rub_lattice(&lift, &cone.base).unwrap();
        assert_eq!(lat.multiples, vec![int(1), int(1), int(1)]);
        assert_eq!(lat.index(), int(2));
        assert!(lat.methods_agree());
        assert!(lat.is_unimodular());
        assert!(has_product_shape(&lift, &cone, &lat));
    }

    #[test]
    fn lift_above_and_degenerate() {
        let (lift, cone) = setup("v1 < v2 < u2 < v3");
        let lat = rub_lattice(&lift, &cone.base).unwrap();
        assert_eq!(lat.index(), int(1));
        assert!(lat.methods_agree());
        let (flat, _) = setup("v1 < {v2=u2} < v3");
        assert!(flat.cuts.is_empty());
        assert_eq!(flat.line.vertex_count(), 3);
    }

    impl LinearForm {
        fn scaled_half(&self) -> LinearForm {
            let mut out = LinearForm::zero(self.len());
            out.add_scaled(self, &crate::polyhedra::linalg::rat(1, 2));
            out
        }
    }
}
