use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flow::{cycle_basis, enumerate_acyclic_flows, is_acyclic, Divisor, Flow};
use crate::graph::{Graph, QuasiStableModel};
use crate::polyhedra::{linalg, Cone, Int, LinearForm, Rat};
use crate::stability::{enumerate_theta_divisors, StabilityCondition};

/// Coordinate names `l<edge id>` for the edges of `g`.
pub fn edge_coords(g: &Graph) -> Vec<String> {
    g.edges().iter().map(|e| format!("l{}", e.id)).collect()
}

/// `sum_e s(e) t(e) l_e` with edge lengths given as forms.
pub fn intersection_pairing(g: &Graph, s: &Flow, t: &Flow, lengths: &[LinearForm]) -> Result<LinearForm> {
    let m = g.edge_count();
    if s.0.len() != m || t.0.len() != m || lengths.len() != m {
        return Err(Error::GraphMismatch);
    }
    let n = lengths.first().map_or(0, |l| l.len());
    let mut out = LinearForm::zero(n);
    for ((a, b), l) in s.0.iter().zip(&t.0).zip(lengths) {
        if a * b != 0 {
            out.add_scaled(l, &BigRational::from_integer(Int::from(a * b)));
        }
    }
    Ok(out)
}

/// The pairing in the graph's own edge coordinates.
pub fn pairing_coefficients(s: &Flow, t: &Flow) -> Vec<Int> {
    s.0.iter().zip(&t.0).map(|(a, b)| Int::from(a * b)).collect()
}

/// Cone of edge lengths on `g` where `f` is the slope of a PL function.
pub fn own_twist_cone(g: &Graph, f: &Flow) -> Result<Cone> {
    if f.0.len() != g.edge_count() {
        return Err(Error::GraphMismatch);
    }
    if !is_acyclic(g, f) {
        return Err(Error::CyclicFlow);
    }
    let eqs: Vec<Vec<Int>> = cycle_basis(g).iter().map(|c| pairing_coefficients(f, c)).collect();
    Ok(Cone::from_int_constraints(edge_coords(g), &eqs, &[]))
}

/// A cone living in the edge coordinates of a quasi-stable model together with
/// its image in the base coordinates.
#[derive(Debug, Clone)]
pub struct ProjectedCone {
    pub extended: Cone,
    pub base: Cone,
    /// Each model edge length as a form in base coordinates, valid on the span.
    pub lift_back: Vec<LinearForm>,
}

impl ProjectedCone {
    /// Rewrites a form on model edge lengths in base coordinates.
    pub fn pull_back(&self, form: &LinearForm) -> LinearForm {
        let n = self.base.ambient_dim();
        let mut out = LinearForm::zero(n);
        for (c, l) in form.0.iter().zip(&self.lift_back) {
            if !c.is_zero() {
                out.add_scaled(l, c);
            }
        }
        out
    }
}

/// Sums the halves of each subdivided edge.
pub fn project_point(model: &QuasiStableModel, x: &[Int]) -> Vec<Int> {
    model
        .subdivision
        .edge_fibers
        .iter()
        .map(|fiber| fiber.iter().fold(Int::zero(), |acc, &e| acc + &x[e]))
        .collect()
}

/// Projects a cone in model coordinates to the base, which must be injective on its span.
pub fn project(model: &QuasiStableModel, extended: Cone) -> Result<ProjectedCone> {
    let base_graph = model.base();
    let n = base_graph.edge_count();
    let m = model.graph().edge_count();
    let images: Vec<Vec<Int>> = extended.rays().iter().map(|r| project_point(model, r)).collect();
    if linalg::rank_int(&images, n) != extended.dim() {
        return Err(Error::NonInjectiveProjection);
    }
    let primitive: Vec<Vec<Int>> = images.iter().map(|r| linalg::primitive_int(r)).collect();
    let base = Cone::from_rays(edge_coords(base_graph), &primitive)?;
    let mut expected = primitive.clone();
    expected.sort();
    expected.dedup();
    if base.rays() != expected.as_slice() {
        return Err(Error::Invalid("projected rays are not the extreme rays of the image".into()));
    }

    // Left inverse on the span: express a base point through independent ray images.
    let image_rows: Vec<Vec<Rat>> = images.iter().map(|r| linalg::to_rat(r)).collect();
    let chosen = linalg::independent_rows(&image_rows, n);
    let mut lift_back = vec![LinearForm::zero(n); m];
    if !chosen.is_empty() {
        let sub: Vec<Vec<Rat>> = chosen.iter().map(|&i| image_rows[i].clone()).collect();
        let (_, cols) = linalg::rref(&sub, n);
        let square: Vec<Vec<Rat>> = sub.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let inv = linalg::inverse(&square).expect("independent rows restricted to pivot columns");
        for (e, form) in lift_back.iter_mut().enumerate() {
            for (j, &col) in cols.iter().enumerate() {
                let mut coeff = Rat::zero();
                for (i, &ray) in chosen.iter().enumerate() {
                    coeff += &inv[j][i] * BigRational::from_integer(extended.rays()[ray][e].clone());
                }
                form.0[col] = coeff;
            }
        }
    }
    Ok(ProjectedCone { extended, base, lift_back })
}

/// Twist cone of a flow on a quasi-stable model, in model and base coordinates.
pub fn twist_cone(model: &QuasiStableModel, f: &Flow) -> Result<ProjectedCone> {
    project(model, own_twist_cone(model.graph(), f)?)
}

/// A quasi-stable model, an admissible semistable divisor on it, and an
/// acyclic flow with divisor `A - D`.
#[derive(Debug, Clone)]
pub struct DivTriple {
    pub model: QuasiStableModel,
    pub divisor: Divisor,
    pub flow: Flow,
}

impl DivTriple {
    pub fn subdivided_ids(&self) -> Vec<String> {
        self.model.subdivided.iter().map(|&e| self.model.base().edge(e).id.clone()).collect()
    }

    pub fn divisor_entries(&self) -> Vec<(String, i64)> {
        let g = self.model.graph();
        g.vertices().iter().map(|v| v.id.clone()).zip(self.divisor.0.iter().copied()).collect()
    }

    pub fn flow_entries(&self) -> Vec<(String, i64)> {
        let g = self.model.graph();
        g.edges().iter().map(|e| e.id.clone()).zip(self.flow.0.iter().copied()).collect()
    }
}

fn entries(items: &[(String, i64)]) -> String {
    items.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DivTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "model{{{}}} D({}) s({})",
            self.subdivided_ids().join(","),
            entries(&self.divisor_entries()),
            entries(&self.flow_entries())
        )
    }
}

/// `A` on a model: zero on exceptional vertices.
pub fn lift_divisor(model: &QuasiStableModel, a: &Divisor) -> Divisor {
    Divisor(
        model
            .subdivision
            .vertex_map
            .iter()
            .map(|v| v.map_or(0, |v| a.0[v]))
            .collect(),
    )
}

/// Every (model, D, flow) triple, models in subset order and flows sorted.
pub fn enumerate_triples(g: &Graph, a: &Divisor, theta: &StabilityCondition) -> Result<Vec<DivTriple>> {
    if !g.is_stable() {
        return Err(Error::Unstable);
    }
    if a.0.len() != g.vertex_count() {
        return Err(Error::GraphMismatch);
    }
    let degree = a.degree();
    let mut out = Vec::new();
    for model in g.quasi_stable_models() {
        let lifted = lift_divisor(&model, a);
        for d in enumerate_theta_divisors(&model, theta, degree)? {
            let target = &lifted - &d;
            for flow in enumerate_acyclic_flows(model.graph(), &target) {
                out.push(DivTriple { model: model.clone(), divisor: d.clone(), flow });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct DivCone {
    pub triple: DivTriple,
    pub cone: ProjectedCone,
}

/// One twist cone per triple; with their faces these subdivide the orthant.
#[derive(Debug, Clone)]
pub struct DivFan {
    pub graph: Graph,
    pub coords: Vec<String>,
    pub cones: Vec<DivCone>,
}

pub fn build_div_fan(g: &Graph, a: &Divisor, theta: &StabilityCondition) -> Result<DivFan> {
    let cones = enumerate_triples(g, a, theta)?
        .into_iter()
        .map(|triple| {
            let cone = twist_cone(&triple.model, &triple.flow)?;
            Ok(DivCone { triple, cone })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DivFan { graph: g.clone(), coords: edge_coords(g), cones })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::triangle;
    use crate::polyhedra::linalg::int;

    fn theta() -> StabilityCondition {
        StabilityCondition::parse(&["-1/4", "1/8", "1/8"]).unwrap()
    }

    fn a() -> Divisor {
        Divisor(vec![-4, 1, 3])
    }

    #[test]
    fn pairing_of_wall_flow() {
        let g = triangle();
        let lengths: Vec<LinearForm> = (0..3).map(|i| LinearForm::coordinate(3, i)).collect();
        let s = Flow(vec![1, 3, 0]);
        let gamma = Flow(vec![1, -1, 1]);
        assert_eq!(intersection_pairing(&g, &s, &gamma, &lengths).unwrap(), LinearForm::from_ints(&[1, -3, 0]));
        assert_eq!(intersection_pairing(&g, &gamma, &gamma, &lengths).unwrap(), LinearForm::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn wall_cone() {
        let g = triangle();
        let model = g.quasi_stable_model(&[]).unwrap();
        let c = twist_cone(&model, &Flow(vec![1, 3, 0])).unwrap();
        assert_eq!(c.base.equations(), &[vec![int(1), int(-3), int(0)]]);
        assert_eq!(c.base.dim(), 2);
        assert!(twist_cone(&model, &Flow(vec![1, -1, 1])).is_err());
    }

    #[test]
    fn square_cone() {
        let g = triangle();
        let model = g.quasi_stable_model(&[1]).unwrap();
        let ids: Vec<&str> = model.graph().edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["1", "2'", "2''", "3"]);
        let c = twist_cone(&model, &Flow(vec![2, 1, 2, 1])).unwrap();
        assert_eq!(c.extended.equations(), &[vec![int(2), int(-1), int(-2), int(1)]]);
        let rays: Vec<Vec<Int>> = [[0, 1, 1], [0, 1, 2], [1, 1, 0], [1, 2, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        assert_eq!(c.base.rays(), rays.as_slice());
        assert!(!c.base.is_simplicial());
        // l2' = 2 l2 - 2 l1 - l3 and l2'' = 2 l1 + l3 - l2.
        assert_eq!(c.lift_back[1], LinearForm::from_ints(&[-2, 2, -1]));
        assert_eq!(c.lift_back[2], LinearForm::from_ints(&[2, -1, 1]));
    }

    #[test]
    fn triple_census() {
        let g = triangle();
        let triples = enumerate_triples(&g, &a(), &theta()).unwrap();
        let on_base = triples.iter().filter(|t| t.model.is_trivial()).count();
        assert_eq!(on_base, 7);
        assert_eq!(triples.len() - on_base, 8);
    }
}
