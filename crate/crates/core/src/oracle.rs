//! A direct evaluator for the fans: at a given vector of base edge lengths it
//! decides which flows are slopes of PL functions by solving for the model
//! edge lengths and the function values, then reads off the order of values.
//! It shares no code with the cone machinery beyond row reduction.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::fan::ordering::weak_order_at;
use crate::fan::rub::RubFan;
use crate::fan::twist::DivTriple;
use crate::fan::verify::{point_str, CheckOutcome};
use crate::polyhedra::cone::box_points;
use crate::polyhedra::{linalg, Int, Rat};

/// Forms `coeffs . l / denom` with machine integers, for fast evaluation.
#[derive(Debug, Clone)]
struct ScaledForms {
    rows: Vec<Vec<i64>>,
}

impl ScaledForms {
    fn eval(&self, p: &[i64]) -> Vec<i128> {
        self.rows.iter().map(|r| r.iter().zip(p).map(|(a, b)| *a as i128 * *b as i128).sum()).collect()
    }
}

/// Solution of the potential equations of one triple as a linear function of
/// the base lengths.
#[derive(Debug, Clone)]
pub struct TripleSolver {
    /// Conditions on the base lengths for the system to be solvable.
    consistency: ScaledForms,
    /// Model edge lengths, scaled by `denom`.
    lengths: ScaledForms,
    /// Function values at model vertices, scaled by `denom`.
    values: ScaledForms,
    denom: i64,
    /// Some model length is not determined by the base lengths.
    pub underdetermined: bool,
}

impl TripleSolver {
    /// Unknowns are the model edge lengths `x` and the values `a` of the PL
    /// function: `a(head) - a(tail) = s x` on every edge, `a(root) = 0`, and the
    /// halves of every base edge sum to its length.
    pub fn new(t: &DivTriple) -> Self {
        let g = t.model.graph();
        let m = g.edge_count();
        let nv = g.vertex_count();
        let nb = t.model.base().edge_count();
        let unknowns = m + nv;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let zero_rhs = vec![Rat::zero(); nb];
        let int = |x: i64| BigRational::from_integer(Int::from(x));
        for (e, edge) in g.edges().iter().enumerate() {
            let mut r = vec![Rat::zero(); unknowns + nb];
            r[e] = int(-t.flow.0[e]);
            r[m + edge.head] += int(1);
            r[m + edge.tail] -= int(1);
            rows.push(r);
        }
        let mut r = vec![Rat::zero(); unknowns + nb];
        r[m] = Rat::one();
        rows.push(r);
        for (b, fiber) in t.model.subdivision.edge_fibers.iter().enumerate() {
            let mut r = vec![Rat::zero(); unknowns];
            for &e in fiber {
                r[e] = Rat::one();
            }
            let mut rhs = zero_rhs.clone();
            rhs[b] = Rat::one();
            r.extend(rhs);
            rows.push(r);
        }
        let (red, pivots) = linalg::rref(&rows, unknowns);
        let underdetermined = (0..m).any(|c| !pivots.contains(&c));
        let mut consistency = Vec::new();
        let mut solution: Vec<Vec<Rat>> = vec![vec![Rat::zero(); nb]; unknowns];
        for (i, row) in red.iter().enumerate() {
            if i < pivots.len() {
                solution[pivots[i]] = row[unknowns..].to_vec();
            }
        }
        // Rows beyond the pivots have a zero left part; they constrain the lengths.
        let full = reduce_all(&rows, unknowns);
        for row in full {
            if linalg::is_zero_vec(&row[..unknowns]) && !linalg::is_zero_vec(&row[unknowns..]) {
                consistency.push(row[unknowns..].to_vec());
            }
        }
        let denom = solution.iter().flatten().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |rows: &[Vec<Rat>]| ScaledForms {
            rows: rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| (x * BigRational::from_integer(denom.clone())).to_integer().to_i64().expect("small"))
                        .collect()
                })
                .collect(),
        };
        let consistency = ScaledForms {
            rows: consistency.iter().map(|r| linalg::primitive(r).iter().map(|x| x.to_i64().expect("small")).collect()).collect(),
        };
        TripleSolver {
            consistency,
            lengths: scale(&solution[..m]),
            values: scale(&solution[m..]),
            denom: denom.to_i64().expect("small"),
            underdetermined,
        }
    }

    /// Model edge lengths and function values (both scaled by the common
    /// denominator) if the flow lifts at `p` with nonnegative lengths.
    pub fn solve(&self, p: &[i64]) -> Option<(Vec<i128>, Vec<i128>)> {
        if self.underdetermined || self.consistency.eval(p).iter().any(|&c| c != 0) {
            return None;
        }
        let x = self.lengths.eval(p);
        if x.iter().any(|&v| v < 0) {
            return None;
        }
        Some((x, self.values.eval(p)))
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }
}

/// Row reduction keeping the zero rows so inconsistency conditions survive.
fn reduce_all(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = &m[i][c] / &m[r][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        r += 1;
    }
    m
}

/// Whether the weak order read from `values` is a coarsening of the blocks.
fn coarsens(values: &[i128], blocks: &[Vec<usize>]) -> bool {
    let level = |b: &Vec<usize>| values[b[0]];
    blocks.iter().all(|b| b.iter().all(|&v| values[v] == level(b)))
        && blocks.windows(2).all(|w| level(&w[0]) <= level(&w[1]))
}

/// Compares the oracle against cone membership at every point of the box.
pub fn check_oracle(rub: &RubFan, bound: i64) -> Vec<CheckOutcome> {
    let div = &rub.div;
    let n = div.coords.len();
    let solvers: Vec<TripleSolver> = div.cones.iter().map(|c| TripleSolver::new(&c.triple)).collect();

    let mut div_fail = solvers
        .iter()
        .position(|s| s.underdetermined)
        .map(|i| format!("{}: model lengths not determined", div.label(i)));
    let mut rub_fail = None;
    let mut stratum_fail = None;
    let mut lift_fail = None;

    for p in box_points(n, bound) {
        let sols: Vec<Option<(Vec<i128>, Vec<i128>)>> = solvers.iter().map(|s| s.solve(&p)).collect();
        if div_fail.is_none() {
            if let Some(i) = (0..sols.len()).find(|&i| sols[i].is_some() != div.cones[i].cone.base.contains_i64(&p)) {
                div_fail = Some(format!("{} at {}: oracle {}", div.label(i), point_str(&p), sols[i].is_some()));
            }
        }
        if stratum_fail.is_none() && p.iter().all(|&x| x > 0) {
            let open = sols.iter().filter(|s| s.as_ref().is_some_and(|(x, _)| x.iter().all(|&v| v > 0))).count();
            if open != 1 {
                stratum_fail = Some(format!("point {} has {open} flows with positive model lengths", point_str(&p)));
            }
        }
        for (j, c) in rub.cones.iter().enumerate() {
            let expected = match &sols[c.div] {
                Some((_, values)) => coarsens(values, &c.ordering.blocks),
                None => false,
            };
            let inside = c.cone.base.contains_i64(&p);
            if expected != inside && rub_fail.is_none() {
                let read = sols[c.div]
                    .as_ref()
                    .map(|(_, v)| {
                        let rat: Vec<Rat> = v.iter().map(|&x| BigRational::from_integer(Int::from(x))).collect();
                        format!("{:?}", weak_order_at(&rat))
                    })
                    .unwrap_or_else(|| "no lift".into());
                rub_fail = Some(format!("{} at {}: oracle reads {read}", rub.label(j), point_str(&p)));
            }
            if inside && lift_fail.is_none() {
                if let Some((x, _)) = &sols[c.div] {
                    let pr: Vec<Int> = p.iter().map(|&v| Int::from(v)).collect();
                    let d = BigRational::from_integer(Int::from(solvers[c.div].denom()));
                    for cut in &c.lift.cuts {
                        let pos = cut.position.eval_int(&pr);
                        let len = BigRational::from_integer(Int::from(x[cut.edge])) / &d;
                        if pos < Rat::zero() || pos > len {
                            lift_fail = Some(format!("{} at {}: cut outside its edge", rub.label(j), point_str(&p)));
                        }
                    }
                }
            }
        }
    }
    vec![
        CheckOutcome::from_first_failure("oracle agrees with Div membership", div_fail),
        CheckOutcome::from_first_failure("open stratum has one minimal flow", stratum_fail),
        CheckOutcome::from_first_failure("oracle agrees with Rub membership", rub_fail),
        CheckOutcome::from_first_failure("lift positions lie on their edges", lift_fail),
    ]
}
