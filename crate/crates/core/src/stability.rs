//! Numerical stability conditions: genericity, (semi)stability of admissible
//! divisors on quasi-stable models, enumeration of semistable divisors and
//! specialization.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::flow::Divisor;
use crate::graph::{Contraction, Graph, QuasiStableModel};

/// Rational weight per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StabilityCondition(pub Vec<BigRational>);

impl StabilityCondition {
    pub fn total(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn parse(values: &[&str]) -> Result<Self> {
        values
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigRational>()
                    .map_err(|_| Error::Invalid(format!("not a rational number: `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(StabilityCondition)
    }

    /// Extends by zero to the exceptional vertices of a model.
    pub fn lift(&self, model: &QuasiStableModel) -> StabilityCondition {
        let sub = &model.subdivision;
        StabilityCondition(
            sub.vertex_map
                .iter()
                .map(|t| t.map_or_else(BigRational::zero, |t| self.0[t].clone()))
                .collect(),
        )
    }
}

/// Edges with exactly one endpoint in `set`.
pub fn cut_size(g: &Graph, set: &[bool]) -> usize {
    g.edges().iter().filter(|e| set[e.tail] != set[e.head]).count()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (1u64..(1u64 << n) - 1).map(move |mask| (0..n).map(|v| mask >> v & 1 == 1).collect())
}

fn sum_over(theta: &StabilityCondition, set: &[bool]) -> BigRational {
    set.iter()
        .zip(&theta.0)
        .filter(|(inside, _)| **inside)
        .fold(BigRational::zero(), |acc, (_, x)| acc + x)
}

fn half(n: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// `theta(S) +- E(S, S^c)/2` is never an integer for a nonempty proper `S`.
pub fn is_generic(g: &Graph, theta: &StabilityCondition) -> bool {
    subsets(g.vertex_count()).all(|set| {
        let t = sum_over(theta, &set);
        let h = half(cut_size(g, &set));
        !(&t + &h).is_integer() && !(&t - &h).is_integer()
    })
}

fn check_admissible(model: &QuasiStableModel, d: &Divisor) -> Result<()> {
    let g = model.graph();
    if d.0.len() != g.vertex_count() {
        return Err(Error::GraphMismatch);
    }
    for u in model.subdivision.exceptional_vertices() {
        if d.0[u] != 1 {
            return Err(Error::NonAdmissible(g.vertex(u).id.clone()));
        }
    }
    Ok(())
}

fn sandwich(model: &QuasiStableModel, d: &Divisor, theta: &StabilityCondition, strict: bool) -> Result<bool> {
    check_admissible(model, d)?;
    let g = model.graph();
    let lifted = theta.lift(model);
    Ok(subsets(g.vertex_count()).all(|set| {
        let t = sum_over(&lifted, &set);
        let h = half(cut_size(g, &set));
        let ds = BigRational::from_integer(BigInt::from(
            set.iter().zip(&d.0).filter(|(s, _)| **s).map(|(_, x)| x).sum::<i64>(),
        ));
        if strict {
            &t - &h < ds && ds < &t + &h
        } else {
            &t - &h <= ds && ds <= &t + &h
        }
    }))
}

/// `theta(S) - E(S,S^c)/2 <= D(S) <= theta(S) + E(S,S^c)/2` for every nonempty
/// proper vertex subset of the model, with `theta` lifted by zero.
pub fn is_semistable(model: &QuasiStableModel, d: &Divisor, theta: &StabilityCondition) -> Result<bool> {
    sandwich(model, d, theta, false)
}

pub fn is_stable(model: &QuasiStableModel, d: &Divisor, theta: &StabilityCondition) -> Result<bool> {
    sandwich(model, d, theta, true)
}

/// Validates that `theta` is generic on `g` and sums to `degree`.
pub fn validate_theta(g: &Graph, theta: &StabilityCondition, degree: i64) -> Result<()> {
    if theta.0.len() != g.vertex_count() {
        return Err(Error::GraphMismatch);
    }
    let total = theta.total();
    if total != BigRational::from_integer(BigInt::from(degree)) {
        return Err(Error::ThetaDegree {
            theta: total.to_string(),
            degree,
        });
    }
    if !is_generic(g, theta) {
        return Err(Error::NonGeneric);
    }
    Ok(())
}

/// All admissible semistable divisors of the given degree on the model.
///
/// Non-exceptional values are scanned within their singleton bounds and the
/// candidates filtered by the full subset test.
pub fn enumerate_theta_divisors(
    model: &QuasiStableModel,
    theta: &StabilityCondition,
    degree: i64,
) -> Result<Vec<Divisor>> {
    validate_theta(model.base(), theta, degree)?;
    let g = model.graph();
    let lifted = theta.lift(model);
    let n = g.vertex_count();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    let mut free = Vec::new();
    let mut fixed = 0i64;
    for v in 0..n {
        if model.is_exceptional(v) {
            lo[v] = 1;
            hi[v] = 1;
            fixed += 1;
            continue;
        }
        let h = half(g.valence(v) - 2 * count_loops(g, v));
        lo[v] = ceil(&(&lifted.0[v] - &h));
        hi[v] = floor(&(&lifted.0[v] + &h));
        if lo[v] > hi[v] {
            return Ok(Vec::new());
        }
        free.push(v);
    }
    let mut out = Vec::new();
    let mut values = lo.clone();
    let remaining = degree - fixed;
    scan(&free, 0, remaining, &lo, &hi, &mut values, &mut |vals| {
        let d = Divisor(vals.to_vec());
        if is_semistable(model, &d, theta).unwrap_or(false) {
            out.push(d);
        }
    });
    out.sort();
    Ok(out)
}

fn count_loops(g: &Graph, v: usize) -> usize {
    g.edges().iter().filter(|e| e.tail == v && e.head == v).count()
}

fn scan(
    free: &[usize],
    i: usize,
    remaining: i64,
    lo: &[i64],
    hi: &[i64],
    values: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    if i == free.len() {
        if remaining == 0 {
            visit(values);
        }
        return;
    }
    let rest_lo: i64 = free[i + 1..].iter().map(|&v| lo[v]).sum();
    let rest_hi: i64 = free[i + 1..].iter().map(|&v| hi[v]).sum();
    let v = free[i];
    for x in lo[v]..=hi[v] {
        let left = remaining - x;
        if left < rest_lo || left > rest_hi {
            continue;
        }
        values[v] = x;
        scan(free, i + 1, left, lo, hi, values, visit);
    }
}

fn floor(x: &BigRational) -> i64 {
    x.floor().to_integer().to_i64().expect("small bound")
}

fn ceil(x: &BigRational) -> i64 {
    x.ceil().to_integer().to_i64().expect("small bound")
}

/// Sums `theta` over the fibers of the vertex map.
pub fn specialize_theta(theta: &StabilityCondition, c: &Contraction) -> StabilityCondition {
    let mut out = vec![BigRational::zero(); c.target.vertex_count()];
    for (v, &t) in c.vertex_map.iter().enumerate() {
        out[t] += &theta.0[v];
    }
    StabilityCondition(out)
}

/// Proposes a generic condition of total `degree` that is negative on the
/// vertices marked `-1`, positive on those marked `1` and zero-weighted on `0`.
///
/// Tries magnitudes `1/4, 1/8, ...` with equal shares per sign class, then
/// with shares skewed by vertex position.
pub fn suggest_theta(g: &Graph, signs: &[i8], degree: i64) -> Option<StabilityCondition> {
    if signs.len() != g.vertex_count() {
        return None;
    }
    let neg: Vec<usize> = (0..signs.len()).filter(|&v| signs[v] < 0).collect();
    let pos: Vec<usize> = (0..signs.len()).filter(|&v| signs[v] > 0).collect();
    if neg.is_empty() != pos.is_empty() {
        return None;
    }
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for skew in [false, true] {
        let weights = |class: &[usize]| -> Vec<BigRational> {
            let raw: Vec<i64> = (0..class.len())
                .map(|i| if skew { i as i64 + 1 } else { 1 })
                .collect();
            let total: i64 = raw.iter().sum();
            raw.into_iter().map(|w| rat(w, total)).collect()
        };
        let (wn, wp) = (weights(&neg), weights(&pos));
        let mut eps = rat(1, 4);
        for _ in 0..24 {
            let mut values = vec![BigRational::zero(); g.vertex_count()];
            values[0] = BigRational::from_integer(BigInt::from(degree));
            for (i, &v) in neg.iter().enumerate() {
                values[v] -= &eps * &wn[i];
            }
            for (i, &v) in pos.iter().enumerate() {
                values[v] += &eps * &wp[i];
            }
            let theta = StabilityCondition(values);
            if is_generic(g, &theta) {
                return Some(theta);
            }
            eps /= BigRational::from_integer(BigInt::from(2));
        }
    }
    None
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::triangle;
    use crate::graph::Vertex;

    fn default_theta() -> StabilityCondition {
        StabilityCondition::parse(&["-1/4", "1/8", "1/8"]).unwrap()
    }

    #[test]
    fn genericity() {
        let g = triangle();
        assert!(is_generic(&g, &default_theta()));
        assert!(!is_generic(&g, &StabilityCondition::parse(&["0", "0", "0"]).unwrap()));
        let point = Graph::new(vec![Vertex::new("v", 1, &["1"])], vec![]).unwrap();
        assert!(is_generic(&point, &StabilityCondition::parse(&["1/2"]).unwrap()));
    }

    #[test]
    fn stable_divisors_on_triangle() {
        let g = triangle();
        let model = g.quasi_stable_model(&[]).unwrap();
        let theta = default_theta();
        for d in [vec![0, 0, 0], vec![-1, 1, 0], vec![-1, 0, 1]] {
            assert!(is_stable(&model, &Divisor(d), &theta).unwrap());
        }
        assert!(!is_semistable(&model, &Divisor(vec![0, -1, 1]), &theta).unwrap());
        assert_eq!(
            enumerate_theta_divisors(&model, &theta, 0).unwrap(),
            vec![Divisor(vec![-1, 0, 1]), Divisor(vec![-1, 1, 0]), Divisor(vec![0, 0, 0])]
        );
    }

    #[test]
    fn exceptional_vertex_sits_on_the_boundary() {
        let g = triangle();
        let model = g.quasi_stable_model(&[1]).unwrap();
        let src = model.graph();
        let u = src.vertex_index("u2").unwrap();
        // A - div(s) for the slopes (2; 1, 2; 1).
        let mut d = vec![0i64; 4];
        d[src.vertex_index("v1").unwrap()] = -1;
        d[u] = 1;
        let d = Divisor(d);
        let theta = default_theta();
        assert!(is_semistable(&model, &d, &theta).unwrap());
        assert!(!is_stable(&model, &d, &theta).unwrap());
        let mut only_u = vec![false; 4];
        only_u[u] = true;
        assert_eq!(cut_size(src, &only_u), 2);

        let mut bad = d.clone();
        bad.0[u] = 0;
        assert!(matches!(
            is_semistable(&model, &bad, &theta),
            Err(Error::NonAdmissible(_))
        ));
    }

    #[test]
    fn refuses_non_generic() {
        let g = triangle();
        let model = g.quasi_stable_model(&[]).unwrap();
        let zero = StabilityCondition::parse(&["0", "0", "0"]).unwrap();
        assert_eq!(enumerate_theta_divisors(&model, &zero, 0), Err(Error::NonGeneric));
    }

    #[test]
    fn edgeless_graph_has_one_divisor() {
        let point = Graph::new(vec![Vertex::new("v", 1, &["1"])], vec![]).unwrap();
        let model = point.quasi_stable_model(&[]).unwrap();
        let theta = StabilityCondition::parse(&["3"]).unwrap();
        assert_eq!(
            enumerate_theta_divisors(&model, &theta, 3).unwrap(),
            vec![Divisor(vec![3])]
        );
    }

    #[test]
    fn specialize() {
        let g = triangle();
        let theta = default_theta();
        assert_eq!(specialize_theta(&theta, &g.contract(&[]).unwrap()), theta);
        let c = g.contract_ids(&["3"]).unwrap();
        assert_eq!(
            specialize_theta(&theta, &c),
            StabilityCondition::parse(&["-1/4", "1/4"]).unwrap()
        );
        let all = g.contract(&[0, 1, 2]).unwrap();
        assert_eq!(specialize_theta(&theta, &all).0, vec![theta.total()]);
    }

    #[test]
    fn suggestion_reproduces_default() {
        let g = triangle();
        assert_eq!(suggest_theta(&g, &[-1, 1, 1], 0), Some(default_theta()));
        assert_eq!(suggest_theta(&g, &[1, 1, 1], 0), None);
    }

    #[test]
    fn complement_symmetry() {
        let g = triangle();
        let model = g.quasi_stable_model(&[]).unwrap();
        let theta = default_theta();
        let lifted = theta.lift(&model);
        let d = Divisor(vec![-1, 1, 0]);
        for set in subsets(3) {
            let comp: Vec<bool> = set.iter().map(|x| !x).collect();
            let check = |s: &[bool]| {
                let t = sum_over(&lifted, s);
                let h = half(cut_size(&g, s));
                let ds = BigRational::from_integer(BigInt::from(
                    s.iter().zip(&d.0).filter(|(a, _)| **a).map(|(_, x)| x).sum::<i64>(),
                ));
                &t - &h <= ds && ds <= &t + &h
            };
            assert_eq!(check(&set), check(&comp));
        }
    }
}
