//! Integer lattices: Hermite and Smith normal forms, integer kernels, indices.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, Int, Rat};
use crate::error::{Error, Result};

fn sub_row(m: &mut [Vec<Int>], target: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    for j in 0..m[target].len() {
        let delta = q * &m[src][j];
        m[target][j] -= delta;
    }
}

/// Integer row echelon form on the first `ncols` columns using unimodular row
/// operations. Returns the rank (number of pivot rows, which come first).
fn echelon(m: &mut [Vec<Int>], ncols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    sub_row(m, i, r, &q);
                    if !m[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        if reduce_above {
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                sub_row(m, i, r, &q);
            }
        }
        r += 1;
    }
    r
}

/// Row-style Hermite normal form: a canonical basis of the lattice spanned by `rows`.
pub fn hnf(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let mut m: Vec<Vec<Int>> = rows.iter().filter(|r| !linalg::is_zero_vec(r)).cloned().collect();
    let r = echelon(&mut m, n, true);
    m.truncate(r);
    m
}

/// Basis of `{x in Z^n : rows * x = 0}`.
pub fn integer_kernel(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let k = rows.len();
    let mut t: Vec<Vec<Int>> = (0..n)
        .map(|j| {
            let mut row: Vec<Int> = rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|i| if i == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let r = echelon(&mut t, k, false);
    let kernel: Vec<Vec<Int>> = t[r..].iter().map(|row| row[k..].to_vec()).collect();
    hnf(&kernel, n)
}

/// Basis of `Z^n` intersected with the rational span of `gens`.
pub fn saturation(gens: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let rows: Vec<Vec<Rat>> = gens.iter().map(|g| linalg::to_rat(g)).collect();
    let perp: Vec<Vec<Int>> = linalg::nullspace(&rows, n).iter().map(|v| linalg::primitive(v)).collect();
    if perp.is_empty() {
        return (0..n).map(|i| unit(n, i)).collect();
    }
    integer_kernel(&perp, n)
}

pub fn unit(n: usize, i: usize) -> Vec<Int> {
    (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()
}

/// Smith normal form `u * a * v = diag(d)`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<Int>,
    pub u: Vec<Vec<Int>>,
    pub v: Vec<Vec<Int>>,
}

pub fn smith(a: &[Vec<Int>], ncols: usize) -> Smith {
    let m = a.len();
    let n = ncols;
    let mut a: Vec<Vec<Int>> = a.to_vec();
    let mut u: Vec<Vec<Int>> = (0..m).map(|i| unit(m, i)).collect();
    let mut v: Vec<Vec<Int>> = (0..n).map(|i| unit(n, i)).collect();
    let mut diagonal = Vec::new();

    let col_op = |a: &mut Vec<Vec<Int>>, v: &mut Vec<Vec<Int>>, target: usize, src: usize, q: &Int| {
        for row in a.iter_mut().chain(v.iter_mut()) {
            let delta = q * &row[src];
            row[target] -= delta;
        }
    };

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { diagonal, u, v };
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut().chain(v.iter_mut()) {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t].div_floor(&a[t][t]);
                sub_row(&mut a, i, t, &q);
                sub_row(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = a[t][j].div_floor(&a[t][t]);
                col_op(&mut a, &mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -Int::one();
                    sub_row(&mut a, t, i, &minus_one);
                    sub_row(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
        diagonal.push(a[t][t].clone());
    }
    Smith { diagonal, u, v }
}

/// Coordinates of `vectors` with respect to a basis of a lattice containing them.
fn coordinates(basis: &[Vec<Int>], vectors: &[Vec<Int>], n: usize) -> Vec<Vec<Rat>> {
    let b: Vec<Vec<Rat>> = basis.iter().map(|r| linalg::to_rat(r)).collect();
    let (_, pivots) = linalg::rref(&b, n);
    let square: Vec<Vec<Rat>> = b.iter().map(|r| pivots.iter().map(|&p| r[p].clone()).collect()).collect();
    let inv = linalg::inverse(&square).expect("basis rows are independent");
    vectors
        .iter()
        .map(|v| {
            let restricted: Vec<Rat> = pivots.iter().map(|&p| BigRational::from_integer(v[p].clone())).collect();
            linalg::row_times(&restricted, &inv)
        })
        .collect()
}

/// A sublattice of `Z^n`, stored by its Hermite basis so equality is lattice equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<Vec<Int>>,
}

impl Sublattice {
    pub fn new(ambient: usize, gens: &[Vec<Int>]) -> Self {
        Sublattice { ambient, basis: hnf(gens, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        hnf(&rows, self.ambient) == self.basis
    }

    pub fn saturation(&self) -> Sublattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        Sublattice { ambient: self.ambient, basis: saturation(&self.basis, self.ambient) }
    }

    /// Index in the saturation of the lattice.
    pub fn index(&self) -> Int {
        if self.basis.is_empty() {
            return Int::one();
        }
        let sat = saturation(&self.basis, self.ambient);
        let coords = coordinates(&sat, &self.basis, self.ambient);
        linalg::determinant(&coords).abs().to_integer()
    }

    pub fn is_saturated(&self) -> bool {
        self.index().is_one()
    }

    /// Points of the saturation lying in the half-open parallelepiped of this
    /// lattice's basis. There are exactly `index()` of them.
    pub fn parallelepiped_points(&self) -> Vec<Vec<Int>> {
        parallelepiped_points(&self.basis, self.ambient).expect("Hermite basis is independent")
    }
}

/// Index of the lattice spanned by independent `gens` in its saturation.
pub fn index(gens: &[Vec<Int>], n: usize) -> Result<Int> {
    if linalg::rank_int(gens, n) < gens.len() {
        return Err(Error::DependentGenerators);
    }
    Ok(Sublattice::new(n, gens).index())
}

/// The same index computed from Smith invariants, as a cross-check.
pub fn index_by_smith(gens: &[Vec<Int>], n: usize) -> Result<Int> {
    if linalg::rank_int(gens, n) < gens.len() {
        return Err(Error::DependentGenerators);
    }
    if gens.is_empty() {
        return Ok(Int::one());
    }
    let sat = saturation(gens, n);
    let coords: Vec<Vec<Int>> =
        coordinates(&sat, gens, n).into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
    let s = smith(&coords, sat.len());
    Ok(s.diagonal.iter().fold(Int::one(), |acc, d| acc * d))
}

/// Lattice points of the saturation of `gens` in `{sum c_i g_i : 0 <= c_i < 1}`.
pub fn parallelepiped_points(gens: &[Vec<Int>], n: usize) -> Result<Vec<Vec<Int>>> {
    if linalg::rank_int(gens, n) < gens.len() {
        return Err(Error::DependentGenerators);
    }
    if gens.is_empty() {
        return Ok(vec![vec![Int::zero(); n]]);
    }
    let sat = saturation(gens, n);
    let d = sat.len();
    let coords: Vec<Vec<Int>> =
        coordinates(&sat, gens, n).into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect();
    // Z^d / rowspace(M): with u M v = D, the rows of v^-1 give cyclic generators.
    let s = smith(&coords, d);
    let v: Vec<Vec<Rat>> = s.v.iter().map(|r| linalg::to_rat(r)).collect();
    let v_inv = linalg::inverse(&v).expect("unimodular");
    let m: Vec<Vec<Rat>> = coords.iter().map(|r| linalg::to_rat(r)).collect();
    let m_inv = linalg::inverse(&m).expect("full rank");
    let sat_rat: Vec<Vec<Rat>> = sat.iter().map(|r| linalg::to_rat(r)).collect();

    let orders: Vec<Int> = (0..d).map(|i| s.diagonal.get(i).cloned().unwrap_or_else(Int::zero)).collect();
    let mut points = Vec::new();
    let mut counter: Vec<Int> = vec![Int::zero(); d];
    loop {
        let x = linalg::row_times(&counter.iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>(), &v_inv);
        let lambda = linalg::row_times(&x, &m_inv);
        let frac: Vec<Rat> = lambda.iter().map(|l| l - l.floor()).collect();
        let reduced = linalg::row_times(&frac, &m);
        let ambient = linalg::row_times(&reduced, &sat_rat);
        points.push(ambient.into_iter().map(|q| q.to_integer()).collect());
        let mut i = 0;
        loop {
            if i == d {
                points.sort();
                return Ok(points);
            }
            counter[i] += 1;
            if counter[i] < orders[i] {
                break;
            }
            counter[i] = Int::zero();
            i += 1;
        }
    }
}

/// The lattice `{x in L : f(x) in Z for every form f}` where `L` is spanned by `basis`.
pub fn integrality_lattice(basis: &[Vec<Int>], forms: &[Vec<Rat>], n: usize) -> Sublattice {
    let d = basis.len();
    if d == 0 || forms.is_empty() {
        return Sublattice::new(n, basis);
    }
    let values: Vec<Vec<Rat>> = forms
        .iter()
        .map(|f| basis.iter().map(|b| linalg::dot(f, &linalg::to_rat(b))).collect())
        .collect();
    let denom = values.iter().flatten().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let k = forms.len();
    // Solve F c + N t = 0 over the integers and keep the c part.
    let rows: Vec<Vec<Int>> = values
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Int> =
                row.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect();
            r.extend((0..k).map(|j| if i == j { denom.clone() } else { Int::zero() }));
            r
        })
        .collect();
    let kernel = integer_kernel(&rows, d + k);
    let gens: Vec<Vec<Int>> = kernel
        .iter()
        .map(|row| {
            (0..n)
                .map(|j| (0..d).fold(Int::zero(), |acc, i| acc + &row[i] * &basis[i][j]))
                .collect()
        })
        .collect();
    Sublattice::new(n, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::linalg::{int, rat};
    use proptest::prelude::*;

    fn iv(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn worked_example_index() {
        let gens = iv(&[&[0, 1, 2], &[1, 2, 0], &[1, 1, 0]]);
        assert_eq!(index(&gens, 3).unwrap(), int(2));
        assert_eq!(index_by_smith(&gens, 3).unwrap(), int(2));
        let pts = parallelepiped_points(&gens, 3).unwrap();
        assert_eq!(pts, iv(&[&[0, 0, 0], &[1, 2, 1]]));
    }

    #[test]
    fn scaled_identity() {
        let gens = iv(&[&[2, 0], &[0, 2]]);
        assert_eq!(index(&gens, 2).unwrap(), int(4));
        assert_eq!(parallelepiped_points(&gens, 2).unwrap().len(), 4);
        assert_eq!(index(&iv(&[&[1, 2], &[2, 4]]), 2), Err(Error::DependentGenerators));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Sublattice::new(2, &iv(&[&[1, 1], &[1, -1]]));
        let b = Sublattice::new(2, &iv(&[&[2, 0], &[1, 1], &[3, 1]]));
        assert_eq!(a, b);
        assert!(a.contains(&[int(3), int(1)]));
        assert!(!a.contains(&[int(1), int(0)]));
    }

    #[test]
    fn kernel_and_saturation() {
        let k = integer_kernel(&iv(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(linalg::dot_int(v, &[int(1), int(2), int(3)]).is_zero());
        }
        let sat = Sublattice::new(3, &iv(&[&[2, 0, 0], &[0, 3, 3]])).saturation();
        assert_eq!(sat, Sublattice::new(3, &iv(&[&[1, 0, 0], &[0, 1, 1]])));
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = iv(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        assert_eq!(s.diagonal, vec![int(2), int(6), int(12)]);
        let au: Vec<Vec<Rat>> = s.u.iter().map(|r| linalg::to_rat(r)).collect();
        let aa: Vec<Vec<Rat>> = a.iter().map(|r| linalg::to_rat(r)).collect();
        let av: Vec<Vec<Rat>> = s.v.iter().map(|r| linalg::to_rat(r)).collect();
        let prod = linalg::mat_mul(&linalg::mat_mul(&au, &aa), &av);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { BigRational::from_integer(s.diagonal[i].clone()) } else { rat(0, 1) };
                assert_eq!(*x, expected);
            }
        }
    }

    #[test]
    fn integrality_of_half_forms() {
        // x in Z^2 with x0/2 integral.
        let l = integrality_lattice(&iv(&[&[1, 0], &[0, 1]]), &[vec![rat(1, 2), rat(0, 1)]], 2);
        assert_eq!(l, Sublattice::new(2, &iv(&[&[2, 0], &[0, 1]])));
    }

    fn brute_index(gens: &[Vec<i64>]) -> u64 {
        // Count points of Z^2 in the half-open parallelepiped.
        let (a, b) = (&gens[0], &gens[1]);
        let det = a[0] * b[1] - a[1] * b[0];
        let xs = [0, a[0], b[0], a[0] + b[0]];
        let ys = [0, a[1], b[1], a[1] + b[1]];
        let mut count = 0;
        for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
            for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
                // Solve (x, y) = s a + t b.
                let s = rat(x * b[1] - y * b[0], det);
                let t = rat(a[0] * y - a[1] * x, det);
                let zero = rat(0, 1);
                let one = rat(1, 1);
                if s >= zero && s < one && t >= zero && t < one {
                    count += 1;
                }
            }
        }
        count
    }

    proptest! {
        #[test]
        fn index_matches_brute_force(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, d in -5i64..=5) {
            prop_assume!(a * d - b * c != 0);
            let gens = vec![vec![a, b], vec![c, d]];
            let big: Vec<Vec<Int>> = gens.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let expected = brute_index(&gens);
            prop_assert_eq!(index(&big, 2).unwrap(), Int::from(expected));
            prop_assert_eq!(index_by_smith(&big, 2).unwrap(), Int::from(expected));
            prop_assert_eq!(parallelepiped_points(&big, 2).unwrap().len() as u64, expected);
        }

        #[test]
        fn index_in_a_plane(a in 0i64..=4, b in 0i64..=4, c in 0i64..=4, d in 0i64..=4) {
            // Generators inside the plane x + y + z = 0 of Z^3.
            let g1 = vec![int(a), int(b), int(-a - b)];
            let g2 = vec![int(c), int(d), int(-c - d)];
            prop_assume!(a * d - b * c != 0);
            let expected = (a * d - b * c).abs();
            prop_assert_eq!(index(&[g1, g2], 3).unwrap(), int(expected));
        }
    }
}
