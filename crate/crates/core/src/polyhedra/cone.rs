//! Rational polyhedral cones inside the nonnegative orthant, kept in both
//! constraint and ray form. Rays come from an incremental double description.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::form::{format_equation, format_inequality};
use super::lattice::Sublattice;
use super::linalg::{self, Int, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// Extreme rays of `{x >= 0 : eqs . x = 0, ineqs . x >= 0}`.
fn double_description(n: usize, eqs: &[Vec<Int>], ineqs: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let total = n + eqs.len() + ineqs.len();
    let mut rays: Vec<(Vec<Int>, Bits)> = (0..n)
        .map(|i| {
            let mut bits = Bits::new(total);
            for j in (0..n).filter(|&j| j != i) {
                bits.set(j);
            }
            (super::lattice::unit(n, i), bits)
        })
        .collect();

    let constraints = eqs.iter().map(|c| (c, true)).chain(ineqs.iter().map(|c| (c, false)));
    for (k, (c, is_eq)) in constraints.enumerate() {
        let k = n + k;
        let vals: Vec<Int> = rays.iter().map(|(r, _)| linalg::dot_int(c, r)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if minus.is_empty() && (plus.is_empty() || !is_eq) {
            for (i, (_, bits)) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    bits.set(k);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<Int>, Bits)> = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let common = rays[p].1.and(&rays[m].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, bits))| i == p || i == m || !common.subset_of(bits));
                if !adjacent {
                    continue;
                }
                let r: Vec<Int> = rays[m]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(xm, xp)| &vals[p] * xm - &vals[m] * xp)
                    .collect();
                let mut bits = common;
                bits.set(k);
                next.push((linalg::primitive_int(&r), bits));
            }
        }
        for (i, (r, bits)) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut b = bits.clone();
                b.set(k);
                next.push((r.clone(), b));
            } else if vals[i].is_positive() && !is_eq {
                next.push((r.clone(), bits.clone()));
            }
        }
        rays = next;
    }
    let set: BTreeSet<Vec<Int>> = rays.into_iter().map(|(r, _)| r).collect();
    set.into_iter().collect()
}

fn normalize_rows(rows: impl IntoIterator<Item = Vec<Int>>) -> Vec<Vec<Int>> {
    let set: BTreeSet<Vec<Int>> =
        rows.into_iter().map(|r| linalg::primitive_int(&r)).filter(|r| !linalg::is_zero_vec(r)).collect();
    set.into_iter().collect()
}

/// Canonical independent equation set spanning the same row space.
fn canonical_equations(rows: &[Vec<Int>], n: usize) -> Vec<Vec<Int>> {
    let rat_rows: Vec<Vec<Rat>> = rows.iter().map(|r| linalg::to_rat(r)).collect();
    let (red, _) = linalg::rref(&rat_rows, n);
    red.iter().map(|r| linalg::sign_normalize(linalg::primitive(r))).collect()
}

/// Canonical representative of `g` modulo the row space of reduced `equations`.
fn reduce_modulo(g: &[Int], equations: &[Vec<Int>]) -> Vec<Int> {
    let mut v = linalg::to_rat(g);
    for e in equations {
        let p = e.iter().position(|x| !x.is_zero()).expect("nonzero equation");
        let factor = &v[p] / BigRational::from_integer(e[p].clone());
        for (x, y) in v.iter_mut().zip(e) {
            *x -= &factor * BigRational::from_integer(y.clone());
        }
    }
    linalg::primitive(&v)
}

fn to_i64(rows: &[Vec<Int>]) -> Option<Vec<Vec<i64>>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
}

#[derive(Debug, Clone)]
struct Fast {
    equations: Vec<Vec<i64>>,
    inequalities: Vec<Vec<i64>>,
}

/// A pointed cone in the nonnegative orthant of a named coordinate space.
#[derive(Debug, Clone)]
pub struct Cone {
    coords: Vec<String>,
    equations: Vec<Vec<Int>>,
    inequalities: Vec<Vec<Int>>,
    /// One canonical inequality per facet, reduced modulo the equations.
    facets: Vec<Vec<Int>>,
    rays: Vec<Vec<Int>>,
    dim: usize,
    implicit: Vec<bool>,
    fast: Option<Fast>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Cone {
    /// The cone cut out by `eqs = 0` and `ineqs >= 0` inside the nonnegative orthant.
    pub fn from_constraints(coords: Vec<String>, eqs: &[Vec<Rat>], ineqs: &[Vec<Rat>]) -> Self {
        let eqs: Vec<Vec<Int>> = eqs.iter().map(|r| linalg::primitive(r)).collect();
        let ineqs: Vec<Vec<Int>> = ineqs.iter().map(|r| linalg::primitive(r)).collect();
        Self::from_int_constraints(coords, &eqs, &ineqs)
    }

    pub fn from_int_constraints(coords: Vec<String>, eqs: &[Vec<Int>], ineqs: &[Vec<Int>]) -> Self {
        let n = coords.len();
        let eqs = canonical_equations(&normalize_rows(eqs.iter().cloned()), n);
        let mut all_ineqs: Vec<Vec<Int>> = (0..n).map(|i| super::lattice::unit(n, i)).collect();
        all_ineqs.extend(ineqs.iter().cloned());
        let ineqs = normalize_rows(all_ineqs);
        let rays = double_description(n, &eqs, &ineqs);
        Self::assemble(coords, ineqs, rays)
    }

    fn assemble(coords: Vec<String>, inequalities: Vec<Vec<Int>>, rays: Vec<Vec<Int>>) -> Self {
        let n = coords.len();
        let rat_rays: Vec<Vec<Rat>> = rays.iter().map(|r| linalg::to_rat(r)).collect();
        let dim = linalg::rank(&rat_rays, n);
        // Equations always describe the span of the rays, so implicit equalities are explicit.
        let perp: Vec<Vec<Int>> = linalg::nullspace(&rat_rays, n).iter().map(|v| linalg::primitive(v)).collect();
        let equations = canonical_equations(&perp, n);
        let implicit: Vec<bool> = inequalities
            .iter()
            .map(|g| rays.iter().all(|r| linalg::dot_int(g, r).is_zero()))
            .collect();
        let mut facets = BTreeSet::new();
        for (g, &imp) in inequalities.iter().zip(&implicit) {
            if imp {
                continue;
            }
            let tight: Vec<Vec<Rat>> =
                rays.iter().filter(|r| linalg::dot_int(g, r).is_zero()).map(|r| linalg::to_rat(r)).collect();
            if linalg::rank(&tight, n) + 1 == dim {
                facets.insert(reduce_modulo(g, &equations));
            }
        }
        let fast = match (to_i64(&equations), to_i64(&inequalities)) {
            (Some(equations), Some(inequalities)) => Some(Fast { equations, inequalities }),
            _ => None,
        };
        Cone { coords, equations, inequalities, facets: facets.into_iter().collect(), rays, dim, implicit, fast }
    }

    /// The cone generated by `rays`, with constraints computed from its facets.
    pub fn from_rays(coords: Vec<String>, rays: &[Vec<Int>]) -> Result<Self> {
        let n = coords.len();
        if rays.iter().any(|r| r.len() != n || r.iter().any(|x| x.is_negative())) {
            return Err(Error::Invalid("rays must be nonnegative vectors of the ambient dimension".into()));
        }
        let rat_rays: Vec<Vec<Rat>> = rays.iter().map(|r| linalg::to_rat(r)).collect();
        let eqs: Vec<Vec<Int>> = linalg::nullspace(&rat_rays, n).iter().map(|v| linalg::primitive(v)).collect();
        let d = linalg::rank(&rat_rays, n);
        let mut ineqs = Vec::new();
        if d > 0 {
            for subset in subsets_of_size(rays.len(), d - 1) {
                let mut rows: Vec<Vec<Rat>> = subset.iter().map(|&i| rat_rays[i].clone()).collect();
                if linalg::rank(&rows, n) != d - 1 {
                    continue;
                }
                rows.extend(eqs.iter().map(|e| linalg::to_rat(e)));
                let normal = linalg::nullspace(&rows, n);
                if normal.len() != 1 {
                    continue;
                }
                let normal = linalg::primitive(&normal[0]);
                let signs: Vec<Int> = rays.iter().map(|r| linalg::dot_int(&normal, r)).collect();
                if signs.iter().all(|s| !s.is_negative()) {
                    ineqs.push(normal);
                } else if signs.iter().all(|s| !s.is_positive()) {
                    ineqs.push(normal.into_iter().map(|x| -x).collect());
                }
            }
        }
        let eqs = if d == 0 { (0..n).map(|i| super::lattice::unit(n, i)).collect() } else { eqs };
        Ok(Self::from_int_constraints(coords, &eqs, &ineqs))
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn equations(&self) -> &[Vec<Int>] {
        &self.equations
    }

    pub fn inequalities(&self) -> &[Vec<Int>] {
        &self.inequalities
    }

    pub fn facet_inequalities(&self) -> &[Vec<Int>] {
        &self.facets
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.coords.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Lattice spanned by the primitive rays.
    pub fn ray_lattice(&self) -> Sublattice {
        Sublattice::new(self.coords.len(), &self.rays)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.equations.iter().all(|e| linalg::dot_int(e, x).is_zero())
            && self.inequalities.iter().all(|g| !linalg::dot_int(g, x).is_negative())
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        let dot = |g: &Vec<Int>| linalg::dot(&linalg::to_rat(g), x);
        self.equations.iter().all(|e| dot(e).is_zero()) && self.inequalities.iter().all(|g| !dot(g).is_negative())
    }

    fn dot_i64(g: &[i64], x: &[i64]) -> i128 {
        g.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum()
    }

    pub fn contains_i64(&self, x: &[i64]) -> bool {
        match &self.fast {
            Some(f) => {
                f.equations.iter().all(|e| Self::dot_i64(e, x) == 0)
                    && f.inequalities.iter().all(|g| Self::dot_i64(g, x) >= 0)
            }
            None => self.contains(&x.iter().map(|&v| Int::from(v)).collect::<Vec<_>>()),
        }
    }

    /// Whether `x` lies in the relative interior.
    pub fn relint_contains_i64(&self, x: &[i64]) -> bool {
        if !self.contains_i64(x) {
            return false;
        }
        match &self.fast {
            Some(f) => f
                .inequalities
                .iter()
                .zip(&self.implicit)
                .all(|(g, &imp)| imp || Self::dot_i64(g, x) > 0),
            None => {
                let big: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
                self.inequalities
                    .iter()
                    .zip(&self.implicit)
                    .all(|(g, &imp)| imp || linalg::dot_int(g, &big).is_positive())
            }
        }
    }

    pub fn relint_contains(&self, x: &[Int]) -> bool {
        self.contains(x)
            && self
                .inequalities
                .iter()
                .zip(&self.implicit)
                .all(|(g, &imp)| imp || linalg::dot_int(g, x).is_positive())
    }

    /// Sum of the rays, a point of the relative interior.
    pub fn interior_point(&self) -> Vec<Int> {
        let mut p = vec![Int::zero(); self.coords.len()];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.coords != other.coords {
            return Err(Error::AmbientMismatch);
        }
        let eqs: Vec<Vec<Int>> = self.equations.iter().chain(&other.equations).cloned().collect();
        let ineqs: Vec<Vec<Int>> = self.inequalities.iter().chain(&other.inequalities).cloned().collect();
        Ok(Cone::from_int_constraints(self.coords.clone(), &eqs, &ineqs))
    }

    /// The smallest face containing the given rays, as indices into `rays()`.
    fn closure(&self, selected: &[&Vec<Int>]) -> Vec<usize> {
        let tight: Vec<&Vec<Int>> = self
            .inequalities
            .iter()
            .filter(|g| selected.iter().all(|r| linalg::dot_int(g, r).is_zero()))
            .collect();
        (0..self.rays.len())
            .filter(|&i| tight.iter().all(|g| linalg::dot_int(g, &self.rays[i]).is_zero()))
            .collect()
    }

    /// All faces, including the zero face and the cone itself, as sorted ray index sets.
    pub fn face_ray_sets(&self) -> Vec<Vec<usize>> {
        let full: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![full.clone()];
        seen.insert(full);
        while let Some(face) = stack.pop() {
            for g in &self.inequalities {
                let sub: Vec<usize> =
                    face.iter().copied().filter(|&i| linalg::dot_int(g, &self.rays[i]).is_zero()).collect();
                if sub.len() < face.len() && seen.insert(sub.clone()) {
                    stack.push(sub);
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = seen.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        faces
    }

    /// The face spanned by the given rays, which must form a face.
    pub fn face(&self, ray_indices: &[usize]) -> Cone {
        let rays = ray_indices.iter().map(|&i| self.rays[i].clone()).collect();
        Self::assemble(self.coords.clone(), self.inequalities.clone(), rays)
    }

    pub fn faces(&self) -> Vec<Cone> {
        self.face_ray_sets().iter().map(|s| self.face(s)).collect()
    }

    pub fn facets(&self) -> Vec<Cone> {
        self.faces().into_iter().filter(|f| f.dim + 1 == self.dim).collect()
    }

    /// Whether `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Cone) -> bool {
        if self.coords != other.coords {
            return false;
        }
        if !self.rays.iter().all(|r| other.rays.binary_search(r).is_ok()) {
            return false;
        }
        let selected: Vec<&Vec<Int>> = self.rays.iter().collect();
        let closure = other.closure(&selected);
        closure.len() == self.rays.len()
    }

    /// Lattice points with every coordinate in `0..=bound`.
    pub fn integer_points_in_box(&self, bound: i64) -> Vec<Vec<i64>> {
        box_points(self.coords.len(), bound).filter(|p| self.contains_i64(p)).collect()
    }

    /// Canonical human-readable constraints: the equations of the span, then one
    /// inequality per facet.
    pub fn describe(&self) -> Vec<String> {
        let mut out: Vec<String> = self.equations.iter().map(|e| format_equation(e, &self.coords)).collect();
        out.extend(self.facets.iter().map(|g| format_inequality(g, &self.coords)));
        out
    }

    /// Evaluates an inequality on a rational point, for diagnostics.
    pub fn slack(&self, x: &[Rat]) -> Vec<Rat> {
        self.inequalities.iter().map(|g| linalg::dot(&linalg::to_rat(g), x)).collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "cone[dim {}; {}]", self.dim, rays.join(" "))
    }
}

/// All points of `{0..=bound}^n` in lexicographic order.
pub fn box_points(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = Some(vec![0i64; n]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = n;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < bound {
                next[i] += 1;
                cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    })
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Converts an integer vector to rationals; convenience for callers.
pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| BigRational::from_integer(Int::from(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::linalg::int;
    use proptest::prelude::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("l{i}")).collect()
    }

    fn iv(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn wall_cone_rays() {
        let c = Cone::from_constraints(names(3), &[rat_vec(&[1, -3, 0])], &[]);
        assert_eq!(c.rays(), iv(&[&[0, 0, 1], &[3, 1, 0]]).as_slice());
        assert_eq!(c.dim(), 2);
        assert_eq!(c.describe()[0], "l1 - 3*l2 = 0");
    }

    #[test]
    fn square_cone_is_not_simplicial() {
        // 2 l2 >= 2 l1 + l3 and 2 l1 + l3 >= l2.
        let c = Cone::from_constraints(names(3), &[], &[rat_vec(&[-2, 2, -1]), rat_vec(&[2, -1, 1])]);
        assert_eq!(c.rays(), iv(&[&[0, 1, 1], &[0, 1, 2], &[1, 1, 0], &[1, 2, 0]]).as_slice());
        assert_eq!(c.dim(), 3);
        assert!(!c.is_simplicial());
        assert_eq!(c.facets().len(), 4);
        // The two orderings of the exceptional vertex split it along 2 l2 = 4 l1 + l3.
        let lower = c.intersect(&Cone::from_constraints(names(3), &[], &[rat_vec(&[4, -2, 1])])).unwrap();
        let upper = c.intersect(&Cone::from_constraints(names(3), &[], &[rat_vec(&[-4, 2, -1])])).unwrap();
        assert_eq!(lower.rays(), iv(&[&[0, 1, 2], &[1, 1, 0], &[1, 2, 0]]).as_slice());
        assert_eq!(upper.rays(), iv(&[&[0, 1, 1], &[0, 1, 2], &[1, 2, 0]]).as_slice());
        assert_eq!(lower.ray_lattice().index(), int(2));
        assert_eq!(upper.ray_lattice().index(), int(1));
        let wall = lower.intersect(&upper).unwrap();
        assert!(wall.is_face_of(&lower) && wall.is_face_of(&upper));
        assert!(!lower.is_face_of(&c));
    }

    #[test]
    fn faces_of_orthant() {
        let c = Cone::from_constraints(names(3), &[], &[]);
        assert_eq!(c.face_ray_sets().len(), 8);
        let zero = c.face(&[]);
        assert_eq!(zero.dim(), 0);
        assert!(zero.is_face_of(&c));
        assert!(zero.contains_i64(&[0, 0, 0]));
        assert!(!zero.contains_i64(&[1, 0, 0]));
        assert!(c.relint_contains_i64(&[1, 1, 1]));
        assert!(!c.relint_contains_i64(&[1, 0, 1]));
    }

    #[test]
    fn box_points_count() {
        assert_eq!(box_points(2, 2).count(), 9);
        let c = Cone::from_constraints(names(2), &[rat_vec(&[1, -1])], &[]);
        assert_eq!(c.integer_points_in_box(3), vec![vec![0, 0], vec![1, 1], vec![2, 2], vec![3, 3]]);
    }

    proptest! {
        #[test]
        fn rays_and_constraints_are_dual(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 0..4)
        ) {
            let ineqs: Vec<Vec<Rat>> = rows.iter().map(|r| rat_vec(r)).collect();
            let c = Cone::from_constraints(names(3), &[], &ineqs);
            // Every ray satisfies the constraints and box points are nonnegative combinations.
            for r in c.rays() {
                prop_assert!(c.contains(r));
            }
            let back = Cone::from_rays(names(3), c.rays()).unwrap();
            prop_assert_eq!(&back, &c);
            for p in c.integer_points_in_box(3) {
                prop_assert!(back.contains_i64(&p));
            }
            for f in c.faces() {
                prop_assert!(f.is_face_of(&c));
            }
        }
    }
}
