use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg::{self, Int, Rat};

/// A linear form with rational coefficients on a fixed coordinate space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm(pub Vec<Rat>);

impl LinearForm {
    pub fn zero(n: usize) -> Self {
        LinearForm(vec![Rat::zero(); n])
    }

    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.0[i] = Rat::one();
        f
    }

    pub fn from_ints(v: &[i64]) -> Self {
        LinearForm(v.iter().map(|&x| BigRational::from_integer(Int::from(x))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vec(&self.0)
    }

    pub fn add_scaled(&mut self, other: &LinearForm, c: &Rat) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        linalg::dot(&self.0, x)
    }

    pub fn eval_int(&self, x: &[Int]) -> Rat {
        self.0.iter().zip(x).fold(Rat::zero(), |acc, (a, b)| acc + a * BigRational::from_integer(b.clone()))
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Vec<Int> {
        linalg::primitive(&self.0)
    }
}

impl std::ops::Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        LinearForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Renders `sum c_i x_i` such as `l1 - 3*l2`.
pub fn format_form(coeffs: &[Int], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let abs = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !abs.is_one() {
            let _ = write!(out, "{abs}*");
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_equation(coeffs: &[Int], names: &[String]) -> String {
    let normalized = linalg::sign_normalize(coeffs.to_vec());
    format!("{} = 0", format_form(&normalized, names))
}

pub fn format_inequality(coeffs: &[Int], names: &[String]) -> String {
    format!("{} >= 0", format_form(coeffs, names))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::linalg::int;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("l{i}")).collect()
    }

    #[test]
    fn formats_wall() {
        assert_eq!(format_equation(&[int(-1), int(3), int(0)], &names(3)), "l1 - 3*l2 = 0");
        assert_eq!(format_inequality(&[int(-4), int(2), int(-1)], &names(3)), "-4*l1 + 2*l2 - l3 >= 0");
        assert_eq!(format_form(&[int(0), int(0)], &names(2)), "0");
    }

    #[test]
    fn form_arithmetic() {
        let mut f = LinearForm::from_ints(&[2, 0, 1]);
        f.add_scaled(&LinearForm::coordinate(3, 1), &linalg::rat(-1, 2));
        assert_eq!(f.primitive(), vec![int(4), int(-1), int(2)]);
        assert_eq!(f.eval_int(&[int(1), int(2), int(3)]), linalg::rat(4, 1));
    }
}
