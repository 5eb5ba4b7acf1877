//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in ascending degree order with the invariant that
//! the last stored coefficient is nonzero (the zero polynomial is an empty
//! vector). Equality is therefore plain coefficientwise comparison.

use crate::exact::BigRational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    // ---- Constructors ----

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RationalPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from(BigInt::from(c)))
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, BigRational::one())
    }

    /// `c * x^deg`.
    pub fn monomial(deg: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        RationalPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPoly { coeffs };
        p.normalize();
        p
    }

    // ---- Accessors ----

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    // ---- Arithmetic helpers ----

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Evaluation at a rational point (Horner).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl Add for RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: RationalPoly) -> RationalPoly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (i, c) in short.into_iter().enumerate() {
            long[i] += c;
        }
        RationalPoly::from_coeffs(long)
    }
}

impl Sub for RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: RationalPoly) -> RationalPoly {
        self + (-rhs)
    }
}

impl Neg for RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }
}

impl Zero for RationalPoly {
    fn zero() -> Self {
        RationalPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for RationalPoly {
    fn one() -> Self {
        RationalPoly::one()
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let p = RationalPoly::from_coeffs(vec![rat(1, 2), rat(0, 1), rat(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        let z = RationalPoly::from_coeffs(vec![rat(0, 1); 3]);
        assert!(z.is_zero());
        assert_eq!(z, RationalPoly::zero());
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let x = RationalPoly::x();
        // (x + 2)(x - 2) = x^2 - 4
        let a = x.clone() + RationalPoly::from_int(2);
        let b = x.clone() - RationalPoly::from_int(2);
        let prod = a * b;
        let expected = RationalPoly::from_coeffs(vec![rat(-4, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(prod, expected);
        // Cancellation drops degree: (x^2 + x) - x^2 = x.
        let c = x.clone() * x.clone() + x.clone();
        let d = x.clone() * x.clone();
        assert_eq!(c - d, x);
    }

    #[test]
    fn eval_horner() {
        // 3x^2 - x/2 + 1 at x = 2: 12 - 1 + 1 = 12.
        let p = RationalPoly::from_coeffs(vec![rat(1, 1), rat(-1, 2), rat(3, 1)]);
        assert_eq!(p.eval(&rat(2, 1)), rat(12, 1));
        assert_eq!(RationalPoly::zero().eval(&rat(5, 1)), rat(0, 1));
    }

    #[test]
    fn display_squashes_zero_terms() {
        let p = RationalPoly::from_coeffs(vec![rat(2, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.to_string(), "(1)*x^2 + 2");
    }
}
