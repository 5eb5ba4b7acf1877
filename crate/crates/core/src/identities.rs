//! Exact identities backing the congruence registry: the Riordan-style
//! binomial identity (as a polynomial identity in `x`), the alternating
//! central binomial sum it implies at `x = 4`, the alternating row identity,
//! and the even/odd splitting of alternating harmonic sums.

use crate::error::{ArithError, ArithResult};
use crate::exact::{binom_exact, BigRational};
use crate::mhs::{mhs_exact, Signature};
use crate::poly::RationalPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::ops::{Mul, Sub};

/// The terms `v_0 = 2`, `v_1 = x-2`, `v_{k+1} = (x-2) v_k - v_{k-1}`,
/// over any scalar ring (rationals, or polynomials for a symbolic `x`).
#[derive(Clone, Debug)]
pub struct VSequence<T> {
    pub x: T,
    pub terms: Vec<T>,
}

pub fn v_sequence<T>(x: T, m: usize) -> VSequence<T>
where
    T: Clone + Zero + One + Sub<Output = T> + Mul<Output = T>,
{
    let two = T::one() + T::one();
    let shifted = x.clone() - two.clone();
    let mut terms = Vec::with_capacity(m + 1);
    terms.push(two);
    if m >= 1 {
        terms.push(shifted.clone());
    }
    for k in 1..m {
        let next = shifted.clone() * terms[k].clone() - terms[k - 1].clone();
        terms.push(next);
    }
    VSequence { x, terms }
}

/// Both sides of the identity, as polynomials in `x`:
///
/// ```text
/// d * sum_{k=1}^{n} C(2k,k+d) x^{n-k} / k
///   = sum_{k=0}^{n-d} C(2n,n+d+k) v_k  -  C(2n,n+d)
/// ```
pub fn riordan_sides(n: u64, d: u64) -> (RationalPoly, RationalPoly) {
    assert!(1 <= d && d <= n, "need 1 <= d <= n");
    let mut lhs = RationalPoly::zero();
    for k in 1..=n {
        let c = BigRational::new(
            BigInt::from(d) * binom_exact(2 * k, (k + d) as i64),
            BigInt::from(k),
        );
        lhs = lhs + RationalPoly::monomial((n - k) as usize, c);
    }
    let v = v_sequence(RationalPoly::x(), (n - d) as usize);
    let mut rhs = RationalPoly::zero();
    for k in 0..=(n - d) {
        let c = BigRational::from(binom_exact(2 * n, (n + d + k) as i64));
        rhs = rhs + v.terms[k as usize].scale(&c);
    }
    let rhs =
        rhs - RationalPoly::constant(BigRational::from(binom_exact(2 * n, (n + d) as i64)));
    (lhs, rhs)
}

/// True iff the two sides of [`riordan_sides`] agree coefficientwise.
pub fn riordan_identity_check(n: u64, d: u64) -> bool {
    let (lhs, rhs) = riordan_sides(n, d);
    lhs == rhs
}

/// Both sides of the specialization at `x = 4`, summed over `d` with
/// alternating signs:
///
/// ```text
/// sum_{k=1}^{n} 4^{n-k} C(2k,k) / k
///   = -4 (-1)^n sum_{d=0}^{n-1} (-1)^d/(n-d) sum_{j=0}^{d-1} C(2n,j)
///     -2 (-1)^n sum_{d=0}^{n-1} (-1)^d/(n-d) C(2n,d)
/// ```
pub fn alternating_binomial_sum_sides(n: u64) -> (BigRational, BigRational) {
    assert!(n >= 1);
    let mut lhs = BigRational::zero();
    let mut pow4 = BigRational::one();
    for k in (1..=n).rev() {
        lhs += &pow4 * BigRational::new(binom_exact(2 * k, k as i64), BigInt::from(k));
        pow4 *= BigRational::from(BigInt::from(4));
    }
    let sign_n = if n % 2 == 0 { 1i64 } else { -1 };
    let mut t1 = BigRational::zero();
    let mut t2 = BigRational::zero();
    let mut prefix = BigRational::zero(); // sum_{j=0}^{d-1} C(2n,j)
    for d in 0..n {
        let sign_d = if d % 2 == 0 { 1i64 } else { -1 };
        let coeff = BigRational::new(BigInt::from(sign_d), BigInt::from(n - d));
        let row = BigRational::from(binom_exact(2 * n, d as i64));
        t1 += &coeff * &prefix;
        t2 += &coeff * &row;
        prefix += row;
    }
    let rhs = BigRational::from(BigInt::from(-4 * sign_n)) * t1
        + BigRational::from(BigInt::from(-2 * sign_n)) * t2;
    (lhs, rhs)
}

pub fn alternating_binomial_sum_check(n: u64) -> bool {
    let (lhs, rhs) = alternating_binomial_sum_sides(n);
    lhs == rhs
}

/// `sum_{d=-k}^{k} (-1)^d C(2k, k+d) = 0`.
pub fn alternating_row_check(k: u64) -> bool {
    let mut acc = BigInt::zero();
    for d in -(k as i64)..=(k as i64) {
        let term = binom_exact(2 * k, k as i64 + d);
        if d.rem_euclid(2) == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.is_zero()
}

/// The two exact equalities splitting an alternating sum over an even range
/// into its unsigned and even-index parts:
///
/// ```text
/// H(-a; n)    = -H(a; n) + 2^{1-a} H(a; n/2)
/// 2 H(-a,-a;n) = H(-a;n)^2 - H(2a;n)
/// ```
///
/// Both hold for every even `n`; odd bounds are rejected.
pub fn even_odd_split_check(a: u32, n: u64) -> ArithResult<bool> {
    assert!(a >= 1, "exponent must be positive");
    if n % 2 != 0 {
        return Err(ArithError::OddBound(n));
    }
    let a_i = a as i32;
    let pos = Signature::of(&[a_i]);
    let neg = Signature::of(&[-a_i]);
    let scale = BigRational::new(BigInt::one(), BigInt::from(2).pow(a - 1));
    let eq1 = mhs_exact(&neg, n) == -mhs_exact(&pos, n) + scale * mhs_exact(&pos, n / 2);

    let double = Signature::of(&[-a_i, -a_i]);
    let h_neg = mhs_exact(&neg, n);
    let eq2 = BigRational::from(BigInt::from(2)) * mhs_exact(&double, n)
        == &h_neg * &h_neg - mhs_exact(&Signature::of(&[2 * a_i]), n);
    Ok(eq1 && eq2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn v_sequence_frozen_values() {
        // x = 4 collapses every term to 2.
        let v = v_sequence(rat(4, 1), 10);
        assert!(v.terms.iter().all(|t| *t == rat(2, 1)));
        assert_eq!(v.terms.len(), 11);

        // Symbolic: v_2 = (x-2)^2 - 2 = x^2 - 4x + 2.
        let v = v_sequence(RationalPoly::x(), 2);
        let expect = RationalPoly::from_coeffs(vec![rat(2, 1), rat(-4, 1), rat(1, 1)]);
        assert_eq!(v.terms[2], expect);

        // x = 2: period-4 pattern 2, 0, -2, 0, 2.
        let v = v_sequence(rat(2, 1), 4);
        let got: Vec<BigRational> = v.terms.clone();
        assert_eq!(
            got,
            vec![rat(2, 1), rat(0, 1), rat(-2, 1), rat(0, 1), rat(2, 1)]
        );
    }

    #[test]
    fn riordan_frozen_values() {
        let (lhs, rhs) = riordan_sides(2, 1);
        let expect = RationalPoly::from_coeffs(vec![rat(2, 1), rat(1, 1)]); // x + 2
        assert_eq!(lhs, expect);
        assert_eq!(rhs, expect);

        let (lhs, rhs) = riordan_sides(1, 1);
        assert_eq!(lhs, RationalPoly::one());
        assert_eq!(rhs, RationalPoly::one());
    }

    #[test]
    fn riordan_sweep_small() {
        for n in 1..=10u64 {
            for d in 1..=n {
                assert!(riordan_identity_check(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn alternating_binomial_sum_frozen_values() {
        let (lhs, rhs) = alternating_binomial_sum_sides(1);
        assert_eq!(lhs, rat(2, 1));
        assert_eq!(rhs, rat(2, 1));
        let (lhs, rhs) = alternating_binomial_sum_sides(2);
        assert_eq!(lhs, rat(11, 1));
        assert_eq!(rhs, rat(11, 1));
        for n in 1..=12 {
            assert!(alternating_binomial_sum_check(n), "n={n}");
        }
    }

    #[test]
    fn alternating_row_frozen_values() {
        // Row 1,4,6,4,1: 6 - 2*4 + 2*1 = 0.
        assert!(alternating_row_check(2));
        assert!(alternating_row_check(1));
        for k in 1..=20 {
            assert!(alternating_row_check(k), "k={k}");
        }
    }

    #[test]
    fn even_odd_split_frozen_values() {
        // H(-1;4) = -7/12 = -25/12 + 3/2.
        assert!(even_odd_split_check(1, 4).unwrap());
        // 2 H(-2,-2;2) = -1/2 = (-3/4)^2 - 17/16.
        assert!(even_odd_split_check(2, 2).unwrap());
        assert!(even_odd_split_check(1, 2).unwrap());
        assert!(matches!(
            even_odd_split_check(1, 5),
            Err(ArithError::OddBound(5))
        ));
        for a in 1..=3u32 {
            for n in (2..=16u64).step_by(2) {
                assert!(even_odd_split_check(a, n).unwrap(), "a={a} n={n}");
            }
        }
    }

    #[test]
    fn riordan_at_four_implies_binomial_sum() {
        // Combining the polynomial identity at x = 4 over d with weights
        // 2(-1)^{d-1}/d collapses, via the alternating row identity, to the
        // central binomial sum equation; check both sides follow suit.
        let four = rat(4, 1);
        for n in 1..=12u64 {
            let mut lhs_acc = BigRational::zero();
            let mut rhs_acc = BigRational::zero();
            for d in 1..=n {
                let w = rat(if d % 2 == 1 { 2 } else { -2 }, d as i64);
                let (lhs, rhs) = riordan_sides(n, d);
                lhs_acc += &w * lhs.eval(&four);
                rhs_acc += &w * rhs.eval(&four);
            }
            let (lhs, rhs) = alternating_binomial_sum_sides(n);
            assert_eq!(lhs_acc, lhs, "n={n}");
            assert_eq!(rhs_acc, rhs, "n={n}");
        }
    }
}
