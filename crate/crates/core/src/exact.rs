//! Exact arbitrary-precision arithmetic: binomial coefficients, p-adic
//! valuations of rationals, and reduction of rationals into residue rings.
//!
//! Rationals are [`num_rational::BigRational`], which maintains the canonical
//! form we rely on everywhere: fully reduced, denominator positive, zero
//! represented as `0/1`.

use crate::error::{ArithError, ArithResult};
use crate::modular::{prime_power, Residue};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use num_bigint::BigInt as ExactInt;
pub use num_rational::BigRational;

/// The binomial coefficient `C(n, r)` as an exact integer.
///
/// Out-of-range `r` (negative or greater than `n`) gives 0, matching the
/// usual combinatorial convention. Negative *upper* arguments are not
/// supported; identities over `C(-1/2, k)` must be rewritten in terms of
/// central binomials first.
pub fn binom_exact(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigInt::from(1u32);
    for i in 1..=r {
        // C(n, i) = C(n, i-1) * (n - i + 1) / i, an exact division.
        acc = acc * BigInt::from(n - i + 1) / BigInt::from(i);
    }
    acc
}

/// The exponent of `p` in a nonzero integer.
pub fn int_padic_valuation(x: &BigInt, p: u64) -> ArithResult<u64> {
    if x.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut rest = x.abs();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &p);
        if !r.is_zero() {
            return Ok(v);
        }
        rest = q;
        v += 1;
    }
}

/// The p-adic valuation of a nonzero rational (negative when `p` divides the
/// denominator).
pub fn rational_padic_valuation(r: &BigRational, p: u64) -> ArithResult<i64> {
    if r.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    let vn = int_padic_valuation(r.numer(), p)? as i64;
    // Canonical form: at most one of numerator/denominator carries p.
    if vn > 0 {
        return Ok(vn);
    }
    Ok(-(int_padic_valuation(r.denom(), p)? as i64))
}

/// Reduces a rational with denominator coprime to `p` into `Z / p^k`.
pub fn rational_reduce_mod(r: &BigRational, p: u64, k: u32) -> ArithResult<Residue> {
    let modulus = prime_power(p, k)?;
    let big_mod = BigInt::from(modulus);
    let den_mod_p = mod_to_u64(r.denom(), p);
    if den_mod_p == 0 {
        return Err(ArithError::DenominatorNotCoprime { p });
    }
    let num = mod_to_u64_signed(r.numer(), &big_mod);
    let den = mod_to_u64_signed(r.denom(), &big_mod);
    let den_res = Residue::new(den, p, k)?;
    Ok(Residue::new(num, p, k)? * den_res.inverse()?)
}

fn mod_to_u64(x: &BigInt, m: u64) -> u64 {
    mod_to_u64_signed(x, &BigInt::from(m))
}

fn mod_to_u64_signed(x: &BigInt, m: &BigInt) -> u64 {
    use num_integer::Integer;
    let r = x.mod_floor(m);
    // mod_floor of a positive modulus is in [0, m); fits u64 by construction.
    let (_, digits) = r.to_u64_digits();
    *digits.first().unwrap_or(&0)
}
