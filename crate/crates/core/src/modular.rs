//! Fixed-precision residue arithmetic modulo prime powers `p^k`.
//!
//! A [`Residue`] remembers both the prime and the exponent it lives under;
//! arithmetic only combines residues with identical `(p, k)`, and mixing
//! moduli is a programming error (it panics rather than silently coercing).
//! Values stay in `u64` with `u128` intermediates, which bounds the usable
//! primes: `p^k` must fit in 64 bits.

use crate::error::{ArithError, ArithResult};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of `Z / p^k`, stored in canonical form `0 <= value < p^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    p: u64,
    k: u32,
    modulus: u64,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.k)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `p^k` as a `u64`, or an error when it overflows.
pub fn prime_power(p: u64, k: u32) -> ArithResult<u64> {
    p.checked_pow(k).ok_or(ArithError::ModulusOverflow { p, k })
}

impl Residue {
    /// Builds `value mod p^k`. Requires `k >= 1` and `p^k` to fit in 64 bits.
    pub fn new(value: u64, p: u64, k: u32) -> ArithResult<Self> {
        assert!(k >= 1, "modulus exponent must be at least 1");
        assert!(p >= 2, "modulus base must be at least 2");
        let modulus = prime_power(p, k)?;
        Ok(Residue { value: value % modulus, p, k, modulus })
    }

    /// Builds a residue from a signed integer, reducing into `[0, p^k)`.
    pub fn from_int(x: i64, p: u64, k: u32) -> ArithResult<Self> {
        let modulus = prime_power(p, k)?;
        let m = modulus as i128;
        let v = ((x as i128 % m) + m) % m;
        Residue::new(v as u64, p, k)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// The same value reduced to a lower precision `p^k2` (`k2 <= k`).
    pub fn reduce_k(&self, k2: u32) -> Residue {
        assert!(1 <= k2 && k2 <= self.k, "can only lower precision");
        let modulus = self.p.pow(k2);
        Residue { value: self.value % modulus, p: self.p, k: k2, modulus }
    }

    /// Binary exponentiation within the ring.
    pub fn pow(&self, mut exp: u64) -> Residue {
        let mut base = *self;
        let mut acc = Residue { value: 1 % self.modulus, ..*self };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors when the value is divisible by `p`.
    pub fn inverse(&self) -> ArithResult<Residue> {
        if self.value % self.p == 0 {
            return Err(ArithError::NotInvertible { value: self.value, modulus: self.modulus });
        }
        let inv = invert_u64(self.value, self.modulus)
            .ok_or(ArithError::NotInvertible { value: self.value, modulus: self.modulus })?;
        Ok(Residue { value: inv, ..*self })
    }

    fn assert_compatible(&self, other: &Residue) {
        assert!(
            self.p == other.p && self.k == other.k,
            "mixed moduli: {}^{} vs {}^{}",
            self.p,
            self.k,
            other.p,
            other.k
        );
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.assert_compatible(&rhs);
        let v = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Residue { value: v as u64, ..self }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.assert_compatible(&rhs);
        let v = (self.value as u128 + self.modulus as u128 - rhs.value as u128) % self.modulus as u128;
        Residue { value: v as u64, ..self }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.assert_compatible(&rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Residue { value: v as u64, ..self }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let v = if self.value == 0 { 0 } else { self.modulus - self.value };
        Residue { value: v, ..self }
    }
}

/// Extended-Euclid inverse of `a` modulo `m` (not necessarily prime).
fn invert_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    let m = m as i128;
    Some((((old_s % m) + m) % m) as u64)
}

/// Multiplicative inverse in `Z / p^k`; free-function form of
/// [`Residue::inverse`].
pub fn mod_inverse(a: Residue) -> ArithResult<Residue> {
    a.inverse()
}

/// `a^exp` in `Z / p^k`; standalone form of [`Residue::pow`].
pub fn mod_pow(a: Residue, exp: u64) -> Residue {
    a.pow(exp)
}

/// Inverses of `1, 2, ..., n` modulo `p^k` using the prefix-product trick:
/// one extended-gcd inversion total, everything else multiplications.
///
/// The classic `inv[i] = -(p/i)*inv[p mod i]` recurrence is only valid for a
/// prime modulus, so it must not be used here (the modulus is `p^k`).
/// Requires `n < p` so that every element is a unit.
pub fn batch_inverses(n: u64, p: u64, k: u32) -> ArithResult<Vec<Residue>> {
    if n >= p {
        return Err(ArithError::BoundNotBelowPrime { n, p });
    }
    let modulus = prime_power(p, k)?;
    let n = n as usize;
    // prefix[i] = 1 * 2 * ... * i  (prefix[0] = 1)
    let mut prefix = vec![1u64; n + 1];
    for i in 1..=n {
        prefix[i] = ((prefix[i - 1] as u128 * i as u128) % modulus as u128) as u64;
    }
    let mut suffix_inv = invert_u64(prefix[n], modulus).ok_or(ArithError::NotInvertible {
        value: prefix[n],
        modulus,
    })?;
    let mut out = vec![Residue { value: 1 % modulus, p, k, modulus }; n];
    for i in (1..=n).rev() {
        // suffix_inv = (i!)^{-1}; multiply by (i-1)! to isolate i^{-1}.
        let inv_i = ((suffix_inv as u128 * prefix[i - 1] as u128) % modulus as u128) as u64;
        out[i - 1] = Residue { value: inv_i, p, k, modulus };
        suffix_inv = ((suffix_inv as u128 * i as u128) % modulus as u128) as u64;
    }
    Ok(out)
}
