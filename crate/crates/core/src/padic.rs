//! Scaled p-adic values `p^v * u` with explicit precision tracking.
//!
//! A [`PadicScaled`] stores a valuation (possibly negative) together with a
//! unit residue; the unit's modulus exponent is the number of *relative*
//! digits known, so the value is pinned down modulo `p^(v + digits)`.
//! Addition tracks absolute precision honestly: cancellation shortens the
//! known window instead of silently inventing digits, and asking for more
//! digits than survive is a reported error at reduction time.
//!
//! Zero needs care: it has no valuation, so it is kept as a distinguished
//! marker recording only the modulus `p^abs` up to which the value is known
//! to vanish (`abs = i64::MAX` for an exact zero).

use crate::error::{ArithError, ArithResult};
use crate::modular::{prime_power, Residue};
use std::fmt;

/// Absolute precision tag for an exact (infinitely known) zero.
pub const EXACT_ZERO: i64 = i64::MAX;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum PadicScaled {
    /// A value known to be `0 mod p^abs`.
    Zero { p: u64, abs: i64 },
    /// `p^valuation * unit` with `unit` coprime to `p`, known to
    /// `unit.k()` relative digits.
    Val { valuation: i64, unit: Residue },
}

impl fmt::Debug for PadicScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicScaled::Zero { p, abs } if *abs == EXACT_ZERO => write!(f, "0 (exact, p={p})"),
            PadicScaled::Zero { p, abs } => write!(f, "O({p}^{abs})"),
            PadicScaled::Val { valuation, unit } => {
                write!(f, "{}^{} * {:?}", unit.p(), valuation, unit)
            }
        }
    }
}

impl PadicScaled {
    /// The exact zero.
    pub fn zero(p: u64) -> Self {
        PadicScaled::Zero { p, abs: EXACT_ZERO }
    }

    /// Wraps a unit residue at the given valuation. The residue must be
    /// coprime to `p`; a non-unit argument is a programming error.
    pub fn from_parts(valuation: i64, unit: Residue) -> Self {
        assert!(unit.value() % unit.p() != 0, "unit must be coprime to p");
        PadicScaled::Val { valuation, unit }
    }

    /// Converts a plain residue, stripping its p-part into the valuation.
    /// A zero residue becomes a zero marker of absolute precision `k`.
    pub fn from_residue(r: Residue) -> Self {
        let (p, k) = (r.p(), r.k());
        if r.value() == 0 {
            return PadicScaled::Zero { p, abs: k as i64 };
        }
        let mut v = 0u32;
        let mut value = r.value();
        while value % p == 0 {
            value /= p;
            v += 1;
        }
        let unit = Residue::new(value, p, k - v).expect("smaller modulus fits");
        PadicScaled::Val { valuation: v as i64, unit }
    }

    /// An exact integer to `k` relative digits.
    pub fn from_int(x: i64, p: u64, k: u32) -> ArithResult<Self> {
        if x == 0 {
            return Ok(PadicScaled::zero(p));
        }
        let mut mag = x.unsigned_abs();
        let mut v = 0i64;
        while mag % p == 0 {
            mag /= p;
            v += 1;
        }
        let unit = Residue::from_int(if x < 0 { -(mag as i64) } else { mag as i64 }, p, k)?;
        Ok(PadicScaled::Val { valuation: v, unit })
    }

    pub fn p(&self) -> u64 {
        match self {
            PadicScaled::Zero { p, .. } => *p,
            PadicScaled::Val { unit, .. } => unit.p(),
        }
    }

    /// The valuation, or `None` for a zero marker.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            PadicScaled::Zero { .. } => None,
            PadicScaled::Val { valuation, .. } => Some(*valuation),
        }
    }

    pub fn unit(&self) -> Option<Residue> {
        match self {
            PadicScaled::Zero { .. } => None,
            PadicScaled::Val { unit, .. } => Some(*unit),
        }
    }

    /// Exponent of the modulus up to which the value is determined.
    fn abs_prec(&self) -> i64 {
        match self {
            PadicScaled::Zero { abs, .. } => *abs,
            PadicScaled::Val { valuation, unit } => valuation + unit.k() as i64,
        }
    }

    pub fn try_add(&self, other: &PadicScaled) -> ArithResult<PadicScaled> {
        let p = self.p();
        assert_eq!(p, other.p(), "mixed primes in p-adic addition");
        match (self, other) {
            (PadicScaled::Zero { abs, .. }, _) => Ok(truncate_abs(other, *abs)),
            (_, PadicScaled::Zero { abs, .. }) => Ok(truncate_abs(self, *abs)),
            (
                PadicScaled::Val { valuation: va, unit: ua },
                PadicScaled::Val { valuation: vb, unit: ub },
            ) => {
                let abs = self.abs_prec().min(other.abs_prec());
                let vmin = (*va).min(*vb);
                // Digits representable at scale p^vmin before precision runs out.
                let window = (abs - vmin) as u32;
                let modulus = prime_power(p, window)?;
                let shifted = |v: i64, u: &Residue| -> u64 {
                    let gap = (v - vmin) as u32;
                    if gap >= window {
                        return 0;
                    }
                    let shift = p.pow(gap);
                    ((u.value() as u128 * shift as u128) % modulus as u128) as u64
                };
                let s = (shifted(*va, ua) + shifted(*vb, ub)) % modulus;
                if s == 0 {
                    return Ok(PadicScaled::Zero { p, abs });
                }
                let mut t = 0u32;
                let mut value = s;
                while value % p == 0 {
                    value /= p;
                    t += 1;
                }
                let unit = Residue::new(value, p, window - t)?;
                Ok(PadicScaled::Val { valuation: vmin + t as i64, unit })
            }
        }
    }

    pub fn try_mul(&self, other: &PadicScaled) -> ArithResult<PadicScaled> {
        let p = self.p();
        assert_eq!(p, other.p(), "mixed primes in p-adic multiplication");
        match (self, other) {
            (PadicScaled::Zero { abs: a, .. }, PadicScaled::Zero { abs: b, .. }) => {
                Ok(PadicScaled::Zero { p, abs: a.saturating_add(*b) })
            }
            (PadicScaled::Zero { abs, .. }, PadicScaled::Val { valuation, .. })
            | (PadicScaled::Val { valuation, .. }, PadicScaled::Zero { abs, .. }) => {
                Ok(PadicScaled::Zero { p, abs: abs.saturating_add(*valuation) })
            }
            (
                PadicScaled::Val { valuation: va, unit: ua },
                PadicScaled::Val { valuation: vb, unit: ub },
            ) => {
                let k = ua.k().min(ub.k());
                let unit = ua.reduce_k(k) * ub.reduce_k(k);
                Ok(PadicScaled::Val { valuation: va + vb, unit })
            }
        }
    }

    pub fn try_div(&self, other: &PadicScaled) -> ArithResult<PadicScaled> {
        let p = self.p();
        assert_eq!(p, other.p(), "mixed primes in p-adic division");
        match (self, other) {
            (_, PadicScaled::Zero { .. }) => Err(ArithError::PadicDivisionByZero),
            (PadicScaled::Zero { abs, .. }, PadicScaled::Val { valuation, .. }) => {
                Ok(PadicScaled::Zero { p, abs: abs.saturating_sub(*valuation) })
            }
            (
                PadicScaled::Val { valuation: va, unit: ua },
                PadicScaled::Val { valuation: vb, unit: ub },
            ) => {
                let k = ua.k().min(ub.k());
                let unit = ua.reduce_k(k) * ub.reduce_k(k).inverse()?;
                Ok(PadicScaled::Val { valuation: va - vb, unit })
            }
        }
    }

    /// Flattens back to a plain residue modulo `p^k`. Fails on negative
    /// valuation (the value is not a p-adic integer) and on insufficient
    /// precision (fewer than `k` absolute digits survive).
    pub fn reduce_mod(&self, k: u32) -> ArithResult<Residue> {
        let p = self.p();
        let abs = self.abs_prec();
        if abs < k as i64 {
            return Err(ArithError::PrecisionUnderflow { need: k, have: abs.max(0) as u32 });
        }
        match self {
            PadicScaled::Zero { .. } => Residue::new(0, p, k),
            PadicScaled::Val { valuation, unit } => {
                if *valuation < 0 {
                    return Err(ArithError::NegativeValuation { v: *valuation });
                }
                if *valuation >= k as i64 {
                    return Residue::new(0, p, k);
                }
                let shift = p.pow(*valuation as u32);
                let modulus = prime_power(p, k)?;
                let v = ((unit.value() as u128 * shift as u128) % modulus as u128) as u64;
                Residue::new(v, p, k)
            }
        }
    }
}

/// Caps a value's absolute precision (used when adding an inexact zero).
fn truncate_abs(x: &PadicScaled, abs: i64) -> PadicScaled {
    let p = x.p();
    match x {
        PadicScaled::Zero { abs: a, .. } => PadicScaled::Zero { p, abs: (*a).min(abs) },
        PadicScaled::Val { valuation, unit } => {
            if abs >= valuation + unit.k() as i64 {
                return *x;
            }
            if abs <= *valuation {
                return PadicScaled::Zero { p, abs };
            }
            let unit = unit.reduce_k((abs - valuation) as u32);
            PadicScaled::Val { valuation: *valuation, unit }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PadicOp {
    Add,
    Mul,
    Div,
}

/// Operation-dispatch form of the `PadicScaled` arithmetic.
pub fn padic_arith(op: PadicOp, a: &PadicScaled, b: &PadicScaled) -> ArithResult<PadicScaled> {
    match op {
        PadicOp::Add => a.try_add(b),
        PadicOp::Mul => a.try_mul(b),
        PadicOp::Div => a.try_div(b),
    }
}

/// Streams `C(2j, j)` for `j = 1, ..., p-1` as scaled p-adic values with `k`
/// relative digits, via `C(2j,j) = C(2j-2,j-1) * 2(2j-1)/j`.
///
/// The factor `2j-1` hits the single multiple of `p` at `j = (p+1)/2`, where
/// the `p` is stripped into the valuation; everything else is unit
/// arithmetic, so full relative precision is kept for every term.
pub struct CentralBinomialStream {
    p: u64,
    k: u32,
    modulus: u64,
    j: u64,
    valuation: i64,
    unit: u64,
}

pub fn central_binomial_stream(p: u64, k: u32) -> ArithResult<CentralBinomialStream> {
    if !crate::primes::is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let modulus = prime_power(p, k)?;
    Ok(CentralBinomialStream { p, k, modulus, j: 0, valuation: 0, unit: 1 })
}

impl Iterator for CentralBinomialStream {
    type Item = PadicScaled;

    fn next(&mut self) -> Option<PadicScaled> {
        if self.j + 1 >= self.p {
            return None;
        }
        self.j += 1;
        let j = self.j;
        let mut odd = 2 * j - 1;
        if odd == self.p {
            self.valuation += 1;
            odd = 1;
        }
        let inv_j = Residue::new(j, self.p, self.k)
            .and_then(|r| r.inverse())
            .expect("j < p is a unit")
            .value();
        let m = self.modulus as u128;
        self.unit = ((self.unit as u128 * (2 * (odd as u128 % m)) % m) * inv_j as u128 % m) as u64;
        let unit = Residue::new(self.unit, self.p, self.k).expect("modulus checked");
        Some(PadicScaled::from_parts(self.valuation, unit))
    }
}

/// `C(n, r)` as a scaled p-adic value with `k` relative digits, for
/// `0 <= r <= n <= 2p` (the only range the verifier needs).
///
/// The valuation comes from carry counting: `v_p(C(n,r))` is the number of
/// carries when adding `r` and `n-r` in base `p`. The unit is the quotient of
/// factorials with their `p`-parts stripped.
pub fn binom_mod(n: u64, r: u64, p: u64, k: u32) -> ArithResult<PadicScaled> {
    if !crate::primes::is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if n > 2 * p {
        return Err(ArithError::BinomialRange { n, max: 2 * p });
    }
    let modulus = prime_power(p, k)?;
    if r > n {
        return Ok(PadicScaled::zero(p));
    }
    // Carries of r + (n - r) in base p.
    let mut carries = 0i64;
    let (mut a, mut b, mut carry) = (r, n - r, 0u64);
    while a > 0 || b > 0 || carry > 0 {
        let digit = a % p + b % p + carry;
        carry = u64::from(digit >= p);
        carries += carry as i64;
        a /= p;
        b /= p;
    }
    // Product over i <= x of i with p-parts removed, mod p^k.
    let stripped_factorial = |x: u64| -> u64 {
        let mut acc: u128 = 1;
        for mut i in 1..=x {
            while i % p == 0 {
                i /= p;
            }
            acc = acc * i as u128 % modulus as u128;
        }
        acc as u64
    };
    let num = Residue::new(stripped_factorial(n), p, k)?;
    let den = (Residue::new(stripped_factorial(r), p, k)?
        * Residue::new(stripped_factorial(n - r), p, k)?)
    .inverse()?;
    Ok(PadicScaled::from_parts(carries, num * den))
}
