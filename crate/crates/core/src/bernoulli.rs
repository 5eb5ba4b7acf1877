//! Bernoulli numbers by two independent routes, and Fermat quotients.
//!
//! The exact route runs the convolution recurrence over rationals and caches
//! globally. The modular route evaluates the power sum `T = sum k^m mod p^2`
//! and reads `B_m = T/p mod p` off Faulhaber's formula; it never touches
//! bignums, so sweeps stay cheap. The two must agree — callers are expected
//! to cross-check before trusting the fast one (the verification suites do).

use crate::error::{ArithError, ArithResult};
use crate::exact::{rational_reduce_mod, BigRational};
use crate::modular::{prime_power, Residue};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::{LazyLock, Mutex};

/// Largest index the exact cache will compute. `B_4000` is far beyond any
/// sweep the exact backend can reach, and the quadratic recurrence gets slow
/// past this point.
pub const BERNOULLI_CAP: u64 = 4000;

static CACHE: LazyLock<Mutex<Vec<BigRational>>> = LazyLock::new(|| Mutex::new(Vec::new()));

/// Extends the global cache so `B_0..=B_n` are available.
pub fn ensure_bernoulli(n: u64) -> ArithResult<()> {
    if n > BERNOULLI_CAP {
        return Err(ArithError::BernoulliCap { n, cap: BERNOULLI_CAP });
    }
    let mut cache = CACHE.lock().unwrap();
    if cache.is_empty() {
        cache.push(BigRational::one());
    }
    while (cache.len() as u64) <= n {
        let m = cache.len(); // computing B_m from all earlier values
        // sum_{j=0}^{m} C(m+1,j) B_j = 0, binomials built incrementally
        // along the row: C(m+1,j) = C(m+1,j-1) * (m+2-j) / j.
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, b) in cache.iter().enumerate() {
            if j > 0 {
                binom = binom * BigInt::from(m + 2 - j) / BigInt::from(j);
            }
            if !b.is_zero() {
                acc += b * BigRational::from(binom.clone());
            }
        }
        let b_m = -acc / BigRational::from(BigInt::from(m + 1));
        if m % 2 == 1 && m > 1 {
            assert!(b_m.is_zero(), "odd-index Bernoulli must vanish (B_{m})");
        }
        cache.push(b_m);
    }
    Ok(())
}

/// `B_n` from the exact convolution recurrence.
pub fn bernoulli_exact(n: u64) -> ArithResult<BigRational> {
    ensure_bernoulli(n)?;
    Ok(CACHE.lock().unwrap()[n as usize].clone())
}

/// `B_m mod p` via the power sum `T = sum_{k=1}^{p-1} k^m mod p^2`:
/// Faulhaber's formula gives `T ≡ p B_m (mod p^2)` whenever `m` is even and
/// `2 <= m <= p-3` (no denominator is divisible by `p` in that range).
pub fn bernoulli_mod_p(m: u64, p: u64) -> ArithResult<Residue> {
    if m % 2 != 0 || m < 2 || m + 3 > p {
        return Err(ArithError::BernoulliIndex { m, p });
    }
    let p2 = prime_power(p, 2)?;
    let mut t: u64 = 0;
    for k in 1..p {
        t = (t + crate::primes::pow_mod(k, m, p2)) % p2;
    }
    if t % p != 0 {
        // Faulhaber guarantees divisibility in-range; reaching this is a bug.
        return Err(ArithError::BernoulliDivisibility { m, p });
    }
    Residue::new((t / p) % p, p, 1)
}

/// Fermat quotient `q_p(x) = (x^{p-1} - 1)/p`, returned mod `p^k`.
/// Computed from `x^{p-1} mod p^{k+1}`, so it is the true quotient's residue.
pub fn fermat_quotient(x: i64, p: u64, k: u32) -> ArithResult<Residue> {
    if x.unsigned_abs() % p == 0 {
        return Err(ArithError::BaseNotCoprime { x, p });
    }
    let lifted = Residue::from_int(x, p, k + 1)?.pow(p - 1);
    // Fermat: x^{p-1} ≡ 1 (mod p), so the difference is divisible by p.
    let diff = (lifted - Residue::new(1, p, k + 1)?).value();
    debug_assert_eq!(diff % p, 0);
    Residue::new((diff / p) % prime_power(p, k)?, p, k)
}

/// Reduction of the exact `B_n` mod `p^k` (denominator must be prime to `p`).
pub fn bernoulli_reduce(n: u64, p: u64, k: u32) -> ArithResult<Residue> {
    let b = bernoulli_exact(n)?;
    rational_reduce_mod(&b, p, k)
}
