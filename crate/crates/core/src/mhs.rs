//! Alternating multiple harmonic sums.
//!
//! For a signature `(a_1, ..., a_r)` of nonzero integers and a bound `n`,
//!
//! ```text
//! H(a_1,...,a_r; n) = sum over 1 <= k_1 < ... < k_r <= n of
//!                     prod_i sign(a_i)^{k_i} / k_i^{|a_i|}
//! ```
//!
//! Depth is `r`, weight is `sum |a_i|`. The module evaluates these exactly
//! (rationals) and modulo `p^k`, provides a brute-force oracle, the
//! quasi-shuffle (stuffle) product on signatures, the reversal transform for
//! depths 2 and 3, and twisted power sums `sum x^k / k^r`.

use crate::error::{ArithError, ArithResult};
use crate::exact::BigRational;
use crate::modular::{batch_inverses, Residue};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// An ordered list of nonzero integers naming an alternating multiple
/// harmonic sum. Negative entries contribute the alternating factor
/// `(-1)^{k_i}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Signature(Vec<i32>);

impl Signature {
    pub fn new(entries: Vec<i32>) -> ArithResult<Self> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(ArithError::ZeroSignatureEntry);
        }
        Ok(Signature(entries))
    }

    /// Convenience for literal signatures in tests and the registry;
    /// panics on a zero entry.
    pub fn of(entries: &[i32]) -> Self {
        Signature::new(entries.to_vec()).expect("nonzero entries")
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|a| a.unsigned_abs()).sum()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Exact evaluation by the streaming recurrence
/// `H_i(m) = H_i(m-1) + H_{i-1}(m-1) * sign(a_i)^m / m^{|a_i|}`
/// with `H_0 = 1`; cost `O(n * depth)`, memory `O(depth)`.
///
/// `n` smaller than the depth yields the empty sum, 0.
pub fn mhs_exact(sig: &Signature, n: u64) -> BigRational {
    let r = sig.depth();
    // dp[i] = H(a_1..a_i; m) as m advances; dp[0] is the constant 1.
    let mut dp = vec![BigRational::zero(); r + 1];
    dp[0] = BigRational::one();
    for m in 1..=n {
        for i in (1..=r).rev() {
            let a = sig.0[i - 1];
            let mut term = &dp[i - 1]
                / BigRational::from(BigInt::from(m).pow(a.unsigned_abs()));
            if a < 0 && m % 2 == 1 {
                term = -term;
            }
            let updated = &dp[i] + term;
            dp[i] = updated;
        }
    }
    dp.pop().unwrap()
}

/// Literal nested enumeration of all strictly increasing index tuples.
/// Oracle twin of [`mhs_exact`]; exponential in depth, test-scale only.
pub fn naive_mhs(sig: &Signature, n: u64) -> BigRational {
    fn rec(entries: &[i32], lo: u64, n: u64) -> BigRational {
        let Some((&a, rest)) = entries.split_first() else {
            return BigRational::one();
        };
        let mut acc = BigRational::zero();
        for k in lo..=n {
            let mut term = rec(rest, k + 1, n)
                / BigRational::from(BigInt::from(k).pow(a.unsigned_abs()));
            if a < 0 && k % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
        acc
    }
    rec(&sig.0, 1, n)
}

/// The same recurrence carried out in `Z/p^k`; requires `n < p` so every
/// denominator is invertible. Agrees with reducing [`mhs_exact`].
pub fn mhs_mod(sig: &Signature, n: u64, p: u64, k: u32) -> ArithResult<Residue> {
    if n >= p {
        return Err(ArithError::BoundNotBelowPrime { n, p });
    }
    let inv = batch_inverses(n, p, k)?;
    let r = sig.depth();
    let zero = Residue::new(0, p, k)?;
    let mut dp = vec![zero; r + 1];
    dp[0] = Residue::new(1, p, k)?;
    for m in 1..=n {
        for i in (1..=r).rev() {
            let a = sig.0[i - 1];
            let mut term = dp[i - 1] * inv[(m - 1) as usize].pow(a.unsigned_abs() as u64);
            if a < 0 && m % 2 == 1 {
                term = -term;
            }
            dp[i] = dp[i] + term;
        }
    }
    Ok(dp[r])
}

/// Merge of two exponents in the quasi-shuffle algebra:
/// `a (+) b = sign(ab) * (|a| + |b|)`.
pub fn merge_entries(a: i32, b: i32) -> i32 {
    let mag = a.abs() + b.abs();
    if (a < 0) != (b < 0) {
        -mag
    } else {
        mag
    }
}

/// Quasi-shuffle (stuffle) expansion: the multiset of signatures with
/// `H(sig1;n) * H(sig2;n) = sum H(s;n)` for every bound `n`.
///
/// Recursion on the last entries: with `A = A'·a` and `B = B'·b`,
/// the interleavings end in `a`, end in `b`, or merge the two into `a(+)b`.
pub fn stuffle_product(sig1: &Signature, sig2: &Signature) -> Vec<Signature> {
    fn rec(x: &[i32], y: &[i32]) -> Vec<Vec<i32>> {
        if x.is_empty() {
            return vec![y.to_vec()];
        }
        if y.is_empty() {
            return vec![x.to_vec()];
        }
        let (xs, a) = (&x[..x.len() - 1], x[x.len() - 1]);
        let (ys, b) = (&y[..y.len() - 1], y[y.len() - 1]);
        let mut out = Vec::new();
        for mut w in rec(xs, y) {
            w.push(a);
            out.push(w);
        }
        for mut w in rec(x, ys) {
            w.push(b);
            out.push(w);
        }
        for mut w in rec(xs, ys) {
            w.push(merge_entries(a, b));
            out.push(w);
        }
        out
    }
    rec(&sig1.0, &sig2.0)
        .into_iter()
        .map(|v| Signature(v))
        .collect()
}

/// Reversal transform for depths 2 and 3: returns the reversed signature and
/// the sign `(-1)^{weight} * prod sign(a_i)` with
/// `H(sig; p-1) ≡ sign * H(reversed; p-1) (mod p)` for odd primes `p`
/// (substitute `k_i -> p - k_i`).
pub fn reversal_pair(sig: &Signature) -> ArithResult<(Signature, i8)> {
    let depth = sig.depth();
    if depth != 2 && depth != 3 {
        return Err(ArithError::ReversalDepth(depth));
    }
    let mut rev = sig.0.clone();
    rev.reverse();
    let neg_entries = sig.0.iter().filter(|a| **a < 0).count();
    let sign = if (sig.weight() as usize + neg_entries) % 2 == 0 {
        1
    } else {
        -1
    };
    Ok((Signature(rev), sign))
}

/// `sum_{k=1}^{n} x^k / k^r` in the modulus carried by `x`; requires `n < p`.
pub fn twisted_power_sum(x: Residue, r: u32, n: u64) -> ArithResult<Residue> {
    let (p, k) = (x.p(), x.k());
    if n >= p {
        return Err(ArithError::BoundNotBelowPrime { n, p });
    }
    let inv = batch_inverses(n, p, k)?;
    let mut acc = Residue::new(0, p, k)?;
    let mut xpow = Residue::new(1, p, k)?;
    for m in 1..=n {
        xpow = xpow * x;
        acc = acc + xpow * inv[(m - 1) as usize].pow(r as u64);
    }
    Ok(acc)
}

/// Exact twin of [`twisted_power_sum`].
pub fn twisted_power_sum_exact(x: i64, r: u32, n: u64) -> BigRational {
    let x = BigRational::from(BigInt::from(x));
    let mut acc = BigRational::zero();
    let mut xpow = BigRational::one();
    for m in 1..=n {
        xpow *= &x;
        acc += &xpow / BigRational::from(BigInt::from(m).pow(r));
    }
    acc
}
