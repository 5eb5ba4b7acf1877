//! Backend-independent formula bodies for the congruence catalog.
//!
//! Every left- and right-hand side is written exactly once, as a function
//! generic over [`Eval`]. The exact backend instantiates `V = BigRational`,
//! the fast backend `V = Residue`; both monomorphize the same body, so a
//! transcription error cannot hit one backend and spare the other.

use crate::error::ArithResult;
use crate::mhs::{reversal_pair, Signature};
use crate::modular::Residue;
use std::ops::{Add, Mul, Neg, Sub};

/// Upper summation bound of a harmonic sum inside a congruence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Bound {
    /// `n = p - 1`
    PMinus1,
    /// `n = (p - 1) / 2`
    Half,
}

/// Evaluation context for one (prime, modulus-exponent) pair. Implementors
/// cache whatever they like behind `&self`; all methods must be consistent
/// with the exact rational value reduced mod `p^k`.
pub trait Eval {
    type V: Clone
        + Add<Output = Self::V>
        + Sub<Output = Self::V>
        + Mul<Output = Self::V>
        + Neg<Output = Self::V>;

    fn prime(&self) -> u64;
    /// The rational constant `num/den` (`den` coprime to `p`).
    fn rat(&self, num: i64, den: i64) -> Self::V;
    /// `p^e`.
    fn ppow(&self, e: u32) -> Self::V;
    /// `2^e`, `e` possibly negative.
    fn pow2(&self, e: i32) -> Self::V;
    /// Fermat quotient `q_p(2)`.
    fn q2(&self) -> Self::V;
    /// `p^p_exp * B_{p-offset}` (zero when the index is odd).
    fn p_bern(&self, p_exp: u32, offset: u32) -> Self::V;
    /// `H(entries; bound)`.
    fn h(&self, entries: &[i32], bound: Bound) -> Self::V;
    /// `sum_{k=1}^{p-1} 2^k / k^r`.
    fn twisted2(&self, r: u32) -> Self::V;
    /// `1/m` for `m` coprime to `p`.
    fn inv_int(&self, m: i64) -> Self::V;
    /// `sum_{k=1}^{p-1} C(2k,k) / (k 4^k)`.
    fn central_sum(&self) -> Self::V;
    /// `4^{p-1}`.
    fn pow4_pm1(&self) -> Self::V;
    /// `4^{-(p-1)}`.
    fn inv4_pm1(&self) -> Self::V;
    /// `C(2p, j)` for `0 < j < p`; bodies call this with ascending `j`.
    fn binom_2p(&self, j: u64) -> Self::V;
    /// `C(2p, p)`.
    fn c2p_p(&self) -> Self::V;
    /// `(2 - C(2p,p)) / (4p)`.
    fn central_defect_quotient(&self) -> Self::V;
    /// Flatten to the check's modulus `p^k`.
    fn reduce(&self, v: &Self::V) -> ArithResult<Residue>;
}

fn sq<E: Eval>(v: &E::V) -> E::V {
    v.clone() * v.clone()
}

fn cube<E: Eval>(v: &E::V) -> E::V {
    v.clone() * v.clone() * v.clone()
}

/// `2^e` as an integer, for small non-negative `e`.
fn pow2i(e: u32) -> i64 {
    1i64 << e
}

// ---- Main congruence and its half-sum twin ----

/// `sum (-1)^k/k C(-1/2,k)  ≡  2q - p q^2 + (2/3) p^2 q^3 + (7/12) p^2 B_{p-3}`.
pub fn t11_main_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(2, 1) * q.clone() - e.ppow(1) * sq::<E>(&q)
        + e.rat(2, 3) * e.ppow(2) * cube::<E>(&q)
        + e.rat(7, 12) * e.p_bern(2, 3);
    (e.central_sum(), rhs)
}

/// Same left side against `-H(1; (p-1)/2)`.
pub fn t11_half_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    (e.central_sum(), -e.h(&[1], Bound::Half))
}

// ---- Non-alternating sums with repeated index {a}^r ----

/// `H({a}^r; p-1)` against `(-1)^r a(ar+1)/(2(ar+2)) p^2 B_{p-ar-2}` for odd
/// `ar` (mod p^3), or `(-1)^{r-1} a/(ar+1) p B_{p-ar-1}` for even `ar` (mod p^2).
pub fn known_i_sides<E: Eval>(e: &E, a: u32, r: u32) -> (E::V, E::V) {
    let sig = vec![a as i32; r as usize];
    let ar = (a * r) as i64;
    let rhs = if ar % 2 == 1 {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        e.rat(sign * a as i64 * (ar + 1), 2 * (ar + 2)) * e.p_bern(2, (ar + 2) as u32)
    } else {
        let sign = if r % 2 == 1 { 1 } else { -1 };
        e.rat(sign * a as i64, ar + 1) * e.p_bern(1, (ar + 1) as u32)
    };
    (e.h(&sig, Bound::PMinus1), rhs)
}

/// `H(1; (p-1)/2) ≡ -2q + p q^2 - (2/3) p^2 q^3 - (7/12) p^2 B_{p-3}` (mod p^3).
pub fn known_ii_1_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(-2, 1) * q.clone() + e.ppow(1) * sq::<E>(&q)
        - e.rat(2, 3) * e.ppow(2) * cube::<E>(&q)
        - e.rat(7, 12) * e.p_bern(2, 3);
    (e.h(&[1], Bound::Half), rhs)
}

/// `H(a; (p-1)/2)` against `-(2^a-2)/a B_{p-a}` for odd `a` (mod p), or
/// `a(2^{a+1}-1)/(2(a+1)) p B_{p-a-1}` for even `a` (mod p^2).
pub fn known_ii_a_sides<E: Eval>(e: &E, a: u32) -> (E::V, E::V) {
    let rhs = if a % 2 == 1 {
        e.rat(-(pow2i(a) - 2), a as i64) * e.p_bern(0, a)
    } else {
        e.rat(a as i64 * (pow2i(a + 1) - 1), 2 * (a as i64 + 1)) * e.p_bern(1, a + 1)
    };
    (e.h(&[a as i32], Bound::Half), rhs)
}

/// `H(a,b; p-1) ≡ (-1)^b/(a+b) C(a+b,a) B_{p-a-b}` (mod p); the Bernoulli
/// index is odd (so the right side vanishes) whenever `a+b` is even.
pub fn known_iii_sides<E: Eval>(e: &E, a: u32, b: u32) -> (E::V, E::V) {
    let binom = crate::exact::binom_exact((a + b) as u64, a as i64);
    let binom = i64::try_from(&binom).expect("small binomial");
    let sign = if b % 2 == 0 { 1 } else { -1 };
    let rhs = e.rat(sign * binom, (a + b) as i64) * e.p_bern(0, a + b);
    (e.h(&[a as i32, b as i32], Bound::PMinus1), rhs)
}

// ---- Negative-pair reduction and the underlying decomposition ----

/// `H(-a,-b;p-1) ≡ -(1 - 2^{1-a-b}) H(a,b;p-1)
///                 - (-1)^b 2^{1-a-b} H(a;(p-1)/2) H(b;(p-1)/2)` (mod p).
pub fn t21_negpair_sides<E: Eval>(e: &E, a: u32, b: u32) -> (E::V, E::V) {
    let half_pow = e.pow2(1 - (a + b) as i32);
    let mut cross = half_pow.clone() * e.h(&[a as i32], Bound::Half) * e.h(&[b as i32], Bound::Half);
    if b % 2 == 0 {
        cross = -cross;
    }
    let rhs = -((e.rat(1, 1) - half_pow) * e.h(&[a as i32, b as i32], Bound::PMinus1)) + cross;
    (e.h(&[-(a as i32), -(b as i32)], Bound::PMinus1), rhs)
}

/// `H(a,b;p-1) ≡ H(a,b;h) + (-1)^b H(a;h) H(b;h) + (-1)^{a+b} H(b,a;h)`
/// (mod p), with `h = (p-1)/2`.
pub fn t21_decomp_sides<E: Eval>(e: &E, a: u32, b: u32) -> (E::V, E::V) {
    let (ai, bi) = (a as i32, b as i32);
    let mut cross = e.h(&[ai], Bound::Half) * e.h(&[bi], Bound::Half);
    if b % 2 == 1 {
        cross = -cross;
    }
    let mut swapped = e.h(&[bi, ai], Bound::Half);
    if (a + b) % 2 == 1 {
        swapped = -swapped;
    }
    let rhs = e.h(&[ai, bi], Bound::Half) + cross + swapped;
    (e.h(&[ai, bi], Bound::PMinus1), rhs)
}

// ---- Fully negative depth-1 and depth-2 values ----

/// `H(-1;p-1) ≡ -2q + p q^2 - (2/3) p^2 q^3 - (1/4) p^2 B_{p-3}` (mod p^3).
pub fn minus_one_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(-2, 1) * q.clone() + e.ppow(1) * sq::<E>(&q)
        - e.rat(2, 3) * e.ppow(2) * cube::<E>(&q)
        - e.rat(1, 4) * e.p_bern(2, 3);
    (e.h(&[-1], Bound::PMinus1), rhs)
}

/// `H(-1,-1;p-1) ≡ 2q^2 - 2p q^3 - (1/3) p B_{p-3}` (mod p^2).
pub fn c22_m1m1_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(2, 1) * sq::<E>(&q) - e.rat(2, 1) * e.ppow(1) * cube::<E>(&q)
        - e.rat(1, 3) * e.p_bern(1, 3);
    (e.h(&[-1, -1], Bound::PMinus1), rhs)
}

/// `H(-a;p-1) ≡ -(2^a-2)/(a 2^{a-1}) B_{p-a}` (mod p) for `a > 1`.
pub fn c22_ma_sides<E: Eval>(e: &E, a: u32) -> (E::V, E::V) {
    let rhs = e.rat(-(pow2i(a) - 2), a as i64 * pow2i(a - 1)) * e.p_bern(0, a);
    (e.h(&[-(a as i32)], Bound::PMinus1), rhs)
}

// ---- Twisted power sums ----

/// `H({1}^{r-1},-1;p-1) ≡ (-1)^{r-1} sum 2^k/k^r` (mod p).
pub fn t23_r_sides<E: Eval>(e: &E, r: u32) -> (E::V, E::V) {
    let mut sig = vec![1i32; (r - 1) as usize];
    sig.push(-1);
    let mut rhs = e.twisted2(r);
    if r % 2 == 0 {
        rhs = -rhs;
    }
    (e.h(&sig, Bound::PMinus1), rhs)
}

/// `sum 2^k/k^2 ≡ -q^2` (mod p).
pub fn aux_pow2_k2_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    (e.twisted2(2), -sq::<E>(&e.q2()))
}

/// `sum 2^k/k^3 ≡ -(1/3) q^3 + (7/12) H(-3;p-1)` (mod p).
pub fn aux_pow2_k3_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let rhs = e.rat(-1, 3) * cube::<E>(&e.q2()) + e.rat(7, 12) * e.h(&[-3], Bound::PMinus1);
    (e.twisted2(3), rhs)
}

// ---- Depth-2 and depth-3 values of weight 3 ----

/// `H(sig;p-1) ≡ s q^2` (mod p).
pub fn h_vs_q2_sides<E: Eval>(e: &E, sig: &[i32], s: i64) -> (E::V, E::V) {
    (e.h(sig, Bound::PMinus1), e.rat(s, 1) * sq::<E>(&e.q2()))
}

/// `H(sig;p-1) ≡ (num/den) B_{p-3}` (mod p).
pub fn h_vs_bern_sides<E: Eval>(e: &E, sig: &[i32], num: i64, den: i64) -> (E::V, E::V) {
    (e.h(sig, Bound::PMinus1), e.rat(num, den) * e.p_bern(0, 3))
}

/// `H(sig;p-1) ≡ (qn/qd) q^3 + (bn/bd) B_{p-3}` (mod p).
pub fn h_vs_q3_bern_sides<E: Eval>(
    e: &E,
    sig: &[i32],
    qn: i64,
    qd: i64,
    bn: i64,
    bd: i64,
) -> (E::V, E::V) {
    let rhs = e.rat(qn, qd) * cube::<E>(&e.q2()) + e.rat(bn, bd) * e.p_bern(0, 3);
    (e.h(sig, Bound::PMinus1), rhs)
}

// ---- Binomial coefficients C(2p, .) ----

/// `C(2p,p) ≡ 2 - (4/3) p^3 B_{p-3}` (mod p^4).
pub fn l33_p_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    (e.c2p_p(), e.rat(2, 1) - e.rat(4, 3) * e.p_bern(3, 3))
}

/// `(2 - C(2p,p)) / (4p) ≡ (1/3) p^2 B_{p-3}` (mod p^3).
pub fn s3_t1_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    (e.central_defect_quotient(), e.rat(1, 3) * e.p_bern(2, 3))
}

/// `sum_{0<d<p} (-1)^d/(p-d) C(2p,d) ≡ -(8/3) p^2 B_{p-3}` (mod p^3).
pub fn s3_t3_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let p = e.prime();
    let mut acc = e.rat(0, 1);
    for d in 1..p {
        let mut term = e.inv_int((p - d) as i64) * e.binom_2p(d);
        if d % 2 == 1 {
            term = -term;
        }
        acc = acc + term;
    }
    (acc, e.rat(-8, 3) * e.p_bern(2, 3))
}

/// `sum_{0<j<d<p} (-1)^d/(p-d) C(2p,j) ≡ 4p q^2 + (4/3) p^2 B_{p-3}` (mod p^3).
pub fn s3_t4_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let p = e.prime();
    let mut acc = e.rat(0, 1);
    let mut prefix = e.rat(0, 1); // sum_{j=1}^{d-1} C(2p,j)
    for d in 1..p {
        let mut term = e.inv_int((p - d) as i64) * prefix.clone();
        if d % 2 == 1 {
            term = -term;
        }
        acc = acc + term;
        prefix = prefix + e.binom_2p(d);
    }
    let q = e.q2();
    let rhs = e.rat(4, 1) * e.ppow(1) * sq::<E>(&q) + e.rat(4, 3) * e.p_bern(2, 3);
    (acc, rhs)
}

/// `4^{p-1} sum (-1)^k/k C(-1/2,k) ≡ 2q + 3p q^2 + (2/3) p^2 q^3
///  + (7/12) p^2 B_{p-3}` (mod p^3).
pub fn s3_total_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(2, 1) * q.clone() + e.rat(3, 1) * e.ppow(1) * sq::<E>(&q)
        + e.rat(2, 3) * e.ppow(2) * cube::<E>(&q)
        + e.rat(7, 12) * e.p_bern(2, 3);
    (e.pow4_pm1() * e.central_sum(), rhs)
}

/// `4^{-(p-1)} ≡ 1 - 2pq + 3p^2 q^2` (mod p^3).
pub fn s3_inv4_sides<E: Eval>(e: &E) -> (E::V, E::V) {
    let q = e.q2();
    let rhs = e.rat(1, 1) - e.rat(2, 1) * e.ppow(1) * q.clone()
        + e.rat(3, 1) * e.ppow(2) * sq::<E>(&q);
    (e.inv4_pm1(), rhs)
}

// ---- Per-item families: compare inside, report first failure ----

/// `C(2p,j) ≡ -2p (-1)^j/j + 4p^2 (-1)^j/j H(1;j-1)` (mod p^3) for every
/// `0 < j < p`. Returns the first failing pair, else the last pair checked.
pub fn l33_j_sides<E: Eval>(e: &E) -> ArithResult<(Residue, Residue)> {
    let p = e.prime();
    let mut harm = e.rat(0, 1); // H(1; j-1), built incrementally
    let mut last = None;
    for j in 1..p {
        let inv_j = e.inv_int(j as i64);
        let mut rhs =
            inv_j.clone() * (e.rat(-2, 1) * e.ppow(1) + e.rat(4, 1) * e.ppow(2) * harm.clone());
        if j % 2 == 1 {
            rhs = -rhs;
        }
        let pair = (e.reduce(&e.binom_2p(j))?, e.reduce(&rhs)?);
        if pair.0 != pair.1 {
            return Ok(pair);
        }
        last = Some(pair);
        harm = harm + inv_j;
    }
    Ok(last.expect("p > 2 leaves at least one j"))
}

/// All signatures of the given depth with entries in `{±1, ±2}`.
pub fn small_signatures(depth: usize) -> Vec<Signature> {
    let choices = [-2i32, -1, 1, 2];
    let mut out = vec![vec![]];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i32>| {
                choices.iter().map(move |&c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Signature::new(v).unwrap()).collect()
}

/// `H(sig;p-1) ≡ sign * H(reversed;p-1)` (mod p) for every signature of the
/// given depth over `{±1, ±2}`. First failing pair, else the last.
pub fn reversal_sides<E: Eval>(e: &E, depth: usize) -> ArithResult<(Residue, Residue)> {
    let mut last = None;
    for sig in small_signatures(depth) {
        let (rev, sign) = reversal_pair(&sig)?;
        let lhs = e.h(sig.entries(), Bound::PMinus1);
        let mut rhs = e.h(rev.entries(), Bound::PMinus1);
        if sign < 0 {
            rhs = -rhs;
        }
        let pair = (e.reduce(&lhs)?, e.reduce(&rhs)?);
        if pair.0 != pair.1 {
            return Ok(pair);
        }
        last = Some(pair);
    }
    Ok(last.expect("nonempty signature family"))
}
