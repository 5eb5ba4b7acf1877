//! The congruence registry: a catalog of named checks, each pairing a
//! left-hand side with a right-hand side modulo a prime power, plus the
//! machinery to run them over sets of primes with one or both backends.
//!
//! Every check is written *once* as a generic expression over the [`Eval`]
//! trait; the `twin!` macro instantiates that single expression for the exact
//! (rational) backend and the fast (modular) backend, so the two can never
//! drift apart textually. Disagreement between backends is therefore strong
//! evidence of an arithmetic bug, and is surfaced as a distinct status rather
//! than being folded into pass/fail.

pub mod eval;
pub mod exact_backend;
pub mod fast_backend;

pub use eval::{Bound, Eval};
pub use exact_backend::{ExactCtx, ExactEval};
pub use fast_backend::{FastCtx, FastEval};

use std::sync::LazyLock;
use std::time::Instant;

use rayon::prelude::*;

use crate::bernoulli::{self, BERNOULLI_CAP};
use crate::error::{ArithError, ArithResult};
use crate::modular::{prime_power, Residue};
use crate::primes::is_prime;
use eval::*;

type ExactFn = Box<dyn Fn(&ExactEval) -> ArithResult<(Residue, Residue)> + Send + Sync>;
type FastFn = Box<dyn Fn(&FastEval) -> ArithResult<(Residue, Residue)> + Send + Sync>;

/// Instantiates one generic two-sided expression for both backends.
///
/// The body must evaluate to `(lhs, rhs)` in the backend's value type; it is
/// expanded token-for-token into both closures, which is the whole point:
/// there is a single transcription of each formula.
macro_rules! twin {
    (|$e:ident| $body:expr) => {
        (
            Box::new(move |$e: &ExactEval| -> ArithResult<(Residue, Residue)> {
                let (lhs, rhs) = $body;
                Ok(($e.reduce(&lhs)?, $e.reduce(&rhs)?))
            }) as ExactFn,
            Box::new(move |$e: &FastEval| -> ArithResult<(Residue, Residue)> {
                let (lhs, rhs) = $body;
                Ok(($e.reduce(&lhs)?, $e.reduce(&rhs)?))
            }) as FastFn,
        )
    };
}

/// Like `twin!`, but for bodies that reduce themselves and may fail, i.e.
/// expressions of type `ArithResult<(Residue, Residue)>`. Used by checks that
/// quantify over an inner index and report the first violated instance.
macro_rules! twin_seq {
    (|$e:ident| $body:expr) => {
        (
            Box::new(move |$e: &ExactEval| -> ArithResult<(Residue, Residue)> { $body })
                as ExactFn,
            Box::new(move |$e: &FastEval| -> ArithResult<(Residue, Residue)> { $body })
                as FastFn,
        )
    };
}

/// Which arithmetic route(s) to evaluate a check with.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    /// Exact rationals, reduced modulo `p^k` at the very end.
    Exact,
    /// Fixed-modulus arithmetic throughout.
    Fast,
    /// Both routes, with the results cross-checked residue by residue.
    Both,
}

/// Outcome of one (prime, check) evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The prime is below the check's admissibility threshold.
    Skipped,
    /// The two backends produced different residues: an internal bug, not a
    /// statement about the congruence.
    BackendMismatch,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::BackendMismatch => "backend_mismatch",
        }
    }
}

/// One evaluated (prime, check) pair.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub prime: u64,
    pub check_id: String,
    /// The modulus the comparison happened under, as `"p^k"`.
    pub modulus: String,
    /// Canonical residue of the left side, or `"-"` when skipped.
    pub lhs: String,
    /// Canonical residue of the right side, or `"-"` when skipped.
    pub rhs: String,
    pub status: CheckStatus,
    pub elapsed_us: u64,
}

/// A registered congruence: a named claim `lhs ≡ rhs (mod p^k)` for all
/// primes `p > p_greater_than`.
pub struct CongruenceCheck {
    pub id: String,
    /// Human-readable statement of the claim.
    pub description: String,
    /// The claim is asserted only for primes strictly greater than this.
    pub p_greater_than: u64,
    /// Exponent `k` in the modulus `p^k`.
    pub modulus_exponent: u32,
    exact: ExactFn,
    fast: FastFn,
}

impl CongruenceCheck {
    pub fn admissible(&self, p: u64) -> bool {
        p > self.p_greater_than
    }

    /// Smallest prime the check applies to.
    pub fn min_prime(&self) -> u64 {
        let mut q = self.p_greater_than + 1;
        while !is_prime(q) {
            q += 1;
        }
        q
    }
}

fn entry(
    id: String,
    description: String,
    p_greater_than: u64,
    modulus_exponent: u32,
    fns: (ExactFn, FastFn),
) -> CongruenceCheck {
    CongruenceCheck {
        id,
        description,
        p_greater_than,
        modulus_exponent,
        exact: fns.0,
        fast: fns.1,
    }
}

fn build_catalog() -> Vec<CongruenceCheck> {
    let mut v: Vec<CongruenceCheck> = Vec::new();
    let mut push = |id: &str, desc: String, gt: u64, k: u32, fns: (ExactFn, FastFn)| {
        v.push(entry(id.to_string(), desc, gt, k, fns));
    };

    // ---- Central binomial sum, full and half range ----
    push(
        "T11_MAIN",
        "sum_{k=1}^{p-1} binom(2k,k)/(k 4^k) == 2q - p q^2 + (2/3) p^2 q^3 \
         + (7/12) p^2 B_{p-3}  (mod p^3), with q the Fermat quotient of 2"
            .into(),
        3,
        3,
        twin!(|e| t11_main_sides(e)),
    );
    push(
        "T11_HALF",
        "sum_{k=1}^{p-1} binom(2k,k)/(k 4^k) == -H(1; (p-1)/2)  (mod p^3)".into(),
        3,
        3,
        twin!(|e| t11_half_sides(e)),
    );

    // ---- Full-range power sums H({a}^r; p-1) ----
    for a in 1..=3u32 {
        for r in 1..=3u32 {
            let ar = a * r;
            let (k, modname) = if ar % 2 == 1 { (3, "p^3") } else { (2, "p^2") };
            push(
                &format!("KNOWN_I_{a}_{r}"),
                format!(
                    "H({{{a}}}^{r}; p-1), depth {r} with repeated entry {a}, reduced \
                     against the closed Bernoulli form (mod {modname})"
                ),
                (ar + 2) as u64,
                k,
                twin!(|e| known_i_sides(e, a, r)),
            );
        }
    }

    // ---- Half-range power sums H(a; (p-1)/2) ----
    push(
        "KNOWN_II_1",
        "H(1; (p-1)/2) == -2q + p q^2 - (2/3) p^2 q^3 - (7/12) p^2 B_{p-3}  (mod p^3)".into(),
        3,
        3,
        twin!(|e| known_ii_1_sides(e)),
    );
    for a in 2..=6u32 {
        let (k, modname) = if a % 2 == 1 { (1, "p") } else { (2, "p^2") };
        push(
            &format!("KNOWN_II_A_{a}"),
            format!(
                "H({a}; (p-1)/2) reduced against its closed Bernoulli form (mod {modname})"
            ),
            (a + 1) as u64,
            k,
            twin!(|e| known_ii_a_sides(e, a)),
        );
    }

    // ---- Half-range depth-2 sums H(a,b; (p-1)/2) mod p ----
    for (a, b) in [(1u32, 1u32), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (1, 4), (4, 1), (2, 3), (3, 2)] {
        let sgn = if b % 2 == 0 { "" } else { "-" };
        push(
            &format!("KNOWN_III_{a}_{b}"),
            format!(
                "H({a},{b}; p-1) == {sgn}binom({s},{a})/{s} x B_{{p-{s}}}  (mod p); \
                 the right side vanishes when the Bernoulli index is odd",
                s = a + b
            ),
            (a + b + 1) as u64,
            1,
            twin!(|e| known_iii_sides(e, a, b)),
        );
    }

    // ---- Even/odd splits relating alternating and plain sums mod p ----
    for a in 1..=3u32 {
        for b in 1..=3u32 {
            push(
                &format!("T21_NEGPAIR_{a}_{b}"),
                format!(
                    "H(-{a},-{b}; p-1) == -(1 - 2^{{1-{a}-{b}}}) H({a},{b}; p-1) \
                     - (-1)^{b} 2^{{1-{a}-{b}}} H({a}; (p-1)/2) H({b}; (p-1)/2)  (mod p)"
                ),
                2,
                1,
                twin!(|e| t21_negpair_sides(e, a, b)),
            );
            push(
                &format!("T21_DECOMP_{a}_{b}"),
                format!(
                    "H({a},{b}; p-1) == H({a},{b}; h) + (-1)^{b} H({a}; h) H({b}; h) \
                     + (-1)^{s} H({b},{a}; h)  (mod p), h = (p-1)/2",
                    s = a + b
                ),
                2,
                1,
                twin!(|e| t21_decomp_sides(e, a, b)),
            );
        }
    }

    // ---- Alternating single sums over the full range ----
    push(
        "C22_M1",
        "H(-1; p-1) == -2q + p q^2 - (2/3) p^2 q^3 - (1/4) p^2 B_{p-3}  (mod p^3)".into(),
        3,
        3,
        twin!(|e| minus_one_sides(e)),
    );
    push(
        "C22_M1M1",
        "H(-1,-1; p-1) == 2 q^2 - 2 p q^3 - (1/3) p B_{p-3}  (mod p^2)".into(),
        3,
        2,
        twin!(|e| c22_m1m1_sides(e)),
    );
    for a in 2..=6u32 {
        push(
            &format!("C22_MA_{a}"),
            format!(
                "H(-{a}; p-1) == -(2^{a} - 2)/({a} x 2^{am1}) B_{{p-{a}}}  (mod p)",
                am1 = a - 1
            ),
            (a + 1) as u64,
            1,
            twin!(|e| c22_ma_sides(e, a)),
        );
    }

    // ---- Twisted power sums with base 2 ----
    for r in 1..=4u32 {
        push(
            &format!("T23_R_{r}"),
            format!(
                "H({{1}}^{rm1},-1; p-1) == (-1)^{rm1} sum_{{k=1}}^{{p-1}} 2^k/k^{r}  (mod p)",
                rm1 = r - 1
            ),
            (r + 1) as u64,
            1,
            twin!(|e| t23_r_sides(e, r)),
        );
    }

    // ---- Alternating double sums of weight 2 and 3 mod p ----
    push(
        "C24_1M1",
        "H(1,-1; p-1) == q^2  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q2_sides(e, &[1, -1], 1)),
    );
    push(
        "C24_M11",
        "H(-1,1; p-1) == -q^2  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q2_sides(e, &[-1, 1], -1)),
    );
    push(
        "C24_M12",
        "H(-1,2; p-1) == (1/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[-1, 2], 1, 4)),
    );
    push(
        "C24_1M2",
        "H(1,-2; p-1) == (1/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[1, -2], 1, 4)),
    );
    push(
        "C24_2M1",
        "H(2,-1; p-1) == (1/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[2, -1], 1, 4)),
    );
    push(
        "C24_M21",
        "H(-2,1; p-1) == (1/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[-2, 1], 1, 4)),
    );
    push(
        "C24_M1M2",
        "H(-1,-2; p-1) == -(3/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[-1, -2], -3, 4)),
    );
    push(
        "C24_M2M1",
        "H(-2,-1; p-1) == (3/4) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[-2, -1], 3, 4)),
    );
    push(
        "AUX_POW2_K2",
        "sum_{k=1}^{p-1} 2^k/k^2 == -q^2  (mod p)".into(),
        3,
        1,
        twin!(|e| aux_pow2_k2_sides(e)),
    );

    // ---- Alternating triple sums of weight 3 mod p ----
    push(
        "C25_M11M1",
        "H(-1,1,-1; p-1) == 0 x q^3 + 0 x B_{p-3} == 0  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[-1, 1, -1], 0, 1, 0, 1)),
    );
    push(
        "C25_11M1",
        "H(1,1,-1; p-1) == -(1/3) q^3 - (7/24) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[1, 1, -1], -1, 3, -7, 24)),
    );
    push(
        "C25_M111",
        "H(-1,1,1; p-1) == -(1/3) q^3 - (7/24) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[-1, 1, 1], -1, 3, -7, 24)),
    );
    push(
        "C25_M1M11",
        "H(-1,-1,1; p-1) == q^3 + (7/8) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[-1, -1, 1], 1, 1, 7, 8)),
    );
    push(
        "C25_1M1M1",
        "H(1,-1,-1; p-1) == -q^3 - (7/8) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[1, -1, -1], -1, 1, -7, 8)),
    );
    push(
        "C25_1M11",
        "H(1,-1,1; p-1) == (2/3) q^3 + (1/12) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[1, -1, 1], 2, 3, 1, 12)),
    );
    push(
        "C25_M1M1M1",
        "H(-1,-1,-1; p-1) == -(4/3) q^3 - (1/6) B_{p-3}  (mod p)".into(),
        3,
        1,
        twin!(|e| h_vs_q3_bern_sides(e, &[-1, -1, -1], -4, 3, -1, 6)),
    );
    push(
        "AUX_POW2_K3",
        "sum_{k=1}^{p-1} 2^k/k^3 == -(1/3) q^3 + (7/12) H(-3; p-1)  (mod p)".into(),
        3,
        1,
        twin!(|e| aux_pow2_k3_sides(e)),
    );

    // ---- Binomial coefficients C(2p, j) ----
    push(
        "L33_J",
        "binom(2p,j) == (-1)^{j-1} (2p/j) (1 - 2p H(1;j-1))  (mod p^3) for every \
         0 < j < p; reports the first violated j if any"
            .into(),
        2,
        3,
        twin_seq!(|e| l33_j_sides(e)),
    );
    push(
        "L33_P",
        "binom(2p,p) == 2 - (4/3) p^3 B_{p-3}  (mod p^4)".into(),
        3,
        4,
        twin!(|e| l33_p_sides(e)),
    );

    // ---- Term-by-term pieces of the central binomial sum proof ----
    push(
        "S3_T1",
        "(2 - binom(2p,p)) / (4p) == (1/3) p^2 B_{p-3}  (mod p^3)".into(),
        3,
        3,
        twin!(|e| s3_t1_sides(e)),
    );
    push(
        "S3_T2",
        "H(-1; p-1) == -2q + p q^2 - (2/3) p^2 q^3 - (1/4) p^2 B_{p-3}  (mod p^3)".into(),
        3,
        3,
        twin!(|e| minus_one_sides(e)),
    );
    push(
        "S3_T3",
        "sum_{0<d<p} (-1)^d/(p-d) binom(2p,d) == -(8/3) p^2 B_{p-3}  (mod p^3)".into(),
        3,
        3,
        twin!(|e| s3_t3_sides(e)),
    );
    push(
        "S3_T4",
        "sum_{0<j<d<p} (-1)^d/(p-d) binom(2p,j) == 4 p q^2 + (4/3) p^2 B_{p-3}  \
         (mod p^3)"
            .into(),
        3,
        3,
        twin!(|e| s3_t4_sides(e)),
    );
    push(
        "S3_TOTAL",
        "4^{p-1} sum_{k=1}^{p-1} binom(2k,k)/(k 4^k) == 2q + 3 p q^2 + \
         (2/3) p^2 q^3 + (7/12) p^2 B_{p-3}  (mod p^3)"
            .into(),
        3,
        3,
        twin!(|e| s3_total_sides(e)),
    );
    push(
        "S3_INV4",
        "4^{-(p-1)} == 1 - 2 p q + 3 p^2 q^2  (mod p^3)".into(),
        3,
        3,
        twin!(|e| s3_inv4_sides(e)),
    );

    // ---- Reversal symmetry for small signatures ----
    push(
        "REV2",
        "H(a1,a2; p-1) == sign x H(a2,a1; p-1)  (mod p) for all depth-2 signatures \
         with entries in {-2,-1,1,2}; sign = (-1)^{weight} sgn(a1 a2)"
            .into(),
        2,
        1,
        twin_seq!(|e| reversal_sides(e, 2)),
    );
    push(
        "REV3",
        "H(a1,a2,a3; p-1) == sign x H(a3,a2,a1; p-1)  (mod p) for all depth-3 \
         signatures with entries in {-2,-1,1,2}"
            .into(),
        2,
        1,
        twin_seq!(|e| reversal_sides(e, 3)),
    );

    v
}

static CATALOG: LazyLock<Vec<CongruenceCheck>> = LazyLock::new(build_catalog);

/// The full registry, in catalog order.
pub fn registry_list() -> &'static [CongruenceCheck] {
    &CATALOG
}

/// Looks a check up by id.
pub fn find_check(id: &str) -> ArithResult<&'static CongruenceCheck> {
    registry_list()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| ArithError::UnknownCheck(id.to_string()))
}

/// A deliberately perturbed copy of `C24_M1M2` (coefficient -1/2 instead of
/// -3/4). Running it must produce failures; used to prove the harness can
/// actually detect a false congruence.
pub fn mutant_check() -> CongruenceCheck {
    entry(
        "MUTANT_C24_M1M2".to_string(),
        "deliberately wrong: H(-1,-2; p-1) == -(1/2) B_{p-3}  (mod p); \
         must FAIL whenever B_{p-3} is nonzero mod p"
            .to_string(),
        3,
        1,
        twin!(|e| h_vs_bern_sides(e, &[-1, -2], -1, 2)),
    )
}

fn fmt_modulus(p: u64, k: u32) -> String {
    format!("{p}^{k}")
}

fn evaluated(
    check: &CongruenceCheck,
    p: u64,
    lhs: String,
    rhs: String,
    status: CheckStatus,
    started: Instant,
) -> CheckResult {
    CheckResult {
        prime: p,
        check_id: check.id.clone(),
        modulus: fmt_modulus(p, check.modulus_exponent),
        lhs,
        rhs,
        status,
        elapsed_us: started.elapsed().as_micros() as u64,
    }
}

/// Evaluates one check at one prime with already-built contexts.
fn run_one(
    check: &CongruenceCheck,
    p: u64,
    exact_ctx: Option<&ExactCtx>,
    fast_ctx: Option<&FastCtx>,
    backend: Backend,
) -> ArithResult<CheckResult> {
    let started = Instant::now();
    if !check.admissible(p) {
        return Ok(evaluated(
            check,
            p,
            "-".into(),
            "-".into(),
            CheckStatus::Skipped,
            started,
        ));
    }
    let k = check.modulus_exponent;
    let exact_pair = match backend {
        Backend::Exact | Backend::Both => {
            let ctx = exact_ctx.expect("exact context required");
            let e = ExactEval { ctx, k };
            Some((check.exact)(&e)?)
        }
        Backend::Fast => None,
    };
    let fast_pair = match backend {
        Backend::Fast | Backend::Both => {
            let ctx = fast_ctx.expect("fast context required");
            let e = FastEval { ctx, k };
            Some((check.fast)(&e)?)
        }
        Backend::Exact => None,
    };
    let (lhs, rhs) = match (exact_pair, fast_pair) {
        (Some(a), None) | (None, Some(a)) => a,
        (Some((el, er)), Some((fl, fr))) => {
            if el != fl || er != fr {
                return Ok(evaluated(
                    check,
                    p,
                    format!("exact={} fast={}", el.value(), fl.value()),
                    format!("exact={} fast={}", er.value(), fr.value()),
                    CheckStatus::BackendMismatch,
                    started,
                ));
            }
            (el, er)
        }
        (None, None) => unreachable!("at least one backend is always selected"),
    };
    let status = if lhs == rhs {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(evaluated(
        check,
        p,
        lhs.value().to_string(),
        rhs.value().to_string(),
        status,
        started,
    ))
}

fn validate_primes(primes: &[u64]) -> ArithResult<()> {
    for &p in primes {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
    }
    Ok(())
}

fn validate_envelope(primes: &[u64], backend: Backend) -> ArithResult<()> {
    let needs_exact = matches!(backend, Backend::Exact | Backend::Both);
    let needs_fast = matches!(backend, Backend::Fast | Backend::Both);
    for &p in primes {
        if needs_fast {
            // Every fast context reserves room for p^4 intermediates.
            prime_power(p, 4)?;
        }
        if needs_exact && p > BERNOULLI_CAP as u64 + 3 {
            return Err(ArithError::BernoulliCap {
                n: p - 3,
                cap: BERNOULLI_CAP as u64,
            });
        }
    }
    Ok(())
}

/// Cross-validates the two Bernoulli routes at the smallest primes of a sweep
/// before the fast backend is trusted on its own.
fn cross_validate_bernoulli(primes: &[u64]) -> ArithResult<()> {
    let mut sorted: Vec<u64> = primes.iter().copied().filter(|&p| p >= 7).collect();
    sorted.sort_unstable();
    sorted.dedup();
    for &p in sorted.iter().take(2) {
        let top = (p - 3).min(60);
        for m in (2..=top).step_by(2) {
            let fast = bernoulli::bernoulli_mod_p(m, p)?;
            let exact = bernoulli::bernoulli_reduce(m, p, 1)?;
            if fast.value() != exact.value() {
                return Err(ArithError::OracleMismatch(format!(
                    "B_{m} mod {p}: power-sum route gives {}, exact route gives {}",
                    fast.value(),
                    exact.value()
                )));
            }
        }
    }
    Ok(())
}

/// Runs an explicit set of checks over a set of primes.
///
/// Results are sorted by `(prime, check_id)` regardless of how the work was
/// scheduled, so the output is deterministic for a given input.
pub fn run_suite_with(
    checks: &[&CongruenceCheck],
    primes: &[u64],
    backend: Backend,
    workers: usize,
) -> ArithResult<Vec<CheckResult>> {
    validate_primes(primes)?;
    validate_envelope(primes, backend)?;
    let needs_exact = matches!(backend, Backend::Exact | Backend::Both);
    let needs_fast = matches!(backend, Backend::Fast | Backend::Both);
    if needs_fast {
        cross_validate_bernoulli(primes)?;
    }
    if needs_exact {
        // Fill the shared Bernoulli cache once, up front, instead of having
        // every worker thread race for the lock on first use.
        if let Some(&top) = primes.iter().max() {
            if top >= 5 {
                bernoulli::ensure_bernoulli(top - 3)?;
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build worker pool");
    let per_prime: ArithResult<Vec<Vec<CheckResult>>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let exact_ctx = needs_exact.then(|| ExactCtx::new(p));
                let fast_ctx = if needs_fast { Some(FastCtx::new(p)?) } else { None };
                checks
                    .iter()
                    .map(|c| run_one(c, p, exact_ctx.as_ref(), fast_ctx.as_ref(), backend))
                    .collect()
            })
            .collect()
    });
    let mut results: Vec<CheckResult> = per_prime?.into_iter().flatten().collect();
    results.sort_by(|a, b| {
        a.prime
            .cmp(&b.prime)
            .then_with(|| a.check_id.cmp(&b.check_id))
    });
    Ok(results)
}

/// Runs registry checks (all of them, or the ids given) over a set of primes.
pub fn run_suite(
    primes: &[u64],
    ids: Option<&[String]>,
    backend: Backend,
    workers: usize,
) -> ArithResult<Vec<CheckResult>> {
    let selected: Vec<&CongruenceCheck> = match ids {
        None => registry_list().iter().collect(),
        Some(list) => {
            for id in list {
                find_check(id)?;
            }
            registry_list()
                .iter()
                .filter(|c| list.iter().any(|id| id == &c.id))
                .collect()
        }
    };
    run_suite_with(&selected, primes, backend, workers)
}

/// Runs a single registry check at a single prime.
pub fn run_check(id: &str, p: u64, backend: Backend) -> ArithResult<CheckResult> {
    let check = find_check(id)?;
    run_check_custom(check, p, backend)
}

/// Runs any check (registered or not, e.g. the mutant) at a single prime.
pub fn run_check_custom(
    check: &CongruenceCheck,
    p: u64,
    backend: Backend,
) -> ArithResult<CheckResult> {
    validate_primes(&[p])?;
    validate_envelope(&[p], backend)?;
    let needs_exact = matches!(backend, Backend::Exact | Backend::Both);
    let needs_fast = matches!(backend, Backend::Fast | Backend::Both);
    let exact_ctx = needs_exact.then(|| ExactCtx::new(p));
    let fast_ctx = if needs_fast { Some(FastCtx::new(p)?) } else { None };
    run_one(check, p, exact_ctx.as_ref(), fast_ctx.as_ref(), backend)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_well_formed() {
        let list = registry_list();
        assert!(list.len() >= 40, "expected a rich catalog, got {}", list.len());
        let mut ids: Vec<&str> = list.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        let before = ids.len();
        ids.dedup();
        assert_eq!(before, ids.len(), "duplicate check ids");
        for c in list {
            assert!(!c.description.is_empty());
            assert!((1..=4).contains(&c.modulus_exponent), "{}", c.id);
        }
    }

    #[test]
    fn catalog_metadata_spot_values() {
        assert_eq!(find_check("T11_MAIN").unwrap().min_prime(), 5);
        assert_eq!(find_check("T11_MAIN").unwrap().modulus_exponent, 3);
        assert_eq!(find_check("L33_P").unwrap().modulus_exponent, 4);
        assert_eq!(find_check("C22_M1M1").unwrap().modulus_exponent, 2);
        assert_eq!(find_check("KNOWN_I_2_2").unwrap().modulus_exponent, 2);
        assert_eq!(find_check("KNOWN_I_2_2").unwrap().p_greater_than, 6);
        assert_eq!(find_check("KNOWN_II_A_6").unwrap().p_greater_than, 7);
        assert_eq!(find_check("KNOWN_III_3_2").unwrap().p_greater_than, 6);
        assert_eq!(find_check("T23_R_4").unwrap().p_greater_than, 5);
        assert!(find_check("NO_SUCH_CHECK").is_err());
    }

    #[test]
    fn small_prime_is_skipped() {
        let r = run_check("T11_MAIN", 3, Backend::Both).unwrap();
        assert_eq!(r.status, CheckStatus::Skipped);
        assert_eq!(r.lhs, "-");
        assert_eq!(r.modulus, "3^3");
    }

    #[test]
    fn composite_is_rejected() {
        assert_eq!(
            run_check("T11_MAIN", 9, Backend::Both).unwrap_err(),
            ArithError::NotPrime(9)
        );
    }

    #[test]
    fn c24_m1m2_at_five() {
        // H(-1,-2;4) = -71/288; mod 5 that is -71 * inv(288) = 3. The right
        // side -(3/4) B_2 = -(3/4)(1/6) = -1/8 is also 3 mod 5.
        let r = run_check("C24_M1M2", 5, Backend::Both).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert_eq!(r.lhs, "3");
        assert_eq!(r.rhs, "3");
        assert_eq!(r.modulus, "5^1");
    }

    #[test]
    fn central_binomial_value_at_five() {
        // C(10,5) = 252 and 2 - (4/3) 125 B_2 = 2 - 250/9 differ by 2500/9,
        // which has 5-adic valuation 4: the congruence holds mod 5^4.
        let r = run_check("L33_P", 5, Backend::Both).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert_eq!(r.lhs, "252");
        assert_eq!(r.rhs, "252");
        assert_eq!(r.modulus, "5^4");
    }

    #[test]
    fn proof_terms_at_five() {
        for (id, want) in [
            ("S3_T2", "114"),
            ("S3_T3", "100"),
            ("S3_T4", "5"),
            ("S3_TOTAL", "116"),
            ("S3_INV4", "21"),
        ] {
            let r = run_check(id, 5, Backend::Both).unwrap();
            assert_eq!(r.status, CheckStatus::Pass, "{id}");
            assert_eq!(r.lhs, want, "{id}");
            assert_eq!(r.rhs, want, "{id}");
        }
        let r = run_check("C22_M1M1", 5, Backend::Both).unwrap();
        assert_eq!(r.status, CheckStatus::Pass);
        assert_eq!(r.lhs, "13");
        assert_eq!(r.modulus, "5^2");
    }

    #[test]
    fn whole_registry_passes_at_small_primes() {
        let primes = [5u64, 7, 11, 13];
        let results = run_suite(&primes, None, Backend::Both, 2).unwrap();
        assert_eq!(results.len(), primes.len() * registry_list().len());
        for r in &results {
            assert!(
                matches!(r.status, CheckStatus::Pass | CheckStatus::Skipped),
                "{} at p={} gave {:?}: lhs={} rhs={}",
                r.check_id,
                r.prime,
                r.status,
                r.lhs,
                r.rhs
            );
        }
        // Deterministic ordering regardless of scheduling.
        let again = run_suite(&primes, None, Backend::Both, 4).unwrap();
        let key = |v: &Vec<CheckResult>| -> Vec<(u64, String, String, String)> {
            v.iter()
                .map(|r| (r.prime, r.check_id.clone(), r.lhs.clone(), r.rhs.clone()))
                .collect()
        };
        assert_eq!(
            key(&results.iter().cloned().collect()),
            key(&again.iter().cloned().collect())
        );
    }

    #[test]
    fn id_filter_selects_subset() {
        let ids = vec!["C24_1M1".to_string(), "REV2".to_string()];
        let results = run_suite(&[7, 11], Some(&ids), Backend::Fast, 1).unwrap();
        assert_eq!(results.len(), 4);
        assert!(results.iter().all(|r| r.status == CheckStatus::Pass));
        let err = run_suite(&[7], Some(&["BOGUS".to_string()]), Backend::Fast, 1).unwrap_err();
        assert_eq!(err, ArithError::UnknownCheck("BOGUS".into()));
    }

    #[test]
    fn mutant_is_detected() {
        let mutant = mutant_check();
        // B_2 = 1/6 is nonzero mod 5, so -(1/2)B_2 != -(3/4)B_2 there.
        let r = run_check_custom(&mutant, 5, Backend::Both).unwrap();
        assert_eq!(r.status, CheckStatus::Fail);
        // The honest check passes at the same prime.
        let honest = run_check("C24_M1M2", 5, Backend::Both).unwrap();
        assert_eq!(honest.status, CheckStatus::Pass);
    }

    #[test]
    fn half_range_decomposition_is_consistent() {
        // The alternating single sum must equal the combination
        // -H(1;p-1) + H(1;(p-1)/2) of the two plain sums it decomposes into.
        for p in [5u64, 7, 11, 13, 17] {
            let ctx = ExactCtx::new(p);
            let e = ExactEval { ctx: &ctx, k: 3 };
            let (lhs, _) = minus_one_sides(&e);
            let recombined = e.h(&[1], Bound::Half) - e.h(&[1], Bound::PMinus1);
            assert_eq!(
                e.reduce(&lhs).unwrap(),
                e.reduce(&recombined).unwrap(),
                "p={p}"
            );
        }
    }
}
