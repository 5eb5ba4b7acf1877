//! The acceptance gate: seven criteria, each printing one PASS/FAIL line.
//! Run with `cargo test -p ahs-cli --test acceptance -- --nocapture` to see
//! the lines; any FAIL also fails the test.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ahs_core::bernoulli::{bernoulli_exact, bernoulli_mod_p, fermat_quotient};
use ahs_core::exact::{binom_exact, rational_reduce_mod};
use ahs_core::identities::{
    alternating_binomial_sum_check, alternating_row_check, even_odd_split_check,
    riordan_identity_check,
};
use ahs_core::mhs::{mhs_exact, mhs_mod, naive_mhs, reversal_pair, stuffle_product};
use ahs_core::primes::primes_in_range;
use ahs_core::registry::{
    eval, registry_list, run_suite, Backend, CheckStatus, Eval, ExactCtx, ExactEval,
};
use ahs_core::Signature;

fn criterion(n: u32, name: &str, body: impl FnOnce() -> Result<String, String>) {
    match body() {
        Ok(detail) => println!("ACCEPTANCE {n} {name}: PASS ({detail})"),
        Err(msg) => {
            println!("ACCEPTANCE {n} {name}: FAIL ({msg})");
            panic!("acceptance criterion {n} ({name}) failed: {msg}");
        }
    }
}

/// 5-adic valuation of a nonzero rational.
fn v5(r: &BigRational) -> i64 {
    assert!(!r.is_zero());
    let five = BigInt::from(5);
    let mut v = 0i64;
    let mut n = r.numer().abs();
    while (&n % &five).is_zero() {
        n /= &five;
        v += 1;
    }
    let mut d = r.denom().abs();
    while (&d % &five).is_zero() {
        d /= &five;
        v -= 1;
    }
    v
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn acceptance_1_central_sum_sweep_to_2000() {
    criterion(1, "central binomial sum congruence, primes 5..2000", || {
        let primes = primes_in_range(5, 2000);
        let ids = vec!["T11_MAIN".to_string(), "T11_HALF".to_string()];
        let started = Instant::now();
        let results =
            run_suite(&primes, Some(&ids), Backend::Fast, 1).map_err(|e| e.to_string())?;
        let elapsed = started.elapsed();
        if elapsed > Duration::from_secs(120) {
            return Err(format!("single-threaded sweep took {elapsed:?} > 120s"));
        }
        let mut passes = 0usize;
        for r in &results {
            if r.status != CheckStatus::Pass {
                return Err(format!(
                    "{} at p={} gave {:?} (lhs={} rhs={})",
                    r.check_id, r.prime, r.status, r.lhs, r.rhs
                ));
            }
            passes += 1;
        }
        if passes != 2 * primes.len() {
            return Err(format!("expected {} results, saw {passes}", 2 * primes.len()));
        }
        Ok(format!("{passes} pass in {elapsed:.2?}"))
    });
}

#[test]
fn acceptance_2_full_registry_both_backends_to_500() {
    criterion(2, "full registry, both backends, primes 5..500", || {
        let primes = primes_in_range(5, 500);
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        let started = Instant::now();
        let results =
            run_suite(&primes, None, Backend::Both, workers).map_err(|e| e.to_string())?;
        let elapsed = started.elapsed();
        let total = primes.len() * registry_list().len();
        if results.len() != total {
            return Err(format!("expected {total} results, saw {}", results.len()));
        }
        let mut passes = 0usize;
        let mut skips = 0usize;
        for r in &results {
            let check = registry_list().iter().find(|c| c.id == r.check_id).unwrap();
            match r.status {
                CheckStatus::Pass => passes += 1,
                CheckStatus::Skipped if r.prime <= check.p_greater_than => skips += 1,
                CheckStatus::Skipped => {
                    return Err(format!(
                        "{} skipped at admissible p={}",
                        r.check_id, r.prime
                    ))
                }
                other => {
                    return Err(format!(
                        "{} at p={} gave {:?} (lhs={} rhs={})",
                        r.check_id, r.prime, other, r.lhs, r.rhs
                    ))
                }
            }
        }
        Ok(format!(
            "{passes} pass, {skips} admissibility skips in {elapsed:.2?}"
        ))
    });
}

#[test]
fn acceptance_3_golden_spot_values_at_p5() {
    criterion(3, "golden spot values at p = 5", || {
        // Central binomial sum: sum_{k=1}^{4} binom(2k,k)/(k 4^k).
        let ctx = ExactCtx::new(5);
        let e = ExactEval { ctx: &ctx, k: 3 };
        let lhs = e.central_sum();
        if lhs != rat(1321, 1536) {
            return Err(format!("central sum = {lhs}, want 1321/1536"));
        }
        let golden_rhs = rat(-3, 2);
        let diff = lhs.clone() - &golden_rhs;
        if v5(&diff) != 3 {
            return Err(format!("v_5(LHS + 3/2) = {}, want exactly 3", v5(&diff)));
        }
        // Check the full right side agrees with the golden one mod 5^3.
        let (_, rhs) = eval::t11_main_sides(&e);
        if e.reduce(&rhs).unwrap() != rational_reduce_mod(&golden_rhs, 5, 3).unwrap() {
            return Err("registered RHS disagrees with -3/2 mod 125".into());
        }

        // Depth-2 alternating value and its Bernoulli form.
        let sig = Signature::of(&[-1, -2]);
        let h = mhs_exact(&sig, 4);
        if h != rat(-71, 288) {
            return Err(format!("H(-1,-2;4) = {h}, want -71/288"));
        }
        let h_mod = mhs_mod(&sig, 4, 5, 1).unwrap().value();
        let b2 = bernoulli_exact(2).unwrap();
        let bern_side = rational_reduce_mod(&(rat(-3, 4) * &b2), 5, 1)
            .unwrap()
            .value();
        if h_mod != 3 || bern_side != 3 {
            return Err(format!("mod-5 values {h_mod} and {bern_side}, want 3 and 3"));
        }

        // Central binomial coefficient against its mod-p^4 form.
        let c = binom_exact(10, 5);
        if c != BigInt::from(252) {
            return Err(format!("binom(10,5) = {c}, want 252"));
        }
        let rhs = rat(2, 1) - rat(4, 3) * rat(125, 1) * &b2;
        let diff = BigRational::from(c) - rhs;
        if v5(&diff) < 4 {
            return Err(format!("v_5(binom defect) = {}, want >= 4", v5(&diff)));
        }
        Ok("central sum, H(-1,-2;4), binom(10,5) all reproduced".into())
    });
}

#[test]
fn acceptance_4_identity_sweeps() {
    criterion(4, "exact identity sweeps", || {
        let started = Instant::now();
        let mut count = 0usize;
        for n in 1..=25u64 {
            for d in 1..=n {
                if !riordan_identity_check(n, d) {
                    return Err(format!("riordan identity false at n={n} d={d}"));
                }
                count += 1;
            }
        }
        for n in 1..=30u64 {
            if !alternating_binomial_sum_check(n) {
                return Err(format!("alternating binomial sum false at n={n}"));
            }
            count += 1;
        }
        for k in 1..=40u64 {
            if !alternating_row_check(k) {
                return Err(format!("alternating row identity false at k={k}"));
            }
            count += 1;
        }
        for a in 1..=4u32 {
            for n in (2..=40u64).step_by(2) {
                if !even_odd_split_check(a, n).map_err(|e| e.to_string())? {
                    return Err(format!("even/odd split false at a={a} n={n}"));
                }
                count += 1;
            }
        }
        let elapsed = started.elapsed();
        if elapsed > Duration::from_secs(60) {
            return Err(format!("identity sweeps took {elapsed:?} > 60s"));
        }
        Ok(format!("{count} identities in {elapsed:.2?}"))
    });
}

/// Every signature of the given depths with entries from `choices`.
fn signature_grid(depths: &[usize], choices: &[i32]) -> Vec<Signature> {
    let mut out = Vec::new();
    for &depth in depths {
        let mut stack: Vec<Vec<i32>> = vec![vec![]];
        for _ in 0..depth {
            stack = stack
                .into_iter()
                .flat_map(|v| {
                    choices.iter().map(move |&c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out.extend(stack.into_iter().map(|v| Signature::new(v).unwrap()));
    }
    out
}

#[test]
fn acceptance_5_oracle_equivalences() {
    criterion(5, "independent oracles agree", || {
        let grid = signature_grid(&[1, 2, 3], &[-3, -2, -1, 1, 2, 3]);

        // Streaming evaluator against brute-force enumeration.
        let mut compared = 0usize;
        for sig in &grid {
            for n in 0..=25u64 {
                if mhs_exact(sig, n) != naive_mhs(sig, n) {
                    return Err(format!("mhs_exact != naive_mhs at {sig}, n={n}"));
                }
                compared += 1;
            }
        }

        // Direct modular evaluation against reduce-the-exact-value.
        let mut exact_cache: HashMap<(usize, u64), BigRational> = HashMap::new();
        for &p in &primes_in_range(5, 50) {
            let n = (p - 1).min(25);
            for (i, sig) in grid.iter().enumerate() {
                let exact = exact_cache
                    .entry((i, n))
                    .or_insert_with(|| mhs_exact(sig, n))
                    .clone();
                for k in 1..=3u32 {
                    let direct = mhs_mod(sig, n, p, k).map_err(|e| e.to_string())?;
                    let reduced = rational_reduce_mod(&exact, p, k).map_err(|e| e.to_string())?;
                    if direct != reduced {
                        return Err(format!(
                            "mhs_mod != reduced exact at {sig}, n={n}, p={p}, k={k}"
                        ));
                    }
                    compared += 1;
                }
            }
        }

        // Power-sum Bernoulli residues against exact reductions.
        for &p in &primes_in_range(5, 200) {
            for m in (2..=p - 3).step_by(2) {
                let fast = bernoulli_mod_p(m, p).map_err(|e| e.to_string())?;
                let exact = bernoulli_exact(m).map_err(|e| e.to_string())?;
                let reduced = rational_reduce_mod(&exact, p, 1).map_err(|e| e.to_string())?;
                if fast != reduced {
                    return Err(format!("Bernoulli routes disagree at m={m}, p={p}"));
                }
                compared += 1;
            }
        }
        Ok(format!("{compared} agreements"))
    });
}

#[test]
fn acceptance_6_algebraic_property_suites() {
    criterion(6, "algebraic property suites", || {
        // Quasi-shuffle: H(s;n) H(t;n) = sum of H over the stuffle expansion.
        let mut rng = StdRng::seed_from_u64(0x5u64 * 0x1000 + 6);
        let choices = [-3i32, -2, -1, 1, 2, 3];
        for case in 0..1000 {
            let draw = |rng: &mut StdRng| {
                let depth = rng.gen_range(1..=3usize);
                let v: Vec<i32> = (0..depth)
                    .map(|_| choices[rng.gen_range(0..choices.len())])
                    .collect();
                Signature::new(v).unwrap()
            };
            let s = draw(&mut rng);
            let t = draw(&mut rng);
            let n = rng.gen_range(0..=20u64);
            let product = mhs_exact(&s, n) * mhs_exact(&t, n);
            let expansion: BigRational = stuffle_product(&s, &t)
                .iter()
                .map(|u| mhs_exact(u, n))
                .fold(BigRational::zero(), |acc, x| acc + x);
            if product != expansion {
                return Err(format!("stuffle identity fails: {s} * {t} at n={n} (case {case})"));
            }
        }

        // Reversal congruences mod p across every small signature.
        let sigs = signature_grid(&[2, 3], &[-2, -1, 1, 2]);
        let mut reversal_checked = 0usize;
        for &p in &primes_in_range(3, 101) {
            for sig in &sigs {
                let (rev, sign) = reversal_pair(sig).map_err(|e| e.to_string())?;
                let lhs = mhs_mod(sig, p - 1, p, 1).map_err(|e| e.to_string())?;
                let mut rhs = mhs_mod(&rev, p - 1, p, 1).map_err(|e| e.to_string())?;
                if sign < 0 {
                    rhs = -rhs;
                }
                if lhs != rhs {
                    return Err(format!("reversal congruence fails for {sig} at p={p}"));
                }
                reversal_checked += 1;
            }
        }

        // Fermat quotients are additive: q(xy) = q(x) + q(y) mod p.
        let primes = primes_in_range(3, 1000);
        for case in 0..500 {
            let p = primes[rng.gen_range(0..primes.len())];
            let pick = |rng: &mut StdRng| loop {
                let x = rng.gen_range(2..=1_000_000i64);
                if x % p as i64 != 0 {
                    return x;
                }
            };
            let x = pick(&mut rng);
            let y = pick(&mut rng);
            let qx = fermat_quotient(x, p, 1).map_err(|e| e.to_string())?;
            let qy = fermat_quotient(y, p, 1).map_err(|e| e.to_string())?;
            let qxy = fermat_quotient(x * y, p, 1).map_err(|e| e.to_string())?;
            if qxy != qx + qy {
                return Err(format!(
                    "Fermat quotient additivity fails at x={x}, y={y}, p={p} (case {case})"
                ));
            }
        }
        Ok(format!(
            "1000 stuffle, {reversal_checked} reversal, 500 Fermat cases"
        ))
    });
}

#[test]
fn acceptance_7_determinism_and_exit_codes() {
    criterion(7, "report determinism and exit codes", || {
        let bin = env!("CARGO_BIN_EXE_ahs");
        let run_workers = |w: &str| -> Result<Vec<u8>, String> {
            let out = Command::new(bin)
                .args([
                    "verify",
                    "--primes",
                    "5..200",
                    "--backend",
                    "fast",
                    "--format",
                    "json",
                    "--no-timing",
                    "--workers",
                    w,
                ])
                .env_remove("AHS_WORKERS")
                .output()
                .map_err(|e| e.to_string())?;
            if out.status.code() != Some(0) {
                return Err(format!(
                    "worker sweep exited {:?}: {}",
                    out.status.code(),
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
            Ok(out.stdout)
        };
        let one = run_workers("1")?;
        let four = run_workers("4")?;
        let eight = run_workers("8")?;
        if one != four || one != eight {
            return Err("reports differ across worker counts".into());
        }

        let mutant = Command::new(bin)
            .args(["verify", "--primes", "5..30", "--checks", "C24_M1M2", "--inject-mutant"])
            .output()
            .map_err(|e| e.to_string())?;
        if mutant.status.code() != Some(1) {
            return Err(format!(
                "mutant run exited {:?}, want 1",
                mutant.status.code()
            ));
        }

        let malformed = Command::new(bin)
            .args(["verify", "--primes", "not-a-range"])
            .output()
            .map_err(|e| e.to_string())?;
        if malformed.status.code() != Some(2) {
            return Err(format!(
                "malformed flags exited {:?}, want 2",
                malformed.status.code()
            ));
        }
        let report_len = one.len();
        Ok(format!(
            "byte-identical {report_len}-byte reports; mutant=1, malformed=2"
        ))
    });
}
