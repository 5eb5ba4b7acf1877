//! `ahs` — command-line verifier for alternating multiple harmonic sum
//! congruences. See `ahs --help` for the subcommands; the interesting one is
//! `ahs verify`, which sweeps the whole congruence registry over a prime
//! range and reports pass/fail per (prime, check).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ahs_core::bernoulli::bernoulli_reduce;
use ahs_core::error::ArithError;
use ahs_core::identities::{
    alternating_binomial_sum_check, alternating_row_check, even_odd_split_check,
    riordan_identity_check,
};
use ahs_core::mhs::{mhs_exact, mhs_mod};
use ahs_core::primes::{is_prime, primes_in_range};
use ahs_core::registry::{
    find_check, mutant_check, registry_list, run_suite_with, Backend, CheckResult, CheckStatus,
    CongruenceCheck,
};
use ahs_core::Signature;

/// Environment variable consulted for the default worker count.
const WORKERS_ENV: &str = "AHS_WORKERS";

#[derive(Parser)]
#[command(
    name = "ahs",
    version,
    about = "Verifier for congruences of alternating multiple harmonic sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep registry checks over a range or list of primes.
    Verify(VerifyArgs),
    /// Evaluate one alternating multiple harmonic sum.
    Mhs(MhsArgs),
    /// Run the exact (prime-free) identity sweeps.
    Identities(IdentitiesArgs),
    /// Print a Bernoulli number, exactly and optionally modulo p^k.
    Bernoulli(BernoulliArgs),
    /// List every registered check with its modulus and admissibility bound.
    ListChecks,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Exact,
    Fast,
    Both,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Fast => Backend::Fast,
            BackendArg::Both => Backend::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Parser)]
struct VerifyArgs {
    /// Inclusive range "lo..hi" or explicit comma-separated list of primes.
    #[arg(long, default_value = "5..500")]
    primes: String,
    /// "all" or a comma-separated list of check ids.
    #[arg(long, default_value = "all")]
    checks: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Both)]
    backend: BackendArg,
    /// Worker threads; defaults to $AHS_WORKERS, then the CPU count.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Omit per-result timing, making reports byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
    /// Add a deliberately false check; the run must then exit 1.
    #[arg(long)]
    inject_mutant: bool,
    /// Permit primes below 5 (the claims themselves still skip where
    /// inadmissible; p = 2 is never supported).
    #[arg(long)]
    allow_small_primes: bool,
}

#[derive(Parser)]
struct MhsArgs {
    /// Signature as comma-separated nonzero integers, e.g. "-1,-2".
    #[arg(long, allow_hyphen_values = true)]
    sig: String,
    /// Upper summation bound.
    #[arg(long)]
    n: u64,
    /// Also reduce modulo a prime power, written "p^k" or just "p".
    #[arg(long = "mod")]
    modulus: Option<String>,
}

#[derive(Parser)]
struct IdentitiesArgs {
    /// Upper bound for every identity family's sweep.
    #[arg(long, default_value_t = 25)]
    nmax: u64,
}

#[derive(Parser)]
struct BernoulliArgs {
    /// Index of the Bernoulli number.
    #[arg(long)]
    n: u64,
    /// Also reduce modulo a prime power, written "p^k" or just "p".
    #[arg(long = "mod")]
    modulus: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Mhs(args) => cmd_mhs(args),
        Command::Identities(args) => cmd_identities(args),
        Command::Bernoulli(args) => cmd_bernoulli(args),
        Command::ListChecks => cmd_list_checks(),
    };
    ExitCode::from(code)
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    2
}

// ---- verify ----

fn cmd_verify(args: VerifyArgs) -> u8 {
    let primes = match resolve_primes(&args.primes, args.allow_small_primes) {
        Ok(p) => p,
        Err(msg) => return usage_error(&msg),
    };
    if primes.is_empty() {
        eprintln!("warning: no primes selected by --primes {}", args.primes);
    }

    let mut selected: Vec<&CongruenceCheck> = Vec::new();
    if args.checks.trim() == "all" {
        selected.extend(registry_list().iter());
    } else {
        for id in args.checks.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match find_check(id) {
                Ok(c) => selected.push(c),
                Err(_) => return usage_error(&format!("unknown check id: {id}")),
            }
        }
        if selected.is_empty() {
            return usage_error("--checks selected nothing");
        }
    }
    let mutant = mutant_check();
    if args.inject_mutant {
        selected.push(&mutant);
    }

    let workers = args.workers.unwrap_or_else(default_workers);
    if workers == 0 {
        return usage_error("--workers must be at least 1");
    }

    let results = match run_suite_with(&selected, &primes, args.backend.into(), workers) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };

    let report = match args.format {
        FormatArg::Json => render_json(&results, args.no_timing),
        FormatArg::Csv => render_csv(&results, args.no_timing),
        FormatArg::Text => render_text(&results, args.no_timing),
    };
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, report) {
                return usage_error(&format!("cannot write {}: {e}", path.display()));
            }
            println!("wrote {} results to {}", results.len(), path.display());
        }
        None => {
            print!("{report}");
            let _ = std::io::stdout().flush();
        }
    }

    let bad = results
        .iter()
        .filter(|r| matches!(r.status, CheckStatus::Fail | CheckStatus::BackendMismatch))
        .count();
    if bad > 0 {
        eprintln!("{bad} result(s) failed");
        1
    } else {
        0
    }
}

fn default_workers() -> usize {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                return n;
            }
        }
        eprintln!("warning: ignoring invalid {WORKERS_ENV}={v}");
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Parses "lo..hi" or "p1,p2,..." into a validated prime list.
fn resolve_primes(arg: &str, allow_small: bool) -> Result<Vec<u64>, String> {
    let floor = if allow_small { 3 } else { 5 };
    if let Some((lo, hi)) = arg.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad range bound in --primes {arg}"))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad range bound in --primes {arg}"))?;
        let lo = if lo < floor {
            eprintln!("warning: raising lower prime bound from {lo} to {floor}");
            floor
        } else {
            lo
        };
        return Ok(primes_in_range(lo, hi));
    }
    let mut primes = Vec::new();
    for part in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let p: u64 = part
            .parse()
            .map_err(|_| format!("bad prime in --primes: {part}"))?;
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        if p < floor {
            return Err(format!(
                "prime {p} is below {floor}; pass --allow-small-primes for 3 (2 is unsupported)"
            ));
        }
        primes.push(p);
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

#[derive(Serialize)]
struct JsonRow<'a> {
    prime: u64,
    check: &'a str,
    modulus: &'a str,
    lhs: &'a str,
    rhs: &'a str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_us: Option<u64>,
}

fn json_rows<'a>(results: &'a [CheckResult], no_timing: bool) -> Vec<JsonRow<'a>> {
    results
        .iter()
        .map(|r| JsonRow {
            prime: r.prime,
            check: &r.check_id,
            modulus: &r.modulus,
            lhs: &r.lhs,
            rhs: &r.rhs,
            status: r.status.as_str(),
            elapsed_us: if no_timing { None } else { Some(r.elapsed_us) },
        })
        .collect()
}

fn render_json(results: &[CheckResult], no_timing: bool) -> String {
    let mut s = serde_json::to_string_pretty(&json_rows(results, no_timing))
        .expect("serializing plain strings cannot fail");
    s.push('\n');
    s
}

fn render_csv(results: &[CheckResult], no_timing: bool) -> String {
    let mut out = String::new();
    out.push_str(if no_timing {
        "prime,check,modulus,lhs,rhs,status\n"
    } else {
        "prime,check,modulus,lhs,rhs,status,elapsed_us\n"
    });
    for r in results {
        // No field ever contains a comma or quote, so plain joining is valid
        // CSV: ids are [A-Z0-9_], residues are decimal digits (or "-"), and
        // mismatch annotations use spaces and '='.
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.prime,
            r.check_id,
            r.modulus,
            r.lhs,
            r.rhs,
            r.status.as_str()
        ));
        if !no_timing {
            out.push_str(&format!(",{}", r.elapsed_us));
        }
        out.push('\n');
    }
    out
}

fn render_text(results: &[CheckResult], no_timing: bool) -> String {
    let mut out = String::new();
    let (mut pass, mut fail, mut skip, mut mism) = (0usize, 0usize, 0usize, 0usize);
    for r in results {
        match r.status {
            CheckStatus::Pass => pass += 1,
            CheckStatus::Fail => fail += 1,
            CheckStatus::Skipped => skip += 1,
            CheckStatus::BackendMismatch => mism += 1,
        }
        let timing = if no_timing {
            String::new()
        } else {
            format!("  [{}us]", r.elapsed_us)
        };
        out.push_str(&format!(
            "p={:<6} {:<16} mod {:<8} {:<18} lhs={} rhs={}{}\n",
            r.prime,
            r.check_id,
            r.modulus,
            r.status.as_str(),
            r.lhs,
            r.rhs,
            timing
        ));
    }
    out.push_str(&format!(
        "summary: {pass} pass, {fail} fail, {skip} skipped, {mism} backend_mismatch\n"
    ));
    out
}

// ---- mhs ----

fn cmd_mhs(args: MhsArgs) -> u8 {
    let entries: Result<Vec<i32>, _> = args
        .sig
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    let entries = match entries {
        Ok(e) => e,
        Err(_) => return usage_error(&format!("bad signature: {}", args.sig)),
    };
    let sig = match Signature::new(entries) {
        Ok(s) => s,
        Err(e) => return usage_error(&e.to_string()),
    };
    println!("{}", mhs_exact(&sig, args.n));
    if let Some(m) = &args.modulus {
        let (p, k) = match parse_modulus(m) {
            Ok(pk) => pk,
            Err(msg) => return usage_error(&msg),
        };
        match mhs_mod(&sig, args.n, p, k) {
            Ok(r) => println!("{}", r.value()),
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    0
}

fn parse_modulus(arg: &str) -> Result<(u64, u32), String> {
    let (p_str, k_str) = match arg.split_once('^') {
        Some((p, k)) => (p, k),
        None => (arg, "1"),
    };
    let p: u64 = p_str
        .trim()
        .parse()
        .map_err(|_| format!("bad modulus: {arg}"))?;
    let k: u32 = k_str
        .trim()
        .parse()
        .map_err(|_| format!("bad modulus: {arg}"))?;
    if !is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    if k == 0 {
        return Err("modulus exponent must be at least 1".into());
    }
    Ok((p, k))
}

// ---- identities ----

fn cmd_identities(args: IdentitiesArgs) -> u8 {
    if args.nmax < 1 {
        return usage_error("--nmax must be at least 1");
    }
    let nmax = args.nmax;
    let mut total = 0usize;
    let mut failed = 0usize;

    let mut family = |name: &str, results: Vec<(String, bool)>| {
        let bad: Vec<&String> = results.iter().filter(|(_, ok)| !ok).map(|(l, _)| l).collect();
        total += results.len();
        failed += bad.len();
        println!("{name}: {} pass, {} fail", results.len() - bad.len(), bad.len());
        for label in bad {
            println!("  FAIL {label}");
        }
    };

    let mut riordan = Vec::new();
    for n in 1..=nmax {
        for d in 1..=n {
            riordan.push((format!("riordan n={n} d={d}"), riordan_identity_check(n, d)));
        }
    }
    family("riordan_polynomial", riordan);

    let mut alt_binom = Vec::new();
    for n in 1..=nmax {
        alt_binom.push((
            format!("alternating_binomial_sum n={n}"),
            alternating_binomial_sum_check(n),
        ));
    }
    family("alternating_binomial_sum", alt_binom);

    let mut alt_row = Vec::new();
    for k in 1..=nmax {
        alt_row.push((format!("alternating_row k={k}"), alternating_row_check(k)));
    }
    family("alternating_row", alt_row);

    let mut split = Vec::new();
    for a in 1..=4u32 {
        for n in (2..=nmax).step_by(2) {
            let ok = even_odd_split_check(a, n).expect("even n is always accepted");
            split.push((format!("even_odd_split a={a} n={n}"), ok));
        }
    }
    family("even_odd_split", split);

    if failed > 0 {
        println!("total: {total} checks, {failed} FAILED");
        1
    } else {
        println!("total: {total} checks, all pass");
        0
    }
}

// ---- bernoulli ----

fn cmd_bernoulli(args: BernoulliArgs) -> u8 {
    match ahs_core::bernoulli::bernoulli_exact(args.n) {
        Ok(b) => println!("{b}"),
        Err(e) => return usage_error(&e.to_string()),
    }
    if let Some(m) = &args.modulus {
        let (p, k) = match parse_modulus(m) {
            Ok(pk) => pk,
            Err(msg) => return usage_error(&msg),
        };
        match bernoulli_reduce(args.n, p, k) {
            Ok(r) => println!("{}", r.value()),
            Err(ArithError::DenominatorNotCoprime { p }) => {
                return usage_error(&format!(
                    "B_{} has {p} in its denominator and no residue mod {p}^{k}",
                    args.n
                ))
            }
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    0
}

// ---- list-checks ----

fn cmd_list_checks() -> u8 {
    let list = registry_list();
    for c in list {
        println!(
            "{:<16} mod p^{}  p > {:<3} {}",
            c.id, c.modulus_exponent, c.p_greater_than, c.description
        );
    }
    println!("{} checks registered", list.len());
    0
}
