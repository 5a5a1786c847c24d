//! Command-line front end: construct witnesses, verify the factorization
//! theorem, analyze user-supplied elements, and run oracle comparisons.
//!
//! Exit codes: 0 all asserted checks pass, 1 a mathematical check failed,
//! 2 bad input, 3 an internal invariant was violated.

use std::fs;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use ivplab::construct::{self, ConstructionParams, ConstructionWitness};
use ivplab::engine::{self, FactorizationReport};
use ivplab::ffpoly::{self, Verdict};
use ivplab::json::{ElementFile, WitnessFile};
use ivplab::oracle::{self, OracleConfig};
use ivplab::{Error, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "ivplab", version, about = "Integer-valued polynomial factorization lab")]
struct Cli {
    /// Omit timings from the JSON report (byte-identical reruns).
    #[arg(long, global = true)]
    no_timings: bool,

    /// Worker threads for the enumeration engine (currently single-threaded;
    /// values > 1 are accepted and ignored).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a witness F for the given N and p and write it as JSON.
    Construct(ConstructArgs),
    /// Verify the theorem claims for a witness (constructed or loaded).
    Verify(VerifyArgs),
    /// Analyze a user-supplied element of Int(ℤ).
    Analyze(AnalyzeArgs),
    /// Compare the engine against the brute-force oracle on a witness power.
    OracleCompare(OracleCompareArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    p: String,
    /// Comma-separated auxiliary primes, one per basis polynomial.
    #[arg(long, value_delimiter = ',')]
    aux_primes: Option<Vec<String>>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with_all = ["n", "p"])]
    witness: Option<String>,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    element: String,
    #[arg(long, default_value_t = 3)]
    n_max: u32,
}

#[derive(Args)]
struct OracleCompareArgs {
    #[arg(long)]
    witness: Option<String>,
    #[arg(long = "N")]
    n_param: Option<u32>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_)
        | Error::NotPrime(_)
        | Error::PrimeTooLarge(_)
        | Error::BudgetExceeded { .. }
        | Error::ZeroPolynomial
        | Error::ModulusMismatch
        | Error::NonMonic => 2,
        Error::Invariant(_) | Error::ScanExhausted(_) => 3,
    }
}

fn budget() -> u64 {
    std::env::var("IVPLAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(engine::DEFAULT_BUDGET)
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|e| Error::InvalidInput(format!("bad integer {:?}: {}", s, e)))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if cli.threads == 0 {
        return Err(Error::InvalidInput("--threads must be at least 1".into()));
    }
    match &cli.command {
        Command::Construct(args) => cmd_construct(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Analyze(args) => cmd_analyze(cli, args),
        Command::OracleCompare(args) => cmd_oracle_compare(cli, args),
    }
}

fn timings(cli: &Cli, start: Instant) -> serde_json::Value {
    if cli.no_timings {
        serde_json::Value::Null
    } else {
        json!({ "elapsed_ms": start.elapsed().as_millis() as u64 })
    }
}

fn emit(report: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(report).unwrap());
}

fn cmd_construct(cli: &Cli, args: &ConstructArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let p = parse_bigint(&args.p)?;
    let params = ConstructionParams::new(args.n, p)?;
    let aux = match &args.aux_primes {
        Some(strings) => Some(
            strings
                .iter()
                .map(|s| parse_bigint(s))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let witness = construct::construct_witness(&params, aux.as_deref())?;
    let file = WitnessFile::from_witness(&witness);
    let text = serde_json::to_string_pretty(&file).unwrap();
    if let Some(path) = &args.out {
        fs::write(path, &text)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {}", path, e)))?;
    }
    let report = json!({
        "command": "construct",
        "version": VERSION,
        "params": { "N": params.n, "p": params.p.to_string() },
        "verdicts": {
            "fixed_divisor": witness.denominator().to_string(),
            "denominator_exponent": witness.denominator_exponent,
            "certificates": witness.certificates,
        },
        "witness": if args.out.is_none() { serde_json::to_value(&file).unwrap() } else { serde_json::Value::Null },
        "timings": timings(cli, start),
    });
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

fn load_witness(path: &str) -> Result<ConstructionWitness> {
    let bytes =
        fs::read(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path, e)))?;
    ivplab::json::parse_witness(&bytes)
}

fn witness_from_args(
    witness: &Option<String>,
    n: Option<u32>,
    p: &Option<String>,
) -> Result<ConstructionWitness> {
    match (witness, n, p) {
        (Some(path), _, _) => load_witness(path),
        (None, Some(n), Some(p)) => {
            let params = ConstructionParams::new(n, parse_bigint(p)?)?;
            construct::construct_witness(&params, None)
        }
        _ => Err(Error::InvalidInput(
            "provide either --witness FILE or both --N and --p".into(),
        )),
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let witness = witness_from_args(&args.witness, args.n, &args.p)?;
    let n_max = args.n_max.unwrap_or(witness.params.n);
    let verification = engine::verify_theorem(&witness, n_max, budget())?;
    let report = json!({
        "command": "verify",
        "version": VERSION,
        "params": { "N": witness.params.n, "p": witness.params.p.to_string(), "n_max": n_max },
        "verdicts": {
            "irreducible": verification.irreducible,
            "counts": verification.counts,
            "pass": verification.pass,
            "failures": verification.failures,
        },
        "reports": verification.reports,
        "timings": timings(cli, start),
    });
    emit(&report);
    if verification.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let bytes = fs::read(&args.element)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", args.element, e)))?;
    let element = ivplab::json::parse_element(&bytes)?;

    // Basis irreducibility: certified or flagged.
    let mut certs = Vec::new();
    let mut unverified = false;
    for f in &element.basis {
        let cert = ffpoly::certify_irreducible_over_q(f, &[], ffpoly::DEFAULT_MOD_P_SCAN_BOUND)?;
        if cert.verdict != Verdict::Irreducible {
            unverified = true;
        }
        certs.push(cert);
    }

    let num = element.numerator();
    let integer_valued = engine::is_integer_valued(&num, &element.denom);
    let image_primitive = integer_valued && engine::is_image_primitive(&element);
    let irreducible = image_primitive && engine::is_irreducible_ivp(&element);

    let mut reports: Vec<FactorizationReport> = Vec::new();
    if image_primitive {
        for n in 1..=args.n_max {
            reports.push(engine::count_essential_factorizations(
                &element,
                n,
                budget(),
            )?);
        }
    }
    let square_free_verdict = if irreducible && args.n_max >= 3 {
        Some(engine::verify_square_free_criterion(&element, &reports)?)
    } else {
        None
    };

    let report = json!({
        "command": "analyze",
        "version": VERSION,
        "params": { "element": ElementFile::from_element(&element), "n_max": args.n_max },
        "verdicts": {
            "integer_valued": integer_valued,
            "image_primitive": image_primitive,
            "irreducible": irreducible,
            "basis_certificates": certs,
            "basis_unverified_warning": unverified,
            "square_free_criterion": square_free_verdict,
            "counts": reports.iter().map(|r| (r.n, r.count)).collect::<Vec<_>>(),
        },
        "reports": reports,
        "timings": timings(cli, start),
    });
    emit(&report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_compare(cli: &Cli, args: &OracleCompareArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let witness = witness_from_args(&args.witness, args.n_param, &args.p)?;
    let element = witness.element().canonicalize();
    let engine_report = engine::count_essential_factorizations(&element, args.n, budget())?;
    let oracle_report =
        oracle::brute_force_factorizations(&element, args.n, &OracleConfig::default())?;
    let agrees = engine_report == oracle_report;
    let report = json!({
        "command": "oracle-compare",
        "version": VERSION,
        "params": { "N": witness.params.n, "p": witness.params.p.to_string(), "n": args.n },
        "agrees": agrees,
        "engine": engine_report,
        "oracle": oracle_report,
        "timings": timings(cli, start),
    });
    emit(&report);
    if agrees {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
