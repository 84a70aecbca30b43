//! `ffmertens`: reports on Mertens products in residue classes over F_q[t].
//!
//! Exit status: 0 when every check passes, 1 on a computational anomaly
//! (an off-circle zero, methods disagreeing, a failed decay fit), 2 on a
//! usage error.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ffmertens::lfunc::RootMethod;

use commands::{usage, Session, UsageError};
use config::{parse_methods, Command, Format, NRange, RunConfig, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "ffmertens", version, about = "Mertens products in arithmetic progressions over F_q[t]")]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Field size q = p^k.
    #[arg(long, global = true)]
    q: Option<u64>,
    /// Defining polynomial of F_q over F_p, little-endian with the leading 1
    /// (e.g. "1,1,1" for F_4).
    #[arg(long = "field-modulus", global = true, value_delimiter = ',')]
    field_modulus: Option<Vec<u32>>,
    /// Modulus Q, monic (e.g. "t^2+t+1", or "[c0,c1,...]" over extension fields).
    #[arg(long = "Q", global = true)]
    modulus: Option<String>,
    /// Residue class A0 mod Q, or "all" for every reduced class.
    #[arg(long = "A0", global = true)]
    a0: Option<String>,
    /// Character, e.g. "chi[1]" (index) or "chi[1,0]" (exponents).
    #[arg(long = "char", global = true)]
    character: Option<String>,
    /// Degree n or inclusive range "a..b".
    #[arg(long, global = true)]
    n: Option<NRange>,
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Count irreducibles (default; needs no enumeration).
    #[arg(long, global = true, conflicts_with = "list")]
    count: bool,
    /// List irreducibles.
    #[arg(long, global = true)]
    list: bool,
    /// Sweep every monic modulus of degree 1..=d.
    #[arg(long = "maxdegQ", global = true)]
    max_deg_q: Option<usize>,
    /// Constant methods: "all" or a comma list of L, euler, limit.
    #[arg(long, global = true, default_value = "all")]
    methods: String,
    /// Degree cutoff of the enumerating validators (Euler product, limit).
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Root finder for L-polynomial zeros: companion or aberth.
    #[arg(long = "roots", global = true, default_value = "companion")]
    roots: String,
    #[arg(long = "zero-tol", global = true, default_value_t = Tolerances::default().zero_class)]
    zero_tol: f64,
    #[arg(long = "cross-tol", global = true, default_value_t = Tolerances::default().cross_method)]
    cross_tol: f64,
    #[arg(long = "imag-tol", global = true, default_value_t = Tolerances::default().imag_residual)]
    imag_tol: f64,
    /// Largest number of monic polynomials a single enumeration may visit.
    #[arg(long, global = true, default_value_t = config::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run the single-threaded code path.
    #[arg(long, global = true)]
    sequential: bool,
    /// Irreducible cache file (default: $FFMERTENS_CACHE_DIR/irreducibles-p-k.txt).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Seed for randomized factorization.
    #[arg(long, global = true, default_value_t = config::DEFAULT_SEED)]
    seed: u64,
    /// Read the whole run configuration from a JSON file instead of flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long = "print-config", global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Count or list monic irreducibles of one degree.
    Primes,
    /// Character table mod Q with an orthogonality check.
    Chars,
    /// L-polynomial coefficients.
    Lpoly,
    /// Reciprocal zeros of nonprincipal L-polynomials.
    Zeros,
    /// Classify all zeros for Q, or for every Q up to --maxdegQ.
    Rhcheck,
    /// Restricted Mertens products P(n; Q, A0).
    Mertens,
    /// The constant C(Q, A0) by the L-function, Euler product and limit methods.
    Constant,
    /// Residuals of P(n) (n log q)^(1/Phi) / C - 1 and their decay fit.
    Verify,
    /// Rosen's constant kappa_q.
    Kappa,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::Primes => Command::Primes,
            Sub::Chars => Command::Chars,
            Sub::Lpoly => Command::Lpoly,
            Sub::Zeros => Command::Zeros,
            Sub::Rhcheck => Command::Rhcheck,
            Sub::Mertens => Command::Mertens,
            Sub::Constant => Command::Constant,
            Sub::Verify => Command::Verify,
            Sub::Kappa => Command::Kappa,
        }
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return Ok(cfg);
    }
    let q = cli.q.ok_or_else(|| usage("--q is required"))?;
    let mut cfg = RunConfig::new(cli.command.into(), q);
    cfg.field.modulus = cli.field_modulus.clone();
    cfg.modulus = cli.modulus.clone();
    cfg.a0 = cli.a0.clone();
    cfg.character = cli.character.clone();
    cfg.n = cli.n;
    cfg.degree = cli.degree;
    cfg.list = cli.list;
    cfg.max_deg_q = cli.max_deg_q;
    cfg.methods = parse_methods(&cli.methods).map_err(usage)?;
    cfg.cutoff = cli.cutoff;
    cfg.root_method = match cli.roots.to_ascii_lowercase().as_str() {
        "companion" => RootMethod::Companion,
        "aberth" => RootMethod::Aberth,
        other => return Err(usage(format!("--roots {other:?}: expected companion or aberth"))),
    };
    cfg.tolerances = Tolerances {
        zero_class: cli.zero_tol,
        cross_method: cli.cross_tol,
        imag_residual: cli.imag_tol,
    };
    cfg.budget = cli.budget;
    cfg.format = cli.format;
    cfg.output = cli.output.clone();
    cfg.threads = cli.threads;
    cfg.sequential = cli.sequential;
    cfg.cache = cli.cache.clone();
    cfg.seed = cli.seed;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = build_config(cli)?;
    cfg.validate().map_err(usage)?;
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(true);
    }
    if let Some(t) = cfg.threads {
        ffmertens::par::configure_threads(t);
    }
    let session = Session::new(cfg)?;
    let out = session.run()?;
    session.save_cache()?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let bytes = match session.cfg.format {
        Format::Json => out.json.into_bytes(),
        Format::Csv => out.csv,
        Format::Text => out.text.into_bytes(),
    };
    match &session.cfg.output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(out.pass)
}

/// Numerical failures are anomalies; everything else is a usage problem.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<ffmertens::Error>() {
        Some(
            ffmertens::Error::NoConvergence(_)
            | ffmertens::Error::ZeroAtPoint
            | ffmertens::Error::MissingZeros(_),
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
