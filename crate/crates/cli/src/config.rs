//! Run configuration: everything a command depends on, serializable so a run
//! can be replayed with `--config`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ffmertens::lfunc::RootMethod;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Primes,
    Chars,
    Lpoly,
    Zeros,
    Rhcheck,
    Mertens,
    Constant,
    Verify,
    Kappa,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    L,
    Euler,
    Limit,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::L, Method::Euler, Method::Limit];
}

/// `all` or a comma list of `L`, `euler`, `limit`.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    let mut out: Vec<Method> = s
        .split(',')
        .map(|m| match m.trim().to_ascii_lowercase().as_str() {
            "l" | "via_l" => Ok(Method::L),
            "euler" => Ok(Method::Euler),
            "limit" => Ok(Method::Limit),
            other => Err(format!("unknown method {other:?} (expected L, euler, limit or all)")),
        })
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Degree range `a..b` (inclusive) or a single degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
}

impl NRange {
    pub fn is_single(&self) -> bool {
        self.start == self.end
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<NRange, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad degree {t:?} in {s:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { start, end })
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub q: u64,
    /// Defining polynomial of an extension field, little-endian with the
    /// leading 1; a built-in choice is used when absent.
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_class: f64,
    pub cross_method: f64,
    pub imag_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Tolerances {
        Tolerances {
            zero_class: 1e-6,
            cross_method: 1e-3,
            imag_residual: 1e-8,
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 1 << 26;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Validators enumerate to the largest degree with `q^n <= 2^20` by default.
pub const VALIDATOR_SPAN: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub field: FieldConfig,
    #[serde(rename = "Q")]
    pub modulus: Option<String>,
    #[serde(rename = "A0")]
    pub a0: Option<String>,
    pub character: Option<String>,
    pub n: Option<NRange>,
    pub degree: Option<usize>,
    pub list: bool,
    pub max_deg_q: Option<usize>,
    pub methods: Vec<Method>,
    pub cutoff: Option<usize>,
    pub root_method: RootMethod,
    pub tolerances: Tolerances,
    pub budget: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sequential: bool,
    pub cache: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(command: Command, q: u64) -> RunConfig {
        RunConfig {
            command,
            field: FieldConfig { q, modulus: None },
            modulus: None,
            a0: None,
            character: None,
            n: None,
            degree: None,
            list: false,
            max_deg_q: None,
            methods: Method::ALL.to_vec(),
            cutoff: None,
            root_method: RootMethod::Companion,
            tolerances: Tolerances::default(),
            budget: DEFAULT_BUDGET,
            format: Format::Json,
            output: None,
            threads: None,
            sequential: false,
            cache: None,
            seed: DEFAULT_SEED,
        }
    }

    /// Reject inconsistent combinations before any computation.
    pub fn validate(&self) -> Result<(), String> {
        use Command::*;
        let c = self.command;
        let name = format!("{c:?}").to_lowercase();
        if self.a0.is_some() && self.modulus.is_none() {
            return Err("--A0 needs --Q".into());
        }
        if self.character.is_some() && self.modulus.is_none() {
            return Err("--char needs --Q".into());
        }
        if self.budget == 0 {
            return Err("--budget must be positive".into());
        }
        if self.threads == Some(0) {
            return Err("--threads must be at least 1".into());
        }
        let t = &self.tolerances;
        if !(t.zero_class > 0.0 && t.cross_method > 0.0 && t.imag_residual > 0.0) {
            return Err("tolerances must be positive".into());
        }
        match c {
            Primes => match self.degree {
                None => return Err("primes needs --degree".into()),
                Some(0) => return Err("degree >= 1 required".into()),
                Some(_) => {}
            },
            Rhcheck => match (&self.modulus, self.max_deg_q) {
                (None, None) => return Err("rhcheck needs --Q or --maxdegQ".into()),
                (Some(_), Some(_)) => return Err("give either --Q or --maxdegQ, not both".into()),
                (None, Some(0)) => return Err("--maxdegQ must be at least 1".into()),
                _ => {}
            },
            Kappa => {}
            _ => {
                if self.modulus.is_none() {
                    return Err(format!("{name} needs --Q"));
                }
            }
        }
        if matches!(c, Mertens | Constant | Verify) && self.a0.is_none() {
            return Err(format!("{name} needs --A0 (a polynomial or \"all\")"));
        }
        if matches!(c, Mertens | Verify) && self.n.is_none() {
            return Err(format!("{name} needs --n"));
        }
        if c == Verify && self.n.is_some_and(|r| r.end - r.start < 1) {
            return Err("verify needs a range of at least two degrees, e.g. --n 4..20".into());
        }
        if c == Constant && self.methods.is_empty() {
            return Err("--methods is empty".into());
        }
        if self.list && c != Primes {
            return Err("--list only applies to primes".into());
        }
        Ok(())
    }

    /// Default cutoff for the enumerating validators.
    pub fn validator_depth(&self) -> usize {
        let q = self.field.q as u128;
        let mut n = 1;
        while q.pow(n as u32 + 1) <= VALIDATOR_SPAN.min(self.budget) as u128 {
            n += 1;
        }
        n
    }
}
