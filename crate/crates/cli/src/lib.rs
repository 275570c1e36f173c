//! Command-line front end: corpus analysis, identity verification and
//! parameter sweeps.
//!
//! Outputs depend only on the arguments. Environment variables are never
//! read, and reports carry no timestamps or paths, so identical invocations
//! produce byte-identical files.

mod analyze;
pub mod corpus;
mod output;
mod sweep;
mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use closed_range::criteria::CriteriaConfig;
use closed_range::symbols::{parse_symbol_list, NamedSymbol};

pub use analyze::cmd_analyze;
pub use output::{SummaryRow, RUN_SCHEMA};
pub use sweep::cmd_sweep;
pub use verify::{cmd_verify, VerifyRow, VerifyStatus};

/// Exit code when every check passes or every report is consistent.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed check or an inconsistent report.
pub const EXIT_FAILURE: i32 = 1;
/// Exit code for unusable input: parse errors, empty symbol lists, bad
/// configuration or unwritable output.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "closed-range",
    version,
    about = "Closed-range diagnostics for composition operators on Hardy spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every criterion for each (symbol, p) and write reports.
    Analyze(AnalyzeArgs),
    /// Check the integral identities and norm formulas on a corpus.
    Verify(VerifyArgs),
    /// Sweep one parameter and emit criterion estimates as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Self::Json | Self::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Self::Csv | Self::Both)
    }
}

/// Options shared by the criteria-running commands.
#[derive(Debug, Clone, Args)]
pub struct CriteriaArgs {
    /// Base seed for every sampler [default: 1, or the config file's].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fixed λ-grid depth for the kernel test [default: chosen per p].
    #[arg(long)]
    pub depth: Option<usize>,
    /// Atoms in the pullback measure [default: 1000000].
    #[arg(long)]
    pub samples: Option<usize>,
    /// JSON file with criteria settings; missing keys keep their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Skip the Luecking and direct norm-ratio probes.
    #[arg(long)]
    pub no_probes: bool,
}

impl CriteriaArgs {
    pub fn resolve(&self) -> anyhow::Result<CriteriaConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => CriteriaConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(d) = self.depth {
            cfg.kernel_depth = Some(d);
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if self.no_probes {
            cfg.luecking.enabled = false;
            cfg.direct_probe.enabled = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Symbol file, or inline records separated by `;` [default: golden corpus].
    #[arg(long)]
    pub symbols: Option<String>,
    /// Hardy exponents.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<f64>,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Directory for `report.json`, `summary.csv` and the `curves_*.csv` files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Symbol file, or inline records separated by `;` [default: golden corpus].
    #[arg(long)]
    pub symbols: Option<String>,
    /// Exponents for the norm agreement checks.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4")]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Atoms in the pullback measures.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Replace the Hardy–Stein constant p²/2 by this value.
    #[arg(long)]
    pub hardy_stein_constant: Option<f64>,
    /// Directory for `verify.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    /// Substitute each value for `{x}` in the template.
    X,
    /// Use each value as the exponent p.
    P,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Symbol record; `{x}` marks the swept parameter.
    #[arg(long)]
    pub template: String,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SweepParam::X)]
    pub param: SweepParam,
    /// Exponents when sweeping `x`.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<f64>,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Directory for `sweep.csv` and `report.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// Reads symbols from a file, or parses the argument itself when no such
/// file exists. `None` selects the golden corpus.
pub fn load_symbols(arg: Option<&str>) -> anyhow::Result<Vec<NamedSymbol<f64>>> {
    let list = match arg {
        None => corpus::golden_corpus(),
        Some(a) => {
            let path = std::path::Path::new(a);
            let (text, origin) = if path.is_file() {
                (
                    fs::read_to_string(path).with_context(|| format!("reading {a}"))?,
                    a.to_owned(),
                )
            } else {
                (a.replace(';', "\n"), "inline symbols".to_owned())
            };
            parse_symbol_list(&text).with_context(|| origin.clone())?
        }
    };
    anyhow::ensure!(!list.is_empty(), "symbol list is empty");
    Ok(list)
}

/// Runs one parsed command, writing human-readable output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Verify(v) => cmd_verify(&v, out),
        Command::Sweep(s) => cmd_sweep(&s, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
