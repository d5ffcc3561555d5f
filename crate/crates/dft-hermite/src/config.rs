//! Run configuration: command-line flags, an optional TOML file, and the
//! `DFT_HERMITE_DIGITS` environment variable, resolved in that order of priority.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dft_hermite_core::PrecisionContext;
use serde::{Deserialize, Serialize};

pub const DIGITS_ENV: &str = "DFT_HERMITE_DIGITS";
pub const DEFAULT_MAX_OUTPUT_DIGITS: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Tsv,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionChoice {
    Recurrence,
    GramSchmidt,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Generate,
    Verify,
    Convergence,
    Seeds,
}

#[derive(Debug, Parser)]
#[command(name = "dft-hermite", version, about = "Minimal Hermite-type eigenbasis of the centered DFT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Write the basis T_0..T_{N-1} as a table, one row per vector.
    Generate(CommonArgs),
    /// Build the basis and check it against its defining conditions.
    Verify(CommonArgs),
    /// Tabulate min-sign distances between T_n and sampled Hermite functions.
    Convergence(ConvergenceArgs),
    /// Dump S(k), alpha_n, beta_n, t_k, u_n and v_n.
    Seeds(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Dimension N of the transform.
    #[arg(short = 'n', long)]
    pub n_dim: Option<usize>,
    /// Working precision in decimal digits.
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (standard output when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub construction: Option<ConstructionChoice>,
    /// Largest number of significant digits printed per entry.
    #[arg(long)]
    pub max_output_digits: Option<u32>,
    /// Entries below 10^E print as "0".
    #[arg(long, allow_hyphen_values = true)]
    pub zero_print_exponent: Option<i64>,
    /// Carry rigorous error bounds through the construction.
    #[arg(long)]
    pub track_error: bool,
    /// Keep the signs produced by the construction.
    #[arg(long)]
    pub no_sign_convention: bool,
    /// TOML file with defaults for any of the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Hermite orders, e.g. `0-7` or `0,2,4`.
    #[arg(long)]
    pub orders: Option<String>,
    /// Dimensions, e.g. `64,128,256`.
    #[arg(long)]
    pub dims: Option<String>,
}

/// Keys accepted in a configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub n_dim: Option<usize>,
    pub digits: Option<u32>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub construction: Option<ConstructionChoice>,
    pub max_output_digits: Option<u32>,
    pub zero_print_exponent: Option<i64>,
    pub track_error: Option<bool>,
    pub sign_convention: Option<bool>,
    pub orders: Option<Vec<usize>>,
    pub dims: Option<Vec<usize>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("missing --n-dim")]
    MissingDimension,
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("{DIGITS_ENV} must be a positive integer, got {0:?}")]
    BadEnv(String),
    #[error("invalid list {0:?}")]
    BadList(String),
    #[error("{0}")]
    Invalid(String),
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n_dim: usize,
    pub digits: u32,
    pub max_output_digits: u32,
    pub zero_print_exponent: i64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub sign_convention: bool,
    pub construction: ConstructionChoice,
    pub track_error: bool,
    pub orders: Vec<usize>,
    pub dims: Vec<usize>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli, env_digits: Option<&str>) -> Result<Self, ConfigError> {
        match cli.command {
            CliCommand::Generate(a) => Self::resolve(Command::Generate, a, None, None, env_digits),
            CliCommand::Verify(a) => Self::resolve(Command::Verify, a, None, None, env_digits),
            CliCommand::Seeds(a) => Self::resolve(Command::Seeds, a, None, None, env_digits),
            CliCommand::Convergence(c) => {
                let orders = c.orders.as_deref().map(parse_list).transpose()?;
                let dims = c.dims.as_deref().map(parse_list).transpose()?;
                Self::resolve(Command::Convergence, c.common, orders, dims, env_digits)
            }
        }
    }

    fn resolve(
        command: Command,
        args: CommonArgs,
        orders: Option<Vec<usize>>,
        dims: Option<Vec<usize>>,
        env_digits: Option<&str>,
    ) -> Result<Self, ConfigError> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let env_digits =
            env_digits.map(|s| s.trim().parse::<u32>().map_err(|_| ConfigError::BadEnv(s.to_string()))).transpose()?;

        let orders = orders.or(file.orders).unwrap_or_else(|| (0..8).collect());
        let dims = dims.or(file.dims).unwrap_or_else(|| vec![64, 128, 256]);
        let n_dim = match command {
            Command::Convergence => {
                args.n_dim.or(file.n_dim).unwrap_or_else(|| dims.iter().copied().max().unwrap_or(2))
            }
            _ => args.n_dim.or(file.n_dim).ok_or(ConfigError::MissingDimension)?,
        };
        if n_dim < 2 {
            return Err(ConfigError::Invalid(format!("N = {n_dim}: the dimension must be at least 2")));
        }
        let explicit_max = args.max_output_digits.or(file.max_output_digits);
        let digits = match args.digits.or(file.digits).or(env_digits) {
            Some(d) => d,
            None => default_digits(command, n_dim, &dims, explicit_max.unwrap_or(DEFAULT_MAX_OUTPUT_DIGITS)),
        };
        if digits < PrecisionContext::MIN_DIGITS {
            return Err(ConfigError::Invalid(format!(
                "{digits} digits requested; at least {} are required",
                PrecisionContext::MIN_DIGITS
            )));
        }
        let max_output_digits = explicit_max.unwrap_or_else(|| DEFAULT_MAX_OUTPUT_DIGITS.min(digits - 10));
        if max_output_digits == 0 || max_output_digits + 10 > digits {
            return Err(ConfigError::Invalid(format!(
                "max-output-digits = {max_output_digits} must lie in 1..={} for {digits} working digits",
                digits - 10
            )));
        }
        let zero_print_exponent =
            args.zero_print_exponent.or(file.zero_print_exponent).unwrap_or(-i64::from(max_output_digits));
        if zero_print_exponent >= 0 {
            return Err(ConfigError::Invalid("zero-print-exponent must be negative".into()));
        }
        if command == Command::Convergence {
            if dims.is_empty() || orders.is_empty() {
                return Err(ConfigError::Invalid("convergence needs at least one order and one dimension".into()));
            }
            if let Some(&bad) = dims.iter().find(|&&d| d <= orders.iter().copied().max().unwrap_or(0)) {
                return Err(ConfigError::Invalid(format!("N = {bad} is too small for the requested orders")));
            }
        }
        Ok(Self {
            command,
            n_dim,
            digits,
            max_output_digits,
            zero_print_exponent,
            output: args.output.or(file.output),
            format: args.format.or(file.format).unwrap_or(Format::Tsv),
            sign_convention: !args.no_sign_convention && file.sign_convention.unwrap_or(true),
            construction: args.construction.or(file.construction).unwrap_or(ConstructionChoice::Recurrence),
            track_error: args.track_error || file.track_error.unwrap_or(false),
            orders,
            dims,
        })
    }
}

/// Default working precision: the library policy, raised for `generate` so that
/// `max_output_digits` can be printed faithfully after the expected loss of about `N/2` digits.
pub fn default_digits(command: Command, n_dim: usize, dims: &[usize], max_output_digits: u32) -> u32 {
    match command {
        Command::Generate => {
            PrecisionContext::default_digits(n_dim).max(max_output_digits + 20 + n_dim.div_ceil(2) as u32)
        }
        Command::Convergence => dims.iter().map(|&d| PrecisionContext::default_digits(d)).max().unwrap_or(64),
        _ => PrecisionContext::default_digits(n_dim),
    }
}

fn load_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
    toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
}

/// Parse `1,2,5` or `0-7` or a mix such as `0-3,8`.
pub fn parse_list(text: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError::BadList(text.to_string());
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) =
                    (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str], env: Option<&str>) -> Result<RunConfig, ConfigError> {
        let cli = Cli::try_parse_from(std::iter::once("dft-hermite").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(cli, env)
    }

    #[test]
    fn defaults() {
        let c = parse(&["generate", "--n-dim", "8"], None).unwrap();
        assert_eq!(c.digits, 124);
        assert_eq!(c.max_output_digits, 100);
        assert_eq!(c.zero_print_exponent, -100);
        assert_eq!(c.format, Format::Tsv);
        assert!(c.sign_convention);
        let v = parse(&["verify", "--n-dim", "256"], None).unwrap();
        assert_eq!(v.digits, 188);
    }

    #[test]
    fn output_digits_follow_precision() {
        let c = parse(&["generate", "--n-dim", "8", "--digits", "60"], None).unwrap();
        assert_eq!(c.max_output_digits, 50);
        assert!(parse(&["generate", "--n-dim", "8", "--digits", "60", "--max-output-digits", "55"], None).is_err());
        assert!(parse(&["generate", "--n-dim", "8", "--digits", "20"], None).is_err());
    }

    #[test]
    fn environment_and_flags() {
        let c = parse(&["verify", "--n-dim", "8"], Some("90")).unwrap();
        assert_eq!(c.digits, 90);
        let c = parse(&["verify", "--n-dim", "8", "--digits", "70"], Some("90")).unwrap();
        assert_eq!(c.digits, 70);
        assert!(parse(&["verify", "--n-dim", "8"], Some("lots")).is_err());
        assert!(matches!(parse(&["verify"], None), Err(ConfigError::MissingDimension)));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "n-dim = 12\ndigits = 80\nformat = \"csv\"\nconstruction = \"both\"\n").unwrap();
        let p = path.to_str().unwrap();
        let c = parse(&["verify", "--config", p, "--digits", "90"], None).unwrap();
        assert_eq!((c.n_dim, c.digits, c.format, c.construction), (12, 90, Format::Csv, ConstructionChoice::Both));
        std::fs::write(&path, "n-dim = 12\nbogus = 1\n").unwrap();
        assert!(matches!(parse(&["verify", "--config", p], None), Err(ConfigError::Parse { .. })));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0-3,8").unwrap(), vec![0, 1, 2, 3, 8]);
        assert_eq!(parse_list("64, 128").unwrap(), vec![64, 128]);
        assert!(parse_list("3-1").is_err());
        assert!(parse_list("x").is_err());
        let c = parse(&["convergence", "--orders", "0-2", "--dims", "16,32"], None).unwrap();
        assert_eq!((c.orders.clone(), c.dims.clone(), c.n_dim), (vec![0, 1, 2], vec![16, 32], 32));
        assert!(parse(&["convergence", "--orders", "0-20", "--dims", "16"], None).is_err());
    }
}
