use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{QftError, Result};
use crate::grid::{Grid2, GridMode};
use crate::hardy::HARDY_BAND;

#[derive(Debug, Parser)]
#[command(name = "qft", version, about = "Two-sided quaternion Fourier transform toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Samples per axis.
    #[arg(long, global = true, default_value_t = Grid2::DEFAULT_N)]
    pub grid_n: usize,
    /// Half-width of the sampled square `[−l, l)²`.
    #[arg(long, global = true, default_value_t = Grid2::DEFAULT_L)]
    pub grid_l: f64,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Continuum)]
    pub mode: ModeArg,
    /// Input file (signal, or spectrum for `inverse`).
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; reports go to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Seed for every randomized input.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest Hermite degree per axis for `basis`.
    #[arg(long, global = true, default_value_t = 8)]
    pub kmax: usize,
    /// Relative band around π² classified as the Gaussian case.
    #[arg(long, global = true, default_value_t = HARDY_BAND)]
    pub band: f64,
    /// Generated input when `--in` is absent: gaussian[:a], chirp:a:c, phi:k:l,
    /// random, smooth. Rates accept `pi` forms such as `2pi` or `pi/2`.
    #[arg(long, global = true)]
    pub signal: Option<SignalSpec>,
    /// Also write plot-ready tables to this file.
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Forward transform of a signal into a spectrum file.
    Transform,
    /// Inverse transform of a spectrum file into a signal file.
    Inverse,
    /// Plancherel, round-trip and oracle-equivalence suite.
    Verify,
    /// Per-axis Heisenberg reports.
    Heisenberg,
    /// Decay fits and the Hardy verdict.
    Hardy {
        /// Classify this bound pair `alpha,beta` instead of fitting a signal.
        #[arg(long, value_parser = parse_pair)]
        bounds: Option<(f64, f64)>,
        /// Fail unless the verdict is this case.
        #[arg(long, value_enum)]
        expect: Option<CaseArg>,
    },
    /// Eigenvalue residuals of the Hermite basis up to `--kmax`.
    Basis,
    /// Time the direct and fast transforms over a size sweep.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec![8, 16, 32, 64, 128])]
        sizes: Vec<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Transform => "transform",
            Command::Inverse => "inverse",
            Command::Verify => "verify",
            Command::Heisenberg => "heisenberg",
            Command::Hardy { .. } => "hardy",
            Command::Basis => "basis",
            Command::Bench { .. } => "bench",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Continuum,
    Discrete,
}

impl From<ModeArg> for GridMode {
    fn from(m: ModeArg) -> GridMode {
        match m {
            ModeArg::Continuum => GridMode::Continuum,
            ModeArg::Discrete => GridMode::PureDiscrete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Binary,
    Json,
}

impl FormatArg {
    pub fn as_str(self) -> &'static str {
        match self {
            FormatArg::Text => "text",
            FormatArg::Binary => "binary",
            FormatArg::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    ZeroForced,
    GaussianUnique,
    ManySolutions,
}

/// Generated test signals.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Gaussian(f64),
    Chirp(f64, f64),
    Phi(usize, usize),
    Random,
    Smooth,
}

impl SignalSpec {
    pub fn describe(&self) -> String {
        match self {
            SignalSpec::Gaussian(a) => format!("gaussian:{a}"),
            SignalSpec::Chirp(a, c) => format!("chirp:{a}:{c}"),
            SignalSpec::Phi(k, l) => format!("phi:{k}:{l}"),
            SignalSpec::Random => "random".into(),
            SignalSpec::Smooth => "smooth".into(),
        }
    }
}

/// Parses `2.5`, `pi`, `2pi`, `pi/2` or `3pi/4`.
pub fn parse_rate(s: &str) -> Result<f64> {
    let bad = || QftError::domain(format!("cannot read a number from `{s}`"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let value = if let Some(prefix) = num.strip_suffix("pi") {
        let factor = if prefix.is_empty() {
            1.0
        } else {
            prefix.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?
        };
        factor * std::f64::consts::PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `alpha,beta`, got `{s}`"))?;
    Ok((
        parse_rate(a).map_err(|e| e.to_string())?,
        parse_rate(b).map_err(|e| e.to_string())?,
    ))
}

impl FromStr for SignalSpec {
    type Err = QftError;

    fn from_str(s: &str) -> Result<SignalSpec> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || QftError::domain(format!("unknown signal `{s}`"));
        let idx = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["gaussian"] => Ok(SignalSpec::Gaussian(std::f64::consts::PI)),
            ["gaussian", a] => Ok(SignalSpec::Gaussian(parse_rate(a)?)),
            ["chirp", a, c] => Ok(SignalSpec::Chirp(parse_rate(a)?, parse_rate(c)?)),
            ["phi", k, l] => Ok(SignalSpec::Phi(idx(k)?, idx(l)?)),
            ["random"] => Ok(SignalSpec::Random),
            ["smooth"] => Ok(SignalSpec::Smooth),
            _ => Err(bad()),
        }
    }
}
