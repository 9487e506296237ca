//! Command-line arguments and their translation into library objects.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;
use tiltbound::bounds::Theta;
use tiltbound::channels::{BlockCode, ChannelParams, ChannelRegistry, Dmc};
use tiltbound::prob::Pmf;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tiltbound::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for configuration and I/O problems, 3 for size caps, 4 for numeric
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(tiltbound::Error::SizeCap { .. }) => 3,
            CliError::Core(tiltbound::Error::NumericFailure { .. })
            | CliError::Core(tiltbound::Error::NonConvergence { .. }) => 4,
            _ => 2,
        }
    }
}

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

#[derive(Debug, Parser)]
#[command(
    name = "tiltbound",
    version,
    about = "Tilted-posterior error lower bounds, code converses and exponents, as CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound versus α for one or more θ, with MAP error and Fano reference rows.
    Bound(BoundArgs),
    /// Regenerate a figure's data series.
    ///
    /// 1: ternary channel, bound vs α for θ = 1, 20, 100 with Fano lines.
    /// 2: ternary channel, bound maximized over α vs θ ∈ [1, 20].
    /// 3: binary-input Gaussian channel (σ = 0.429858), bound vs α for θ = 1, 10, 100.
    /// 4: BSC(0.01) exponents F(R,1), F(R,2) and sphere packing.
    /// 5: Z(0.01) exponents F(R,θ) for θ = 1, 3, 10, 100 and sphere packing.
    Figure(FigureArgs),
    /// Exponent lower bound F(R,θ) (and sphere packing where available) over a rate grid.
    Reliability(ReliabilityArgs),
    /// Compare the code converse with the exact MAP error of a block code.
    CodeCheck(CodeCheckArgs),
    /// Channel capacity in nats, closed form and Blahut–Arimoto.
    Capacity(CapacityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// bsc, z, bec, ternary, awgn (bound only), or a channel file.
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub v1: Option<f64>,
    #[arg(long)]
    pub v2: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `uniform`, a number p for a binary prior P(X=1) = p, or a file of probabilities.
    #[arg(long, default_value = "uniform")]
    pub prior: String,
    /// Comma-separated θ values; `limit` selects θ → ∞.
    #[arg(long, default_value = "1")]
    pub theta: String,
    #[arg(long, default_value = "0:1:0.01")]
    pub alpha_grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    pub id: u8,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReliabilityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value = "1")]
    pub theta: String,
    /// Defaults to 64 rates evenly spaced inside (0, C).
    #[arg(long)]
    pub rate_grid: Option<String>,
    /// Candidate input distribution for channels with more than two inputs.
    #[arg(long)]
    pub prior: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CodeCheckArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// `repetition:N` or a code file.
    #[arg(long)]
    pub code: String,
    #[arg(long, default_value = "1")]
    pub theta: String,
    #[arg(long, default_value = "0:1:0.05")]
    pub alpha_grid: String,
    /// Seed for the Monte-Carlo estimate used when the code is too long to enumerate.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `start:stop:step`, both endpoints included (the stop point within 1e-12).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Vec<f64> = match parts[..] {
        [a, b, s] => [a, b, s]
            .iter()
            .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad grid number {t:?}"))))
            .collect::<Result<_, _>>()?,
        _ => return config(format!("grid {spec:?} is not start:stop:step")),
    };
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(start.is_finite() && stop.is_finite() && step.is_finite() && start < stop && step > 0.0) {
        return config(format!("grid {spec:?} needs start < stop and step > 0"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    let mut out: Vec<f64> = (0..=count).map(|k| start + step * k as f64).collect();
    let last = out.last_mut().expect("grid has at least one point");
    if (*last - stop).abs() <= 1e-12 || *last > stop {
        *last = stop;
    }
    Ok(out)
}

pub fn parse_thetas(spec: &str) -> Result<Vec<Theta>, CliError> {
    spec.split(',')
        .map(|t| {
            let t = t.trim();
            if t.eq_ignore_ascii_case("limit") || t.eq_ignore_ascii_case("inf") {
                return Ok(Theta::Limit);
            }
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() && v >= 1.0 => Ok(Theta::Finite(v)),
                _ => config(format!("θ must be a number ≥ 1 or `limit`, got {t:?}")),
            }
        })
        .collect()
}

pub fn finite_thetas(spec: &str) -> Result<Vec<f64>, CliError> {
    parse_thetas(spec)?
        .into_iter()
        .map(|t| match t {
            Theta::Finite(v) => Ok(v),
            Theta::Limit => config("`limit` is not accepted here"),
        })
        .collect()
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

impl ChannelArgs {
    pub fn params(&self) -> ChannelParams {
        ChannelParams { eps: self.eps, v1: self.v1, v2: self.v2 }
    }

    /// A named family or, failing that, a channel file.
    pub fn dmc(&self) -> Result<Dmc, CliError> {
        let reg = ChannelRegistry::builtin();
        if let Some(family) = reg.get(&self.channel) {
            return Ok(family.build(&self.params())?);
        }
        if self.channel == "awgn" {
            return config("the Gaussian channel is only available in `bound` and `figure 3`");
        }
        let path = Path::new(&self.channel);
        if !path.exists() {
            return config(format!(
                "unknown channel {:?}; expected one of {} or a file",
                self.channel,
                reg.names().join(", ")
            ));
        }
        Ok(read_file(path)?.parse::<Dmc>()?)
    }

    pub fn describe(&self) -> String {
        let mut s = self.channel.clone();
        for (k, v) in [("eps", self.eps), ("v1", self.v1), ("v2", self.v2), ("sigma", self.sigma)] {
            if let Some(v) = v {
                s.push_str(&format!(" {k}={v}"));
            }
        }
        s
    }
}

pub fn parse_prior(spec: &str, nx: usize) -> Result<Pmf, CliError> {
    if spec == "uniform" {
        return Ok(Pmf::uniform(nx)?);
    }
    if let Ok(p) = spec.parse::<f64>() {
        if nx != 2 {
            return config("a numeric prior is only meaningful for binary inputs");
        }
        return Ok(Pmf::bernoulli(p)?);
    }
    let text = read_file(Path::new(spec))?;
    let probs: Vec<f64> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Config(format!("bad probability {t:?} in {spec}"))))
        .collect::<Result<_, _>>()?;
    if probs.len() != nx {
        return config(format!("prior has {} entries, channel has {nx} inputs", probs.len()));
    }
    Ok(Pmf::from_probs(&probs)?)
}

pub fn parse_code(spec: &str) -> Result<BlockCode, CliError> {
    if let Some(n) = spec.strip_prefix("repetition:") {
        let n: usize = n.parse().map_err(|_| CliError::Config(format!("bad repetition length {n:?}")))?;
        return Ok(BlockCode::repetition(n)?);
    }
    Ok(read_file(Path::new(spec))?.parse::<BlockCode>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        let g = parse_grid("0:1:0.01").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[100], 1.0);
        assert_eq!(parse_grid("0:1:0.3").unwrap().len(), 4);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn theta_lists() {
        assert_eq!(parse_thetas("1, 20,limit").unwrap(), vec![Theta::Finite(1.0), Theta::Finite(20.0), Theta::Limit]);
        assert!(parse_thetas("0.5").is_err());
        assert!(finite_thetas("limit").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(tiltbound::Error::SizeCap { needed: 1e8, cap: 10 }).exit_code(), 3);
        assert_eq!(CliError::Core(tiltbound::Error::NumericFailure { at: 0.1 }).exit_code(), 4);
    }
}
