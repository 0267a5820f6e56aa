use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use entwalk::asymptotics::{DEFAULT_DELTA, DEFAULT_EPS};
use entwalk::limit::QuadratureConfig;
use entwalk::spectral::group_velocity_extremum;
use entwalk::{CoinSpinor, InitialCoinState, HADAMARD_BETA};

use crate::error::CliError;

/// Inputs that differ from unit norm by more than this are rejected.
pub const ALPHA_TOLERANCE: f64 = 1e-8;

pub const DEFAULT_X_MAX: i64 = 64;
pub const DEFAULT_VERIFY_T: usize = 1600;
pub const MIN_VERIFY_T: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Evolve the walk and write p_t(x)
    Simulate,
    /// Limiting probabilities p(x) and the localization sum
    Limit,
    /// Weak-limit density of X_t / t (Hadamard coin only)
    Density,
    /// Numerical checks of the long-time regimes
    Verify,
    /// Phase function and eigenvalues on a momentum grid
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Limit => "limit",
            Command::Density => "density",
            Command::Verify => "verify",
            Command::Spectrum => "spectrum",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Density | Command::Verify => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "entwalk",
    version,
    about = "Quantum walk on the line with two entangled coins"
)]
struct Args {
    /// Command to run (may also be given with --command)
    #[arg(value_enum, conflicts_with = "command_flag")]
    command: Option<Command>,

    #[arg(long = "command", value_enum, value_name = "COMMAND")]
    command_flag: Option<Command>,

    /// Coin angle in radians
    #[arg(long, default_value_t = HADAMARD_BETA, allow_hyphen_values = true)]
    beta: f64,

    /// Initial coin state as re1,im1,re2,im2,re3,im3,re4,im4 (default: Bell state)
    #[arg(long, allow_hyphen_values = true, value_name = "RE,IM,...")]
    alpha: Option<String>,

    /// Number of steps
    #[arg(long)]
    t: Option<usize>,

    /// Quadrature or momentum grid size
    #[arg(long, default_value_t = QuadratureConfig::default().n_points)]
    n_points: usize,

    /// Half-width of the gap around the ballistic front, as a fraction of t
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,

    /// Half-width in sites of the band around the drifting spikes
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,

    /// Largest |x| written by `limit`
    #[arg(long, default_value_t = DEFAULT_X_MAX, allow_hyphen_values = true)]
    x_max: i64,

    /// Write the output to this file (plus a JSON summary next to CSV output)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format [default: csv, or json for density and verify]
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: f64,
    pub alpha: InitialCoinState,
    pub t: Option<usize>,
    pub n_points: usize,
    pub eps: f64,
    pub delta: f64,
    pub x_max: i64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Defaults for `command`, as if no other flag were given.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            beta: HADAMARD_BETA,
            alpha: InitialCoinState::bell_phi_plus(),
            t: None,
            n_points: QuadratureConfig::default().n_points,
            eps: DEFAULT_EPS,
            delta: DEFAULT_DELTA,
            x_max: DEFAULT_X_MAX,
            output_path: None,
            format: command.default_format(),
        }
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            n_points: self.n_points,
            ..Default::default()
        }
    }

    /// Checks the constraints that depend on the chosen command.
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.beta.is_finite() {
            return Err(CliError::usage("--beta", "must be finite"));
        }
        for (flag, v) in [("--eps", self.eps), ("--delta", self.delta)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(CliError::usage(flag, "must be positive"));
            }
        }
        match self.command {
            Command::Simulate => {
                if self.t.is_none() {
                    return Err(CliError::usage("--t", "is required for simulate"));
                }
            }
            Command::Limit => {
                self.quadrature()
                    .validate()
                    .map_err(|e| CliError::usage("--n-points", e))?;
                if self.x_max < 0 {
                    return Err(CliError::usage("--x-max", "must be nonnegative"));
                }
                let limit = self.quadrature().alias_limit();
                if self.x_max > limit {
                    return Err(CliError::usage(
                        "--x-max",
                        format!("must not exceed n_points/4 = {limit}"),
                    ));
                }
            }
            Command::Density => {
                if (self.beta - HADAMARD_BETA).abs() > 1e-12 {
                    return Err(CliError::usage(
                        "--beta",
                        entwalk::Error::UnsupportedCoin { beta: self.beta },
                    ));
                }
                if let Some(t) = self.t {
                    if t < entwalk::weak_limit::MIN_EMPIRICAL_TIME {
                        return Err(CliError::usage(
                            "--t",
                            format!(
                                "density comparison needs t >= {}",
                                entwalk::weak_limit::MIN_EMPIRICAL_TIME
                            ),
                        ));
                    }
                }
            }
            Command::Verify => {
                group_velocity_extremum(self.beta).map_err(|e| CliError::usage("--beta", e))?;
                self.quadrature()
                    .validate()
                    .map_err(|e| CliError::usage("--n-points", e))?;
                if self.verify_t() < MIN_VERIFY_T {
                    return Err(CliError::usage(
                        "--t",
                        format!("verify needs t >= {MIN_VERIFY_T}"),
                    ));
                }
            }
            Command::Spectrum => {
                if self.n_points < 2 {
                    return Err(CliError::usage(
                        "--n-points",
                        "spectrum needs at least 2 points",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn verify_t(&self) -> usize {
        self.t.unwrap_or(DEFAULT_VERIFY_T)
    }
}

fn parse_alpha(text: &str) -> Result<InitialCoinState, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage("--alpha", format!("{e} in {text:?}")))?;
    let parts: [f64; 8] = parts.try_into().map_err(|v: Vec<f64>| {
        CliError::usage(
            "--alpha",
            format!("expected 8 comma-separated reals, got {}", v.len()),
        )
    })?;
    InitialCoinState::normalized_within(CoinSpinor::from_re_im(parts), ALPHA_TOLERANCE)
        .map_err(|e| CliError::usage("--alpha", e))
}

/// Parses a full argument vector (program name first).
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let command = args
        .command
        .or(args.command_flag)
        .ok_or_else(|| CliError::usage("--command", "no command given"))?;
    let alpha = match &args.alpha {
        Some(text) => parse_alpha(text)?,
        None => InitialCoinState::bell_phi_plus(),
    };
    let config = RunConfig {
        command,
        beta: args.beta,
        alpha,
        t: args.t,
        n_points: args.n_points,
        eps: args.eps,
        delta: args.delta,
        x_max: args.x_max,
        output_path: args.out,
        format: args.format.unwrap_or(command.default_format()),
    };
    config.validate()?;
    Ok(config)
}
