//! The `mlqi` command-line harness.
//!
//! Every command produces an [`OutputRecord`], rendered as CSV (default) or
//! JSON. Invalid parameters are usage errors (exit code 2); a failed internal
//! consistency check exits with code 1.

use std::fmt::Display;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod output;
pub mod targets;

pub use output::{Cell, Format, OutputRecord};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub(crate) fn internal(e: impl Display) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<mlqi::Error> for CliError {
    fn from(e: mlqi::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mlqi",
    version,
    about = "Multilevel Gaussian quasi-interpolation experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Kernel window radius in grid units.
    #[arg(long, global = true, default_value_t = 14.0)]
    pub window: f64,
    /// Spectral weight cutoff.
    #[arg(long, global = true, default_value_t = 1e-40)]
    pub eta: f64,
    /// Number of points for sup-norm estimates.
    #[arg(long, global = true, default_value_t = 8192)]
    pub grid: usize,
    /// Frequency cap of the spectral engine.
    #[arg(long, global = true, default_value_t = 65536)]
    pub max_freq: usize,
    /// Constant of the truncation-norm envelope, not fixed by the theory.
    #[arg(long = "big-b", global = true, default_value_t = 10.0)]
    pub big_b: f64,
}

impl GlobalOpts {
    pub fn spec(&self) -> Result<mlqi::EvalSpec, CliError> {
        let spec = mlqi::EvalSpec {
            window_radius: self.window,
            eta: self.eta,
            max_freq: self.max_freq,
            eval_points: self.grid,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Spectral,
    Sampled,
}

impl From<ModeArg> for mlqi::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Spectral => mlqi::Mode::Spectral,
            ModeArg::Sampled => mlqi::Mode::Sampled,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the c_1, c_9, m_p and exp(cos) columns for levels 1..10.
    Table1,
    /// Per-level errors for a single target.
    #[command(group(ArgGroup::new("target_choice").required(true).args(["m", "target", "target_file"])))]
    Single {
        /// Target c_M.
        #[arg(long)]
        m: Option<u64>,
        /// Named target: c<m> or expcos.
        #[arg(long)]
        target: Option<String>,
        /// Cosine series in `frequency,coefficient` CSV form.
        #[arg(long, value_name = "FILE")]
        target_file: Option<PathBuf>,
        /// Level-one spacing is 2^-L0.
        #[arg(long, default_value_t = 0)]
        l0: u32,
        #[arg(long)]
        levels: u32,
        #[arg(long, value_enum, default_value = "spectral")]
        mode: ModeArg,
        /// Stop once the sup error drops below this value.
        #[arg(long)]
        stop_below: Option<f64>,
    },
    /// Truncation coefficients of M_{h,p} c_m with h = 2^-ELL.
    Coeffs {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        levels: u32,
    },
    /// Constants and lemma/recursion scans over the built-in (m, ell) matrix.
    Bounds {
        #[arg(long)]
        pmax: u32,
    },
    /// Theta function by series and by product.
    Theta {
        #[arg(long, allow_negative_numbers = true)]
        z: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Components of the error bound for Sobolev targets.
    Bound {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        p: u32,
        /// Sobolev norm of the target.
        #[arg(long, default_value_t = 1.0)]
        f_norm: f64,
    },
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<OutputRecord, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Table1 => commands::table1(&g.spec()?),
        Command::Single {
            m,
            target,
            target_file,
            l0,
            levels,
            mode,
            stop_below,
        } => {
            let (name, f) = match (m, target, target_file) {
                (Some(m), _, _) => (format!("c{m}"), targets::named_target(&format!("c{m}"))?),
                (_, Some(t), _) => (t.clone(), targets::named_target(t)?),
                (_, _, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        CliError::Usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    (
                        path.display().to_string(),
                        mlqi::CosineSeries::from_csv(&text)?,
                    )
                }
                _ => return Err(CliError::Usage("a target is required".into())),
            };
            let single = commands::Single {
                name,
                f,
                l0: *l0,
                levels: *levels,
                mode: (*mode).into(),
                stop_below: *stop_below,
            };
            commands::single(&single, &g.spec()?)
        }
        Command::Coeffs { m, ell, levels } => commands::coeffs(*m, *ell, *levels, &g.spec()?),
        Command::Bounds { pmax } => commands::bounds(*pmax),
        Command::Theta { z, q } => commands::theta(*z, *q),
        Command::Bound { s, t, p, f_norm } => commands::bound(*s, *t, *p, *f_norm, g.big_b),
    }
}

/// Parses `args` (including the program name), runs the command and renders
/// it in the requested format.
pub fn run<I, T>(args: I) -> Result<(String, Cli), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    let record = execute(&cli)?;
    Ok((record.render(cli.global.format)?, cli))
}
