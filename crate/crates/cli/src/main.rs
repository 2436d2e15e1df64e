//! `gframe`: verification batteries for admissible vectors from the command
//! line. Exit codes are 0 (pass), 1 (verification failed) and 2 (bad input).

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CommandError, Outcome, WaveletArgs, WindowPair};
use report::Format;

#[derive(Parser)]
#[command(name = "gframe", version, about = "Admissible-vector verification lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Common {
    /// Residual tolerance.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Seed for randomized batteries.
    #[arg(long, env = "GFRAME_SEED", default_value_t = gframe::standard_form::DEFAULT_SEED)]
    seed: u64,
}

/// As [`Common`]. Here `--seed` is the seed function and the integer seed
/// is `--rng-seed`.
#[derive(Args, Clone, Copy)]
struct ConstructOptions {
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long = "rng-seed", env = "GFRAME_SEED", default_value_t = gframe::standard_form::DEFAULT_SEED)]
    rng_seed: u64,
}

impl From<ConstructOptions> for Common {
    fn from(o: ConstructOptions) -> Self {
        Common {
            tol: o.tol,
            format: o.format,
            seed: o.rng_seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Four-way admissibility verdict for a window of a representation.
    CheckAdmissible {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        window: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Build an admissible vector from a seed function on a group.
    Construct {
        #[arg(long)]
        group: PathBuf,
        /// Seed function `g` on the group.
        #[arg(long = "seed")]
        seed_vector: PathBuf,
        /// Where to write the constructed vector.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        options: ConstructOptions,
    },
    /// Standard-form battery on the central subspace of a window.
    StandardForm {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        window: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the three orthogonality criteria for two windows.
    Orthogonality {
        #[arg(long)]
        rep1: PathBuf,
        #[arg(long)]
        window1: PathBuf,
        #[arg(long)]
        rep2: PathBuf,
        #[arg(long)]
        window2: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Resolution of the identity for the affine group on a sampled grid.
    WaveletDemo {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        wavelet: PathBuf,
        /// `a_min:a_max:count`, log-uniform.
        #[arg(long, default_value = "2^-6:2^6:48", value_parser = input::parse_range, allow_hyphen_values = true)]
        scales: (f64, f64, usize),
        /// `b_min:b_max:count`.
        #[arg(long, default_value = "-8:8:512", value_parser = input::parse_range, allow_hyphen_values = true)]
        shifts: (f64, f64, usize),
        /// Rescale the wavelet to unit Calderón constant first.
        #[arg(long)]
        normalize: bool,
        /// Also run the grid with doubled density.
        #[arg(long)]
        refine: bool,
        /// CSV file for the coefficients `(j, k, a, b, re, im)`.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive tolerance, got {text:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, common) = match &cli.command {
        Command::CheckAdmissible { rep, window, common } => (
            commands::check_admissible_cmd(rep, window, common.tol.unwrap_or(1e-8), common.seed),
            *common,
        ),
        Command::Construct {
            group,
            seed_vector,
            out,
            options,
        } => {
            let common = Common::from(*options);
            (
                commands::construct_cmd(group, seed_vector, out.as_ref(), common.tol.unwrap_or(1e-8), common.seed),
                common,
            )
        }
        Command::StandardForm { rep, window, common } => (
            commands::standard_form_cmd(rep, window, common.tol.unwrap_or(1e-9), common.seed),
            *common,
        ),
        Command::Orthogonality {
            rep1,
            window1,
            rep2,
            window2,
            common,
        } => (
            commands::orthogonality_cmd(
                WindowPair { rep: rep1, window: window1 },
                WindowPair { rep: rep2, window: window2 },
                common.tol.unwrap_or(1e-9),
                common.seed,
            ),
            *common,
        ),
        Command::WaveletDemo {
            signal,
            wavelet,
            scales,
            shifts,
            normalize,
            refine,
            coefficients,
            common,
        } => (
            commands::wavelet_demo_cmd(
                WaveletArgs {
                    signal,
                    wavelet,
                    scales: *scales,
                    shifts: *shifts,
                    normalize: *normalize,
                    refine: *refine,
                    coefficients: coefficients.as_ref(),
                },
                common.tol.unwrap_or(1e-2),
                common.seed,
            ),
            *common,
        ),
    };
    let (report, code) = match result {
        Ok(Outcome::Pass(r)) => (r, 0),
        Ok(Outcome::Fail(r)) => (r, 1),
        Err(CommandError::Verification(r)) => (r, 1),
        Err(CommandError::Input(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(report.render(common.format).as_bytes()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
