use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use taumap::commands::{cmd_coeffs, cmd_map, cmd_moments, cmd_verify};
use taumap::config::DEFAULT_MAX_CUTOFF;
use taumap::{CliError, RunConfig};

/// Dispersionless Toda free energy: coefficients, verification and
/// conformal maps from harmonic moments.
#[derive(Parser)]
#[command(name = "taumap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the coefficient table of all N with level <= cutoff.
    Coeffs {
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Hirota, Toda, dKP and homogeneity identities; exit 1 on any
    /// nonzero residual.
    Verify {
        #[arg(long, default_value_t = 6)]
        cutoff: u32,
        /// Perturb one coefficient before checking (test hook).
        #[arg(long)]
        mutate: bool,
        /// Pick the perturbed coefficient at random.
        #[arg(long, requires = "mutate")]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Harmonic moments of a curve.
    Moments {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 8)]
        korder: u32,
        #[arg(long, default_value_t = taumap_core::riemann::DEFAULT_NQUAD)]
        nquad: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exterior conformal map of a curve.
    Map {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
        /// Defaults to the cutoff.
        #[arg(long)]
        korder: Option<u32>,
        /// Defaults to korder.
        #[arg(long)]
        jorder: Option<u32>,
        #[arg(long, default_value_t = taumap_core::riemann::DEFAULT_NQUAD)]
        nquad: usize,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Boundary samples (theta, Re w, Im w, |w| - 1).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_CUTOFF)]
    max_cutoff: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let base = RunConfig::default();
    let result = match cli.command {
        Command::Coeffs { cutoff, common } => cmd_coeffs(&RunConfig {
            cutoff,
            korder: 0,
            jorder: 0,
            out: common.out,
            max_cutoff: common.max_cutoff,
            ..base
        })
        .map(|()| true),
        Command::Verify {
            cutoff,
            mutate,
            seed,
            common,
        } => cmd_verify(&RunConfig {
            cutoff,
            korder: 0,
            jorder: 0,
            mutate,
            seed,
            out: common.out,
            max_cutoff: common.max_cutoff,
            ..base
        }),
        Command::Moments {
            curve,
            korder,
            nquad,
            common,
        } => cmd_moments(&RunConfig {
            cutoff: korder.max(1),
            korder,
            jorder: 0,
            nquad,
            curve: Some(curve),
            out: common.out,
            max_cutoff: common.max_cutoff.max(korder),
            ..base
        })
        .map(|()| true),
        Command::Map {
            curve,
            cutoff,
            korder,
            jorder,
            nquad,
            samples,
            csv,
            common,
        } => {
            let korder = korder.unwrap_or(cutoff);
            cmd_map(&RunConfig {
                cutoff,
                korder,
                jorder: jorder.unwrap_or(korder),
                nquad,
                samples,
                curve: Some(curve),
                boundary_csv: csv,
                out: common.out,
                max_cutoff: common.max_cutoff,
                ..base
            })
            .map(|()| true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
