use std::path::PathBuf;

use crate::error::{CliError, Result};

/// Largest cutoff accepted without `--max-cutoff`.
pub const DEFAULT_MAX_CUTOFF: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Level cutoff `W` of the tau series.
    pub cutoff: u32,
    /// Number of moments `K`.
    pub korder: u32,
    /// Last map coefficient `J`.
    pub jorder: u32,
    pub nquad: usize,
    /// Boundary sample count for the map error and CSV.
    pub samples: usize,
    pub max_cutoff: u32,
    pub out: Option<PathBuf>,
    pub curve: Option<PathBuf>,
    pub boundary_csv: Option<PathBuf>,
    pub mutate: bool,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            cutoff: 6,
            korder: 6,
            jorder: 6,
            nquad: taumap_core::riemann::DEFAULT_NQUAD,
            samples: 256,
            max_cutoff: DEFAULT_MAX_CUTOFF,
            out: None,
            curve: None,
            boundary_csv: None,
            mutate: false,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cutoff == 0 {
            return Err(CliError::Config("cutoff must be at least 1".into()));
        }
        if self.cutoff > self.max_cutoff {
            return Err(CliError::Config(format!(
                "cutoff {} exceeds the cap {} (raise it with --max-cutoff)",
                self.cutoff, self.max_cutoff
            )));
        }
        if self.korder > self.cutoff {
            return Err(CliError::Config(format!(
                "korder {} exceeds cutoff {}",
                self.korder, self.cutoff
            )));
        }
        if self.jorder > self.korder {
            return Err(CliError::Config(format!(
                "jorder {} exceeds korder {}",
                self.jorder, self.korder
            )));
        }
        if self.nquad < 8 {
            return Err(CliError::Config("nquad must be at least 8".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        Ok(())
    }
}

/// Worker pool capped by `TAUMAP_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("TAUMAP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("TAUMAP_THREADS={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}
