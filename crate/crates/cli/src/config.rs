//! Run configuration: defaults, then `LEMPERTLAB_SEED`, then a TOML file,
//! then command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use lempert_core::numerics::Params;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SEED_VAR: &str = "LEMPERTLAB_SEED";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub n: usize,
    pub samples: usize,
    pub disc_degree: usize,
    pub boundary_grid: usize,
    pub margin: f64,
    /// Gap accepted by `verify-lempert`.
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = Params::default();
        Self {
            seed: 0,
            n: 4,
            samples: 100,
            disc_degree: p.disc_degree,
            boundary_grid: p.boundary_grid,
            margin: p.margin,
            tolerance: 1e-2,
            output: None,
            format: Format::Csv,
        }
    }
}

/// The keys a config file may set; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    n: Option<usize>,
    samples: Option<usize>,
    disc_degree: Option<usize>,
    boundary_grid: Option<usize>,
    margin: Option<f64>,
    tolerance: Option<f64>,
    output: Option<PathBuf>,
    format: Option<Format>,
}

/// Flags shared by the commands that run numerics.
#[derive(Clone, Debug, Default, Args)]
pub struct ConfigArgs {
    /// TOML file with any of the keys below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random seed [default: $LEMPERTLAB_SEED or 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dimension of 𝕃_n for sampled pairs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of sampled pairs.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub disc_degree: Option<usize>,
    /// Boundary samples per disc certificate.
    #[arg(long)]
    pub boundary_grid: Option<usize>,
    /// Required distance of boundary gauge values from 1.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Accepted gap between the bounds.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// File for the per-pair report.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    /// Resolves the layers with the seed variable read from the environment.
    pub fn resolve(args: &ConfigArgs) -> Result<Self> {
        Self::resolve_with(args, std::env::var(SEED_VAR).ok().as_deref())
    }

    pub fn resolve_with(args: &ConfigArgs, env_seed: Option<&str>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(s) = env_seed {
            cfg.seed = s.trim().parse().map_err(|_| CliError::Config(format!("{SEED_VAR}={s} is not an unsigned integer")))?;
        }
        if let Some(path) = &args.config {
            cfg.apply_file(path)?;
        }
        macro_rules! flag {
            ($($f:ident),*) => { $(if let Some(v) = &args.$f { cfg.$f = v.clone(); })* };
        }
        flag!(seed, n, samples, disc_degree, boundary_grid, margin, tolerance, format);
        if args.output.is_some() {
            cfg.output = args.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        let file: FileConfig = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        macro_rules! key {
            ($($f:ident),*) => { $(if let Some(v) = file.$f { self.$f = v; })* };
        }
        key!(seed, n, samples, disc_degree, boundary_grid, margin, tolerance, format);
        if file.output.is_some() {
            self.output = file.output;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::Config(msg.to_owned()));
        if self.samples < 1 {
            return bad("samples must be at least 1");
        }
        if !(2..=16).contains(&self.n) {
            return bad("n must lie in 2..=16");
        }
        if self.disc_degree < 1 {
            return bad("disc_degree must be at least 1");
        }
        if self.boundary_grid < 8 {
            return bad("boundary_grid must be at least 8");
        }
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return bad("margin must lie in (0, 0.5)");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        Ok(())
    }

    pub fn params(&self) -> Params {
        Params {
            disc_degree: self.disc_degree,
            boundary_grid: self.boundary_grid,
            margin: self.margin,
            seed: self.seed,
            ..Params::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_override_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "seed = 5\nn = 6\nformat = \"json\"\n").unwrap();
        let mut args = ConfigArgs { config: Some(path), ..Default::default() };

        let cfg = RunConfig::resolve_with(&args, Some("9")).unwrap();
        assert_eq!((cfg.seed, cfg.n, cfg.format), (5, 6, Format::Json));

        args.seed = Some(11);
        args.n = Some(3);
        let cfg = RunConfig::resolve_with(&args, Some("9")).unwrap();
        assert_eq!((cfg.seed, cfg.n), (11, 3));

        let cfg = RunConfig::resolve_with(&ConfigArgs::default(), Some("9")).unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn invariants_are_enforced() {
        for args in [
            ConfigArgs { samples: Some(0), ..Default::default() },
            ConfigArgs { n: Some(1), ..Default::default() },
            ConfigArgs { n: Some(17), ..Default::default() },
            ConfigArgs { disc_degree: Some(0), ..Default::default() },
        ] {
            assert!(matches!(RunConfig::resolve_with(&args, None), Err(CliError::Config(_))));
        }
        assert!(RunConfig::resolve_with(&ConfigArgs::default(), Some("x")).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "seeds = 1\n").unwrap();
        let args = ConfigArgs { config: Some(path), ..Default::default() };
        assert!(matches!(RunConfig::resolve_with(&args, None), Err(CliError::Config(_))));
    }
}
