//! Experiment configuration: per-experiment defaults, a flat key-value
//! config file, and command-line flag overrides (flags win over the file).
//!
//! The config file holds one `key = value` pair per line; `#` starts a
//! comment. Lists (`rho`, `phi_list`) are comma-separated. Unknown keys
//! are rejected.

use std::path::{Path, PathBuf};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Toy,
    Tomo,
    RhoSweep,
    NoiseDemo,
}

/// Fully resolved configuration for one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub beta: f64,
    pub iterations: usize,
    /// Dose parameter of the scaled Poisson data: dispersion `phi = 1/t`;
    /// larger `t` means less noise.
    pub t: f64,
    pub rho_list: Vec<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub n_pixels: usize,
    pub n_angles: usize,
    pub n_tangential: usize,
    pub n_nodes: usize,
    /// Dispersions for the noise demo.
    pub phi_list: Vec<f64>,
    /// Monte Carlo draws per (model, dispersion) in the noise demo.
    pub draws: usize,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            experiment,
            beta: 2.0,
            iterations: 1000,
            t: 1.0,
            rho_list: vec![0.0, 1e-3, 1e-2, 1e-1],
            seed: 0,
            out_dir: PathBuf::from("out"),
            n_pixels: 64,
            n_angles: 60,
            n_tangential: 95,
            n_nodes: 101,
            phi_list: vec![1.0, 0.1, 0.01],
            draws: 20_000,
        };
        match experiment {
            Experiment::Toy => Self {
                iterations: 5000,
                ..base
            },
            Experiment::Tomo => Self {
                beta: 1.2,
                t: 0.05,
                ..base
            },
            Experiment::RhoSweep => Self {
                iterations: 4000,
                rho_list: vec![0.0, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0],
                ..base
            },
            Experiment::NoiseDemo => base,
        }
    }

    /// Applies `key = value` pairs from a flat config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| {
                CliError::Config(format!("{}:{}: {e}", path.display(), lineno + 1))
            })?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("cannot parse '{value}' for key '{key}'"))
        }
        fn parse_list(key: &str, value: &str) -> std::result::Result<Vec<f64>, String> {
            value
                .split(',')
                .map(|v| parse::<f64>(key, v.trim()))
                .collect()
        }
        match key {
            "beta" => self.beta = parse(key, value)?,
            "iters" | "iterations" => self.iterations = parse(key, value)?,
            "t" => self.t = parse(key, value)?,
            "rho" => self.rho_list = parse_list(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out_dir = PathBuf::from(value),
            "n_pixels" => self.n_pixels = parse(key, value)?,
            "n_angles" => self.n_angles = parse(key, value)?,
            "n_tangential" => self.n_tangential = parse(key, value)?,
            "n_nodes" => self.n_nodes = parse(key, value)?,
            "phi_list" => self.phi_list = parse_list(key, value)?,
            "draws" => self.draws = parse(key, value)?,
            other => return Err(format!("unknown config key '{other}'")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if !(0.0..=2.0).contains(&self.beta) {
            return fail(format!("beta must lie in [0, 2], got {}", self.beta));
        }
        if self.iterations == 0 {
            return fail("iterations must be positive".into());
        }
        if self.t <= 0.0 {
            return fail(format!("t must be positive, got {}", self.t));
        }
        if self.n_pixels == 0 || self.n_angles == 0 || self.n_tangential == 0 {
            return fail("operator sizes must be positive".into());
        }
        if self.n_nodes < 2 {
            return fail("n_nodes must be at least 2".into());
        }
        if self.rho_list.is_empty() || self.rho_list.iter().any(|r| *r < 0.0) {
            return fail("rho list must be nonempty and nonnegative".into());
        }
        if self.phi_list.iter().any(|p| *p <= 0.0) {
            return fail("phi list entries must be positive".into());
        }
        if self.draws < 2 {
            return fail("draws must be at least 2".into());
        }
        Ok(())
    }

    /// One `key = value` line per field, echoed into sidecar files.
    pub fn echo(&self) -> Vec<String> {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        vec![
            format!("experiment = {:?}", self.experiment),
            format!("beta = {}", self.beta),
            format!("iterations = {}", self.iterations),
            format!("t = {}", self.t),
            format!("rho = {}", list(&self.rho_list)),
            format!("seed = {}", self.seed),
            format!("n_pixels = {}", self.n_pixels),
            format!("n_angles = {}", self.n_angles),
            format!("n_tangential = {}", self.n_tangential),
            format!("n_nodes = {}", self.n_nodes),
            format!("phi_list = {}", list(&self.phi_list)),
            format!("draws = {}", self.draws),
        ]
    }
}

/// Flag overrides shared by every subcommand; `None` keeps the value from
/// the config file or the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub beta: Option<f64>,
    pub iters: Option<usize>,
    pub t: Option<f64>,
    pub rho: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

/// defaults < config file < flags.
pub fn resolve(experiment: Experiment, overrides: &Overrides) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::defaults(experiment);
    if let Some(path) = &overrides.config {
        config.apply_file(path)?;
    }
    if let Some(beta) = overrides.beta {
        config.beta = beta;
    }
    if let Some(iters) = overrides.iters {
        config.iterations = iters;
    }
    if let Some(t) = overrides.t {
        config.t = t;
    }
    if let Some(rho) = &overrides.rho {
        config.rho_list = rho.clone();
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(out) = &overrides.out {
        config.out_dir = out.clone();
    }
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn file_then_flags_precedence() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# comment\nbeta = 1.5\nseed = 9\nrho = 0.1, 0.2").unwrap();
        let overrides = Overrides {
            seed: Some(11),
            config: Some(file.path().to_path_buf()),
            ..Default::default()
        };
        let config = resolve(Experiment::Toy, &overrides).unwrap();
        assert_eq!(config.beta, 1.5); // from file
        assert_eq!(config.seed, 11); // flag wins
        assert_eq!(config.rho_list, vec![0.1, 0.2]);
        assert_eq!(config.iterations, 5000); // toy default
    }

    #[test]
    fn bad_inputs_are_config_errors() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "betta = 1.5").unwrap();
        let overrides = Overrides {
            config: Some(file.path().to_path_buf()),
            ..Default::default()
        };
        assert!(resolve(Experiment::Toy, &overrides).is_err());

        let overrides = Overrides {
            beta: Some(2.5),
            ..Default::default()
        };
        assert!(resolve(Experiment::Toy, &overrides).is_err());

        let overrides = Overrides {
            t: Some(0.0),
            ..Default::default()
        };
        assert!(resolve(Experiment::Tomo, &overrides).is_err());
    }
}
