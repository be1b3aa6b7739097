//! Experiment driver around the `betacone` library.
//!
//! Four experiments, each a subcommand of the `betacone` binary:
//!
//! - `toy`: the two-detector model on `[0, 1]`; multiplicative updates
//!   against the exact oracle, dual certificates, and TV-regularized
//!   solves across a list of regularization weights.
//! - `tomo`: parallel-beam tomography of a disc phantom under scaled
//!   Poisson noise; loss/max traces, certificate trace, image snapshots.
//! - `rho-sweep`: TV-regularized reconstructions of a head phantom across
//!   regularization weights; max-value curve and end-member images.
//! - `noise-demo`: Monte Carlo moments of the four noise models across
//!   dispersions.
//!
//! Everything is deterministic given the seed: CSV outputs are
//! byte-identical across reruns.

pub mod config;
pub mod experiments;
pub mod output;
pub mod phantom;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] betacone::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("image encoding error: {0}")]
    Image(#[from] image::ImageError),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
