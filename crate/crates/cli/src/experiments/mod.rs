//! The four experiment drivers.

pub mod noise_demo;
pub mod rho_sweep;
pub mod tomo;
pub mod toy;

/// Float formatting shared by all experiment CSVs (bit-exact round trip).
pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}
