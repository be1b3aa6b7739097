//! Scalar and vector beta-divergences for beta in `[0, 2]`.
//!
//! The scalar divergence `d_beta(u | v)` is defined case by case on
//! nonnegative arguments, with the conventions `0/0 = 0` and `0 log 0 = 0`:
//!
//! - `beta = 2` (Euclidean): `(u - v)^2 / 2`
//! - `1 < beta < 2`: `(u^b + (b-1) v^b - b u v^(b-1)) / (b (b-1))`, finite
//!   everywhere
//! - `beta = 1` (Kullback-Leibler): `u log(u/v) - u + v`, `+inf` when
//!   `v = 0 < u`
//! - `0 < beta < 1`: the generic fraction, `+inf` when `v = 0 < u`
//! - `beta = 0` (Itakura-Saito): `u/v - log(u/v) - 1`, `+inf` when `u = 0`
//!   or `v = 0`
//!
//! `+inf` is a first-class value here ([`ExtReal`]), not an error: the cone
//! optimization needs finite/infinite comparisons. Powers of zero are never
//! routed through `powf`; every zero case is decided by the table above.

use crate::error::{Error, Result};

/// Extended real value: an `f64` that may be `+inf`.
///
/// Divergence values never take `-inf`; comparisons and addition treat
/// `+inf` absorbingly (IEEE semantics).
pub type ExtReal = f64;

/// Snap width for classifying beta against the boundary values 0, 1, 2.
///
/// Within this distance of a boundary the exact closed form is used instead
/// of the generic fraction, whose `1/(beta (beta - 1))` factor blows up.
const BOUNDARY_SNAP: f64 = 1e-9;

/// Which branch of the case table a given beta falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// beta = 0
    ItakuraSaito,
    /// 0 < beta < 1
    FractionalLow,
    /// beta = 1
    KullbackLeibler,
    /// 1 < beta < 2
    FractionalHigh,
    /// beta = 2
    Euclidean,
}

/// A validated beta in `[0, 2]` together with its regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam {
    value: f64,
    regime: Regime,
}

impl BetaParam {
    /// Validates `value` and classifies its regime. Boundary values belong
    /// to the named regimes (1.0 is Kullback-Leibler, not fractional), and
    /// values within `1e-9` of a boundary are snapped to it.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=2.0).contains(&value) {
            return Err(Error::BetaOutOfRange(value));
        }
        let regime = if value <= BOUNDARY_SNAP {
            Regime::ItakuraSaito
        } else if (value - 1.0).abs() <= BOUNDARY_SNAP {
            Regime::KullbackLeibler
        } else if value >= 2.0 - BOUNDARY_SNAP {
            Regime::Euclidean
        } else if value < 1.0 {
            Regime::FractionalLow
        } else {
            Regime::FractionalHigh
        };
        Ok(Self { value, regime })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// True when beta lies in `[1, 2]`, where `v -> d_beta(u|v)` is convex
    /// and the multiplicative updates are provably monotone.
    pub fn is_convex_range(&self) -> bool {
        matches!(
            self.regime,
            Regime::KullbackLeibler | Regime::FractionalHigh | Regime::Euclidean
        )
    }
}

fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value < 0.0 || value.is_nan() {
        return Err(Error::Negative { name, value });
    }
    Ok(())
}

/// Generic fraction for fractional beta, with zero arguments masked so no
/// power of zero is ever taken.
fn fractional(u: f64, v: f64, b: f64) -> f64 {
    let scale = 1.0 / (b * (b - 1.0));
    let up = if u > 0.0 { u.powf(b) } else { 0.0 };
    let vp = if v > 0.0 { v.powf(b) } else { 0.0 };
    let cross = if u > 0.0 && v > 0.0 {
        u * v.powf(b - 1.0)
    } else {
        0.0
    };
    scale * (up + (b - 1.0) * vp - b * cross)
}

/// Scalar beta-divergence `d_beta(u | v)` on nonnegative arguments.
///
/// Returns `+inf` exactly in the listed cases (`beta <= 1` with
/// `v = 0 < u`; `beta = 0` with `u = 0` or `v = 0`).
pub fn beta_divergence(u: f64, v: f64, beta: BetaParam) -> Result<ExtReal> {
    check_nonneg("u", u)?;
    check_nonneg("v", v)?;
    let d = match beta.regime() {
        Regime::Euclidean => 0.5 * (u - v) * (u - v),
        Regime::KullbackLeibler => {
            if v == 0.0 {
                if u > 0.0 {
                    return Ok(f64::INFINITY);
                }
                0.0
            } else if u == 0.0 {
                v
            } else {
                u * (u / v).ln() - u + v
            }
        }
        Regime::ItakuraSaito => {
            if u == 0.0 || v == 0.0 {
                return Ok(f64::INFINITY);
            }
            let r = u / v;
            r - r.ln() - 1.0
        }
        Regime::FractionalLow => {
            if v == 0.0 && u > 0.0 {
                return Ok(f64::INFINITY);
            }
            fractional(u, v, beta.value())
        }
        Regime::FractionalHigh => fractional(u, v, beta.value()),
    };
    // d_beta >= 0; clear the rounding residue near u = v.
    Ok(d.max(0.0))
}

/// Derivative of `v -> d_beta(u | v)`, equal to `v^(beta-2) (v - u)`.
///
/// Requires `v > 0` except for beta = 2 where the derivative extends to
/// `v - u` at `v = 0`; for every other beta the map is not even
/// subdifferentiable there.
pub fn beta_divergence_dv(u: f64, v: f64, beta: BetaParam) -> Result<f64> {
    check_nonneg("u", u)?;
    check_nonneg("v", v)?;
    if v == 0.0 && beta.regime() != Regime::Euclidean {
        return Err(Error::NotDifferentiable { beta: beta.value() });
    }
    Ok(match beta.regime() {
        Regime::Euclidean => v - u,
        Regime::KullbackLeibler => (v - u) / v,
        Regime::ItakuraSaito => (v - u) / (v * v),
        Regime::FractionalLow | Regime::FractionalHigh => v.powf(beta.value() - 2.0) * (v - u),
    })
}

/// Vector divergence `D_beta(y | w) = sum_i d_beta(y_i | w_i)`, with `+inf`
/// absorption.
pub fn total_divergence(y: &[f64], w: &[f64], beta: BetaParam) -> Result<ExtReal> {
    if y.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: w.len(),
        });
    }
    let mut sum = 0.0;
    for (&u, &v) in y.iter().zip(w) {
        sum += beta_divergence(u, v, beta)?;
        if sum.is_infinite() {
            return Ok(f64::INFINITY);
        }
    }
    Ok(sum)
}
