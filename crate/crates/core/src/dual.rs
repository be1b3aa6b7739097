//! The dual side of the cone problem `min_{w in AM_+} D_beta(y | w)`.
//!
//! The dual objective decomposes over components,
//! `g(lambda) = sum_i h(y_i, lambda_i)` with
//! `h(y, lambda) = min_{w >= 0} d_beta(y | w) - lambda w`, and is feasible
//! on the dual cone `C* = {lambda : A* lambda >= 0 on K}`. Weak duality
//! gives `g(lambda) <= D_beta(y | A mu)` for every `mu >= 0`, so any
//! feasible `lambda` with `g(lambda) > 0` certifies that `y` is not
//! attainable and therefore that optimizers are sparse.
//!
//! Componentwise minimizers and values:
//!
//! - beta = 2: `w = max(0, y + lambda)`; always finite.
//! - 1 < beta < 2: `w` solves `w^(beta-2) (w - y) = lambda` (strictly
//!   increasing stationarity function); always finite.
//! - beta = 1: `w = y / (1 - lambda)` for `lambda < 1`, value
//!   `y ln(1 - lambda)`; `-inf` for `lambda > 1`, and for `lambda = 1`
//!   unless `y = 0`.
//! - 0 < beta < 1: `-inf` for `lambda > 0`; otherwise the unique sign
//!   change of the stationarity function below its maximum at
//!   `w = (2-beta) y / (1-beta)`.
//! - beta = 0 (requires `y > 0`): `-inf` for `lambda > 0`; otherwise
//!   `w = 2y / (1 + sqrt(1 - 4 lambda y))` with value
//!   `sqrt(1-4 lambda y) - ln((sqrt(1-4 lambda y)+1)/2) - 1`.
//!
//! `-inf` is a value of `h`, not an error. For beta = 0 with `y = 0` every
//! `w` gives an infinite divergence, so `h = +inf` (the whole problem is
//! degenerate; solvers reject such data).

use crate::divergence::{beta_divergence, BetaParam, Regime};
use crate::error::{Error, Result};
use crate::operators::{DiscreteMeasure, ForwardOperator, Observation};

/// Stationarity tolerance for the bracketed root solves (on the derivative,
/// relative to `1 + |lambda|`).
const ROOT_TOL: f64 = 1e-13;
const ROOT_MAX_ITERS: usize = 200;

/// A shifted dual vector with its certified status.
///
/// `certified = true` requires `dual_value > 0` together with feasibility
/// `A* lambda_tilde >= -tol` at every node, where `tol` is the
/// scale-invariant cone tolerance `1e-12 * (1 + |A* lambda_tilde|_inf)`.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub lambda_tilde: Vec<f64>,
    pub shift_c: f64,
    /// `g(lambda_tilde)`; may be `-inf`.
    pub dual_value: f64,
    pub certified: bool,
}

fn check_dual_data(y: f64, beta: BetaParam) -> Result<()> {
    // Signed y is meaningful only for the Euclidean case.
    if beta.regime() != Regime::Euclidean && (y < 0.0 || y.is_nan()) {
        return Err(Error::Negative { name: "y", value: y });
    }
    Ok(())
}

/// Stationarity function `phi(w) = w^(beta-2) (w - y) - lambda`.
fn stationarity(w: f64, y: f64, lambda: f64, b: f64) -> f64 {
    if w == 0.0 {
        // limit is -inf for y > 0 (only ever queried there)
        return f64::NEG_INFINITY;
    }
    w.powf(b - 2.0) * (w - y) - lambda
}

/// Bisection for the unique root of the increasing function `phi` on
/// `[lo, hi]` with `phi(lo) <= 0 <= phi(hi)`.
fn bisect(y: f64, lambda: f64, b: f64, mut lo: f64, mut hi: f64) -> f64 {
    let tol = ROOT_TOL * (1.0 + lambda.abs());
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..ROOT_MAX_ITERS {
        mid = 0.5 * (lo + hi);
        let v = stationarity(mid, y, lambda, b);
        if v.abs() <= tol {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= f64::EPSILON * mid {
            break;
        }
    }
    mid
}

/// Root of the strictly increasing stationarity function (1 < beta < 2,
/// y > 0).
fn root_increasing(y: f64, lambda: f64, b: f64) -> f64 {
    if lambda == 0.0 {
        return y;
    }
    if lambda > 0.0 {
        // root above y
        let mut hi = y + 1.0;
        for _ in 0..ROOT_MAX_ITERS {
            if stationarity(hi, y, lambda, b) >= 0.0 {
                break;
            }
            hi = y + 2.0 * (hi - y);
        }
        bisect(y, lambda, b, y, hi)
    } else {
        // root below y
        let mut lo = 0.5 * y;
        for _ in 0..ROOT_MAX_ITERS {
            if stationarity(lo, y, lambda, b) <= 0.0 {
                break;
            }
            lo *= 0.5;
        }
        bisect(y, lambda, b, lo, y)
    }
}

/// Root for 0 < beta < 1, y > 0, lambda < 0: the stationarity function
/// rises from -inf to its maximum at `w = (2-beta) y / (1-beta)` and then
/// decays to `-lambda > 0`; the minimizer is the sign change on the rising
/// branch, which lies below y.
fn root_below(y: f64, lambda: f64, b: f64) -> f64 {
    let mut lo = 0.5 * y;
    for _ in 0..ROOT_MAX_ITERS {
        if stationarity(lo, y, lambda, b) <= 0.0 {
            break;
        }
        lo *= 0.5;
    }
    bisect(y, lambda, b, lo, y)
}

/// The unique minimizer of `w -> d_beta(y | w) - lambda w` over `w >= 0`.
///
/// Errors where no minimizer exists, i.e. exactly where
/// [`dual_component`] is `-inf` (and for the degenerate beta = 0, y = 0
/// data).
pub fn dual_minimizer(y: f64, lambda: f64, beta: BetaParam) -> Result<f64> {
    check_dual_data(y, beta)?;
    let b = beta.value();
    match beta.regime() {
        Regime::Euclidean => Ok((y + lambda).max(0.0)),
        Regime::KullbackLeibler => {
            if lambda > 1.0 || (lambda == 1.0 && y > 0.0) {
                Err(Error::DualUnbounded { y, lambda })
            } else if y == 0.0 {
                Ok(0.0)
            } else {
                Ok(y / (1.0 - lambda))
            }
        }
        Regime::ItakuraSaito => {
            if y == 0.0 {
                return Err(Error::InvalidObservation(
                    "beta = 0 requires strictly positive data".into(),
                ));
            }
            if lambda > 0.0 {
                Err(Error::DualUnbounded { y, lambda })
            } else {
                Ok(2.0 * y / (1.0 + (1.0 - 4.0 * lambda * y).sqrt()))
            }
        }
        Regime::FractionalLow => {
            if lambda > 0.0 {
                Err(Error::DualUnbounded { y, lambda })
            } else if y == 0.0 {
                Ok(0.0)
            } else if lambda == 0.0 {
                Ok(y)
            } else {
                Ok(root_below(y, lambda, b))
            }
        }
        Regime::FractionalHigh => {
            if y == 0.0 {
                if lambda <= 0.0 {
                    Ok(0.0)
                } else {
                    Ok(lambda.powf(1.0 / (b - 1.0)))
                }
            } else {
                Ok(root_increasing(y, lambda, b))
            }
        }
    }
}

/// Componentwise dual value `h(y, lambda) = min_{w >= 0} d_beta(y|w) -
/// lambda w`. Returns `-inf` as a value where the objective is unbounded
/// below, and `+inf` in the degenerate beta = 0, y = 0 case.
pub fn dual_component(y: f64, lambda: f64, beta: BetaParam) -> Result<f64> {
    check_dual_data(y, beta)?;
    match beta.regime() {
        Regime::Euclidean => {
            let w = (y + lambda).max(0.0);
            let d = y - w;
            Ok(0.5 * d * d - lambda * w)
        }
        Regime::KullbackLeibler => {
            if lambda > 1.0 {
                Ok(f64::NEG_INFINITY)
            } else if y == 0.0 {
                Ok(0.0)
            } else if lambda == 1.0 {
                Ok(f64::NEG_INFINITY)
            } else {
                Ok(y * (1.0 - lambda).ln())
            }
        }
        Regime::ItakuraSaito => {
            if y == 0.0 {
                // d_0(0 | w) is +inf for every w
                Ok(f64::INFINITY)
            } else if lambda > 0.0 {
                Ok(f64::NEG_INFINITY)
            } else {
                let s = (1.0 - 4.0 * lambda * y).sqrt();
                Ok(s - (0.5 * (s + 1.0)).ln() - 1.0)
            }
        }
        Regime::FractionalLow => {
            if lambda > 0.0 {
                Ok(f64::NEG_INFINITY)
            } else if y == 0.0 {
                Ok(0.0)
            } else {
                let w = dual_minimizer(y, lambda, beta)?;
                Ok(beta_divergence(y, w, beta)? - lambda * w)
            }
        }
        Regime::FractionalHigh => {
            let w = dual_minimizer(y, lambda, beta)?;
            Ok(beta_divergence(y, w, beta)? - lambda * w)
        }
    }
}

/// Aggregate dual value `g(lambda) = sum_i h(y_i, lambda_i)`.
///
/// `-inf` absorbs finite components; the degenerate `+inf` (beta = 0 with
/// a zero data component) dominates, since then the objective is
/// identically infinite.
pub fn dual_value(y: &Observation, lambda: &[f64], beta: BetaParam) -> Result<f64> {
    if lambda.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: y.len(),
        });
    }
    let mut sum = 0.0;
    let mut has_neg_inf = false;
    for (&yi, &li) in y.values().iter().zip(lambda) {
        let h = dual_component(yi, li, beta)?;
        if h == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        if h == f64::NEG_INFINITY {
            has_neg_inf = true;
        } else {
            sum += h;
        }
    }
    Ok(if has_neg_inf { f64::NEG_INFINITY } else { sum })
}

/// Scale-invariant feasibility tolerance for a sampled potential
/// `A* lambda`.
pub fn cone_tolerance(potential: &[f64]) -> f64 {
    let sup = potential.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    1e-12 * (1.0 + sup)
}

/// Membership in the dual cone: `A* lambda >= -tol` at every node.
pub fn in_dual_cone(a: &ForwardOperator, lambda: &[f64], tol: f64) -> Result<bool> {
    let potential = a.adjoint(lambda)?;
    Ok(potential.iter().all(|&v| v >= -tol))
}

/// Membership at the default scale-invariant tolerance.
pub fn in_dual_cone_default(a: &ForwardOperator, lambda: &[f64]) -> Result<bool> {
    let potential = a.adjoint(lambda)?;
    let tol = cone_tolerance(&potential);
    Ok(potential.iter().all(|&v| v >= -tol))
}

/// Shifts `lambda` by the smallest `c >= 0` such that
/// `A* (lambda + c 1) >= 0` at all nodes:
/// `c = max(0, max_x (-A* lambda)(x) / (A* 1)(x))`.
///
/// Errors when some node has a negative potential but zero row sum, since
/// no shift can fix it there.
pub fn certificate_shift(a: &ForwardOperator, lambda: &[f64]) -> Result<(Vec<f64>, f64)> {
    let potential = a.adjoint(lambda)?;
    let sums = a.column_sums();
    let mut c = 0.0f64;
    for (j, (&phi, &s)) in potential.iter().zip(sums).enumerate() {
        if phi < 0.0 {
            if s <= 0.0 {
                return Err(Error::InfeasibleShift { node: j });
            }
            c = c.max(-phi / s);
        }
    }
    let shifted = lambda.iter().map(|l| l + c).collect();
    Ok((shifted, c))
}

/// The canonical dual candidate built from a primal point:
/// `lambda_i = w_i^(beta-2) (w_i - y_i)` with the `0/0 = 0` convention.
///
/// For beta < 2, a component with `w_i = 0` is admissible only when
/// `y_i = 0` (the component is then 0); for beta = 2 the power is absent
/// and the formula is just `w - y`.
pub fn dual_candidate(w: &[f64], y: &[f64], beta: BetaParam) -> Result<Vec<f64>> {
    if w.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: y.len(),
        });
    }
    let b = beta.value();
    w.iter()
        .zip(y)
        .enumerate()
        .map(|(i, (&wi, &yi))| match beta.regime() {
            Regime::Euclidean => Ok(wi - yi),
            _ if wi == 0.0 => {
                if yi > 0.0 {
                    Err(Error::DegenerateData { index: i, y: yi })
                } else {
                    Ok(0.0)
                }
            }
            Regime::KullbackLeibler => Ok((wi - yi) / wi),
            Regime::ItakuraSaito => Ok((wi - yi) / (wi * wi)),
            // w^(b-2) overflows for subnormal w; with y = 0 the product
            // is really w^(b-1), so take that power directly
            _ if yi == 0.0 => Ok(wi.powf(b - 1.0)),
            _ => Ok(wi.powf(b - 2.0) * (wi - yi)),
        })
        .collect()
}

/// Builds the dual candidate at `mu`, shifts it into the dual cone, and
/// evaluates the dual value. `certified` holds exactly when the value is
/// finite and positive (feasibility holds by construction and is
/// re-checked at the scale-invariant tolerance).
pub fn dual_certificate(
    mu: &DiscreteMeasure,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
) -> Result<CertificateReport> {
    let w = a.apply(mu)?;
    let lambda = dual_candidate(&w, y.values(), beta)?;
    let (lambda_tilde, shift_c) = certificate_shift(a, &lambda)?;
    let value = dual_value(y, &lambda_tilde, beta)?;
    let potential = a.adjoint(&lambda_tilde)?;
    let tol = cone_tolerance(&potential);
    let feasible = potential.iter().all(|&v| v >= -tol);
    Ok(CertificateReport {
        lambda_tilde,
        shift_c,
        dual_value: value,
        certified: feasible && value.is_finite() && value > 0.0,
    })
}
