//! Iterative solvers for `min_{mu >= 0} D_beta(y | A mu)`.
//!
//! The workhorse is the multiplicative family
//!
//! ```text
//! mu_{k+1} = mu_k * A*((A mu_k)^(beta-2) y) / A*((A mu_k)^(beta-1))
//! ```
//!
//! which contains ML-EM (beta = 1) and image-space reconstruction
//! (beta = 2) as special cases. For beta in `[1, 2]` the loss is provably
//! non-increasing along iterates; the runner enforces this and aborts on a
//! violation. For beta in `[0, 1)` monotonicity is recorded but not
//! asserted.
//!
//! Componentwise powers of zero are never taken: a data component with
//! `(A mu)_i = 0` contributes nothing when `y_i = 0` (the `0/0 = 0`
//! convention) and is an error otherwise. Zero node masses are preserved
//! exactly: the update multiplies.

mod pdhg;

pub use pdhg::{estimate_opnorm, pdhg_tv, tv_objective, PdhgConfig};

use crate::divergence::{total_divergence, BetaParam, Regime};
use crate::dual::dual_candidate;
use crate::error::{Error, Result};
use crate::operators::{DiscreteMeasure, ForwardOperator, Observation};

/// Per-step loss non-increase tolerance asserted for beta in `[1, 2]`.
const MONOTONE_TOL: f64 = 1e-10;
/// Consecutive sub-tolerance decreases before declaring a stall.
const STALL_WINDOW: usize = 10;

/// Why a solver run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    LossStall,
    DivergenceTolerance,
}

/// Trace of one solver run. Traces include the initial point, so they hold
/// `iterations_run + 1` entries.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// `(iteration, measure)` snapshots, kept every `snapshot_every`
    /// iterations when requested.
    pub iterates_kept: Vec<(usize, DiscreteMeasure)>,
    /// Objective value per iteration (for the multiplicative solver,
    /// `D_beta(y | A mu_k)`; for the TV solver, the regularized objective
    /// of the running-average iterate).
    pub loss_trace: Vec<f64>,
    /// Maximum node mass per iteration.
    pub max_trace: Vec<f64>,
    pub final_mu: DiscreteMeasure,
    pub iterations_run: usize,
    pub stop_reason: StopReason,
}

/// Options for [`run_multiplicative`].
#[derive(Debug, Clone)]
pub struct MultiplicativeOptions {
    pub max_iters: usize,
    /// Relative per-step decrease below which an iteration counts toward
    /// the stall window.
    pub stall_tol: f64,
    /// Keep a snapshot every this many iterations (0 keeps none).
    pub snapshot_every: usize,
    /// Stop once the loss falls strictly below this floor
    /// (`DivergenceTolerance`). The loss is nonnegative, so the default 0
    /// disables the floor.
    pub loss_floor: f64,
}

impl Default for MultiplicativeOptions {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            stall_tol: 1e-12,
            snapshot_every: 0,
            loss_floor: 0.0,
        }
    }
}

/// Loss `D_beta(y | w)`, extended to signed data for the Euclidean case
/// (the divergence itself rejects negative first arguments; the quadratic
/// formula is its unique continuous extension).
pub(crate) fn data_loss(y: &[f64], w: &[f64], beta: BetaParam) -> Result<f64> {
    if beta.regime() == Regime::Euclidean {
        if y.len() != w.len() {
            return Err(Error::LengthMismatch {
                left: y.len(),
                right: w.len(),
            });
        }
        Ok(y
            .iter()
            .zip(w)
            .map(|(&u, &v)| 0.5 * (u - v) * (u - v))
            .sum())
    } else {
        total_divergence(y, w, beta)
    }
}

/// Numerator and denominator data vectors for one multiplicative step:
/// `(w^(beta-2) y, w^(beta-1))` with zero components masked.
fn update_factors(w: &[f64], y: &[f64], beta: BetaParam) -> Result<(Vec<f64>, Vec<f64>)> {
    let b = beta.value();
    let m = w.len();
    let mut num = vec![0.0; m];
    let mut den = vec![0.0; m];
    for i in 0..m {
        let (wi, yi) = (w[i], y[i]);
        match beta.regime() {
            Regime::Euclidean => {
                num[i] = yi;
                den[i] = wi;
            }
            _ if wi == 0.0 => {
                if yi > 0.0 {
                    return Err(Error::DegenerateData { index: i, y: yi });
                }
                // 0/0 convention: the component contributes nothing
            }
            Regime::KullbackLeibler => {
                num[i] = yi / wi;
                den[i] = 1.0;
            }
            Regime::ItakuraSaito => {
                num[i] = yi / (wi * wi);
                den[i] = 1.0 / wi;
            }
            _ => {
                // separate powers: w^(b-2) overflows for subnormal w and
                // b < 2, and inf * 0 or inf * w would poison the factors
                num[i] = if yi > 0.0 {
                    wi.powf(b - 2.0) * yi
                } else {
                    0.0
                };
                den[i] = wi.powf(b - 1.0);
            }
        }
    }
    Ok((num, den))
}

/// One multiplicative step given the precomputed forward projection `w`.
fn step_with(
    mu: &DiscreteMeasure,
    w: &[f64],
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
) -> Result<DiscreteMeasure> {
    let (num, den) = update_factors(w, y.values(), beta)?;
    let n = a.adjoint(&num)?;
    let d = a.adjoint(&den)?;
    let mut masses = Vec::with_capacity(mu.masses().len());
    for (j, &mass) in mu.masses().iter().enumerate() {
        if mass == 0.0 {
            masses.push(0.0);
            continue;
        }
        if d[j] == 0.0 {
            return Err(Error::DegenerateDenominator { node: j });
        }
        // Signed Euclidean data can make the numerator negative; the
        // constrained surrogate minimizer clamps at zero.
        masses.push(mass * (n[j].max(0.0) / d[j]));
    }
    DiscreteMeasure::new(mu.grid().clone(), masses)
}

/// One multiplicative update. At a fixed point the numerator and
/// denominator potentials agree on the support of `mu`, which is the
/// first-order equality `A* lambda(mu) = 0` there; zero masses stay zero.
pub fn multiplicative_step(
    mu: &DiscreteMeasure,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
) -> Result<DiscreteMeasure> {
    check_data(y, a, beta)?;
    let w = a.apply(mu)?;
    step_with(mu, &w, y, a, beta)
}

fn check_data(y: &Observation, a: &ForwardOperator, beta: BetaParam) -> Result<()> {
    if y.len() != a.n_rows() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: a.n_rows(),
        });
    }
    match beta.regime() {
        Regime::Euclidean => {}
        Regime::ItakuraSaito => {
            if y.values().iter().any(|&v| v <= 0.0) {
                return Err(Error::InvalidObservation(
                    "beta = 0 requires strictly positive data".into(),
                ));
            }
        }
        _ => {
            if let Some(&bad) = y.values().iter().find(|v| **v < 0.0) {
                return Err(Error::InvalidObservation(format!(
                    "negative data component {bad} is only admissible for beta = 2"
                )));
            }
        }
    }
    Ok(())
}

/// Runs multiplicative updates from a strictly positive `mu0`, recording
/// loss and max-mass traces.
///
/// Stops at `max_iters`, at the loss floor, or after ten consecutive
/// iterations whose relative decrease is below `stall_tol`. For beta in
/// `[1, 2]` a loss increase beyond `1e-10` relative aborts with
/// [`Error::MonotonicityViolated`].
pub fn run_multiplicative(
    mu0: &DiscreteMeasure,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
    opts: &MultiplicativeOptions,
) -> Result<SolveReport> {
    check_data(y, a, beta)?;
    if mu0.masses().iter().any(|&m| m <= 0.0) {
        return Err(Error::InvalidMeasure(
            "multiplicative updates need a strictly positive starting measure".into(),
        ));
    }
    let mut mu = mu0.clone();
    let mut w = a.apply(&mu)?;
    let mut loss_prev = data_loss(y.values(), &w, beta)?;
    let mut loss_trace = vec![loss_prev];
    let mut max_trace = vec![mu.max_mass()];
    let mut iterates_kept = Vec::new();
    let mut stall_streak = 0usize;
    let mut iterations_run = 0;
    let mut stop_reason = StopReason::MaxIters;
    for k in 1..=opts.max_iters {
        mu = step_with(&mu, &w, y, a, beta)?;
        w = a.apply(&mu)?;
        let loss = data_loss(y.values(), &w, beta)?;
        iterations_run = k;
        if beta.is_convex_range() && loss > loss_prev + MONOTONE_TOL * (1.0 + loss_prev.abs()) {
            return Err(Error::MonotonicityViolated {
                iteration: k,
                previous: loss_prev,
                current: loss,
            });
        }
        loss_trace.push(loss);
        max_trace.push(mu.max_mass());
        if opts.snapshot_every > 0 && k % opts.snapshot_every == 0 {
            iterates_kept.push((k, mu.clone()));
        }
        if loss_prev - loss <= opts.stall_tol * (1.0 + loss_prev.abs()) {
            stall_streak += 1;
        } else {
            stall_streak = 0;
        }
        loss_prev = loss;
        if loss < opts.loss_floor {
            stop_reason = StopReason::DivergenceTolerance;
            break;
        }
        if stall_streak >= STALL_WINDOW {
            stop_reason = StopReason::LossStall;
            break;
        }
    }
    Ok(SolveReport {
        iterates_kept,
        loss_trace,
        max_trace,
        final_mu: mu,
        iterations_run,
        stop_reason,
    })
}

/// First-order optimality residuals at `mu`: with
/// `phi = A* [(A mu)^(beta-2) (A mu - y)]` sampled on the nodes, returns
/// `(min_x phi, max |phi|)` where the max runs over the support
/// `{mass > support_tol * max mass}`. At an optimum the first is `>= 0`
/// (zero attained) and the second vanishes.
pub fn kkt_residual(
    mu: &DiscreteMeasure,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
    support_tol: f64,
) -> Result<(f64, f64)> {
    let w = a.apply(mu)?;
    let lambda = dual_candidate(&w, y.values(), beta)?;
    let phi = a.adjoint(&lambda)?;
    let min_phi = phi.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
    let threshold = support_tol * mu.max_mass();
    let max_on_support = mu
        .masses()
        .iter()
        .zip(&phi)
        .filter(|(&mass, _)| mass > threshold)
        .fold(0.0f64, |acc, (_, &p)| acc.max(p.abs()));
    Ok((min_phi, max_on_support))
}
