//! Sparsity diagnostics and optimality oracles.
//!
//! The sparsity statement is: for any optimizer, `supp(mu*)` sits inside
//! `argmin(phi*)` where `phi* = A* lambda(mu*)` and
//! `lambda(mu) = (A mu)^(beta-2) (A mu - y)`. When the data is not
//! attainable and the operator is surjective, `phi*` is nontrivial and
//! nonnegative, so optimizers concentrate on its (typically finite)
//! argmin: sums of Dirac masses. The helpers here detect discrete
//! supports, evaluate the two first-order identities satisfied at optima,
//! compute the closed-form amplitude of a single-spike optimizer, and
//! solve the two-detector toy model exactly.

use crate::divergence::{BetaParam, Regime};
use crate::dual::{dual_candidate, CertificateReport};
use crate::error::{Error, Result};
use crate::operators::{DiscreteMeasure, ForwardOperator, Observation};

/// Classification of a data point for the two-detector toy model
/// (`a_0 = 1`, `a_1(x) = x` on `[0, 1]`, beta = 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyRegion {
    /// `0 <= y_1 <= y_0`: attainable, optimal loss zero.
    InsideCone,
    /// Polar region `y_0 <= 0`, `y_0 + y_1 <= 0`: the zero measure.
    ZeroMeasure,
    /// Projects onto the ray of `delta_0`: optimizer `xi delta_0`.
    DiracAt0,
    /// Projects onto the ray of `delta_1`: optimizer `xi delta_1`.
    DiracAt1,
}

/// Exact solution of the toy problem for one data point.
#[derive(Debug, Clone, Copy)]
pub struct ToyOracleResult {
    pub region: ToyRegion,
    /// Dirac mass; zero for `ZeroMeasure`, unused for `InsideCone`.
    pub xi: f64,
    pub optimal_loss: f64,
}

/// Exact minimizer of `1/2 |y - w|^2` over the toy cone
/// `{0 <= w_1 <= w_0}`, by projecting onto its generating rays `(1, 0)`
/// and `(1, 1)` and testing the polar cone.
pub fn toy_oracle(y0: f64, y1: f64) -> ToyOracleResult {
    if y1 >= 0.0 && y1 <= y0 {
        return ToyOracleResult {
            region: ToyRegion::InsideCone,
            xi: 0.0,
            optimal_loss: 0.0,
        };
    }
    if y0 <= 0.0 && y0 + y1 <= 0.0 {
        return ToyOracleResult {
            region: ToyRegion::ZeroMeasure,
            xi: 0.0,
            optimal_loss: 0.5 * (y0 * y0 + y1 * y1),
        };
    }
    if y1 <= 0.0 {
        // below the cone, right of the polar region: project onto (1, 0)
        return ToyOracleResult {
            region: ToyRegion::DiracAt0,
            xi: y0,
            optimal_loss: 0.5 * y1 * y1,
        };
    }
    let xi = 0.5 * (y0 + y1);
    let (d0, d1) = (y0 - xi, y1 - xi);
    ToyOracleResult {
        region: ToyRegion::DiracAt1,
        xi,
        optimal_loss: 0.5 * (d0 * d0 + d1 * d1),
    }
}

/// Nodes carrying more than `rel_tol` of the maximum node mass.
/// Multiplicative iterates never reach exact zero from a positive start,
/// so support statements need a relative threshold.
pub fn detect_support(mu: &DiscreteMeasure, rel_tol: f64) -> Result<Vec<usize>> {
    if !(0.0..1.0).contains(&rel_tol) {
        return Err(Error::InvalidConfig(format!(
            "support threshold must lie in [0, 1), got {rel_tol}"
        )));
    }
    let cut = rel_tol * mu.max_mass();
    Ok(mu
        .masses()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > cut && m > 0.0)
        .map(|(j, _)| j)
        .collect())
}

/// Relative defect in the optimality identity
/// `sum_i w_i^beta = sum_i y_i w_i^(beta-1)` (multiplicative-perturbation
/// stationarity; exact at any optimum of the cone problem, for every beta
/// in `[0, 2]`).
pub fn stationarity_residual(w: &[f64], y: &[f64], beta: BetaParam) -> Result<f64> {
    if w.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: y.len(),
        });
    }
    let b = beta.value();
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (i, (&wi, &yi)) in w.iter().zip(y).enumerate() {
        if wi == 0.0 {
            match beta.regime() {
                Regime::Euclidean => continue, // both terms vanish
                _ if yi == 0.0 && beta.regime() != Regime::ItakuraSaito => continue,
                _ => return Err(Error::DegenerateData { index: i, y: yi }),
            }
        }
        lhs += match beta.regime() {
            Regime::ItakuraSaito => 1.0,
            Regime::KullbackLeibler => wi,
            Regime::Euclidean => wi * wi,
            _ => wi.powf(b),
        };
        if yi != 0.0 {
            rhs += match beta.regime() {
                Regime::ItakuraSaito => yi / wi,
                Regime::KullbackLeibler => yi,
                Regime::Euclidean => yi * wi,
                _ => yi * wi.powf(b - 1.0),
            };
        }
    }
    Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
}

/// The variational inequality
/// `sum_i w_i^(beta-2) (w_i - y_i) (w_i - v_i) <= 0` tested against a
/// direction `v` in the cone; nonpositive at any optimum `w`. For
/// `0 < beta < 1` the comparison requires `supp(v)` inside `supp(w)`.
pub fn variational_residual(
    w: &[f64],
    v: &[f64],
    y: &[f64],
    beta: BetaParam,
) -> Result<f64> {
    if w.len() != v.len() || w.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: v.len().max(y.len()),
        });
    }
    let b = beta.value();
    let mut sum = 0.0;
    for (i, ((&wi, &vi), &yi)) in w.iter().zip(v).zip(y).enumerate() {
        if wi == 0.0 {
            if beta.regime() == Regime::Euclidean {
                sum += (0.0 - yi) * (0.0 - vi);
                continue;
            }
            if yi > 0.0 {
                return Err(Error::DegenerateData { index: i, y: yi });
            }
            if beta.regime() == Regime::FractionalLow && vi > 0.0 {
                return Err(Error::InvalidConfig(
                    "for 0 < beta < 1 the direction must be supported inside supp(w)".into(),
                ));
            }
            // lambda_i = 0 by the 0/0 convention
            continue;
        }
        let factor = match beta.regime() {
            Regime::ItakuraSaito => (wi - yi) / (wi * wi),
            Regime::KullbackLeibler => (wi - yi) / wi,
            Regime::Euclidean => wi - yi,
            _ if yi == 0.0 => wi.powf(b - 1.0),
            _ => wi.powf(b - 2.0) * (wi - yi),
        };
        sum += factor * (wi - vi);
    }
    Ok(sum)
}

/// Closed-form mass of a single-spike optimizer at the node `x*`:
/// `xi = sum_i y_i a_i(x*)^(beta-1) / sum_i a_i(x*)^beta`. Rows vanishing
/// at `x*` contribute to neither sum.
pub fn dirac_amplitude(
    node: usize,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
) -> Result<f64> {
    if y.len() != a.n_rows() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: a.n_rows(),
        });
    }
    if node >= a.n_nodes() {
        return Err(Error::InvalidConfig(format!(
            "node {node} out of range for {} nodes",
            a.n_nodes()
        )));
    }
    let b = beta.value();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..a.n_rows() {
        let ai = a.entry(i, node);
        if ai <= 0.0 {
            continue;
        }
        num += y.values()[i] * ai.powf(b - 1.0);
        den += ai.powf(b);
    }
    if den <= 0.0 {
        return Err(Error::ZeroColumn { node });
    }
    Ok(num / den)
}

/// True when `lambda` has both a component above `tol` and one below
/// `-tol`, with `tol = 1e-10 |lambda|_inf`. Holds for the optimal dual
/// vector whenever the data is certified unattainable.
pub fn sign_split_check(lambda: &[f64]) -> bool {
    let sup = lambda.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let tol = 1e-10 * sup;
    lambda.iter().any(|&l| l > tol) && lambda.iter().any(|&l| l < -tol)
}

/// Summary of the sparsity structure at a (near-)optimal measure.
#[derive(Debug, Clone)]
pub struct SparsityDiagnostics {
    pub support_nodes: Vec<usize>,
    /// Minimum of `phi* = A* lambda(mu)` over the grid.
    pub phi_star_min: f64,
    pub stationarity_residual: f64,
    /// Carried over from the certificate: the sparsity claim is certified
    /// only when the dual value is positive.
    pub certified_sparse: bool,
    /// Whether the detected support sits inside
    /// `{phi* <= min + near_tol * range}`.
    pub support_in_near_argmin: bool,
}

/// Builds the diagnostics for `mu`: detected support, the potential
/// `phi*`, the stationarity identity defect, and the argmin inclusion at
/// tolerance `near_tol` relative to the range of `phi*`.
pub fn sparsity_diagnostics(
    mu: &DiscreteMeasure,
    y: &Observation,
    a: &ForwardOperator,
    beta: BetaParam,
    support_rel_tol: f64,
    near_tol: f64,
    certificate: &CertificateReport,
) -> Result<SparsityDiagnostics> {
    let support_nodes = detect_support(mu, support_rel_tol)?;
    let w = a.apply(mu)?;
    let lambda = dual_candidate(&w, y.values(), beta)?;
    let phi = a.adjoint(&lambda)?;
    let lo = phi.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let hi = phi.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let cut = lo + near_tol * (hi - lo);
    let support_in_near_argmin = support_nodes.iter().all(|&j| phi[j] <= cut);
    Ok(SparsityDiagnostics {
        support_nodes,
        phi_star_min: lo,
        stationarity_residual: stationarity_residual(&w, y.values(), beta)?,
        certified_sparse: certificate.certified,
        support_in_near_argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{make_toy_operator, DiscreteMeasure, Grid};

    fn beta(b: f64) -> BetaParam {
        BetaParam::new(b).unwrap()
    }

    #[test]
    fn toy_oracle_regions() {
        let r = toy_oracle(0.0, 1.0);
        assert_eq!(r.region, ToyRegion::DiracAt1);
        assert!((r.xi - 0.5).abs() < 1e-15);
        assert!((r.optimal_loss - 0.25).abs() < 1e-15);

        let r = toy_oracle(1.0, -1.0);
        assert_eq!(r.region, ToyRegion::DiracAt0);
        assert!((r.xi - 1.0).abs() < 1e-15);
        assert!((r.optimal_loss - 0.5).abs() < 1e-15);

        let r = toy_oracle(-1.0, -1.0);
        assert_eq!(r.region, ToyRegion::ZeroMeasure);
        assert_eq!(r.xi, 0.0);
        assert!((r.optimal_loss - 1.0).abs() < 1e-15);

        let r = toy_oracle(2.0, 1.0);
        assert_eq!(r.region, ToyRegion::InsideCone);
        assert_eq!(r.optimal_loss, 0.0);
    }

    #[test]
    fn toy_oracle_loss_is_a_projection_distance() {
        // brute-force projection onto a fine sampling of the cone
        let check = |y0: f64, y1: f64| {
            let mut best = f64::INFINITY;
            let n = 400;
            for i in 0..=n {
                for j in 0..=i {
                    let (w0, w1) = (3.0 * i as f64 / n as f64, 3.0 * j as f64 / n as f64);
                    let d = 0.5 * ((y0 - w0).powi(2) + (y1 - w1).powi(2));
                    best = best.min(d);
                }
            }
            let oracle = toy_oracle(y0, y1).optimal_loss;
            assert!(
                (best - oracle).abs() < 2e-3,
                "({y0}, {y1}): sampled {best} vs oracle {oracle}"
            );
        };
        check(0.0, 1.0);
        check(1.0, -1.0);
        check(-1.0, -1.0);
        check(1.5, 2.5);
        check(0.3, 0.1);
        check(-0.4, 1.2);
    }

    #[test]
    fn support_detection() {
        let grid = Grid::uniform_1d(5).unwrap();
        let mu = DiscreteMeasure::dirac(grid.clone(), 2, 1.0).unwrap();
        assert_eq!(detect_support(&mu, 1e-6).unwrap(), vec![2]);
        let zero = DiscreteMeasure::zero(grid.clone());
        assert!(detect_support(&zero, 1e-6).unwrap().is_empty());
        let uniform = DiscreteMeasure::new(grid, vec![1.0; 5]).unwrap();
        assert_eq!(detect_support(&uniform, 0.5).unwrap().len(), 5);
        assert!(detect_support(&uniform, 1.0).is_err());
    }

    #[test]
    fn stationarity_identity_values() {
        let b2 = beta(2.0);
        // consistent fit
        assert_eq!(
            stationarity_residual(&[1.0, 2.0], &[1.0, 2.0], b2).unwrap(),
            0.0
        );
        // toy optimum: sum w^2 = 0.5 and sum y w = 0.5
        let r = stationarity_residual(&[0.5, 0.5], &[0.0, 1.0], b2).unwrap();
        assert!(r < 1e-15);
        // perturbed optimum shows a defect
        let r = stationarity_residual(&[0.6, 0.5], &[0.0, 1.0], b2).unwrap();
        assert!(r > 0.05);
        // degenerate component rejected outside the Euclidean case
        assert!(stationarity_residual(&[0.0, 1.0], &[0.5, 1.0], beta(1.0)).is_err());
        assert!(stationarity_residual(&[0.0, 1.0], &[0.0, 1.0], beta(0.0)).is_err());
    }

    #[test]
    fn variational_inequality_values() {
        let b2 = beta(2.0);
        // middle factor vanishes at w = y
        let r = variational_residual(&[1.0, 2.0], &[0.3, 5.0], &[1.0, 2.0], b2).unwrap();
        assert_eq!(r, 0.0);
        // toy optimum against v = A(delta_0) = (1, 0): -0.5
        let r = variational_residual(&[0.5, 0.5], &[1.0, 0.0], &[0.0, 1.0], b2).unwrap();
        assert!((r + 0.5).abs() < 1e-15);
        // support condition for fractional low
        assert!(
            variational_residual(&[0.0, 1.0], &[1.0, 1.0], &[0.0, 1.0], beta(0.5)).is_err()
        );
    }

    #[test]
    fn variational_inequality_negative_control() {
        // a non-optimal w admits a cone direction with positive value
        let a = make_toy_operator(21).unwrap();
        let w = [1.0, 0.2];
        let y = [0.0, 1.0];
        let mut found = None;
        'search: for k in 0..20 {
            for scale in [0.0, 0.01, 0.05, 0.2, 1.0] {
                let masses: Vec<f64> = (0..21)
                    .map(|j| (((j * 31 + k * 17) % 13) as f64) * 0.02 * scale)
                    .collect();
                let mu = DiscreteMeasure::new(a.grid().clone(), masses).unwrap();
                let v = a.apply(&mu).unwrap();
                let r = variational_residual(&w, &v, &y, beta(2.0)).unwrap();
                if r > 0.1 {
                    found = Some(r);
                    break 'search;
                }
            }
        }
        assert!(found.is_some(), "no violating direction found");
    }

    #[test]
    fn dirac_amplitude_on_the_toy_operator() {
        let a = make_toy_operator(101).unwrap();
        let b2 = beta(2.0);
        let y = Observation::new(vec![0.0, 1.0]).unwrap();
        let xi = dirac_amplitude(100, &y, &a, b2).unwrap();
        assert!((xi - 0.5).abs() < 1e-12);
        // at x = 0 the second detector vanishes: xi = y_0
        let y = Observation::new(vec![0.8, 0.3]).unwrap();
        let xi = dirac_amplitude(0, &y, &a, b2).unwrap();
        assert!((xi - 0.8).abs() < 1e-12);
        // scaling in y for beta = 2
        let y2 = Observation::new(vec![1.6, 0.6]).unwrap();
        let xi2 = dirac_amplitude(0, &y2, &a, b2).unwrap();
        assert!((xi2 - 2.0 * xi).abs() < 1e-12);
    }

    #[test]
    fn sign_split() {
        assert!(sign_split_check(&[0.5, -0.5]));
        assert!(!sign_split_check(&[0.0, 0.0]));
        assert!(!sign_split_check(&[1.0, 2.0]));
        assert!(!sign_split_check(&[1.0, 1e-12]));
    }
}
