//! Samplers for the noise models whose maximum-likelihood estimators are
//! the beta-divergence fits: Gaussian (beta = 2), scaled Poisson
//! (beta = 1), compound Poisson-Gamma (0 < beta < 1) and multiplicative
//! Gamma (beta = 0). Components are drawn independently with mean `w_i`
//! and dispersion `phi`; every model concentrates on its mean as
//! `phi -> 0`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};

use crate::divergence::{BetaParam, Regime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// `y = N(w, phi)` with variance `phi`. Negative draws are clamped to
    /// zero (the optimization domain is nonnegative) and counted.
    Gaussian,
    /// `y = phi * Poisson(w / phi)`.
    ScaledPoisson,
    /// `y = sum_{j=1}^n g_j` with `n ~ Poisson(w^beta / (phi beta))` and
    /// `g_j ~ Gamma(beta/(1-beta), rate w^(beta-1)/(phi (1-beta)))`.
    /// Carries an atom at zero of probability `exp(-lambda)`.
    CompoundPoissonGamma,
    /// `y = w * Gamma(1/phi, rate 1/phi)`; requires strictly positive
    /// means.
    MultiplicativeGamma,
}

/// A noise model with its dispersion and seed. `beta` is consulted only by
/// the compound Poisson-Gamma model and must then lie strictly inside
/// `(0, 1)`.
#[derive(Debug, Clone)]
pub struct NoiseSpec {
    pub model: NoiseModel,
    pub phi: f64,
    pub beta: Option<BetaParam>,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, phi: f64, seed: u64) -> Result<Self> {
        if model == NoiseModel::CompoundPoissonGamma {
            return Err(Error::InvalidConfig(
                "compound Poisson-Gamma needs a beta in (0, 1); use NoiseSpec::compound".into(),
            ));
        }
        Self::check_phi(phi)?;
        Ok(Self {
            model,
            phi,
            beta: None,
            seed,
        })
    }

    pub fn compound(phi: f64, beta: BetaParam, seed: u64) -> Result<Self> {
        Self::check_phi(phi)?;
        if beta.regime() != Regime::FractionalLow {
            return Err(Error::InvalidConfig(format!(
                "compound Poisson-Gamma requires 0 < beta < 1, got {}",
                beta.value()
            )));
        }
        Ok(Self {
            model: NoiseModel::CompoundPoissonGamma,
            phi,
            beta: Some(beta),
            seed,
        })
    }

    fn check_phi(phi: f64) -> Result<()> {
        if phi <= 0.0 || !phi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "dispersion must be positive, got {phi}"
            )));
        }
        Ok(())
    }

    /// Same model and dispersion with a different seed.
    pub fn reseeded(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// One synthetic observation.
#[derive(Debug, Clone)]
pub struct NoiseSample {
    pub values: Vec<f64>,
    /// Number of Gaussian draws clamped up to zero (0 for other models).
    pub clamped: usize,
}

/// Draws one observation with mean vector `w`. Deterministic given the
/// spec (including its seed); distinct components use independent draws
/// from the same stream.
pub fn sample(w: &[f64], spec: &NoiseSpec) -> Result<NoiseSample> {
    if let Some(&bad) = w.iter().find(|v| **v < 0.0 || v.is_nan()) {
        return Err(Error::Negative {
            name: "w",
            value: bad,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let phi = spec.phi;
    let mut clamped = 0usize;
    let values = match spec.model {
        NoiseModel::Gaussian => {
            let noise = Normal::new(0.0, phi.sqrt()).expect("positive std dev");
            w.iter()
                .map(|&wi| {
                    let v = wi + noise.sample(&mut rng);
                    if v < 0.0 {
                        clamped += 1;
                        0.0
                    } else {
                        v
                    }
                })
                .collect()
        }
        NoiseModel::ScaledPoisson => w
            .iter()
            .map(|&wi| {
                if wi == 0.0 {
                    return Ok(0.0);
                }
                let p = Poisson::new(wi / phi).map_err(|e| {
                    Error::InvalidConfig(format!("poisson rate {}: {e}", wi / phi))
                })?;
                Ok(phi * p.sample(&mut rng))
            })
            .collect::<Result<_>>()?,
        NoiseModel::CompoundPoissonGamma => {
            let beta = spec
                .beta
                .ok_or_else(|| Error::InvalidConfig("compound model needs beta".into()))?;
            let b = beta.value();
            let shape = b / (1.0 - b);
            w.iter()
                .map(|&wi| {
                    if wi == 0.0 {
                        return Ok(0.0);
                    }
                    let lambda = wi.powf(b) / (phi * b);
                    let rate = wi.powf(b - 1.0) / (phi * (1.0 - b));
                    let n = Poisson::new(lambda)
                        .map_err(|e| Error::InvalidConfig(format!("poisson rate {lambda}: {e}")))?
                        .sample(&mut rng) as u64;
                    let gamma = Gamma::new(shape, 1.0 / rate)
                        .map_err(|e| Error::InvalidConfig(format!("gamma({shape}): {e}")))?;
                    Ok((0..n).map(|_| gamma.sample(&mut rng)).sum())
                })
                .collect::<Result<_>>()?
        }
        NoiseModel::MultiplicativeGamma => {
            if let Some(&bad) = w.iter().find(|v| **v <= 0.0) {
                return Err(Error::InvalidObservation(format!(
                    "multiplicative Gamma requires strictly positive means, got {bad}"
                )));
            }
            let inv = 1.0 / phi;
            let gamma = Gamma::new(inv, phi)
                .map_err(|e| Error::InvalidConfig(format!("gamma(1/phi): {e}")))?;
            w.iter().map(|&wi| wi * gamma.sample(&mut rng)).collect()
        }
    };
    Ok(NoiseSample { values, clamped })
}

/// One draw per dispersion value, with seeds derived from the base seed,
/// to exhibit concentration on the mean as `phi` shrinks.
pub fn dispersion_sweep(
    w: &[f64],
    spec_base: &NoiseSpec,
    phis: &[f64],
) -> Result<Vec<NoiseSample>> {
    phis.iter()
        .enumerate()
        .map(|(i, &phi)| {
            NoiseSpec::check_phi(phi)?;
            let mut spec = spec_base
                .reseeded(derive_seed(spec_base.seed, i as u64));
            spec.phi = phi;
            sample(w, &spec)
        })
        .collect()
}

/// Splitmix-style seed derivation for sweep entries.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ (index.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
