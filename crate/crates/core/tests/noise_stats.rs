//! Monte Carlo checks of the noise samplers: every model has mean `w`,
//! the scaled Poisson has variance `phi w`, the compound model carries the
//! predicted atom at zero, and draws concentrate on the mean as the
//! dispersion shrinks.

use betacone::divergence::BetaParam;
use betacone::noise::{derive_seed, dispersion_sweep, sample, NoiseModel, NoiseSpec};

fn mean_and_var(draws: &[f64]) -> (f64, f64) {
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let var = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn draws_of(spec: &NoiseSpec, w: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            sample(&[w], &spec.reseeded(derive_seed(spec.seed, k as u64)))
                .unwrap()
                .values[0]
        })
        .collect()
}

#[test]
fn all_models_have_mean_w() {
    let w = 2.0;
    let n = 20_000;
    let beta = BetaParam::new(0.5).unwrap();
    let specs = [
        NoiseSpec::new(NoiseModel::Gaussian, 0.1, 100).unwrap(),
        NoiseSpec::new(NoiseModel::ScaledPoisson, 0.1, 200).unwrap(),
        NoiseSpec::compound(0.1, beta, 300).unwrap(),
        NoiseSpec::new(NoiseModel::MultiplicativeGamma, 0.1, 400).unwrap(),
    ];
    for spec in &specs {
        let draws = draws_of(spec, w, n);
        let (mean, var) = mean_and_var(&draws);
        let stderr = (var / n as f64).sqrt();
        assert!(
            (mean - w).abs() <= 4.0 * stderr,
            "{:?}: mean {mean} vs {w} (stderr {stderr})",
            spec.model
        );
    }
}

#[test]
fn scaled_poisson_variance() {
    // Var(phi P(w/phi)) = phi w
    let (w, phi) = (6.0, 0.25);
    let spec = NoiseSpec::new(NoiseModel::ScaledPoisson, phi, 77).unwrap();
    let draws = draws_of(&spec, w, 20_000);
    let (_, var) = mean_and_var(&draws);
    assert!(
        (var - phi * w).abs() <= 0.2 * phi * w,
        "variance {var} vs {}",
        phi * w
    );
}

#[test]
fn compound_model_zero_atom() {
    // P(y = 0) = exp(-lambda) with lambda = w^beta / (phi beta)
    let (w, phi, b): (f64, f64, f64) = (1.0, 2.0, 0.5);
    let lambda = w.powf(b) / (phi * b);
    let expected = (-lambda).exp();
    let spec = NoiseSpec::compound(phi, BetaParam::new(b).unwrap(), 31).unwrap();
    let n = 20_000;
    let zeros = draws_of(&spec, w, n).iter().filter(|v| **v == 0.0).count();
    let p_hat = zeros as f64 / n as f64;
    let stderr = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!(
        (p_hat - expected).abs() <= 4.0 * stderr + 1e-3,
        "zero mass {p_hat} vs {expected}"
    );
}

#[test]
fn concentration_as_dispersion_vanishes() {
    let w = [1.0, 2.0];
    let spec = NoiseSpec::new(NoiseModel::MultiplicativeGamma, 1.0, 5).unwrap();
    // phi = 1e-6: within 0.05 of the mean in at least 99 of 100 seeds
    let mut hits = 0;
    for seed in 0..100 {
        let s = sample(&w, &spec.reseeded(seed)).unwrap();
        let dev = s
            .values
            .iter()
            .zip(&w)
            .map(|(v, m)| (v - m).abs())
            .fold(0.0f64, f64::max);
        let mut tight = spec.clone();
        tight.phi = 1e-6;
        let st = sample(&w, &tight.reseeded(seed)).unwrap();
        let dev_tight = st
            .values
            .iter()
            .zip(&w)
            .map(|(v, m)| (v - m).abs())
            .fold(0.0f64, f64::max);
        if dev_tight <= 0.05 {
            hits += 1;
        }
        // larger dispersion should usually deviate more; tracked via the
        // median below rather than per-seed
        let _ = dev;
    }
    assert!(hits >= 99, "only {hits}/100 concentrated");

    // median deviation decreases along the sweep
    let phis = [1.0, 1e-2, 1e-4];
    let mut medians = Vec::new();
    for (i, _) in phis.iter().enumerate() {
        let mut devs: Vec<f64> = (0..100)
            .map(|seed| {
                let sweep = dispersion_sweep(&w, &spec.reseeded(seed), &phis).unwrap();
                sweep[i]
                    .values
                    .iter()
                    .zip(&w)
                    .map(|(v, m)| (v - m).abs())
                    .fold(0.0f64, f64::max)
            })
            .collect();
        devs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push(devs[50]);
    }
    assert!(
        medians[0] > medians[1] && medians[1] > medians[2],
        "medians not strictly decreasing: {medians:?}"
    );
}
