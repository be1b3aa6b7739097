//! Shared fixtures for the benchmark targets.

use betacone::noise::{sample, NoiseModel, NoiseSpec};
use betacone::operators::{make_radon_operator, DiscreteMeasure, ForwardOperator, Observation};

/// A mid-size tomography instance: smooth blob phantom, parallel-beam
/// operator, scaled Poisson data.
pub fn tomo_fixture(n_pixels: usize) -> (ForwardOperator, Observation, DiscreteMeasure) {
    let a = make_radon_operator(n_pixels, 40, (n_pixels * 3) / 2).unwrap();
    let densities: Vec<f64> = a
        .grid()
        .nodes()
        .iter()
        .map(|p| {
            let (dx, dy) = (p[0] - 0.5, p[1] - 0.45);
            (1.0 - 12.0 * (dx * dx + dy * dy)).max(0.0)
        })
        .collect();
    let truth = DiscreteMeasure::from_density(a.grid().clone(), &densities).unwrap();
    let w = a.apply(&truth).unwrap();
    let spec = NoiseSpec::new(NoiseModel::ScaledPoisson, 0.5, 1).unwrap();
    let y = Observation::new(sample(&w, &spec).unwrap().values).unwrap();
    let start = DiscreteMeasure::constant_density(a.grid().clone(), 1.0).unwrap();
    (a, y, start)
}
