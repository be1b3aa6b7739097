//! Tomography experiment: disc phantom, scaled Poisson data at dose `t`
//! (dispersion `1/t`), multiplicative updates, certificate trace, and
//! image snapshots.

use std::io::Write;

use betacone::analysis::sparsity_diagnostics;
use betacone::divergence::BetaParam;
use betacone::dual::dual_certificate;
use betacone::export::{write_diagnostics_csv, write_trace_csv};
use betacone::noise::{sample, NoiseModel, NoiseSpec};
use betacone::operators::{make_radon_operator, DiscreteMeasure, Observation};
use betacone::solvers::{run_multiplicative, MultiplicativeOptions};

use crate::config::ExperimentConfig;
use crate::output::{csv_file, write_grayscale_png};
use crate::phantom;
use crate::Result;

/// Certificates are evaluated on every kept snapshot; one adjoint plus m
/// scalar minimizations each, so a sparse cadence keeps them cheap.
pub const CERTIFICATE_EVERY: usize = 10;

/// Support and near-argmin thresholds for the reported diagnostics.
const SUPPORT_REL_TOL: f64 = 1e-6;
const NEAR_ARGMIN_TOL: f64 = 1e-6;

pub fn run(config: &ExperimentConfig) -> Result<()> {
    std::fs::create_dir_all(&config.out_dir)?;
    let beta = BetaParam::new(config.beta)?;
    let echo = config.echo();
    let a = make_radon_operator(config.n_pixels, config.n_angles, config.n_tangential)?;
    let shape = a.grid().shape();

    let densities = phantom::derenzo(config.n_pixels);
    write_grayscale_png(
        &config.out_dir.join("tomo_phantom.png"),
        &densities,
        shape,
        &echo,
    )?;
    let truth = DiscreteMeasure::from_density(a.grid().clone(), &densities)?;
    let w = a.apply(&truth)?;
    let spec = NoiseSpec::new(NoiseModel::ScaledPoisson, 1.0 / config.t, config.seed)?;
    let y = Observation::new(sample(&w, &spec)?.values)?;

    let mu0 = DiscreteMeasure::constant_density(a.grid().clone(), 1.0)?;
    let opts = MultiplicativeOptions {
        max_iters: config.iterations,
        snapshot_every: CERTIFICATE_EVERY,
        ..Default::default()
    };
    let report = run_multiplicative(&mu0, &y, &a, beta, &opts)?;

    let mut trace = csv_file(&config.out_dir.join("tomo_trace.csv"))?;
    write_trace_csv(&report, &mut trace)?;

    let mut certs = csv_file(&config.out_dir.join("tomo_certificates.csv"))?;
    writeln!(certs, "iteration,shift_c,dual_value,certified")?;
    for (k, mu) in &report.iterates_kept {
        let cert = dual_certificate(mu, &y, &a, beta)?;
        writeln!(
            certs,
            "{k},{},{},{}",
            super::fmt(cert.shift_c),
            super::fmt(cert.dual_value),
            cert.certified
        )?;
    }

    let final_cert = dual_certificate(&report.final_mu, &y, &a, beta)?;
    let diag = sparsity_diagnostics(
        &report.final_mu,
        &y,
        &a,
        beta,
        SUPPORT_REL_TOL,
        NEAR_ARGMIN_TOL,
        &final_cert,
    )?;
    let mut diag_out = csv_file(&config.out_dir.join("tomo_diagnostics.csv"))?;
    write_diagnostics_csv(&diag, &mut diag_out)?;

    // reconstruction snapshots: an early one (~a tenth of the run) and the
    // final iterate
    let early_target = (config.iterations / 10).max(1);
    if let Some((k, mu)) = report
        .iterates_kept
        .iter()
        .min_by_key(|(k, _)| k.abs_diff(early_target))
    {
        write_grayscale_png(
            &config.out_dir.join(format!("tomo_iter{k}.png")),
            &mu.densities(),
            shape,
            &echo,
        )?;
    }
    write_grayscale_png(
        &config
            .out_dir
            .join(format!("tomo_iter{}.png", report.iterations_run)),
        &report.final_mu.densities(),
        shape,
        &echo,
    )?;
    Ok(())
}
