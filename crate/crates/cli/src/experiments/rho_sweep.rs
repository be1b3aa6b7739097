//! Regularization sweep: TV-regularized reconstructions of the head
//! phantom across the rho list, tracking the maximum reconstruction value.

use std::io::Write;

use betacone::noise::{sample, NoiseModel, NoiseSpec};
use betacone::operators::{make_radon_operator, DiscreteMeasure, Observation};
use betacone::solvers::{pdhg_tv, tv_objective, PdhgConfig};

use crate::config::ExperimentConfig;
use crate::output::{csv_file, write_grayscale_png};
use crate::phantom;
use crate::{CliError, Result};

pub fn run(config: &ExperimentConfig) -> Result<()> {
    if config.beta != 2.0 {
        return Err(CliError::Config(format!(
            "the TV-regularized solver handles the Euclidean case only; got beta = {}",
            config.beta
        )));
    }
    std::fs::create_dir_all(&config.out_dir)?;
    let echo = config.echo();
    let a = make_radon_operator(config.n_pixels, config.n_angles, config.n_tangential)?;
    let shape = a.grid().shape();

    let densities = phantom::shepp_logan(config.n_pixels);
    write_grayscale_png(
        &config.out_dir.join("rho_sweep_phantom.png"),
        &densities,
        shape,
        &echo,
    )?;
    let truth = DiscreteMeasure::from_density(a.grid().clone(), &densities)?;
    let w = a.apply(&truth)?;
    let spec = NoiseSpec::new(NoiseModel::ScaledPoisson, 1.0 / config.t, config.seed)?;
    let y = Observation::new(sample(&w, &spec)?.values)?;

    let lowest = config
        .rho_list
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let highest = config
        .rho_list
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);

    let mut csv = csv_file(&config.out_dir.join("rho_sweep.csv"))?;
    writeln!(csv, "rho,max_reconstruction,objective")?;
    for &rho in &config.rho_list {
        let pconfig = PdhgConfig::balanced(&a, rho, config.iterations)?;
        let report = pdhg_tv(&y, &a, &pconfig)?;
        let max_density = report
            .final_mu
            .densities()
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        let objective = tv_objective(&a, &y, report.final_mu.masses(), rho);
        writeln!(
            csv,
            "{},{},{}",
            super::fmt(rho),
            super::fmt(max_density),
            super::fmt(objective)
        )?;
        if rho == lowest {
            write_grayscale_png(
                &config.out_dir.join("rho_sweep_low.png"),
                &report.final_mu.densities(),
                shape,
                &echo,
            )?;
        }
        if rho == highest {
            write_grayscale_png(
                &config.out_dir.join("rho_sweep_high.png"),
                &report.final_mu.densities(),
                shape,
                &echo,
            )?;
        }
    }
    Ok(())
}
