//! CSV writers for cross-implementation testing and experiment output.
//!
//! All files are UTF-8, comma-separated, with one header row. Floats are
//! written with `{:.17e}` so a reader recovers them bit-exactly.
//!
//! Layouts:
//!
//! - operator: header `row,node_0,...,node_{n-1}`, then one CSV row per
//!   operator row with values in node order (node-major).
//! - measure: header `node,x0,x1,quad_weight,mass`, one row per grid node.
//! - observation: `index,value`.
//! - solve trace: `iteration,loss,max_mass`.
//! - certificate: `index,lambda_tilde` rows, then `shift_c,dual_value,
//!   certified` echoed in the trailing rows.
//! - diagnostics: single data row keyed by the header.

use std::io::Write;

use crate::analysis::SparsityDiagnostics;
use crate::dual::CertificateReport;
use crate::error::Result;
use crate::operators::{DiscreteMeasure, ForwardOperator, Observation};
use crate::solvers::SolveReport;

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

pub fn write_operator_csv<W: Write>(a: &ForwardOperator, out: &mut W) -> Result<()> {
    write!(out, "row")?;
    for j in 0..a.n_nodes() {
        write!(out, ",node_{j}")?;
    }
    writeln!(out)?;
    for i in 0..a.n_rows() {
        let mut dense = vec![0.0; a.n_nodes()];
        for (j, v) in a.row(i) {
            dense[j] = v;
        }
        write!(out, "{i}")?;
        for v in dense {
            write!(out, ",{}", fmt(v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_measure_csv<W: Write>(mu: &DiscreteMeasure, out: &mut W) -> Result<()> {
    writeln!(out, "node,x0,x1,quad_weight,mass")?;
    let grid = mu.grid();
    for (j, &mass) in mu.masses().iter().enumerate() {
        let p = grid.node(j);
        writeln!(
            out,
            "{j},{},{},{},{}",
            fmt(p[0]),
            fmt(p[1]),
            fmt(grid.quad_weights()[j]),
            fmt(mass)
        )?;
    }
    Ok(())
}

pub fn write_observation_csv<W: Write>(y: &Observation, out: &mut W) -> Result<()> {
    writeln!(out, "index,value")?;
    for (i, &v) in y.values().iter().enumerate() {
        writeln!(out, "{i},{}", fmt(v))?;
    }
    Ok(())
}

pub fn write_trace_csv<W: Write>(report: &SolveReport, out: &mut W) -> Result<()> {
    writeln!(out, "iteration,loss,max_mass")?;
    for (k, (loss, max)) in report
        .loss_trace
        .iter()
        .zip(&report.max_trace)
        .enumerate()
    {
        writeln!(out, "{k},{},{}", fmt(*loss), fmt(*max))?;
    }
    Ok(())
}

pub fn write_certificate_csv<W: Write>(report: &CertificateReport, out: &mut W) -> Result<()> {
    writeln!(out, "index,lambda_tilde")?;
    for (i, &l) in report.lambda_tilde.iter().enumerate() {
        writeln!(out, "{i},{}", fmt(l))?;
    }
    writeln!(out, "shift_c,{}", fmt(report.shift_c))?;
    writeln!(out, "dual_value,{}", fmt(report.dual_value))?;
    writeln!(out, "certified,{}", report.certified)?;
    Ok(())
}

pub fn write_diagnostics_csv<W: Write>(d: &SparsityDiagnostics, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "support_size,phi_star_min,stationarity_residual,certified_sparse,support_in_near_argmin"
    )?;
    writeln!(
        out,
        "{},{},{},{},{}",
        d.support_nodes.len(),
        fmt(d.phi_star_min),
        fmt(d.stationarity_residual),
        d.certified_sparse,
        d.support_in_near_argmin
    )?;
    Ok(())
}
