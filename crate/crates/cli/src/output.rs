//! File output helpers: grayscale PNGs with auditable normalization
//! sidecars, simple profile plots, and CSV conveniences.
//!
//! Every PNG `foo.png` is written together with `foo.meta.txt` recording
//! the min-max normalization constants (so 8-bit pixel values map back to
//! data values) and an echo of the run configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use image::{GrayImage, Luma};

use crate::Result;

fn meta_path(png: &Path) -> PathBuf {
    png.with_extension("meta.txt")
}

fn write_meta(png: &Path, lines: &[String], config_echo: &[String]) -> Result<()> {
    let mut out = BufWriter::new(File::create(meta_path(png))?);
    for line in lines {
        writeln!(out, "{line}")?;
    }
    writeln!(out, "--- config ---")?;
    for line in config_echo {
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Writes a 2D field (row-major, image row = lattice row iy) as an 8-bit
/// grayscale PNG with min-max normalization.
pub fn write_grayscale_png(
    path: &Path,
    values: &[f64],
    shape: (usize, usize),
    config_echo: &[String],
) -> Result<()> {
    let (nx, ny) = shape;
    assert_eq!(values.len(), nx * ny, "field size must match the shape");
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = if hi > lo { 255.0 / (hi - lo) } else { 0.0 };
    let img = GrayImage::from_fn(nx as u32, ny as u32, |x, y| {
        let v = values[y as usize * nx + x as usize];
        Luma([((v - lo) * scale).round().clamp(0.0, 255.0) as u8])
    });
    img.save(path)?;
    write_meta(
        path,
        &[
            format!("normalization_min = {lo:.17e}"),
            format!("normalization_max = {hi:.17e}"),
            format!("rows = {ny}"),
            format!("cols = {nx}"),
            "pixel_value = round(255 * (v - min) / (max - min))".to_string(),
        ],
        config_echo,
    )
}

/// Renders a 1D profile as a polyline on a white canvas (black line),
/// min-max normalized, with the same sidecar convention.
pub fn write_profile_png(
    path: &Path,
    values: &[f64],
    config_echo: &[String],
) -> Result<()> {
    let (width, height, margin) = (420u32, 280u32, 10i64);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut img = GrayImage::from_pixel(width, height, Luma([255u8]));
    let plot_w = (width as i64 - 2 * margin) as f64;
    let plot_h = (height as i64 - 2 * margin) as f64;
    let point = |k: usize| -> (i64, i64) {
        let fx = if values.len() > 1 {
            k as f64 / (values.len() - 1) as f64
        } else {
            0.5
        };
        let fy = (values[k] - lo) / span;
        (
            margin + (fx * plot_w).round() as i64,
            margin + ((1.0 - fy) * plot_h).round() as i64,
        )
    };
    let mut draw = |x: i64, y: i64| {
        if x >= 0 && y >= 0 && (x as u32) < width && (y as u32) < height {
            img.put_pixel(x as u32, y as u32, Luma([0u8]));
        }
    };
    for k in 0..values.len() {
        let (x0, y0) = point(k);
        if k + 1 < values.len() {
            let (x1, y1) = point(k + 1);
            let steps = (x1 - x0).abs().max((y1 - y0).abs()).max(1);
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                draw(
                    x0 + ((x1 - x0) as f64 * t).round() as i64,
                    y0 + ((y1 - y0) as f64 * t).round() as i64,
                );
            }
        } else {
            draw(x0, y0);
        }
    }
    img.save(path)?;
    write_meta(
        path,
        &[
            format!("normalization_min = {lo:.17e}"),
            format!("normalization_max = {hi:.17e}"),
            format!("samples = {}", values.len()),
        ],
        config_echo,
    )
}

/// Opens a buffered CSV file for writing.
pub fn csv_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}
