//! Parallel-beam line-integral operator on `[0, 1]^2`.
//!
//! Rays are laid out with angles uniform in `[0, pi)` and tangential
//! offsets cell-centered across a detector of half-width `sqrt(2)/2`
//! (enough to cover the square at every angle). Each row samples the ray's
//! intersection length with each pixel, exact per pixel (Siddon-style
//! crossing enumeration), divided by the pixel area so that applying the
//! operator to a measure integrates its density along the ray.
//!
//! Rays that miss the square produce no row: the `a_i != 0` invariant is
//! kept by dropping them, so the row count can be smaller than
//! `n_angles * n_tangential`.

use super::{ForwardOperator, Grid};
use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// Intersection of the line `origin + t * dir` (unit `dir`) with the unit
/// square, as a parameter interval.
fn clip_to_square(origin: [f64; 2], dir: [f64; 2]) -> Option<(f64, f64)> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for axis in 0..2 {
        let o = origin[axis];
        let d = dir[axis];
        if d.abs() < EPS {
            if o <= 0.0 || o >= 1.0 {
                return None;
            }
        } else {
            let ta = -o / d;
            let tb = (1.0 - o) / d;
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
        }
    }
    (t1 - t0 > EPS).then_some((t0, t1))
}

/// Exact per-pixel intersection lengths of one ray with the n-by-n pixel
/// grid. Node index is `iy * n + ix`.
fn trace_ray(origin: [f64; 2], dir: [f64; 2], n: usize) -> Vec<(usize, f64)> {
    let Some((t0, t1)) = clip_to_square(origin, dir) else {
        return Vec::new();
    };
    let h = 1.0 / n as f64;
    // All parameters where the ray crosses a pixel boundary, plus the ends.
    let mut cuts = vec![t0, t1];
    for axis in 0..2 {
        let d = dir[axis];
        if d.abs() < EPS {
            continue;
        }
        for k in 1..n {
            let t = (k as f64 * h - origin[axis]) / d;
            if t > t0 + EPS && t < t1 - EPS {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut segments: Vec<(usize, f64)> = Vec::with_capacity(cuts.len());
    for pair in cuts.windows(2) {
        let len = pair[1] - pair[0];
        if len <= EPS {
            continue;
        }
        let tm = 0.5 * (pair[0] + pair[1]);
        let x = origin[0] + tm * dir[0];
        let y = origin[1] + tm * dir[1];
        let ix = ((x * n as f64).floor() as isize).clamp(0, n as isize - 1) as usize;
        let iy = ((y * n as f64).floor() as isize).clamp(0, n as isize - 1) as usize;
        segments.push((iy * n + ix, len));
    }
    segments
}

/// Builds the parallel-beam operator with `n_angles` views uniform in
/// `[0, pi)` and `n_tangential` offsets per view.
pub fn make_radon_operator(
    n_pixels: usize,
    n_angles: usize,
    n_tangential: usize,
) -> Result<ForwardOperator> {
    if n_pixels < 1 || n_angles < 1 || n_tangential < 1 {
        return Err(Error::InvalidConfig(
            "radon operator sizes must all be at least 1".into(),
        ));
    }
    let grid = Grid::unit_square(n_pixels)?;
    let area = 1.0 / (n_pixels * n_pixels) as f64;
    let half_width = std::f64::consts::FRAC_1_SQRT_2;
    let step = 2.0 * half_width / n_tangential as f64;
    let mut rows = Vec::with_capacity(n_angles * n_tangential);
    for k in 0..n_angles {
        let theta = k as f64 * std::f64::consts::PI / n_angles as f64;
        let (sin, cos) = theta.sin_cos();
        let axis = [cos, sin];
        let dir = [-sin, cos];
        for l in 0..n_tangential {
            let s = -half_width + (l as f64 + 0.5) * step;
            let origin = [0.5 + s * axis[0], 0.5 + s * axis[1]];
            let segments = trace_ray(origin, dir, n_pixels);
            if segments.iter().map(|(_, len)| len).sum::<f64>() > EPS {
                rows.push(
                    segments
                        .into_iter()
                        .map(|(node, len)| (node, len / area))
                        .collect(),
                );
            }
        }
    }
    ForwardOperator::from_sparse_rows(grid, rows)
}

/// Exposed for the ray-geometry oracle tests: the layout of ray `origin`
/// and unit `dir` for view angle `theta` and tangential offset `s`.
pub fn ray_geometry(theta: f64, s: f64) -> ([f64; 2], [f64; 2]) {
    let (sin, cos) = theta.sin_cos();
    ([0.5 + s * cos, 0.5 + s * sin], [-sin, cos])
}
