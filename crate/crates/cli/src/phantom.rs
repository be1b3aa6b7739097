//! Bundled phantom layouts, as density images on the `[0, 1]^2` pixel
//! lattice (row-major, node `iy * n + ix`).

/// Disc phantom: circles of two intensities on a zero background: a small
/// central rod plus a ring of rods of growing radius, loosely following
/// the resolution-phantom idea.
pub fn derenzo(n: usize) -> Vec<f64> {
    let discs: &[(f64, f64, f64, f64)] = &[
        // (cx, cy, radius, intensity)
        (0.50, 0.50, 0.060, 2.0),
        (0.78, 0.50, 0.045, 1.0),
        (0.64, 0.74, 0.055, 2.0),
        (0.36, 0.74, 0.065, 1.0),
        (0.22, 0.50, 0.075, 2.0),
        (0.36, 0.26, 0.085, 1.0),
        (0.64, 0.26, 0.095, 2.0),
    ];
    render(n, |x, y| {
        let mut v = 0.0;
        for &(cx, cy, r, intensity) in discs {
            let (dx, dy) = (x - cx, y - cy);
            if dx * dx + dy * dy <= r * r {
                v += intensity;
            }
        }
        v
    })
}

/// Standard ten-ellipse head phantom, mapped from `[-1, 1]^2` onto the
/// unit square. Intensities accumulate to nonnegative tissue values.
pub fn shepp_logan(n: usize) -> Vec<f64> {
    // (semi-axis a, semi-axis b, center x, center y, rotation degrees, intensity)
    let ellipses: &[(f64, f64, f64, f64, f64, f64)] = &[
        (0.69, 0.92, 0.0, 0.0, 0.0, 2.0),
        (0.6624, 0.8740, 0.0, -0.0184, 0.0, -0.98),
        (0.11, 0.31, 0.22, 0.0, -18.0, -0.02),
        (0.16, 0.41, -0.22, 0.0, 18.0, -0.02),
        (0.21, 0.25, 0.0, 0.35, 0.0, 0.01),
        (0.046, 0.046, 0.0, 0.1, 0.0, 0.01),
        (0.046, 0.046, 0.0, -0.1, 0.0, 0.01),
        (0.046, 0.023, -0.08, -0.605, 0.0, 0.01),
        (0.023, 0.023, 0.0, -0.606, 0.0, 0.01),
        (0.023, 0.046, 0.06, -0.605, 0.0, 0.01),
    ];
    render(n, |x, y| {
        // unit square -> [-1, 1]^2
        let (px, py) = (2.0 * x - 1.0, 2.0 * y - 1.0);
        let mut v: f64 = 0.0;
        for &(a, b, cx, cy, deg, intensity) in ellipses {
            let phi = deg.to_radians();
            let (dx, dy) = (px - cx, py - cy);
            let u = dx * phi.cos() + dy * phi.sin();
            let w = -dx * phi.sin() + dy * phi.cos();
            if (u / a).powi(2) + (w / b).powi(2) <= 1.0 {
                v += intensity;
            }
        }
        v.max(0.0)
    })
}

fn render(n: usize, field: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let h = 1.0 / n as f64;
    let mut out = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            out.push(field((ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phantoms_are_nonnegative_and_structured() {
        for values in [derenzo(64), shepp_logan(64)] {
            assert_eq!(values.len(), 64 * 64);
            assert!(values.iter().all(|&v| v >= 0.0));
            let max = values.iter().cloned().fold(0.0f64, f64::max);
            assert!(max > 0.5);
            // background present
            assert!(values.iter().filter(|&&v| v == 0.0).count() > 64);
        }
    }
}
