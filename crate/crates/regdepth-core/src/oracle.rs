//! Brute-force tilt-simulation reference for regression depth.
//!
//! [`rdepth_oracle`] simulates the tilt definition directly: for every
//! candidate rotation axis it solves each observation's crossing time
//! along the tilt pencil and counts the points met on the way to the
//! vertical position, in both rotation directions. It deliberately avoids
//! the sweep/prefix machinery of the production path and uses a much
//! denser axis family (data-determined normals, small angular
//! perturbations, and a fixed angular grid), so agreement with
//! [`crate::depth::rdepth_exact`] is evidence for the production
//! candidate set, not a shared assumption.
//!
//! Size-guarded to `n <= 12`, `p <= 3`; this is a test oracle, not a
//! production code path.

use alloc::vec::Vec;

use crate::dataset::{residual_signs, residuals, Dataset, Fit, Sign};
use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg;

const MAX_N: usize = 12;
const MAX_P: usize = 3;
const GRID_STEPS: usize = 720;

/// Least number of observations touched when tilting the fit's hyperplane
/// to any vertical position, by direct simulation.
pub fn rdepth_oracle(d: &Dataset, f: &Fit) -> Result<usize> {
    if d.n() > MAX_N || d.p() > MAX_P {
        return Err(Error::SizeGuard {
            n: d.n(),
            p: d.p(),
            max_n: MAX_N,
            max_p: MAX_P,
        });
    }
    let signs = residual_signs(d, f)?;
    let raw = residuals(d, f)?;

    let dirs = candidate_directions(d);
    let mut best = usize::MAX;
    for u in &dirs {
        let proj: Vec<f64> = (0..d.n()).map(|i| linalg::dot(u, d.x(i))).collect();
        for v in candidate_cuts(&proj) {
            let c = tilt_touch_count(&signs, &raw, &proj, v);
            best = best.min(c);
            if best == 0 {
                return Ok(0);
            }
        }
    }
    Ok(best)
}

/// Counts, for both rotation directions of the pencil through the axis
/// `{x : u'x = v}`, how many observations the moving hyperplane meets, and
/// returns the smaller count.
///
/// Along the pencil the height over `x_i` is `height_beta(x_i) + t (s_i - v)`,
/// so observation `i` is met at crossing time `t_i = r_i / (s_i - v)`; the
/// two rotation directions are `t` running over `[0, +inf)` and `(-inf, 0]`.
/// Zero residuals (under the shared sign tolerance) sit on the starting
/// hyperplane and are met by both rotations; points on the axis with a
/// nonzero residual have no finite crossing time and are met by neither.
fn tilt_touch_count(signs: &[Sign], raw: &[f64], proj: &[f64], v: f64) -> usize {
    let mut plus = 0usize;
    let mut minus = 0usize;
    for i in 0..signs.len() {
        match signs[i] {
            Sign::Zero => {
                plus += 1;
                minus += 1;
            }
            _ => {
                let ds = proj[i] - v;
                if ds == 0.0 {
                    continue;
                }
                let t = raw[i] / ds;
                if t > 0.0 {
                    plus += 1;
                } else {
                    minus += 1;
                }
            }
        }
    }
    plus.min(minus)
}

fn candidate_directions(d: &Dataset) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    if d.x_dim() == 1 {
        dirs.push(alloc::vec![1.0]);
        return dirs;
    }
    // Normals of segments between projected points, with small angular
    // perturbations on either side.
    for i in 0..d.n() {
        for j in i + 1..d.n() {
            let dx = d.x(j)[0] - d.x(i)[0];
            let dy = d.x(j)[1] - d.x(i)[1];
            let len = fmath::sqrt(dx * dx + dy * dy);
            if len == 0.0 {
                continue;
            }
            let base = atan2_approx(dx / len, -(dy / len));
            for eps in [0.0, 1e-7, -1e-7, 1e-4, -1e-4] {
                dirs.push(angle_dir(base + eps));
            }
        }
    }
    dirs.push(alloc::vec![1.0, 0.0]);
    dirs.push(alloc::vec![0.0, 1.0]);
    for k in 0..GRID_STEPS {
        let theta = core::f64::consts::PI * (k as f64) / (GRID_STEPS as f64);
        dirs.push(angle_dir(theta));
    }
    dirs
}

fn angle_dir(theta: f64) -> Vec<f64> {
    alloc::vec![cos_approx(theta), sin_approx(theta)]
}

fn candidate_cuts(proj: &[f64]) -> Vec<f64> {
    let mut sorted = proj.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let spread = (sorted[sorted.len() - 1] - sorted[0]).max(1.0);
    let eps = 1e-7 * spread;
    let mut cuts = Vec::new();
    for (k, &s) in sorted.iter().enumerate() {
        cuts.push(s);
        cuts.push(s - eps);
        cuts.push(s + eps);
        if k + 1 < sorted.len() {
            cuts.push(0.5 * (s + sorted[k + 1]));
        }
    }
    cuts.push(sorted[0] - spread);
    cuts.push(sorted[sorted.len() - 1] + spread);
    cuts
}

// Trig for the direction grid; libm-backed when no_std.
#[cfg(feature = "std")]
fn cos_approx(x: f64) -> f64 {
    x.cos()
}
#[cfg(not(feature = "std"))]
fn cos_approx(x: f64) -> f64 {
    libm::cos(x)
}
#[cfg(feature = "std")]
fn sin_approx(x: f64) -> f64 {
    x.sin()
}
#[cfg(not(feature = "std"))]
fn sin_approx(x: f64) -> f64 {
    libm::sin(x)
}
#[cfg(feature = "std")]
fn atan2_approx(y: f64, x: f64) -> f64 {
    y.atan2(x)
}
#[cfg(not(feature = "std"))]
fn atan2_approx(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
