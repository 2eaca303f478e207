//! Datasets, candidate fits, residuals, and exact fits through point
//! subsets.
//!
//! An observation is `(x, y)` with `x` in `R^{p-1}`; a fit is
//! `beta = (intercept, slopes)` in `R^p` describing the hyperplane
//! `y = intercept + x' slopes`. Observation order is significant and
//! preserved: every downstream witness reports original (0-based) indices.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg;

/// Relative factor for the residual zero test; see [`zero_tolerance`].
pub const ZERO_TOLERANCE_FACTOR: f64 = 1e-9;

/// An ordered sample of `n` observations in `R^{p-1} x R`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    p: usize,
    xs: Vec<f64>, // n rows of length p-1, row-major
    ys: Vec<f64>,
    x_norms: Vec<f64>,
    label: String,
}

impl Dataset {
    /// Builds a dataset from `(x, y)` rows. Requires `p >= 2`, every `x`
    /// of length `p - 1`, all coordinates finite, and `n >= p`.
    pub fn new(p: usize, rows: &[(Vec<f64>, f64)], label: impl Into<String>) -> Result<Self> {
        if p < 2 {
            return Err(Error::BadParameter {
                detail: String::from("p must be at least 2"),
            });
        }
        let n = rows.len();
        let mut xs = Vec::with_capacity(n * (p - 1));
        let mut ys = Vec::with_capacity(n);
        for (i, (x, y)) in rows.iter().enumerate() {
            if x.len() != p - 1 {
                return Err(Error::DimensionMismatch {
                    expected: p - 1,
                    got: x.len(),
                });
            }
            if !y.is_finite() || x.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
            xs.extend_from_slice(x);
            ys.push(*y);
        }
        Self::from_flat(p, xs, ys, label)
    }

    /// Builds a dataset from row-major `xs` (length `n * (p-1)`) and `ys`.
    pub fn from_flat(p: usize, xs: Vec<f64>, ys: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if p < 2 {
            return Err(Error::BadParameter {
                detail: String::from("p must be at least 2"),
            });
        }
        let n = ys.len();
        if xs.len() != n * (p - 1) {
            return Err(Error::DimensionMismatch {
                expected: n * (p - 1),
                got: xs.len(),
            });
        }
        if n < p {
            return Err(Error::TooFewPoints { n, p });
        }
        if let Some(i) = ys.iter().position(|y| !y.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: i / (p - 1) });
        }
        let x_norms = (0..n)
            .map(|i| linalg::norm(&xs[i * (p - 1)..(i + 1) * (p - 1)]))
            .collect();
        Ok(Dataset {
            p,
            xs,
            ys,
            x_norms,
            label: label.into(),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.ys.len()
    }

    /// Dimension of the carrier space of `x`, i.e. `p - 1`.
    pub fn x_dim(&self) -> usize {
        self.p - 1
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.xs[i * (self.p - 1)..(i + 1) * (self.p - 1)]
    }

    pub fn y(&self, i: usize) -> f64 {
        self.ys[i]
    }

    pub fn x_norm(&self, i: usize) -> f64 {
        self.x_norms[i]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        (0..self.n()).map(move |i| (self.x(i), self.y(i)))
    }

    /// Returns a copy with `points` appended, in the given order.
    pub fn with_added_points(&self, points: &[(Vec<f64>, f64)], label: impl Into<String>) -> Result<Self> {
        let mut rows: Vec<(Vec<f64>, f64)> = self.rows().map(|(x, y)| (x.to_vec(), y)).collect();
        rows.extend(points.iter().cloned());
        Dataset::new(self.p, &rows, label)
    }

    /// Returns a copy where each observation listed in `indices` is
    /// replaced by `point`.
    pub fn with_replaced_points(
        &self,
        indices: &[usize],
        point: (&[f64], f64),
        label: impl Into<String>,
    ) -> Result<Self> {
        let mut rows: Vec<(Vec<f64>, f64)> = self.rows().map(|(x, y)| (x.to_vec(), y)).collect();
        for &i in indices {
            if i >= rows.len() {
                return Err(Error::DimensionMismatch {
                    expected: rows.len(),
                    got: i,
                });
            }
            rows[i] = (point.0.to_vec(), point.1);
        }
        Dataset::new(self.p, &rows, label)
    }

    /// Applies the regression shift `y_i <- y_i + (1, x_i') b`; the depth
    /// of `beta + b` on the result equals the depth of `beta` here.
    pub fn regression_shifted(&self, b: &[f64]) -> Result<Self> {
        if b.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: b.len(),
            });
        }
        let ys = (0..self.n())
            .map(|i| self.ys[i] + b[0] + linalg::dot(self.x(i), &b[1..]))
            .collect();
        Dataset::from_flat(self.p, self.xs.clone(), ys, self.label.clone())
    }
}

/// A candidate regression parameter `beta` in `R^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    beta: Vec<f64>,
}

impl Fit {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.len() < 2 {
            return Err(Error::BadParameter {
                detail: String::from("beta must have length p >= 2"),
            });
        }
        if let Some(i) = beta.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(Fit { beta })
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn p(&self) -> usize {
        self.beta.len()
    }

    pub fn intercept(&self) -> f64 {
        self.beta[0]
    }

    /// The slope block `beta_2` (everything past the intercept).
    pub fn slopes(&self) -> &[f64] {
        &self.beta[1..]
    }

    /// `|tan(theta_beta)| = ||beta_2||`, the tangent of the angle between
    /// the fit's hyperplane and the horizontal hyperplane.
    pub fn tan_theta(&self) -> f64 {
        linalg::norm(self.slopes())
    }

    /// Height of the fit's hyperplane over `x`.
    pub fn height(&self, x: &[f64]) -> f64 {
        self.beta[0] + linalg::dot(x, &self.beta[1..])
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.beta)
    }

    /// The fit `beta + b`.
    pub fn shifted(&self, b: &[f64]) -> Result<Fit> {
        if b.len() != self.beta.len() {
            return Err(Error::DimensionMismatch {
                expected: self.beta.len(),
                got: b.len(),
            });
        }
        Fit::new(self.beta.iter().zip(b).map(|(a, c)| a + c).collect())
    }
}

/// Residuals `r_i = y_i - (1, x_i') beta` in dataset order.
pub fn residuals(d: &Dataset, f: &Fit) -> Result<Vec<f64>> {
    if f.p() != d.p() {
        return Err(Error::DimensionMismatch {
            expected: d.p(),
            got: f.p(),
        });
    }
    Ok((0..d.n()).map(|i| d.y(i) - f.height(d.x(i))).collect())
}

/// Scale-aware threshold below which a residual counts as zero:
/// `1e-9 * (1 + |y| + ||beta|| * (1 + ||x||))`. Depth counting needs a
/// sign trichotomy that survives the rounding of the p-point solves.
pub fn zero_tolerance(y: f64, beta_norm: f64, x_norm: f64) -> f64 {
    ZERO_TOLERANCE_FACTOR * (1.0 + fmath::abs(y) + beta_norm * (1.0 + x_norm))
}

/// Sign of a residual under the zero tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

/// Classifies every residual as negative, zero, or positive.
pub fn residual_signs(d: &Dataset, f: &Fit) -> Result<Vec<Sign>> {
    let r = residuals(d, f)?;
    let beta_norm = f.norm();
    Ok(r.iter()
        .enumerate()
        .map(|(i, &ri)| classify(ri, zero_tolerance(d.y(i), beta_norm, d.x_norm(i))))
        .collect())
}

pub(crate) fn classify(r: f64, tol: f64) -> Sign {
    if fmath::abs(r) <= tol {
        Sign::Zero
    } else if r > 0.0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

/// The unique non-vertical hyperplane through the `p` selected
/// observations, or [`Error::DegenerateSubset`] when their `x`s lie in a
/// common (p-2)-flat (the subset spans a vertical hyperplane).
pub fn fit_through_points(d: &Dataset, idx: &[usize]) -> Result<Fit> {
    let p = d.p();
    if idx.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: idx.len(),
        });
    }
    for w in 0..idx.len() {
        if idx[w] >= d.n() {
            return Err(Error::DimensionMismatch {
                expected: d.n(),
                got: idx[w],
            });
        }
        if idx[w + 1..].contains(&idx[w]) {
            return Err(Error::BadParameter {
                detail: String::from("fit indices must be distinct"),
            });
        }
    }
    let mut a = vec![0.0f64; p * p];
    let mut b = vec![0.0f64; p];
    for (row, &i) in idx.iter().enumerate() {
        a[row * p] = 1.0;
        a[row * p + 1..(row + 1) * p].copy_from_slice(d.x(i));
        b[row] = d.y(i);
    }
    if !linalg::solve_in_place(&mut a, &mut b, p) {
        return Err(Error::DegenerateSubset {
            indices: idx.to_vec(),
        });
    }
    Fit::new(b)
}
