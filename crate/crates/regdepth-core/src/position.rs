//! General-position verification.
//!
//! A sample is in general position (IGP) when any `p` observations give a
//! unique determination of `beta`; equivalently every (p-1)-dimensional
//! affine subspace of `(x, y)`-space contains at most `p` observations.
//! That splits into two testable conditions:
//!
//! 1. every `p`-subset has a nonsingular design matrix with rows
//!    `(1, x_i')` (no `p` of the `x`s share a (p-2)-flat), and
//! 2. no `p + 1` observations lie on a common non-vertical hyperplane.
//!
//! Condition 1 alone is the "x-only" variant used by the classical lower
//! bound; it is exposed separately since the two notions differ.

use alloc::vec;
use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::dataset::{fit_through_points, zero_tolerance, Dataset};
use crate::fmath;
use crate::linalg;

/// Outcome of a general-position check.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionReport {
    pub in_general_position: bool,
    /// Indices (0-based, dataset order) of a violating subset, if any.
    pub offending: Option<Vec<usize>>,
}

impl PositionReport {
    fn ok() -> Self {
        PositionReport {
            in_general_position: true,
            offending: None,
        }
    }

    fn violation(indices: Vec<usize>) -> Self {
        PositionReport {
            in_general_position: false,
            offending: Some(indices),
        }
    }
}

/// Checks only that every `p`-subset of the design rows `(1, x_i')` is
/// nonsingular, i.e. the `x`s themselves are in general position.
pub fn is_general_position_x_only(d: &Dataset) -> PositionReport {
    let p = d.p();
    let mut combos = Combinations::new(d.n(), p);
    let mut a = vec![0.0f64; p * p];
    let mut b = vec![0.0f64; p];
    while let Some(idx) = combos.next() {
        if design_is_singular(d, idx, &mut a, &mut b) {
            return PositionReport::violation(idx.to_vec());
        }
    }
    PositionReport::ok()
}

/// Full IGP check: nonsingular `p`-subsets plus no `p + 1` observations on
/// a common non-vertical hyperplane (fit the first `p`, test whether the
/// remaining point's residual vanishes under the scaled zero tolerance).
pub fn is_general_position(d: &Dataset) -> PositionReport {
    let x_only = is_general_position_x_only(d);
    if !x_only.in_general_position {
        return x_only;
    }
    let p = d.p();
    if d.n() == p {
        return PositionReport::ok();
    }
    let mut combos = Combinations::new(d.n(), p + 1);
    while let Some(idx) = combos.next() {
        // Every p-subset is nonsingular at this point, so the fit exists.
        let fit = match fit_through_points(d, &idx[..p]) {
            Ok(f) => f,
            Err(_) => return PositionReport::violation(idx[..p].to_vec()),
        };
        let last = idx[p];
        let r = d.y(last) - fit.height(d.x(last));
        if fmath::abs(r) <= zero_tolerance(d.y(last), fit.norm(), d.x_norm(last)) {
            return PositionReport::violation(idx.to_vec());
        }
    }
    PositionReport::ok()
}

fn design_is_singular(d: &Dataset, idx: &[usize], a: &mut [f64], b: &mut [f64]) -> bool {
    let p = d.p();
    for (row, &i) in idx.iter().enumerate() {
        a[row * p] = 1.0;
        a[row * p + 1..(row + 1) * p].copy_from_slice(d.x(i));
        b[row] = 0.0;
    }
    !linalg::solve_in_place(a, b, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use alloc::vec;

    #[test]
    fn four_point_figure_is_igp() {
        let d = Dataset::new(
            2,
            &[
                (vec![0.0], 0.0),
                (vec![1.0], 1.0),
                (vec![5.0], 0.0),
                (vec![6.0], 1.0),
            ],
            "four-point",
        )
        .unwrap();
        assert!(is_general_position(&d).in_general_position);
        assert!(is_general_position_x_only(&d).in_general_position);
    }

    #[test]
    fn collinear_triple_is_flagged() {
        let d = Dataset::new(
            2,
            &[(vec![0.0], 0.0), (vec![1.0], 1.0), (vec![2.0], 2.0)],
            "collinear",
        )
        .unwrap();
        let report = is_general_position(&d);
        assert!(!report.in_general_position);
        assert_eq!(report.offending, Some(vec![0, 1, 2]));
        // x-only ignores the collinearity in (x, y): the xs are distinct.
        assert!(is_general_position_x_only(&d).in_general_position);
    }

    #[test]
    fn duplicate_x_fails_x_only() {
        let d = Dataset::new(
            2,
            &[(vec![1.0], 0.0), (vec![1.0], 3.0), (vec![2.0], 1.0)],
            "dup-x",
        )
        .unwrap();
        let report = is_general_position_x_only(&d);
        assert!(!report.in_general_position);
        assert_eq!(report.offending, Some(vec![0, 1]));
    }
}
