//! Dense linear algebra at desk scale (`p` up to ~10): partial-pivot
//! elimination with a scaled singularity threshold, and null-space
//! extraction for the direction and shift constructions.

use alloc::vec;
use alloc::vec::Vec;

use crate::fmath;

/// Relative pivot threshold below which a system counts as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    fmath::sqrt(dot(a, a))
}

/// Scales `a` to unit length in place; returns false for the zero vector.
pub fn normalize(a: &mut [f64]) -> bool {
    let n = norm(a);
    if n <= 0.0 || !n.is_finite() {
        return false;
    }
    for x in a.iter_mut() {
        *x /= n;
    }
    true
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. `a` is row-major `dim x dim` and is destroyed; the solution
/// lands in `b`. Returns `false` when a scaled pivot falls below
/// [`SINGULARITY_THRESHOLD`].
pub fn solve_in_place(a: &mut [f64], b: &mut [f64], dim: usize) -> bool {
    debug_assert_eq!(a.len(), dim * dim);
    debug_assert_eq!(b.len(), dim);

    // Row scales for the relative pivot test.
    let mut scale = vec![0.0f64; dim];
    for r in 0..dim {
        let mut s = 0.0f64;
        for c in 0..dim {
            s = s.max(fmath::abs(a[r * dim + c]));
        }
        scale[r] = if s > 0.0 { s } else { 1.0 };
    }

    for col in 0..dim {
        let mut pivot_row = col;
        let mut pivot_mag = fmath::abs(a[col * dim + col]) / scale[col];
        for r in col + 1..dim {
            let mag = fmath::abs(a[r * dim + col]) / scale[r];
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag <= SINGULARITY_THRESHOLD {
            return false;
        }
        if pivot_row != col {
            for c in 0..dim {
                a.swap(col * dim + c, pivot_row * dim + c);
            }
            b.swap(col, pivot_row);
            scale.swap(col, pivot_row);
        }
        let pivot = a[col * dim + col];
        for r in col + 1..dim {
            let factor = a[r * dim + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[r * dim + col] = 0.0;
            for c in col + 1..dim {
                a[r * dim + c] -= factor * a[col * dim + c];
            }
            b[r] -= factor * b[col];
        }
    }

    for col in (0..dim).rev() {
        let mut acc = b[col];
        for c in col + 1..dim {
            acc -= a[col * dim + c] * b[c];
        }
        b[col] = acc / a[col * dim + col];
    }
    true
}

/// Returns a unit vector orthogonal to all `rows` (each of length `dim`),
/// or `None` when the rows span the whole space or the elimination is too
/// ill-conditioned to trust. Intended for `rows.len() == dim - 1`, where
/// the null space is generically one-dimensional; with fewer rows an
/// arbitrary unit null vector is returned.
pub fn null_space_unit(rows: &[&[f64]], dim: usize) -> Option<Vec<f64>> {
    let r = rows.len();
    if r >= dim {
        return None;
    }
    // Row echelon with column pivoting records which columns are pivots;
    // a free column then yields a null vector by back substitution.
    let mut m = vec![0.0f64; r * dim];
    for (i, row) in rows.iter().enumerate() {
        debug_assert_eq!(row.len(), dim);
        m[i * dim..(i + 1) * dim].copy_from_slice(row);
    }

    let mut pivot_cols = Vec::with_capacity(r);
    let mut row = 0usize;
    for col in 0..dim {
        if row >= r {
            break;
        }
        let mut best = row;
        let mut best_mag = fmath::abs(m[row * dim + col]);
        for rr in row + 1..r {
            let mag = fmath::abs(m[rr * dim + col]);
            if mag > best_mag {
                best_mag = mag;
                best = rr;
            }
        }
        if best_mag <= SINGULARITY_THRESHOLD {
            continue; // free column
        }
        if best != row {
            for c in 0..dim {
                m.swap(row * dim + c, best * dim + c);
            }
        }
        let pivot = m[row * dim + col];
        for rr in row + 1..r {
            let factor = m[rr * dim + col] / pivot;
            if factor != 0.0 {
                m[rr * dim + col] = 0.0;
                for c in col + 1..dim {
                    m[rr * dim + c] -= factor * m[row * dim + c];
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }

    let free_col = (0..dim).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![0.0f64; dim];
    v[free_col] = 1.0;
    for (i, &pc) in pivot_cols.iter().enumerate().rev() {
        let mut acc = 0.0f64;
        for c in pc + 1..dim {
            acc += m[i * dim + c] * v[c];
        }
        v[pc] = -acc / m[i * dim + pc];
    }
    if normalize(&mut v) {
        Some(v)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x + y = 3, x - y = 1 -> (2, 1)
        let mut a = vec![1.0, 1.0, 1.0, -1.0];
        let mut b = vec![3.0, 1.0];
        assert!(solve_in_place(&mut a, &mut b, 2));
        assert!((b[0] - 2.0).abs() < 1e-14);
        assert!((b[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_singular_system() {
        let mut a = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 2.0];
        assert!(!solve_in_place(&mut a, &mut b, 2));
    }

    #[test]
    fn null_space_of_single_row() {
        // Row (1, x3) in R^2 -> null vector proportional to (-x3, 1).
        let x3 = 2.5;
        let row = [1.0, x3];
        let v = null_space_unit(&[&row], 2).unwrap();
        assert!(dot(&v, &row).abs() < 1e-12);
        let expect = 1.0 / (1.0 + x3 * x3).sqrt();
        assert!((v[1].abs() - expect).abs() < 1e-12);
    }

    #[test]
    fn null_space_rejects_full_rank() {
        let r0 = [1.0, 0.0];
        let r1 = [0.0, 1.0];
        assert!(null_space_unit(&[&r0, &r1], 2).is_none());
    }
}
