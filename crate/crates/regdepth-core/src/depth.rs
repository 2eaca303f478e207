//! Regression depth of a candidate fit.
//!
//! Depth is the least number of observations the fit's hyperplane must
//! touch while tilting about some axis to a vertical position, minimized
//! over all axes and both rotation directions. An axis is a vertical
//! hyperplane `{x : u'x = v}` in the carrier space of `x`; for a fixed
//! `u` the touch counts are piecewise constant in `v` with breakpoints at
//! the projected data values, and for the minimum it suffices to consider
//! `u` orthogonal to `p - 2` projected point differences (plus the
//! coordinate directions), a candidate family validated against the
//! brute-force tilt oracle.
//!
//! Counting convention (pinned by the four-point configuration, where the
//! unit-slope line must count 2 and the slope-23/12 line must count 0):
//! residuals within the scaled zero tolerance count under both rotation
//! directions wherever they project, because those points ride on the
//! starting hyperplane; strictly signed points projecting exactly onto the
//! axis count under neither, because their crossing time is infinite.

use alloc::vec;
use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::dataset::{residual_signs, Dataset, Fit, Sign};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::SplitMix64;
use crate::Rational;

/// Which of the two rotation directions achieved the count.
///
/// `Toward` is the rotation under which the hyperplane's height rises on
/// the side where `u'x > v` (it meets positive residuals there and
/// negative residuals on the other side); `Away` is the opposite
/// rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltSide {
    Toward,
    Away,
}

/// A depth value together with the axis that realizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthWitness {
    count: usize,
    n: usize,
    direction: Vec<f64>,
    cut: f64,
    side: TiltSide,
}

impl DepthWitness {
    /// `n * RD`: the number of observations touched.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The depth as a fraction of the sample.
    pub fn fraction(&self) -> f64 {
        self.count as f64 / self.n as f64
    }

    pub fn fraction_ratio(&self) -> Rational {
        Rational::new(self.count as i64, self.n as i64)
    }

    /// Unit normal (in `x`-space) of the minimizing vertical hyperplane.
    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// Offset of the minimizing vertical hyperplane: `{x : u'x = cut}`.
    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn side(&self) -> TiltSide {
        self.side
    }
}

/// Candidate axis directions for a dataset, with projections presorted so
/// depth evaluations of many fits against the same data share the work.
#[derive(Debug, Clone)]
pub struct DepthMachine {
    n: usize,
    p: usize,
    dirs: Vec<Vec<f64>>,
    profiles: Vec<Profile>,
}

#[derive(Debug, Clone)]
struct Profile {
    /// Point indices sorted by projection value.
    order: Vec<u32>,
    /// Projection values, parallel to `order`.
    proj: Vec<f64>,
    /// Starts of runs of equal projection values, terminated by `n`.
    group_start: Vec<u32>,
}

pub(crate) enum Eval {
    /// Fully evaluated count with its lexicographically first witness.
    Full(DepthWitness),
    /// Abandoned once the running minimum fell below the prune threshold.
    Pruned,
}

impl DepthMachine {
    /// Builds the exact candidate set: for `p = 2` the single direction;
    /// for `p >= 3` the unit normals of every (p-2)-dimensional flat
    /// spanned by `p - 1` projected points, plus the coordinate
    /// directions. Directions are sign-canonicalized, deduplicated, and
    /// sorted so ties in the count break lexicographically.
    pub fn new(d: &Dataset) -> Self {
        let xdim = d.x_dim();
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        if xdim == 1 {
            dirs.push(vec![1.0]);
        } else {
            let mut combos = Combinations::new(d.n(), xdim);
            let mut diffs: Vec<Vec<f64>> = vec![vec![0.0; xdim]; xdim - 1];
            while let Some(idx) = combos.next() {
                let base = d.x(idx[0]);
                for (k, &j) in idx[1..].iter().enumerate() {
                    let xj = d.x(j);
                    for c in 0..xdim {
                        diffs[k][c] = xj[c] - base[c];
                    }
                }
                let rows: Vec<&[f64]> = diffs.iter().map(|r| r.as_slice()).collect();
                if let Some(u) = linalg::null_space_unit(&rows, xdim) {
                    dirs.push(u);
                }
            }
            for c in 0..xdim {
                let mut e = vec![0.0; xdim];
                e[c] = 1.0;
                dirs.push(e);
            }
            for u in dirs.iter_mut() {
                canonicalize(u);
            }
            dirs.sort_by(|a, b| lex_cmp(a, b));
            dirs.dedup();
        }
        Self::from_directions(d, dirs)
    }

    /// Builds a machine over an explicit direction list (used by the
    /// randomized mode). Directions are used in the given order.
    pub fn with_directions(d: &Dataset, dirs: Vec<Vec<f64>>) -> Self {
        Self::from_directions(d, dirs)
    }

    fn from_directions(d: &Dataset, dirs: Vec<Vec<f64>>) -> Self {
        let n = d.n();
        let profiles = dirs
            .iter()
            .map(|u| {
                let mut pairs: Vec<(f64, u32)> =
                    (0..n).map(|i| (linalg::dot(u, d.x(i)), i as u32)).collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let proj: Vec<f64> = pairs.iter().map(|&(s, _)| s).collect();
                let order: Vec<u32> = pairs.iter().map(|&(_, i)| i).collect();
                let mut group_start = Vec::new();
                let mut k = 0usize;
                while k < n {
                    group_start.push(k as u32);
                    let v = proj[k];
                    while k < n && proj[k] == v {
                        k += 1;
                    }
                }
                group_start.push(n as u32);
                Profile {
                    order,
                    proj,
                    group_start,
                }
            })
            .collect();
        DepthMachine {
            n,
            p: d.p(),
            dirs,
            profiles,
        }
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.dirs
    }

    /// Estimated elementary count operations for one fit evaluation.
    pub fn ops_per_fit(&self) -> u128 {
        (self.dirs.len() as u128) * (self.n as u128)
    }

    /// Depth of `f` over this machine's candidate set.
    pub fn depth(&self, d: &Dataset, f: &Fit) -> Result<DepthWitness> {
        if f.p() != self.p || d.p() != self.p || d.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: f.p(),
            });
        }
        let signs = residual_signs(d, f)?;
        match self.evaluate(&signs, 0) {
            Eval::Full(w) => Ok(w),
            Eval::Pruned => unreachable!("prune threshold 0 never fires"),
        }
    }

    /// Sweeps every direction, tracking the minimum count and its first
    /// witness in (direction, cut, side) order. Abandons the scan as soon
    /// as the running minimum drops below `prune_below`.
    pub(crate) fn evaluate(&self, signs: &[Sign], prune_below: usize) -> Eval {
        let zeros = signs.iter().filter(|s| **s == Sign::Zero).count();
        let pos_total = signs.iter().filter(|s| **s == Sign::Pos).count();
        let neg_total = signs.len() - zeros - pos_total;

        let mut best = usize::MAX;
        let mut witness: Option<(usize, f64, TiltSide)> = None;

        'dirs: for (di, profile) in self.profiles.iter().enumerate() {
            let groups = profile.group_start.len() - 1;
            let mut pos_left = 0usize;
            let mut neg_left = 0usize;
            for g in 0..groups {
                let lo = profile.group_start[g] as usize;
                let hi = profile.group_start[g + 1] as usize;
                let mut gp = 0usize;
                let mut gn = 0usize;
                for k in lo..hi {
                    match signs[profile.order[k] as usize] {
                        Sign::Pos => gp += 1,
                        Sign::Neg => gn += 1,
                        Sign::Zero => {}
                    }
                }
                let value = profile.proj[lo];

                // Axis exactly on this group's projection: the group's
                // strictly signed points count on neither side.
                let toward = zeros + (pos_total - pos_left - gp) + neg_left;
                let away = zeros + (neg_total - neg_left - gn) + pos_left;
                if toward < best {
                    best = toward;
                    witness = Some((di, value, TiltSide::Toward));
                }
                if away < best {
                    best = away;
                    witness = Some((di, value, TiltSide::Away));
                }

                pos_left += gp;
                neg_left += gn;

                // Axis in the open gap after this group.
                if g + 1 < groups {
                    let mid = 0.5 * (value + profile.proj[profile.group_start[g + 1] as usize]);
                    let toward = zeros + (pos_total - pos_left) + neg_left;
                    let away = zeros + (neg_total - neg_left) + pos_left;
                    if toward < best {
                        best = toward;
                        witness = Some((di, mid, TiltSide::Toward));
                    }
                    if away < best {
                        best = away;
                        witness = Some((di, mid, TiltSide::Away));
                    }
                }

                if best < prune_below {
                    return Eval::Pruned;
                }
            }
            // Nothing can undercut the always-counted zero residuals.
            if best == zeros {
                break 'dirs;
            }
        }

        let (di, cut, side) = witness.expect("at least one candidate axis");
        Eval::Full(DepthWitness {
            count: best,
            n: self.n,
            direction: self.dirs[di].clone(),
            cut,
            side,
        })
    }
}

fn canonicalize(u: &mut [f64]) {
    for &c in u.iter() {
        if c != 0.0 {
            if c < 0.0 {
                for x in u.iter_mut() {
                    *x = -*x;
                }
            }
            // Normalize any negative zeros for bit-stable dedup.
            for x in u.iter_mut() {
                if *x == 0.0 {
                    *x = 0.0;
                }
            }
            return;
        }
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o != core::cmp::Ordering::Equal {
            return o;
        }
    }
    core::cmp::Ordering::Equal
}

/// Exact regression depth: minimum over the full candidate axis family.
pub fn rdepth_exact(d: &Dataset, f: &Fit) -> Result<DepthWitness> {
    DepthMachine::new(d).depth(d, f)
}

/// `O(n log n)` depth for `p = 2`: sort once on `x`, then a single scan
/// over axis positions with running sign counters. Independent of the
/// [`DepthMachine`] sweep; the two must agree.
pub fn rdepth_sweep_p2(d: &Dataset, f: &Fit) -> Result<DepthWitness> {
    if d.p() != 2 {
        return Err(Error::BadParameter {
            detail: alloc::string::String::from("rdepth_sweep_p2 requires p = 2"),
        });
    }
    let signs = residual_signs(d, f)?;
    let n = d.n();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d.x(a)[0].total_cmp(&d.x(b)[0]).then(a.cmp(&b)));

    let zeros = signs.iter().filter(|s| **s == Sign::Zero).count();
    let pos_total = signs.iter().filter(|s| **s == Sign::Pos).count();
    let neg_total = n - zeros - pos_total;

    let mut best = usize::MAX;
    let mut best_cut = 0.0f64;
    let mut best_side = TiltSide::Toward;
    let mut consider = |count: usize, cut: f64, side: TiltSide, best: &mut usize| {
        if count < *best {
            *best = count;
            best_cut = cut;
            best_side = side;
        }
    };

    let mut pos_left = 0usize;
    let mut neg_left = 0usize;
    let mut k = 0usize;
    while k < n {
        let x = d.x(idx[k])[0];
        let mut gp = 0usize;
        let mut gn = 0usize;
        let mut j = k;
        while j < n && d.x(idx[j])[0] == x {
            match signs[idx[j]] {
                Sign::Pos => gp += 1,
                Sign::Neg => gn += 1,
                Sign::Zero => {}
            }
            j += 1;
        }
        consider(
            zeros + (pos_total - pos_left - gp) + neg_left,
            x,
            TiltSide::Toward,
            &mut best,
        );
        consider(
            zeros + (neg_total - neg_left - gn) + pos_left,
            x,
            TiltSide::Away,
            &mut best,
        );
        pos_left += gp;
        neg_left += gn;
        if j < n {
            let mid = 0.5 * (x + d.x(idx[j])[0]);
            consider(
                zeros + (pos_total - pos_left) + neg_left,
                mid,
                TiltSide::Toward,
                &mut best,
            );
            consider(
                zeros + (neg_total - neg_left) + pos_left,
                mid,
                TiltSide::Away,
                &mut best,
            );
        }
        k = j;
    }

    Ok(DepthWitness {
        count: best,
        n,
        direction: vec![1.0],
        cut: best_cut,
        side: best_side,
    })
}

/// Randomized upper bound on the depth: the same sweep over `n_dirs`
/// seeded random unit directions plus the coordinate directions. Always
/// at least the exact count; deterministic for a given seed. For `p = 2`
/// the single coordinate direction already makes it exact.
pub fn rdepth_approx(d: &Dataset, f: &Fit, n_dirs: usize, seed: u64) -> Result<DepthWitness> {
    if n_dirs == 0 {
        return Err(Error::BadParameter {
            detail: alloc::string::String::from("n_dirs must be at least 1"),
        });
    }
    approx_machine(d, n_dirs, seed).depth(d, f)
}

pub(crate) fn approx_machine(d: &Dataset, n_dirs: usize, seed: u64) -> DepthMachine {
    let xdim = d.x_dim();
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(n_dirs + xdim);
    for c in 0..xdim {
        let mut e = vec![0.0; xdim];
        e[c] = 1.0;
        dirs.push(e);
    }
    if xdim > 1 {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..n_dirs {
            let mut u = rng.next_unit_vector(xdim);
            canonicalize(&mut u);
            dirs.push(u);
        }
    }
    DepthMachine::with_directions(d, dirs)
}

/// Recounts the touched observations for a witness's axis and side by a
/// direct scan; must reproduce the witness count exactly.
pub fn replay_witness(d: &Dataset, f: &Fit, w: &DepthWitness) -> Result<usize> {
    if w.direction.len() != d.x_dim() {
        return Err(Error::DimensionMismatch {
            expected: d.x_dim(),
            got: w.direction.len(),
        });
    }
    let signs = residual_signs(d, f)?;
    let mut count = 0usize;
    for i in 0..d.n() {
        let s = linalg::dot(&w.direction, d.x(i));
        count += match (signs[i], w.side) {
            (Sign::Zero, _) => 1,
            (Sign::Pos, TiltSide::Toward) if s > w.cut => 1,
            (Sign::Neg, TiltSide::Toward) if s < w.cut => 1,
            (Sign::Neg, TiltSide::Away) if s > w.cut => 1,
            (Sign::Pos, TiltSide::Away) if s < w.cut => 1,
            _ => 0,
        };
    }
    Ok(count)
}
