//! The maximum-depth fit: `k*` and the deepest-fit regression median.
//!
//! The search space is the finite family of fits through exactly `p`
//! observations; a maximizer of depth can always be moved onto such a fit
//! without losing count (residuals hitting zero only ever add to both
//! tilt counts), which the test suite probes by random perturbation. The
//! exact mode enumerates every nonsingular `p`-subset under an explicit
//! budget; the approximate mode screens a seeded subsample of subsets
//! with a randomized depth bound and refines the survivors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::combin::{binomial, Combinations};
use crate::dataset::{Dataset, Fit, Sign};
use crate::depth::{approx_machine, DepthMachine, DepthWitness, Eval};
use crate::error::{Error, Result};
use crate::fmath;
use crate::linalg;
use crate::position::is_general_position;
use crate::rng::{derive_seed, SplitMix64};

/// How a [`DeepestFitResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Approximate,
}

/// How approximate-mode survivors were re-evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    /// Survivors got a full exact depth evaluation; the reported `k_star`
    /// is the true depth of some sampled fit (so never above the true
    /// maximum).
    Exact,
    /// The exact candidate family was over the per-fit budget; survivors
    /// were re-screened with this many extra random directions and the
    /// reported counts remain upper bounds per fit.
    Dense { n_dirs: usize },
}

/// A depth-maximizing fit: its defining observation indices, the fit, and
/// the witness for its depth count.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximizer {
    pub indices: Vec<usize>,
    pub fit: Fit,
    pub witness: DepthWitness,
}

/// Result of a deepest-fit search.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepestFitResult {
    /// Maximum of `n * RD` over the searched fits.
    pub k_star: usize,
    /// Every searched fit attaining `k_star`, ordered by index subset.
    pub maximizers: Vec<Maximizer>,
    /// Coordinate-wise average of the distinct maximizing `beta`s.
    pub t_star: Fit,
    /// Number of distinct `beta`s averaged (coordinate tolerance 1e-9).
    pub distinct_maximizers: usize,
    pub mode: SearchMode,
    /// Outcome of the general-position precheck; `None` when the check
    /// was skipped (too many subsets, or disabled internally).
    pub igp: Option<bool>,
    /// Populated in approximate mode only.
    pub refinement: Option<Refinement>,
}

/// Caps for the exact enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Maximum number of `p`-subsets to enumerate.
    pub max_subsets: u128,
    /// Maximum estimated elementary count operations
    /// (`subsets x directions x n`).
    pub max_ops: u128,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_subsets: 5_000_000,
            max_ops: 10_000_000_000,
        }
    }
}

/// Subset cap above which the general-position precheck is skipped.
const IGP_CHECK_MAX_SUBSETS: u128 = 200_000;
/// Per-fit exact-depth cost above which approximate refinement falls back
/// to dense screening.
const REFINE_OPS_BUDGET: u128 = 500_000_000;
/// Coordinate tolerance for deduplicating maximizer betas.
const DEDUP_TOLERANCE: f64 = 1e-9;

/// Exact `k*` and deepest-fit median under the default budget.
pub fn k_star_exact(d: &Dataset) -> Result<DeepestFitResult> {
    k_star_exact_opts(d, &EnumerationBudget::default(), true)
}

/// Exact search with an explicit budget.
pub fn k_star_exact_with(d: &Dataset, budget: &EnumerationBudget) -> Result<DeepestFitResult> {
    k_star_exact_opts(d, budget, true)
}

pub(crate) fn k_star_exact_opts(
    d: &Dataset,
    budget: &EnumerationBudget,
    check_igp: bool,
) -> Result<DeepestFitResult> {
    let n = d.n();
    let p = d.p();
    let total = binomial(n, p);
    let machine = DepthMachine::new(d);
    let ops = total.saturating_mul(machine.ops_per_fit());
    if total > budget.max_subsets || ops > budget.max_ops {
        return Err(Error::Budget {
            subsets: total,
            ops,
            max_subsets: budget.max_subsets,
            max_ops: budget.max_ops,
        });
    }
    let igp = if check_igp && binomial(n, p + 1) <= IGP_CHECK_MAX_SUBSETS {
        Some(is_general_position(d).in_general_position)
    } else {
        None
    };

    let k_star = scan_for_max(d, &machine, total)?;
    let maximizers = collect_maximizers(d, &machine, total, k_star);
    finish(d, k_star, maximizers, SearchMode::Exact, igp, None)
}

/// Approximate search: screen `n_subsets` seeded random `p`-subsets with
/// an `n_dirs`-direction randomized depth bound, then refine the best
/// screened candidates. The sampled ranks are a prefix of a per-seed
/// stream, so enlarging `n_subsets` never shrinks the searched family.
/// The result can undershoot the true `k*`; with exact refinement it
/// never overshoots.
pub fn k_star_approx(
    d: &Dataset,
    n_subsets: usize,
    n_dirs: usize,
    seed: u64,
) -> Result<DeepestFitResult> {
    if n_subsets == 0 {
        return Err(Error::BadParameter {
            detail: String::from("n_subsets must be at least 1"),
        });
    }
    let n = d.n();
    let p = d.p();
    let total = binomial(n, p);

    let mut ranks: Vec<u128>;
    if total <= n_subsets as u128 {
        ranks = (0..total).collect();
    } else {
        let mut rng = SplitMix64::new(derive_seed(seed, 0x5AB5));
        ranks = (0..n_subsets).map(|_| next_below_u128(&mut rng, total)).collect();
        ranks.sort_unstable();
        ranks.dedup();
    }

    let screen = approx_machine(d, n_dirs, derive_seed(seed, 0xD1A5));
    let mut candidates: Vec<(u128, Vec<usize>, Fit, usize)> = Vec::with_capacity(ranks.len());
    {
        let mut scratch = FitScratch::new(n, p);
        for &rank in &ranks {
            let idx = crate::combin::unrank(n, p, rank).expect("rank in range");
            if let Some((fit, signs)) = scratch.fit_and_signs(d, &idx) {
                if let Eval::Full(w) = screen.evaluate(signs, 0) {
                    candidates.push((rank, idx, fit, w.count()));
                }
            }
        }
    }
    if candidates.is_empty() {
        return Err(no_nonsingular_subset());
    }

    let exact_cost = binomial(n, p - 1).saturating_mul(n as u128);
    let (refinement, refine_machine) = if exact_cost <= REFINE_OPS_BUDGET {
        (Refinement::Exact, DepthMachine::new(d))
    } else {
        let dense = n_dirs.saturating_mul(4).max(n_dirs + 1);
        (
            Refinement::Dense { n_dirs: dense },
            approx_machine(d, dense, derive_seed(seed, 0xDEA5)),
        )
    };

    // Screened counts bound the refined counts from above, so walking in
    // descending screened order lets the scan stop early.
    candidates.sort_by(|a, b| b.3.cmp(&a.3).then(a.0.cmp(&b.0)));
    let mut best = 0usize;
    let mut maximizers: Vec<Maximizer> = Vec::new();
    {
        let mut scratch = FitScratch::new(n, p);
        for (_, idx, fit, screened) in &candidates {
            if *screened < best {
                break;
            }
            let signs = scratch.signs_of(d, fit);
            match refine_machine.evaluate(signs, best) {
                Eval::Full(w) => {
                    let count = w.count();
                    if count > best {
                        best = count;
                        maximizers.clear();
                    }
                    if count == best {
                        maximizers.push(Maximizer {
                            indices: idx.clone(),
                            fit: fit.clone(),
                            witness: w,
                        });
                    }
                }
                Eval::Pruned => {}
            }
        }
    }
    maximizers.sort_by(|a, b| a.indices.cmp(&b.indices));

    let igp = if binomial(n, p + 1) <= IGP_CHECK_MAX_SUBSETS {
        Some(is_general_position(d).in_general_position)
    } else {
        None
    };
    finish(d, best, maximizers, SearchMode::Approximate, igp, Some(refinement))
}

fn no_nonsingular_subset() -> Error {
    Error::BadParameter {
        detail: String::from(
            "no nonsingular p-subset: every selection lies in a vertical hyperplane",
        ),
    }
}

/// Reusable buffers for the per-subset solve and sign pass.
struct FitScratch {
    a: Vec<f64>,
    b: Vec<f64>,
    signs: Vec<Sign>,
}

impl FitScratch {
    fn new(n: usize, p: usize) -> Self {
        FitScratch {
            a: vec![0.0; p * p],
            b: vec![0.0; p],
            signs: vec![Sign::Zero; n],
        }
    }

    /// Solves the interpolation system for `idx`; `None` when singular.
    fn fit_and_signs(&mut self, d: &Dataset, idx: &[usize]) -> Option<(Fit, &[Sign])> {
        let p = d.p();
        for (row, &i) in idx.iter().enumerate() {
            self.a[row * p] = 1.0;
            self.a[row * p + 1..(row + 1) * p].copy_from_slice(d.x(i));
            self.b[row] = d.y(i);
        }
        if !linalg::solve_in_place(&mut self.a, &mut self.b, p) {
            return None;
        }
        let fit = Fit::new(self.b.clone()).ok()?;
        let beta_norm = fit.norm();
        for i in 0..d.n() {
            let r = d.y(i) - fit.height(d.x(i));
            let tol = crate::dataset::zero_tolerance(d.y(i), beta_norm, d.x_norm(i));
            self.signs[i] = crate::dataset::classify(r, tol);
        }
        Some((fit, &self.signs))
    }

    fn signs_of(&mut self, d: &Dataset, f: &Fit) -> &[Sign] {
        let beta_norm = f.norm();
        for i in 0..d.n() {
            let r = d.y(i) - f.height(d.x(i));
            let tol = crate::dataset::zero_tolerance(d.y(i), beta_norm, d.x_norm(i));
            self.signs[i] = crate::dataset::classify(r, tol);
        }
        &self.signs
    }
}

/// Pass 1: the maximum count over all nonsingular subsets, with bound
/// pruning (a fit is abandoned once its running minimum can no longer
/// beat the best count seen).
fn scan_for_max(d: &Dataset, machine: &DepthMachine, total: u128) -> Result<usize> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunks = chunk_ranges(total, rayon::current_num_threads().max(1) * 8);
        let best = chunks
            .par_iter()
            .map(|&(lo, hi)| scan_range_max(d, machine, lo, hi))
            .reduce(|| None, |a, b| a.max(b));
        return best.ok_or_else(no_nonsingular_subset);
    }
    #[cfg(not(feature = "parallel"))]
    {
        scan_range_max(d, machine, 0, total).ok_or_else(no_nonsingular_subset)
    }
}

fn scan_range_max(d: &Dataset, machine: &DepthMachine, lo: u128, hi: u128) -> Option<usize> {
    let n = d.n();
    let p = d.p();
    let mut combos = Combinations::starting_at_rank(n, p, lo);
    let mut scratch = FitScratch::new(n, p);
    let mut best: Option<usize> = None;
    let mut remaining = hi - lo;
    while remaining > 0 {
        let idx = combos.next()?;
        if let Some((_, signs)) = scratch.fit_and_signs(d, idx) {
            let prune = best.map_or(0, |b| b + 1);
            if let Eval::Full(w) = machine.evaluate(signs, prune) {
                if best.is_none_or(|b| w.count() > b) {
                    best = Some(w.count());
                }
            }
        }
        remaining -= 1;
    }
    best
}

/// Pass 2: every subset whose fit attains `k_star`, in subset order.
fn collect_maximizers(
    d: &Dataset,
    machine: &DepthMachine,
    total: u128,
    k_star: usize,
) -> Vec<Maximizer> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunks = chunk_ranges(total, rayon::current_num_threads().max(1) * 8);
        return chunks
            .par_iter()
            .map(|&(lo, hi)| collect_range(d, machine, lo, hi, k_star))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
    }
    #[cfg(not(feature = "parallel"))]
    {
        collect_range(d, machine, 0, total, k_star)
    }
}

fn collect_range(
    d: &Dataset,
    machine: &DepthMachine,
    lo: u128,
    hi: u128,
    k_star: usize,
) -> Vec<Maximizer> {
    let n = d.n();
    let p = d.p();
    let mut combos = Combinations::starting_at_rank(n, p, lo);
    let mut scratch = FitScratch::new(n, p);
    let mut out = Vec::new();
    let mut remaining = hi - lo;
    while remaining > 0 {
        let Some(idx) = combos.next() else { break };
        if let Some((fit, signs)) = scratch.fit_and_signs(d, idx) {
            if let Eval::Full(w) = machine.evaluate(signs, k_star) {
                debug_assert_eq!(w.count(), k_star);
                out.push(Maximizer {
                    indices: idx.to_vec(),
                    fit,
                    witness: w,
                });
            }
        }
        remaining -= 1;
    }
    out
}

#[cfg(feature = "parallel")]
fn chunk_ranges(total: u128, want: usize) -> Vec<(u128, u128)> {
    let want = want.max(1) as u128;
    let step = (total / want).max(512);
    let mut out = Vec::new();
    let mut lo = 0u128;
    while lo < total {
        let hi = (lo + step).min(total);
        out.push((lo, hi));
        lo = hi;
    }
    if out.is_empty() {
        out.push((0, 0));
    }
    out
}

fn finish(
    d: &Dataset,
    k_star: usize,
    maximizers: Vec<Maximizer>,
    mode: SearchMode,
    igp: Option<bool>,
    refinement: Option<Refinement>,
) -> Result<DeepestFitResult> {
    if maximizers.is_empty() {
        return Err(no_nonsingular_subset());
    }
    let p = d.p();
    // Deduplicate betas before averaging: sort lexicographically, then
    // group while every coordinate stays within the tolerance of the
    // group's first member.
    let mut sorted: Vec<&Fit> = maximizers.iter().map(|m| &m.fit).collect();
    sorted.sort_by(|a, b| lex_cmp(a.beta(), b.beta()));
    let mut distinct: Vec<&[f64]> = Vec::new();
    for f in sorted {
        let b = f.beta();
        if distinct
            .last()
            .is_none_or(|rep| rep.iter().zip(b).any(|(x, y)| fmath::abs(x - y) > DEDUP_TOLERANCE))
        {
            distinct.push(b);
        }
    }
    let mut mean = vec![0.0f64; p];
    for (c, slot) in mean.iter_mut().enumerate() {
        *slot = compensated_sum(distinct.iter().map(|b| b[c])) / distinct.len() as f64;
    }
    Ok(DeepestFitResult {
        k_star,
        t_star: Fit::new(mean)?,
        distinct_maximizers: distinct.len(),
        maximizers,
        mode,
        igp,
        refinement,
    })
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

/// Neumaier-compensated sum; deterministic for a fixed iteration order.
pub(crate) fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if fmath::abs(sum) >= fmath::abs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn next_below_u128(rng: &mut SplitMix64, bound: u128) -> u128 {
    if bound <= u64::MAX as u128 {
        return rng.next_below(bound as u64) as u128;
    }
    // Rejection from the full 128-bit range.
    let zone = u128::MAX - (u128::MAX % bound);
    loop {
        let v = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        if v < zone {
            return v % bound;
        }
    }
}
