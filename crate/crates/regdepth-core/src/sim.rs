//! Seeded data generators and the Monte Carlo experiments behind the
//! bound-comparison tables and boxplots.
//!
//! Replicate `r` of a run draws its dataset from
//! `SplitMix64(derive_seed(master_seed, r))`, so results are identical
//! for any worker count and regenerate bit-identically from the spec.
//! Table 1 compares the exact-ABP lower bound against the classical RBP
//! lower bound on standard normal samples; Table 2 repeats it on
//! contaminated non-symmetric samples; Table 3 compares the RBP upper
//! bound against the asymptotic breakdown value 1/3.

use alloc::string::String;
use alloc::vec::Vec;

use crate::breakdown::{bounds_from_k_star, BreakdownBounds};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::median::{compensated_sum, k_star_approx, k_star_exact_opts, EnumerationBudget, SearchMode};
use crate::rng::{derive_seed, SplitMix64};
use crate::Rational;

/// Distribution of each replicate sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// All `p` coordinates i.i.d. standard normal.
    StdNormal,
    /// Diagonal covariance `diag(1..p)`, then `ceil(0.05 n)` points
    /// replaced by draws with every coordinate `N(10, 0.1)`.
    DiagNormalContaminated,
}

/// How each replicate's `k*` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimDepthMode {
    Exact,
    Approx { n_subsets: usize, n_dirs: usize },
}

/// One Monte Carlo run over a single `(p, n)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub p: usize,
    pub n: usize,
    pub reps: usize,
    pub generator: GeneratorKind,
    pub depth_mode: SimDepthMode,
    pub master_seed: u64,
    /// Cap on the per-replicate exact enumeration.
    pub budget: EnumerationBudget,
}

impl SimulationSpec {
    /// Spec for one cell of a published table, default budget.
    pub fn for_table(table: TableId, p: usize, n: usize, reps: usize, master_seed: u64) -> Self {
        SimulationSpec {
            p,
            n,
            reps,
            generator: table.generator(),
            depth_mode: SimDepthMode::Exact,
            master_seed,
            budget: EnumerationBudget::default(),
        }
    }
}

/// Which published table layout a run reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    Table1,
    Table2,
    Table3,
}

impl TableId {
    pub fn generator(self) -> GeneratorKind {
        match self {
            TableId::Table1 | TableId::Table3 => GeneratorKind::StdNormal,
            TableId::Table2 => GeneratorKind::DiagNormalContaminated,
        }
    }
}

/// Per-replicate bound values, exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateStats {
    pub k_star: usize,
    pub abp_lb: Rational,
    pub rbp_ub: Rational,
    pub rh99_lb: Rational,
    pub mode: SearchMode,
}

/// Five-number summary with Tukey 1.5 IQR whiskers (quantiles by linear
/// interpolation, the R type-7 rule).
#[derive(Debug, Clone, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

/// Aggregated outcome of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub spec: SimulationSpec,
    pub table: TableId,
    pub replicates: Vec<ReplicateStats>,
    /// Replicates actually completed (smaller than `spec.reps` only when
    /// the per-replicate search ran out of budget).
    pub completed: usize,
    /// Mean of `abp_lb - rh99_lb` in percentage points.
    pub mean_abp_minus_rh99_pp: f64,
    /// Mean of `rbp_ub - 1/3` in percentage points.
    pub mean_rbp_minus_third_pp: f64,
    pub rbp_five_number: FiveNumber,
}

/// One boxplot cell over the `(p, n)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxplotCell {
    pub p: usize,
    pub n: usize,
    pub summary: FiveNumber,
    pub median_rbp_below_third: bool,
    pub mean_rbp_ub: f64,
    pub depth_mode: SimDepthMode,
}

/// `n` points with all `p` coordinates i.i.d. standard normal; the stream
/// is `x_1 .. x_{p-1}, y` per point.
pub fn gen_std_normal(p: usize, n: usize, seed: u64) -> Result<Dataset> {
    if p < 2 || n < p {
        return Err(Error::TooFewPoints { n, p });
    }
    let mut rng = SplitMix64::new(seed);
    let mut xs = Vec::with_capacity(n * (p - 1));
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        for _ in 0..p - 1 {
            xs.push(rng.next_normal());
        }
        ys.push(rng.next_normal());
    }
    Dataset::from_flat(p, xs, ys, "std-normal")
}

/// Base sample from the zero-mean Gaussian with covariance `diag(1..p)`
/// (coordinate `k` has variance `k`), then the last `ceil(0.05 n)` points
/// replaced by contaminants whose coordinates are independent `N(10, 0.1)`.
/// Draw order: all base points first, then the contaminant coordinates.
pub fn gen_contaminated(p: usize, n: usize, seed: u64) -> Result<Dataset> {
    if p < 2 || n < p {
        return Err(Error::TooFewPoints { n, p });
    }
    let mut rng = SplitMix64::new(seed);
    let mut xs = Vec::with_capacity(n * (p - 1));
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        for j in 0..p - 1 {
            xs.push(crate::fmath::sqrt((j + 1) as f64) * rng.next_normal());
        }
        ys.push(crate::fmath::sqrt(p as f64) * rng.next_normal());
    }
    let n_contaminated = n.div_ceil(20); // ceil(0.05 n)
    let sd = crate::fmath::sqrt(0.1);
    for i in n - n_contaminated..n {
        for j in 0..p - 1 {
            xs[i * (p - 1) + j] = 10.0 + sd * rng.next_normal();
        }
        ys[i] = 10.0 + sd * rng.next_normal();
    }
    Dataset::from_flat(p, xs, ys, "diag-normal-contaminated")
}

/// The per-cell mode policy for grid reproductions: exact is affordable
/// for `p = 2` throughout and for small `n` otherwise.
pub fn auto_depth_mode(p: usize, n: usize) -> SimDepthMode {
    let exact = p == 2 || (p <= 4 && n <= 30) || (p == 5 && n <= 20);
    if exact {
        SimDepthMode::Exact
    } else {
        SimDepthMode::Approx {
            n_subsets: 2000,
            n_dirs: (2 * n).max(64),
        }
    }
}

/// Runs one `(p, n)` cell of the given table.
pub fn run_table_experiment(spec: &SimulationSpec, which: TableId) -> Result<SimulationSummary> {
    if spec.reps == 0 {
        return Err(Error::BadParameter {
            detail: String::from("reps must be at least 1"),
        });
    }
    if spec.generator != which.generator() {
        return Err(Error::GeneratorMismatch {
            detail: alloc::format!(
                "{:?} requires {:?}, spec has {:?}",
                which,
                which.generator(),
                spec.generator
            ),
        });
    }

    let results = run_replicates(spec);

    let mut replicates = Vec::with_capacity(spec.reps);
    for r in results {
        match r {
            Ok(stats) => replicates.push(stats),
            // Budget exhaustion is deterministic per cell: report the
            // partial run instead of failing the whole experiment.
            Err(Error::Budget { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let completed = replicates.len();

    let third = Rational::new(1, 3);
    let mean_abp_minus_rh99_pp = 100.0
        * compensated_sum(replicates.iter().map(|s| ratio_f64(s.abp_lb - s.rh99_lb)))
        / completed.max(1) as f64;
    let mean_rbp_minus_third_pp = 100.0
        * compensated_sum(replicates.iter().map(|s| ratio_f64(s.rbp_ub - third)))
        / completed.max(1) as f64;

    let mut rbp: Vec<f64> = replicates.iter().map(|s| ratio_f64(s.rbp_ub)).collect();
    rbp.sort_by(f64::total_cmp);
    let rbp_five_number = five_number(&rbp);

    Ok(SimulationSummary {
        spec: spec.clone(),
        table: which,
        replicates,
        completed,
        mean_abp_minus_rh99_pp,
        mean_rbp_minus_third_pp,
        rbp_five_number,
    })
}

fn run_replicates(spec: &SimulationSpec) -> Vec<Result<ReplicateStats>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..spec.reps)
            .into_par_iter()
            .map(|r| one_replicate(spec, r as u64))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..spec.reps).map(|r| one_replicate(spec, r as u64)).collect()
    }
}

fn one_replicate(spec: &SimulationSpec, r: u64) -> Result<ReplicateStats> {
    let seed = derive_seed(spec.master_seed, r);
    let d = match spec.generator {
        GeneratorKind::StdNormal => gen_std_normal(spec.p, spec.n, seed)?,
        GeneratorKind::DiagNormalContaminated => gen_contaminated(spec.p, spec.n, seed)?,
    };
    let result = match spec.depth_mode {
        SimDepthMode::Exact => k_star_exact_opts(&d, &spec.budget, false)?,
        SimDepthMode::Approx { n_subsets, n_dirs } => {
            k_star_approx(&d, n_subsets, n_dirs, derive_seed(seed, 1))?
        }
    };
    let bounds: BreakdownBounds = bounds_from_k_star(spec.n, spec.p, result.k_star);
    Ok(ReplicateStats {
        k_star: result.k_star,
        abp_lb: bounds.abp_exact,
        rbp_ub: bounds.rbp_ub,
        rh99_lb: bounds.rh99_lb,
        mode: result.mode,
    })
}

/// Five-number summaries of `rbp_ub` over a `(p, n)` grid, one Table-3
/// style run per cell, with per-cell seeds split from the master seed.
pub fn boxplot_summary(
    ps: &[usize],
    ns: &[usize],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<BoxplotCell>> {
    let mut cells = Vec::with_capacity(ps.len() * ns.len());
    for &p in ps {
        for &n in ns {
            let depth_mode = auto_depth_mode(p, n);
            let spec = SimulationSpec {
                p,
                n,
                reps,
                generator: GeneratorKind::StdNormal,
                depth_mode,
                master_seed: derive_seed(master_seed, ((p as u64) << 32) | n as u64),
                budget: EnumerationBudget::default(),
            };
            let summary = run_table_experiment(&spec, TableId::Table3)?;
            let mean_rbp_ub = compensated_sum(summary.replicates.iter().map(|s| ratio_f64(s.rbp_ub)))
                / summary.completed.max(1) as f64;
            cells.push(BoxplotCell {
                p,
                n,
                median_rbp_below_third: summary.rbp_five_number.median < 1.0 / 3.0,
                summary: summary.rbp_five_number,
                mean_rbp_ub,
                depth_mode,
            });
        }
    }
    Ok(cells)
}

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn quantile_r7(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn five_number(sorted: &[f64]) -> FiveNumber {
    assert!(!sorted.is_empty());
    let q1 = quantile_r7(sorted, 0.25);
    let median = quantile_r7(sorted, 0.5);
    let q3 = quantile_r7(sorted, 0.75);
    let iqr = q3 - q1;
    let lo_fence = q1 - 1.5 * iqr;
    let hi_fence = q3 + 1.5 * iqr;
    let whisker_low = sorted
        .iter()
        .copied()
        .find(|&v| v >= lo_fence)
        .unwrap_or(sorted[0]);
    let whisker_high = sorted
        .iter()
        .rev()
        .copied()
        .find(|&v| v <= hi_fence)
        .unwrap_or(sorted[sorted.len() - 1]);
    let outliers = sorted
        .iter()
        .copied()
        .filter(|&v| v < lo_fence || v > hi_fence)
        .collect();
    FiveNumber {
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        whisker_low,
        whisker_high,
        outliers,
    }
}
