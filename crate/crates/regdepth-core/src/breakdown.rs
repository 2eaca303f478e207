//! Finite-sample breakdown bounds for the deepest-fit median, the
//! constructive contamination attacks that realize them, and an empirical
//! breakdown search.
//!
//! With `m_min = k* - p + 1`:
//!
//! - the addition breakdown point is exactly `m_min / (n + m_min)`,
//! - the replacement breakdown point is at most `m_min / n`,
//! - the classical lower bound is `(ceil(n / (p+1)) - p + 1) / n`
//!   (negative and uninformative when `n <= (p+1)(p-2)`),
//! - regression equivariance alone caps the addition breakdown point at
//!   `(n - p + 1) / (2n - p + 1)`,
//! - the asymptotic reference value is `1/3`.
//!
//! The realizing attack places `m` coincident contaminating points far up
//! a vertical hyperplane spanned by `p - 1` of the projected data points:
//! every fit through the site and `p - 1` remaining observations then
//! carries `m + p - 1 = k*` zero residuals, so it ties the maximum depth
//! and drags the maximizer average off to infinity with the site height.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::combin::Combinations;
use crate::dataset::{Dataset, Fit};
use crate::error::{Error, Result};
use crate::linalg;
use crate::median::{k_star_approx, k_star_exact_opts, DeepestFitResult, EnumerationBudget};
use crate::rng::{derive_seed, SplitMix64};
use crate::Rational;

/// How `k*` is obtained for a bounds report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KStarMode {
    Exact,
    Approx {
        n_subsets: usize,
        n_dirs: usize,
        seed: u64,
    },
}

/// Caveats attached to a bounds report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsFlag {
    /// `n <= (p+1)(p-2)`: the classical lower bound is negative.
    Rh99LowerBoundUninformative,
    /// `k*` came from the approximate search and may undershoot.
    ApproximateKStar,
}

/// The full set of bound values for one dataset, as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownBounds {
    pub n: usize,
    pub p: usize,
    pub k_star: usize,
    /// Fewest contaminating points that break the estimator down.
    pub m_min: usize,
    /// Exact addition breakdown point `m_min / (n + m_min)`.
    pub abp_exact: Rational,
    /// Replacement breakdown upper bound `m_min / n`.
    pub rbp_ub: Rational,
    /// Classical lower bound `(ceil(n/(p+1)) - p + 1) / n`.
    pub rh99_lb: Rational,
    /// Equivariance-only addition upper bound `(n-p+1) / (2n-p+1)`.
    pub equivariant_ub: Rational,
    /// The asymptotic breakdown value, for reference.
    pub asymptotic_ref: Rational,
    pub flags: Vec<BoundsFlag>,
}

/// Fills every formula field from a known `k*`.
pub fn bounds_from_k_star(n: usize, p: usize, k_star: usize) -> BreakdownBounds {
    let ni = n as i64;
    let pi = p as i64;
    let m_min = k_star as i64 - pi + 1;
    let ceil_frac = (ni + pi) / (pi + 1); // ceil(n / (p+1))
    let mut flags = Vec::new();
    if n <= (p + 1) * (p.saturating_sub(2)) {
        flags.push(BoundsFlag::Rh99LowerBoundUninformative);
    }
    BreakdownBounds {
        n,
        p,
        k_star,
        m_min: m_min.max(0) as usize,
        abp_exact: Rational::new(m_min, ni + m_min),
        rbp_ub: Rational::new(m_min, ni),
        rh99_lb: Rational::new(ceil_frac - pi + 1, ni),
        equivariant_ub: Rational::new(ni - pi + 1, 2 * ni - pi + 1),
        asymptotic_ref: Rational::new(1, 3),
        flags,
    }
}

/// Computes `k*` for the dataset and reports all bounds.
pub fn bounds_report(d: &Dataset, mode: KStarMode) -> Result<BreakdownBounds> {
    bounds_report_with(d, mode, &EnumerationBudget::default())
}

/// As [`bounds_report`] with an explicit enumeration budget.
pub fn bounds_report_with(
    d: &Dataset,
    mode: KStarMode,
    budget: &EnumerationBudget,
) -> Result<BreakdownBounds> {
    let result = run_k_star(d, mode, budget)?;
    let mut bounds = bounds_from_k_star(d.n(), d.p(), result.k_star);
    if matches!(mode, KStarMode::Approx { .. }) {
        bounds.flags.push(BoundsFlag::ApproximateKStar);
    }
    Ok(bounds)
}

fn run_k_star(d: &Dataset, mode: KStarMode, budget: &EnumerationBudget) -> Result<DeepestFitResult> {
    match mode {
        KStarMode::Exact => k_star_exact_opts(d, budget, false),
        KStarMode::Approx {
            n_subsets,
            n_dirs,
            seed,
        } => k_star_approx(d, n_subsets, n_dirs, seed),
    }
}

/// Contamination style for attacks and the empirical search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContaminationMode {
    Addition,
    Replacement,
}

/// A concrete contamination recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackPlan {
    pub m: usize,
    pub action: AttackAction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AttackAction {
    /// `m` coincident points at `(site_x, site_y)`, where `site_x` lies in
    /// the affine hull of the anchor observations' `x`s (so the site and
    /// the anchors share a vertical hyperplane). `replaced` lists the
    /// observations overwritten in replacement mode (empty for addition).
    VerticalMass {
        replace: bool,
        anchors: Vec<usize>,
        replaced: Vec<usize>,
        site_x: Vec<f64>,
        site_y: f64,
    },
    /// The equivariance construction: duplicate the first `m`
    /// observations shifted by `+/- (1, x') shift`, where `shift` is
    /// orthogonal to the retained design rows.
    NullspacePair { retained: Vec<usize>, shift: Vec<f64> },
}

/// A constructed and verified contamination.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutcome {
    pub plan: AttackPlan,
    pub contaminated: Dataset,
    pub k_star_before: usize,
    pub k_star_after: usize,
    /// A depth maximizer of the contaminated data passing through the
    /// contamination site (the finite stand-in for the vertical limit).
    pub attack_fit: Fit,
    /// Depth count of `attack_fit` on the contaminated data.
    pub attack_fit_count: usize,
    /// Norm of the contaminated deepest-fit median.
    pub t_star_norm: f64,
}

const ATTACK_RETRIES: usize = 100;

/// Verified addition attack with `m = k* - p + 1` points: places the mass
/// on a vertical hyperplane through `p - 1` projected data points and
/// retries the site until the contaminated maximum depth equals `k*` and
/// some maximizer passes through the site.
pub fn attack_addition(d: &Dataset, y_magnitude: f64, seed: u64) -> Result<AttackOutcome> {
    verified_vertical_mass(d, false, y_magnitude, seed)
}

/// Verified replacement attack: as addition, but `m` non-anchor
/// observations are overwritten and the sample size stays `n`.
pub fn attack_replacement(d: &Dataset, y_magnitude: f64, seed: u64) -> Result<AttackOutcome> {
    verified_vertical_mass(d, true, y_magnitude, seed)
}

fn verified_vertical_mass(
    d: &Dataset,
    replace: bool,
    y_magnitude: f64,
    seed: u64,
) -> Result<AttackOutcome> {
    let base = k_star_exact_opts(d, &EnumerationBudget::default(), false)?;
    let k_star = base.k_star;
    let m = k_star + 1 - d.p(); // k* >= p always, so m >= 1

    let mut detail = String::new();
    for attempt in 0..ATTACK_RETRIES {
        let (plan, contaminated) =
            vertical_mass_with_m(d, replace, m, y_magnitude, derive_seed(seed, attempt as u64))?;
        let after = match k_star_exact_opts(&contaminated, &EnumerationBudget::default(), false) {
            Ok(r) => r,
            // The placement can degenerate the contaminated sample (for
            // example replacement collapsing everything onto one vertical
            // line); treat that as a failed attempt, not an input error.
            Err(Error::BadParameter { detail: d2 }) => {
                detail = format!("attempt {attempt}: contaminated sample degenerate: {d2}");
                continue;
            }
            Err(e) => return Err(e),
        };
        if after.k_star != k_star {
            detail = format!(
                "attempt {attempt}: contaminated k* = {} (want {k_star})",
                after.k_star
            );
            continue;
        }
        let site_hit = |indices: &[usize]| -> bool {
            match &plan.action {
                AttackAction::VerticalMass { replace, replaced, .. } => {
                    if *replace {
                        indices.iter().any(|i| replaced.contains(i))
                    } else {
                        indices.iter().any(|&i| i >= d.n())
                    }
                }
                AttackAction::NullspacePair { .. } => false,
            }
        };
        if let Some(mx) = after.maximizers.iter().find(|mx| site_hit(&mx.indices)) {
            return Ok(AttackOutcome {
                plan,
                contaminated,
                k_star_before: k_star,
                k_star_after: after.k_star,
                attack_fit: mx.fit.clone(),
                attack_fit_count: mx.witness.count(),
                t_star_norm: after.t_star.norm(),
            });
        }
        detail = format!("attempt {attempt}: no maximizer through the site");
    }
    Err(Error::AttackConstructionFailed {
        retries: ATTACK_RETRIES,
        detail,
    })
}

/// Unverified vertical-mass contamination with an explicit `m` (the
/// attacks' constructive step, also used by the search battery at
/// sub-breakdown sizes). `m = 0` returns the dataset unchanged.
pub fn vertical_mass_with_m(
    d: &Dataset,
    replace: bool,
    m: usize,
    y_magnitude: f64,
    seed: u64,
) -> Result<(AttackPlan, Dataset)> {
    let p = d.p();
    let n = d.n();
    if replace && m > n - (p - 1) {
        return Err(Error::BadParameter {
            detail: format!("cannot replace {m} of {n} points while keeping {} anchors", p - 1),
        });
    }
    let mut rng = SplitMix64::new(seed);

    // Anchors: p-1 distinct observations whose x-projections span the
    // vertical hyperplane carrying the mass.
    let mut anchors: Vec<usize> = Vec::with_capacity(p - 1);
    while anchors.len() < p - 1 {
        let i = rng.next_below(n as u64) as usize;
        if !anchors.contains(&i) {
            anchors.push(i);
        }
    }
    anchors.sort_unstable();

    // Site x in the affine hull of the anchor projections.
    let xdim = p - 1;
    let mut site_x = d.x(anchors[0]).to_vec();
    for &a in &anchors[1..] {
        let t = 2.0 * rng.next_open01() - 1.0;
        for c in 0..xdim {
            site_x[c] += t * (d.x(a)[c] - d.x(anchors[0])[c]);
        }
    }
    let site_y = y_magnitude;

    if m == 0 {
        let plan = AttackPlan {
            m,
            action: AttackAction::VerticalMass {
                replace,
                anchors,
                replaced: vec![],
                site_x,
                site_y,
            },
        };
        return Ok((plan, d.clone()));
    }

    let point = (site_x.clone(), site_y);
    let (replaced, contaminated) = if replace {
        let mut pool: Vec<usize> = (0..n).filter(|i| !anchors.contains(i)).collect();
        let mut replaced = Vec::with_capacity(m);
        for _ in 0..m {
            let k = rng.next_below(pool.len() as u64) as usize;
            replaced.push(pool.swap_remove(k));
        }
        replaced.sort_unstable();
        let ds = d.with_replaced_points(&replaced, (&point.0, point.1), d.label())?;
        (replaced, ds)
    } else {
        let copies: Vec<(Vec<f64>, f64)> = (0..m).map(|_| point.clone()).collect();
        (vec![], d.with_added_points(&copies, d.label())?)
    };

    let plan = AttackPlan {
        m,
        action: AttackAction::VerticalMass {
            replace,
            anchors,
            replaced,
            site_x,
            site_y,
        },
    };
    Ok((plan, contaminated))
}

/// The two contaminated datasets of the equivariance upper-bound
/// construction, with `m = n - p + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullspacePair {
    /// `Z^n` followed by the `m` up-shifted duplicates.
    pub first: Dataset,
    /// The `m` down-shifted duplicates followed by `Z^n`.
    pub second: Dataset,
    /// The shift `b = lambda u`, with `u` unit-orthogonal to the retained
    /// design rows.
    pub shift: Vec<f64>,
    pub plan: AttackPlan,
}

/// Builds the dataset pair whose relabeling under the regression shift
/// `-b` forces any regression-equivariant estimator to move by `lambda`
/// between them.
pub fn attack_nullspace_pair(d: &Dataset, lambda: f64) -> Result<NullspacePair> {
    let n = d.n();
    let p = d.p();
    let m = n - p + 1;
    let retained: Vec<usize> = (m..n).collect();
    let rows: Vec<Vec<f64>> = retained
        .iter()
        .map(|&i| {
            let mut w = Vec::with_capacity(p);
            w.push(1.0);
            w.extend_from_slice(d.x(i));
            w
        })
        .collect();
    let row_refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    let u = linalg::null_space_unit(&row_refs, p).ok_or(Error::DegenerateNullspace)?;
    let shift: Vec<f64> = u.iter().map(|c| lambda * c + 0.0).collect(); // +0.0 clears -0.0

    let shifted_point = |i: usize, sign: f64| -> (Vec<f64>, f64) {
        let w_dot_b = shift[0] + linalg::dot(d.x(i), &shift[1..]);
        (d.x(i).to_vec(), d.y(i) + sign * w_dot_b)
    };

    let up: Vec<(Vec<f64>, f64)> = (0..m).map(|i| shifted_point(i, 1.0)).collect();
    let first = d.with_added_points(&up, d.label())?;

    let mut second_rows: Vec<(Vec<f64>, f64)> = (0..m).map(|i| shifted_point(i, -1.0)).collect();
    second_rows.extend(d.rows().map(|(x, y)| (x.to_vec(), y)));
    let second = Dataset::new(p, &second_rows, d.label())?;

    Ok(NullspacePair {
        first,
        second,
        shift: shift.clone(),
        plan: AttackPlan {
            m,
            action: AttackAction::NullspacePair { retained, shift },
        },
    })
}

/// Largest fit norm over all nonsingular `p`-subsets of the original
/// data: while no maximizer of a contaminated sample is forced through a
/// contamination site, the median stays inside this bound.
pub fn bounded_certificate(d: &Dataset) -> Result<f64> {
    let mut combos = Combinations::new(d.n(), d.p());
    let mut best = 0.0f64;
    let mut any = false;
    while let Some(idx) = combos.next() {
        if let Ok(f) = crate::dataset::fit_through_points(d, idx) {
            best = best.max(f.norm());
            any = true;
        }
    }
    if any {
        Ok(best)
    } else {
        Err(Error::BadParameter {
            detail: String::from("no nonsingular p-subset"),
        })
    }
}

/// Strategies tried by the empirical breakdown search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    /// Coincident mass on an anchored vertical hyperplane (two seeded
    /// anchor draws are tried).
    VerticalMass { variant: usize },
    /// The null-space shift pair (addition mode, `m = n - p + 1` only).
    NullspaceShift,
    /// Coincident mass far along the first coordinate axis, off every
    /// anchored hyperplane.
    AxisAlignedFar,
}

/// One strategy evaluation at one contamination size.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrial {
    pub m: usize,
    pub strategy: StrategyKind,
    /// `||t*||` of the contaminated data at the escalating magnitudes.
    pub norms: Vec<f64>,
    pub diverged: bool,
}

/// Result of the empirical breakdown search.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownSearch {
    /// Smallest `m <= m_max` with a diverging strategy; `m_max + 1` when
    /// none diverges.
    pub m_emp: usize,
    pub winning: Option<SearchTrial>,
    /// The bounded-region certificate of the uncontaminated data.
    pub certificate: f64,
    pub trials: Vec<SearchTrial>,
}

/// Escalating contamination magnitudes; breakdown is a limit statement,
/// so the artifact certifies near-linear growth across this sweep.
pub const MAGNITUDE_SWEEP: [f64; 3] = [1e2, 1e4, 1e6];
/// Minimum growth factor per magnitude step to call a strategy divergent
/// (linear growth in the site height gives 100 per step).
pub const DIVERGENCE_RATIO: f64 = 50.0;
/// Absolute floor on the final norm, to keep fp noise from faking ratios.
pub const DIVERGENCE_FLOOR: f64 = 1.0;

const SEARCH_SEED: u64 = 0x5EA7C4;

/// Smallest contamination size at which any battery strategy drives the
/// deepest-fit median's norm into certified divergence. Exact `k*`
/// searches must be affordable for the contaminated sizes involved.
pub fn empirical_breakdown_search(
    d: &Dataset,
    mode: ContaminationMode,
    m_max: usize,
) -> Result<BreakdownSearch> {
    let certificate = bounded_certificate(d)?;
    let mut trials = Vec::new();
    let n = d.n();
    let p = d.p();

    for m in 1..=m_max {
        let mut strategies: Vec<StrategyKind> = vec![
            StrategyKind::VerticalMass { variant: 0 },
            StrategyKind::VerticalMass { variant: 1 },
        ];
        if mode == ContaminationMode::Addition && m == n - p + 1 {
            strategies.push(StrategyKind::NullspaceShift);
        }
        strategies.push(StrategyKind::AxisAlignedFar);

        for strategy in strategies {
            let trial = run_strategy(d, mode, m, strategy)?;
            let done = trial.diverged;
            trials.push(trial);
            if done {
                let winning = trials.last().cloned();
                return Ok(BreakdownSearch {
                    m_emp: m,
                    winning,
                    certificate,
                    trials,
                });
            }
        }
    }
    Ok(BreakdownSearch {
        m_emp: m_max + 1,
        winning: None,
        certificate,
        trials,
    })
}

fn run_strategy(
    d: &Dataset,
    mode: ContaminationMode,
    m: usize,
    strategy: StrategyKind,
) -> Result<SearchTrial> {
    let replace = mode == ContaminationMode::Replacement;
    let mut norms = Vec::with_capacity(MAGNITUDE_SWEEP.len());
    for (step, &mag) in MAGNITUDE_SWEEP.iter().enumerate() {
        let norm = match strategy {
            StrategyKind::VerticalMass { variant } => {
                let seed = derive_seed(SEARCH_SEED, (m as u64) << 8 | variant as u64);
                let (_, contaminated) = vertical_mass_with_m(d, replace, m, mag, seed)?;
                t_star_norm(&contaminated)?
            }
            StrategyKind::NullspaceShift => {
                let pair = attack_nullspace_pair(d, mag)?;
                t_star_norm(&pair.first)?.max(t_star_norm(&pair.second)?)
            }
            StrategyKind::AxisAlignedFar => {
                let contaminated = axis_far_mass(d, replace, m, mag, step)?;
                t_star_norm(&contaminated)?
            }
        };
        norms.push(norm);
    }
    let diverged = norms[1] >= DIVERGENCE_RATIO * norms[0]
        && norms[2] >= DIVERGENCE_RATIO * norms[1]
        && norms[2] >= DIVERGENCE_FLOOR;
    Ok(SearchTrial {
        m,
        strategy,
        norms,
        diverged,
    })
}

fn axis_far_mass(d: &Dataset, replace: bool, m: usize, mag: f64, step: usize) -> Result<Dataset> {
    let spread = (0..d.n()).map(|i| d.x_norm(i)).fold(1.0f64, f64::max);
    let mut site_x = vec![0.0f64; d.x_dim()];
    site_x[0] = 1e3 * spread * (step as f64 + 1.0);
    if replace {
        let replaced: Vec<usize> = (0..m.min(d.n())).collect();
        d.with_replaced_points(&replaced, (&site_x, mag), d.label())
    } else {
        let copies: Vec<(Vec<f64>, f64)> = (0..m).map(|_| (site_x.clone(), mag)).collect();
        d.with_added_points(&copies, d.label())
    }
}

fn t_star_norm(d: &Dataset) -> Result<f64> {
    Ok(k_star_exact_opts(d, &EnumerationBudget::default(), false)?
        .t_star
        .norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::gen_std_normal;

    fn four_point() -> Dataset {
        Dataset::new(
            2,
            &[
                (vec![0.0], 0.0),
                (vec![1.0], 1.0),
                (vec![5.0], 0.0),
                (vec![6.0], 1.0),
            ],
            "four-point",
        )
        .unwrap()
    }

    #[test]
    fn four_point_bounds() {
        let b = bounds_from_k_star(4, 2, 2);
        assert_eq!(b.m_min, 1);
        assert_eq!(b.abp_exact, Rational::new(1, 5));
        assert_eq!(b.rbp_ub, Rational::new(1, 4));
        assert_eq!(b.rh99_lb, Rational::new(1, 4));
        assert_eq!(b.equivariant_ub, Rational::new(3, 7));
        assert!(b.flags.is_empty());
    }

    #[test]
    fn minimal_sample_bounds() {
        // n = p with the forced k* = p: one contaminating point breaks it
        // and the equivariant cap collapses to 1/(n+1).
        for p in [2usize, 3, 5] {
            let b = bounds_from_k_star(p, p, p);
            assert_eq!(b.m_min, 1);
            assert_eq!(b.equivariant_ub, Rational::new(1, p as i64 + 1));
        }
    }

    #[test]
    fn negative_rh99_bound_is_flagged() {
        let b = bounds_from_k_star(10, 5, 5);
        assert_eq!(b.rh99_lb, Rational::new(-2, 10));
        assert!(b.flags.contains(&BoundsFlag::Rh99LowerBoundUninformative));
        // Just above the threshold n = (p+1)(p-2) = 18 the flag clears.
        let b = bounds_from_k_star(19, 5, 7);
        assert!(!b.flags.contains(&BoundsFlag::Rh99LowerBoundUninformative));
    }

    #[test]
    fn bounds_report_on_four_point() {
        let d = four_point();
        let b = bounds_report(&d, KStarMode::Exact).unwrap();
        assert_eq!(b.k_star, 2);
        assert_eq!(b.abp_exact, Rational::new(1, 5));
    }

    #[test]
    fn bounds_are_shift_invariant() {
        let d = gen_std_normal(2, 9, 17).unwrap();
        let shifted = d.regression_shifted(&[3.0, -2.0]).unwrap();
        let a = bounds_report(&d, KStarMode::Exact).unwrap();
        let b = bounds_report(&shifted, KStarMode::Exact).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn abp_never_exceeds_equivariant_cap() {
        for n in 4..12 {
            for p in 2..4 {
                for k in p..=n {
                    let b = bounds_from_k_star(n, p, k);
                    assert!(
                        b.abp_exact <= b.equivariant_ub,
                        "n={n} p={p} k={k}: {} > {}",
                        b.abp_exact,
                        b.equivariant_ub
                    );
                }
            }
        }
    }

    #[test]
    fn addition_attack_verifies_on_four_point() {
        let d = four_point();
        let out = attack_addition(&d, 1e6, 7).unwrap();
        assert_eq!(out.plan.m, 1);
        assert_eq!(out.k_star_before, 2);
        assert_eq!(out.k_star_after, 2);
        assert_eq!(out.attack_fit_count, 2);
        assert_eq!(out.contaminated.n(), 5);
        assert!(out.attack_fit.norm() > 1e5);
        assert!(out.t_star_norm > 1e4);
    }

    #[test]
    fn addition_attack_norm_grows_linearly() {
        let d = four_point();
        let mut last = 0.0;
        for (i, mag) in [1e2, 1e4, 1e6].into_iter().enumerate() {
            let out = attack_addition(&d, mag, 3).unwrap();
            if i > 0 {
                assert!(out.t_star_norm >= 50.0 * last, "{} vs {last}", out.t_star_norm);
            }
            last = out.t_star_norm;
        }
    }

    #[test]
    fn replacement_attack_verifies_on_gaussian_fixture() {
        let d = gen_std_normal(3, 10, 23).unwrap();
        let out = attack_replacement(&d, 1e6, 5).unwrap();
        assert_eq!(out.contaminated.n(), d.n());
        assert_eq!(out.k_star_after, out.k_star_before);
        assert_eq!(out.attack_fit_count, out.k_star_before);
        match &out.plan.action {
            AttackAction::VerticalMass { replace, replaced, anchors, .. } => {
                assert!(*replace);
                assert_eq!(replaced.len(), out.plan.m);
                assert!(replaced.iter().all(|i| !anchors.contains(i)));
            }
            other => panic!("unexpected action {other:?}"),
        }
    }

    #[test]
    fn replacement_with_zero_m_is_identity() {
        let d = four_point();
        let (plan, out) = vertical_mass_with_m(&d, true, 0, 1e6, 9).unwrap();
        assert_eq!(plan.m, 0);
        assert_eq!(out, d);
    }

    #[test]
    fn site_x_lies_on_anchor_flat() {
        let d = gen_std_normal(3, 8, 31).unwrap();
        let (plan, _) = vertical_mass_with_m(&d, false, 2, 1e4, 13).unwrap();
        let AttackAction::VerticalMass { anchors, site_x, .. } = &plan.action else {
            panic!("wrong action");
        };
        // site_x - x_a0 must be parallel to x_a1 - x_a0 (p = 3: the hull
        // is a line).
        let a0 = d.x(anchors[0]);
        let a1 = d.x(anchors[1]);
        let u = [a1[0] - a0[0], a1[1] - a0[1]];
        let v = [site_x[0] - a0[0], site_x[1] - a0[1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        assert!(cross.abs() < 1e-9 * (1.0 + linalg::norm(&u) * linalg::norm(&v)));
    }

    #[test]
    fn nullspace_pair_shift_is_orthogonal_to_retained_rows() {
        // n = 3, p = 2: u is proportional to (-x3, 1) normalized.
        let d = Dataset::new(
            2,
            &[(vec![1.0], 0.5), (vec![2.0], -0.25), (vec![4.0], 1.0)],
            "triple",
        )
        .unwrap();
        let pair = attack_nullspace_pair(&d, 2.0).unwrap();
        assert_eq!(pair.plan.m, 2);
        let w3 = [1.0, 4.0];
        assert!(linalg::dot(&pair.shift, &w3).abs() < 1e-9);
        let expect = 1.0 / (1.0 + 16.0f64).sqrt();
        assert!((pair.shift[1].abs() - 2.0 * expect).abs() < 1e-9);
    }

    #[test]
    fn nullspace_pair_with_zero_lambda_coincides() {
        let d = gen_std_normal(2, 5, 3).unwrap();
        let pair = attack_nullspace_pair(&d, 0.0).unwrap();
        let mut a: Vec<(Vec<f64>, f64)> = pair.first.rows().map(|(x, y)| (x.to_vec(), y)).collect();
        let mut b: Vec<(Vec<f64>, f64)> = pair.second.rows().map(|(x, y)| (x.to_vec(), y)).collect();
        let key = |r: &(Vec<f64>, f64)| (r.0[0].to_bits(), r.1.to_bits());
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
    }

    #[test]
    fn nullspace_pair_datasets_differ_by_regression_shift() {
        let d = gen_std_normal(2, 6, 77).unwrap();
        let pair = attack_nullspace_pair(&d, 10.0).unwrap();
        let neg: Vec<f64> = pair.shift.iter().map(|c| -c).collect();
        let shifted = pair.first.regression_shifted(&neg).unwrap();
        let mut a: Vec<(u64, u64)> = shifted
            .rows()
            .map(|(x, y)| (x[0].to_bits(), quantize(y)))
            .collect();
        let mut b: Vec<(u64, u64)> = pair
            .second
            .rows()
            .map(|(x, y)| (x[0].to_bits(), quantize(y)))
            .collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    fn quantize(y: f64) -> u64 {
        // Round away float dust from the near-zero inner products of the
        // retained rows.
        ((y * 1e9).round() as i64) as u64
    }

    #[test]
    fn empirical_search_finds_m_min_on_four_point() {
        let d = four_point();
        let search = empirical_breakdown_search(&d, ContaminationMode::Addition, 3).unwrap();
        assert_eq!(search.m_emp, 1); // k* - p + 1 = 1
        assert!(search.winning.is_some());
    }

    #[test]
    fn empirical_search_with_zero_budget_returns_sentinel() {
        let d = four_point();
        let search = empirical_breakdown_search(&d, ContaminationMode::Addition, 0).unwrap();
        assert_eq!(search.m_emp, 1);
        assert!(search.winning.is_none());
        assert!(search.trials.is_empty());
    }

    #[test]
    fn collinear_sample_needs_n_minus_one_additions() {
        // k* = n for a perfect fit, so m_min = n - 1; below that the
        // battery must stay bounded.
        let rows: Vec<(Vec<f64>, f64)> = (0..5).map(|i| (vec![i as f64], 0.5 * i as f64)).collect();
        let d = Dataset::new(2, &rows, "line").unwrap();
        let search = empirical_breakdown_search(&d, ContaminationMode::Addition, 4).unwrap();
        assert_eq!(search.m_emp, 4);
        for t in &search.trials {
            if t.m < 4 {
                assert!(!t.diverged, "m = {} diverged: {:?}", t.m, t.norms);
            }
        }
    }
}
