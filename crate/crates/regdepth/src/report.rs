//! JSON shapes for the machine-readable CLI output and the simulation CSV
//! emissions. Exact rationals are rendered as numerator/denominator pairs
//! plus a 17-significant-digit decimal.

use regdepth_core::breakdown::{AttackAction, AttackOutcome, BoundsFlag, BreakdownBounds, NullspacePair};
use regdepth_core::depth::{DepthWitness, TiltSide};
use regdepth_core::median::{DeepestFitResult, Maximizer, SearchMode};
use regdepth_core::sim::{BoxplotCell, FiveNumber, SimDepthMode, SimulationSummary, TableId};
use regdepth_core::{Dataset, Rational};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
    pub decimal: String,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        let v = *r.numer() as f64 / *r.denom() as f64;
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
            decimal: format!("{v:.16e}"),
        }
    }
}

fn tilt_side_str(side: TiltSide) -> &'static str {
    match side {
        TiltSide::Toward => "toward",
        TiltSide::Away => "away",
    }
}

fn mode_str(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::Exact => "exact",
        SearchMode::Approximate => "approximate",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthReport {
    pub count: usize,
    pub n: usize,
    pub fraction: f64,
    pub fraction_rational: RationalJson,
    pub direction_u: Vec<f64>,
    pub cut_v: f64,
    pub tilt_side: &'static str,
    pub method: String,
}

impl DepthReport {
    pub fn new(w: &DepthWitness, method: &str) -> Self {
        DepthReport {
            count: w.count(),
            n: w.n(),
            fraction: w.fraction(),
            fraction_rational: w.fraction_ratio().into(),
            direction_u: w.direction().to_vec(),
            cut_v: w.cut(),
            tilt_side: tilt_side_str(w.side()),
            method: method.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximizerJson {
    pub indices: Vec<usize>,
    pub beta: Vec<f64>,
    pub count: usize,
}

impl From<&Maximizer> for MaximizerJson {
    fn from(m: &Maximizer) -> Self {
        MaximizerJson {
            indices: m.indices.clone(),
            beta: m.fit.beta().to_vec(),
            count: m.witness.count(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MedianReport {
    pub k_star: usize,
    pub n: usize,
    pub p: usize,
    pub depth: f64,
    pub t_star: Vec<f64>,
    pub mode: &'static str,
    pub distinct_maximizers: usize,
    pub maximizers: Vec<MaximizerJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub igp: Option<bool>,
}

impl MedianReport {
    pub fn new(d: &Dataset, r: &DeepestFitResult) -> Self {
        MedianReport {
            k_star: r.k_star,
            n: d.n(),
            p: d.p(),
            depth: r.k_star as f64 / d.n() as f64,
            t_star: r.t_star.beta().to_vec(),
            mode: mode_str(r.mode),
            distinct_maximizers: r.distinct_maximizers,
            maximizers: r.maximizers.iter().map(MaximizerJson::from).collect(),
            igp: r.igp,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsJson {
    pub n: usize,
    pub p: usize,
    pub k_star: usize,
    pub m_min: usize,
    pub abp_exact: RationalJson,
    pub rbp_ub: RationalJson,
    pub rh99_lb: RationalJson,
    pub equivariant_ub: RationalJson,
    pub flags: Vec<&'static str>,
}

impl From<&BreakdownBounds> for BoundsJson {
    fn from(b: &BreakdownBounds) -> Self {
        BoundsJson {
            n: b.n,
            p: b.p,
            k_star: b.k_star,
            m_min: b.m_min,
            abp_exact: b.abp_exact.into(),
            rbp_ub: b.rbp_ub.into(),
            rh99_lb: b.rh99_lb.into(),
            equivariant_ub: b.equivariant_ub.into(),
            flags: b
                .flags
                .iter()
                .map(|f| match f {
                    BoundsFlag::Rh99LowerBoundUninformative => "rh99_lb_uninformative",
                    BoundsFlag::ApproximateKStar => "approximate_k_star",
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackPlanJson {
    pub m: usize,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchors: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replaced: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site_x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub site_y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retained: Option<Vec<usize>>,
}

impl From<&regdepth_core::breakdown::AttackPlan> for AttackPlanJson {
    fn from(p: &regdepth_core::breakdown::AttackPlan) -> Self {
        match &p.action {
            AttackAction::VerticalMass {
                replace,
                anchors,
                replaced,
                site_x,
                site_y,
            } => AttackPlanJson {
                m: p.m,
                kind: if *replace {
                    "replacement_vertical_mass"
                } else {
                    "addition_vertical_mass"
                },
                anchors: Some(anchors.clone()),
                replaced: if *replace { Some(replaced.clone()) } else { None },
                site_x: Some(site_x.clone()),
                site_y: Some(*site_y),
                shift: None,
                retained: None,
            },
            AttackAction::NullspacePair { retained, shift } => AttackPlanJson {
                m: p.m,
                kind: "nullspace_pair",
                anchors: None,
                replaced: None,
                site_x: None,
                site_y: None,
                shift: Some(shift.clone()),
                retained: Some(retained.clone()),
            },
        }
    }
}

fn dataset_rows(d: &Dataset) -> Vec<Vec<f64>> {
    d.rows()
        .map(|(x, y)| {
            let mut row = x.to_vec();
            row.push(y);
            row
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackReport {
    pub plan: AttackPlanJson,
    pub k_star_before: usize,
    pub k_star_after: usize,
    pub attack_fit: Vec<f64>,
    pub attack_fit_count: usize,
    pub t_star_norm: f64,
    pub contaminated: Vec<Vec<f64>>,
}

impl From<&AttackOutcome> for AttackReport {
    fn from(o: &AttackOutcome) -> Self {
        AttackReport {
            plan: (&o.plan).into(),
            k_star_before: o.k_star_before,
            k_star_after: o.k_star_after,
            attack_fit: o.attack_fit.beta().to_vec(),
            attack_fit_count: o.attack_fit_count,
            t_star_norm: o.t_star_norm,
            contaminated: dataset_rows(&o.contaminated),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NullspaceReport {
    pub plan: AttackPlanJson,
    pub shift: Vec<f64>,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<f64>>,
}

impl From<&NullspacePair> for NullspaceReport {
    fn from(p: &NullspacePair) -> Self {
        NullspaceReport {
            plan: (&p.plan).into(),
            shift: p.shift.clone(),
            first: dataset_rows(&p.first),
            second: dataset_rows(&p.second),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiveNumberJson {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<f64>,
}

impl From<&FiveNumber> for FiveNumberJson {
    fn from(f: &FiveNumber) -> Self {
        FiveNumberJson {
            min: f.min,
            q1: f.q1,
            median: f.median,
            q3: f.q3,
            max: f.max,
            whisker_low: f.whisker_low,
            whisker_high: f.whisker_high,
            outliers: f.outliers.clone(),
        }
    }
}

pub fn table_number(t: TableId) -> u8 {
    match t {
        TableId::Table1 => 1,
        TableId::Table2 => 2,
        TableId::Table3 => 3,
    }
}

fn depth_mode_str(m: SimDepthMode) -> String {
    match m {
        SimDepthMode::Exact => "exact".to_string(),
        SimDepthMode::Approx { n_subsets, n_dirs } => {
            format!("approx(n_subsets={n_subsets},n_dirs={n_dirs})")
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub table: u8,
    pub p: usize,
    pub n: usize,
    pub reps: usize,
    pub completed: usize,
    pub master_seed: u64,
    pub depth_mode: String,
    pub mean_abp_minus_rh99_pp: f64,
    pub mean_rbp_minus_third_pp: f64,
    pub rbp_five_number: FiveNumberJson,
}

impl From<&SimulationSummary> for SimulateReport {
    fn from(s: &SimulationSummary) -> Self {
        SimulateReport {
            table: table_number(s.table),
            p: s.spec.p,
            n: s.spec.n,
            reps: s.spec.reps,
            completed: s.completed,
            master_seed: s.spec.master_seed,
            depth_mode: depth_mode_str(s.spec.depth_mode),
            mean_abp_minus_rh99_pp: s.mean_abp_minus_rh99_pp,
            mean_rbp_minus_third_pp: s.mean_rbp_minus_third_pp,
            rbp_five_number: (&s.rbp_five_number).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxplotCellJson {
    pub p: usize,
    pub n: usize,
    pub depth_mode: String,
    pub mean_rbp_ub: f64,
    pub median_rbp_below_third: bool,
    pub summary: FiveNumberJson,
}

impl From<&BoxplotCell> for BoxplotCellJson {
    fn from(c: &BoxplotCell) -> Self {
        BoxplotCellJson {
            p: c.p,
            n: c.n,
            depth_mode: depth_mode_str(c.depth_mode),
            mean_rbp_ub: c.mean_rbp_ub,
            median_rbp_below_third: c.median_rbp_below_third,
            summary: (&c.summary).into(),
        }
    }
}

/// Per-replicate CSV: one row per `(p, n, replicate)`.
pub fn replicates_csv(s: &SimulationSummary) -> String {
    let mut out = String::from("p,n,replicate,k_star,abp_lb,rbp_ub,rh99_lb,mode\n");
    for (r, st) in s.replicates.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}/{},{}/{},{}/{},{}\n",
            s.spec.p,
            s.spec.n,
            r,
            st.k_star,
            st.abp_lb.numer(),
            st.abp_lb.denom(),
            st.rbp_ub.numer(),
            st.rbp_ub.denom(),
            st.rh99_lb.numer(),
            st.rh99_lb.denom(),
            mode_str(st.mode),
        ));
    }
    out
}

/// Aggregate CSV in the published tables' layout: one row per `p`, one
/// column per `n`, cells in percentage points.
pub fn aggregate_csv(table: TableId, ns: &[usize], rows: &[(usize, Vec<f64>)]) -> String {
    let mut out = format!("table,{}\n", table_number(table));
    out.push_str("n");
    for n in ns {
        out.push_str(&format!(",{n}"));
    }
    out.push('\n');
    for (p, cells) in rows {
        out.push_str(&format!("p={p}"));
        for c in cells {
            out.push_str(&format!(",{c:.3}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_json_carries_17_digit_decimal() {
        let r: RationalJson = Rational::new(1, 3).into();
        assert_eq!(r.num, 1);
        assert_eq!(r.den, 3);
        assert_eq!(r.decimal, "3.3333333333333331e-1");
    }

    #[test]
    fn aggregate_csv_matches_table_layout() {
        let csv = aggregate_csv(
            TableId::Table1,
            &[10, 20],
            &[(2, vec![-3.725, -1.776]), (3, vec![10.38, 8.736])],
        );
        assert_eq!(
            csv,
            "table,1\nn,10,20\np=2,-3.725,-1.776\np=3,10.380,8.736\n"
        );
    }
}
