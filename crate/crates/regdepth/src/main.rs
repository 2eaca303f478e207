//! `regdepth`: regression depth, deepest-fit medians, breakdown bounds,
//! contamination attacks, and table/boxplot simulations over CSV data.
//!
//! Machine-readable JSON goes to stdout; diagnostics go to stderr. Exit
//! codes: 0 ok, 2 input error, 3 enumeration budget exceeded, 4 attack
//! construction failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regdepth::report::{
    aggregate_csv, replicates_csv, AttackReport, BoundsJson, BoxplotCellJson, DepthReport,
    MedianReport, NullspaceReport, SimulateReport,
};
use regdepth::{budget, csvio, exit_code, AppError, AppResult};
use regdepth_core::breakdown::{self, KStarMode};
use regdepth_core::median::{k_star_approx, k_star_exact_with};
use regdepth_core::sim::{
    auto_depth_mode, boxplot_summary, run_table_experiment, SimDepthMode, SimulationSpec, TableId,
};
use regdepth_core::{EnumerationBudget, Fit};

#[derive(Parser)]
#[command(
    name = "regdepth",
    about = "Regression depth, deepest-fit medians, and finite-sample breakdown bounds",
    version
)]
struct Cli {
    /// Worker threads for the enumeration kernels (default: all cores).
    /// Results are identical for any worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regression depth of a given fit.
    Depth(DepthArgs),
    /// Maximum depth k* and the deepest-fit median.
    Median(MedianArgs),
    /// Breakdown-point bounds derived from k*.
    Bounds(BoundsArgs),
    /// Constructive contamination attacks.
    Attack(AttackArgs),
    /// Monte Carlo reproduction of the bound-comparison tables.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DepthArgs {
    /// Dataset CSV (header x1,...,x{p-1},y).
    #[arg(long)]
    input: PathBuf,
    /// Fit as a comma-separated list: intercept,slope1,...
    #[arg(long)]
    beta: String,
    #[arg(long, value_enum, default_value_t = DepthMethod::Exact)]
    method: DepthMethod,
    /// Random directions for --method approx.
    #[arg(long, default_value_t = 100)]
    n_dirs: usize,
    /// Seed for --method approx (fixed default keeps output a pure
    /// function of the flags).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepthMethod {
    Exact,
    Sweep,
    Approx,
}

#[derive(Args)]
struct MedianArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SearchArg::Exact)]
    mode: SearchArg,
    #[arg(long, default_value_t = 2000)]
    n_subsets: usize,
    #[arg(long, default_value_t = 100)]
    n_dirs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Exact,
    Approx,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SearchArg::Exact)]
    mode: SearchArg,
    #[arg(long, default_value_t = 2000)]
    n_subsets: usize,
    #[arg(long, default_value_t = 100)]
    n_dirs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: AttackModeArg,
    /// Contamination height (vertical-mass modes) or shift length lambda
    /// (nullspace mode).
    #[arg(long)]
    y_mag: f64,
    /// Required: all attack randomness flows from this seed.
    #[arg(long)]
    seed: u64,
    /// Write the contaminated dataset (first dataset for nullspace) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackModeArg {
    Addition,
    Replacement,
    Nullspace,
}

#[derive(Args)]
struct SimulateArgs {
    /// Which published table to reproduce (1, 2, or 3).
    #[arg(long)]
    table: u8,
    #[arg(long, required_unless_present_any = ["grid", "boxplot"])]
    p: Option<usize>,
    #[arg(long, required_unless_present_any = ["grid", "boxplot"])]
    n: Option<usize>,
    #[arg(long)]
    reps: usize,
    /// Required: master seed for the replicate streams.
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SearchArg::Exact)]
    mode: SearchArg,
    #[arg(long, default_value_t = 2000)]
    n_subsets: usize,
    #[arg(long, default_value_t = 100)]
    n_dirs: usize,
    /// Run the full published grid (p in {2,3,5}, n in {10,20,30,50,100,200})
    /// with the per-cell exact/approximate policy; implies the aggregate CSV.
    #[arg(long, conflicts_with_all = ["p", "n", "boxplot"])]
    grid: bool,
    /// Emit per-cell five-number summaries of rbp_ub instead of means.
    #[arg(long, conflicts_with_all = ["grid"])]
    boxplot: bool,
    /// Comma-separated p list for --boxplot.
    #[arg(long, default_value = "2,3,5")]
    p_list: String,
    /// Comma-separated n list for --boxplot.
    #[arg(long, default_value = "10,20,30,40,50")]
    n_list: String,
    /// Write the aggregate CSV (table layout) here.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Write the per-replicate CSV here.
    #[arg(long)]
    out_replicates: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global()
        {
            eprintln!("regdepth: failed to size worker pool: {e}");
            return ExitCode::from(exit_code::INPUT as u8);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("regdepth: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> AppResult<()> {
    let budget = budget::from_env().map_err(AppError::Malformed)?;
    match command {
        Command::Depth(args) => cmd_depth(args),
        Command::Median(args) => cmd_median(args, &budget),
        Command::Bounds(args) => cmd_bounds(args, &budget),
        Command::Attack(args) => cmd_attack(args),
        Command::Simulate(args) => cmd_simulate(args, &budget),
    }
}

fn parse_beta(s: &str) -> AppResult<Fit> {
    let beta: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Malformed(format!("bad beta component {t:?}")))
        })
        .collect::<AppResult<_>>()?;
    Ok(Fit::new(beta)?)
}

fn emit<T: serde::Serialize>(value: &T) -> AppResult<()> {
    println!(
        "{}",
        serde_json::to_string(value).expect("report types serialize")
    );
    Ok(())
}

fn cmd_depth(args: DepthArgs) -> AppResult<()> {
    let d = csvio::read_dataset(&args.input)?;
    let f = parse_beta(&args.beta)?;
    let (witness, method) = match args.method {
        DepthMethod::Exact => (regdepth_core::rdepth_exact(&d, &f)?, "exact".to_string()),
        DepthMethod::Sweep => (regdepth_core::rdepth_sweep_p2(&d, &f)?, "sweep".to_string()),
        DepthMethod::Approx => (
            regdepth_core::rdepth_approx(&d, &f, args.n_dirs, args.seed)?,
            format!("approx(n_dirs={},seed={})", args.n_dirs, args.seed),
        ),
    };
    emit(&DepthReport::new(&witness, &method))
}

fn cmd_median(args: MedianArgs, budget: &EnumerationBudget) -> AppResult<()> {
    let d = csvio::read_dataset(&args.input)?;
    let result = match args.mode {
        SearchArg::Exact => k_star_exact_with(&d, budget)?,
        SearchArg::Approx => k_star_approx(&d, args.n_subsets, args.n_dirs, args.seed)?,
    };
    if result.igp == Some(false) {
        eprintln!("regdepth: warning: dataset is not in general position");
    }
    emit(&MedianReport::new(&d, &result))
}

fn cmd_bounds(args: BoundsArgs, budget: &EnumerationBudget) -> AppResult<()> {
    let d = csvio::read_dataset(&args.input)?;
    let mode = match args.mode {
        SearchArg::Exact => KStarMode::Exact,
        SearchArg::Approx => KStarMode::Approx {
            n_subsets: args.n_subsets,
            n_dirs: args.n_dirs,
            seed: args.seed,
        },
    };
    let bounds = breakdown::bounds_report_with(&d, mode, budget)?;
    emit(&BoundsJson::from(&bounds))
}

fn cmd_attack(args: AttackArgs) -> AppResult<()> {
    let d = csvio::read_dataset(&args.input)?;
    match args.mode {
        AttackModeArg::Addition | AttackModeArg::Replacement => {
            let outcome = if matches!(args.mode, AttackModeArg::Addition) {
                breakdown::attack_addition(&d, args.y_mag, args.seed)?
            } else {
                breakdown::attack_replacement(&d, args.y_mag, args.seed)?
            };
            if let Some(path) = &args.out {
                csvio::write_dataset(&outcome.contaminated, path)?;
            }
            emit(&AttackReport::from(&outcome))
        }
        AttackModeArg::Nullspace => {
            let pair = breakdown::attack_nullspace_pair(&d, args.y_mag)?;
            if let Some(path) = &args.out {
                csvio::write_dataset(&pair.first, path)?;
            }
            emit(&NullspaceReport::from(&pair))
        }
    }
}

fn table_id(t: u8) -> AppResult<TableId> {
    match t {
        1 => Ok(TableId::Table1),
        2 => Ok(TableId::Table2),
        3 => Ok(TableId::Table3),
        other => Err(AppError::Malformed(format!("no table {other}"))),
    }
}

fn parse_list(s: &str, what: &str) -> AppResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| AppError::Malformed(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn cmd_simulate(args: SimulateArgs, budget: &EnumerationBudget) -> AppResult<()> {
    let table = table_id(args.table)?;
    if args.boxplot {
        return cmd_boxplot(&args);
    }
    if args.grid {
        return cmd_grid(&args, table, budget);
    }
    let (p, n) = (args.p.expect("required"), args.n.expect("required"));
    let depth_mode = match args.mode {
        SearchArg::Exact => SimDepthMode::Exact,
        SearchArg::Approx => SimDepthMode::Approx {
            n_subsets: args.n_subsets,
            n_dirs: args.n_dirs,
        },
    };
    let spec = SimulationSpec {
        p,
        n,
        reps: args.reps,
        generator: table.generator(),
        depth_mode,
        master_seed: args.seed,
        budget: *budget,
    };
    let summary = run_table_experiment(&spec, table)?;
    if summary.completed < summary.spec.reps {
        eprintln!(
            "regdepth: warning: budget exhausted after {} of {} replicates",
            summary.completed, summary.spec.reps
        );
    }
    if let Some(path) = &args.out_replicates {
        write_text(path, &replicates_csv(&summary))?;
    }
    if let Some(path) = &args.out_csv {
        let mean = match table {
            TableId::Table3 => summary.mean_rbp_minus_third_pp,
            _ => summary.mean_abp_minus_rh99_pp,
        };
        write_text(path, &aggregate_csv(table, &[n], &[(p, vec![mean])]))?;
    }
    emit(&SimulateReport::from(&summary))
}

fn cmd_grid(args: &SimulateArgs, table: TableId, budget: &EnumerationBudget) -> AppResult<()> {
    let ps = [2usize, 3, 5];
    let ns = [10usize, 20, 30, 50, 100, 200];
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &p in &ps {
        let mut cells = Vec::new();
        for &n in &ns {
            let spec = SimulationSpec {
                p,
                n,
                reps: args.reps,
                generator: table.generator(),
                depth_mode: auto_depth_mode(p, n),
                master_seed: args.seed,
                budget: *budget,
            };
            eprintln!("regdepth: grid cell p={p} n={n} ({:?})", spec.depth_mode);
            let summary = run_table_experiment(&spec, table)?;
            cells.push(match table {
                TableId::Table3 => summary.mean_rbp_minus_third_pp,
                _ => summary.mean_abp_minus_rh99_pp,
            });
            reports.push(SimulateReport::from(&summary));
        }
        rows.push((p, cells));
    }
    if let Some(path) = &args.out_csv {
        write_text(path, &aggregate_csv(table, &ns, &rows))?;
    }
    emit(&reports)
}

fn cmd_boxplot(args: &SimulateArgs) -> AppResult<()> {
    let ps = parse_list(&args.p_list, "p-list")?;
    let ns = parse_list(&args.n_list, "n-list")?;
    let cells = boxplot_summary(&ps, &ns, args.reps, args.seed)?;
    let reports: Vec<BoxplotCellJson> = cells.iter().map(BoxplotCellJson::from).collect();
    if let Some(path) = &args.out_csv {
        let mut csv = String::from("p,n,min,q1,median,q3,max,whisker_low,whisker_high,outliers\n");
        for c in &cells {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                c.p,
                c.n,
                c.summary.min,
                c.summary.q1,
                c.summary.median,
                c.summary.q3,
                c.summary.max,
                c.summary.whisker_low,
                c.summary.whisker_high,
                c.summary.outliers.len(),
            ));
        }
        write_text(path, &csv)?;
    }
    emit(&reports)
}

fn write_text(path: &PathBuf, text: &str) -> AppResult<()> {
    std::fs::write(path, text).map_err(|source| AppError::Io {
        path: path.display().to_string(),
        source,
    })
}
