//! Command-line front end: `eval`, `optimize`, `fuzz`, `audit`.
//!
//! Every subcommand is deterministic given its flags — seeds are explicit
//! and nothing reads the environment or the clock. Exit codes: 0 for
//! success (including a clean fuzz), 1 for a verified derived-inequality
//! violation, 2 for usage, parse, or I/O errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    bombieri_bound, derived_form_value, double_sum_m, holder_bound, middle_value, norm_expansion,
    pecaric_bounds, pecaric_lhs, pecaric_self_bounds, printed_form_value, ratio_bound, EvalContext,
};
use crate::exponents::{BranchSelector, ConjugatePair, HolderParams};
use crate::gram::Complex;
use crate::instance::Instance;
use crate::optimizer::{optimize, ObjectiveScope, OptimConfig, OptimResult, OptimTarget};
use crate::report::{BoundRow, EvalReport, InstanceFile, InstanceSummary};
use crate::verify::audit::audit_printed_forms;
use crate::verify::{fuzz, FuzzConfig};

#[derive(Parser)]
#[command(
    name = "gramineq",
    version,
    about = "Gram-matrix bounds on inner product sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the full bound ladder for an instance file
    Eval(EvalArgs),
    /// Search Holder exponents (and branches) minimizing a bound
    Optimize(OptimizeArgs),
    /// Fuzz random instances against every derived inequality link
    Fuzz(FuzzArgs),
    /// Hunt for instances where a printed branch form under-bounds
    Audit(AuditArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OutputFormat {
    /// structured JSON
    Structured,
    /// flat CSV, one row per bound, 17 significant digits
    Tabular,
}

#[derive(Args)]
struct EvalArgs {
    /// Instance file (JSON; see the README format reference)
    #[arg(long)]
    instance: PathBuf,
    /// Primary Holder exponent p (q is its conjugate)
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Secondary exponent alpha for p-side double-Holder branches
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Secondary exponent gamma for q-side double-Holder branches
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    /// Branch selection: 1..9 or "all"
    #[arg(long, default_value = "all")]
    branch: String,
    /// Also emit the printed (literal transcription) branch values
    #[arg(long)]
    printed: bool,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Structured)]
    format: OutputFormat,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// holder | branch-1..branch-9 | pecaric | bombieri | ratio
    #[arg(long, default_value = "pecaric")]
    target: String,
    /// Optimize the chain's Holder bound or the best of all nine branches
    #[arg(long, value_enum, default_value_t = ScopeArg::SingleBranch)]
    scope: ScopeArg,
    /// Points in the p grid
    #[arg(long, default_value_t = 40)]
    grid_points: usize,
    /// Points in the secondary (alpha, gamma) grids
    #[arg(long, default_value_t = 20)]
    secondary_points: usize,
    /// Golden-section iterations per coordinate
    #[arg(long, default_value_t = 32)]
    refine_iters: usize,
    /// Cross-check against a 400-point dense grid scan
    #[arg(long)]
    dense_grid: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum ScopeArg {
    SingleBranch,
    BestOfAll,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    instances: u64,
    /// Largest family size n
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Largest coordinate dimension d
    #[arg(long, default_value_t = 8)]
    d_max: usize,
    /// Conjugate-pair samples per instance (first is always p = 2)
    #[arg(long, default_value_t = 5)]
    pq_samples: u32,
    /// Summary file (always written)
    #[arg(long, default_value = "fuzz_summary.json")]
    out: PathBuf,
    /// Test-only: corrupt branch bounds to exercise the failure path
    #[arg(long, hide = true)]
    self_test_corrupt_bounds: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    instances: u64,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 8)]
    d_max: usize,
    #[arg(long, default_value_t = 5)]
    pq_samples: u32,
    /// Audit coordinate instances only (skip Hermitian probes)
    #[arg(long)]
    coordinates_only: bool,
    /// Report file; counterexamples are written next to it
    #[arg(long, default_value = "audit_report.json")]
    out: PathBuf,
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with exit 0; real usage
            // errors go to stderr with exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Audit(args) => cmd_audit(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: InstanceFile =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    file.into_instance()
        .map_err(|e| format!("invalid instance {}: {e}", path.display()))
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn parse_branches(arg: &str) -> Result<Vec<BranchSelector>, String> {
    if arg == "all" {
        return Ok(BranchSelector::all().to_vec());
    }
    let ix: u8 = arg
        .parse()
        .map_err(|_| format!("--branch must be 1..9 or \"all\", got {arg:?}"))?;
    BranchSelector::from_index(ix)
        .map(|b| vec![b])
        .ok_or_else(|| format!("--branch must be 1..9 or \"all\", got {arg:?}"))
}

fn build_params(p: f64, alpha: f64, gamma: f64) -> Result<HolderParams, String> {
    let pq = ConjugatePair::from_p(p).map_err(|e| format!("--p: {e}"))?;
    let ab = ConjugatePair::from_p(alpha).map_err(|e| format!("--alpha: {e}"))?;
    let gd = ConjugatePair::from_p(gamma).map_err(|e| format!("--gamma: {e}"))?;
    Ok(HolderParams::new(pq).with_ab(ab).with_gd(gd))
}

/// Assembles the full ladder for an instance; shared by `eval` and tests.
pub fn build_eval_report(
    instance: &Instance,
    params: &HolderParams,
    branches: &[BranchSelector],
    include_printed: bool,
) -> Result<EvalReport, String> {
    let gram = instance.gram();
    let proj = instance.proj();
    let pq = params.pq();
    let err = |e: crate::bounds::BoundError| e.to_string();
    let mut rows: Vec<BoundRow> = Vec::new();

    let push_branches =
        |rows: &mut Vec<BoundRow>, ctx: &EvalContext, lhs: f64| -> Result<(), String> {
            for &branch in branches {
                let sub = params
                    .for_branch(branch)
                    .map_err(|issues| format!("branch {}: {issues:?}", branch.index()))?;
                let derived = derived_form_value(ctx, &sub, branch).map_err(err)?;
                rows.push(BoundRow::from_bound(&derived, lhs));
                if include_printed {
                    let printed = printed_form_value(ctx, &sub, branch).map_err(err)?;
                    rows.push(BoundRow::from_bound(&printed, lhs));
                }
            }
            Ok(())
        };

    // combination chain on the coefficients
    let c = instance
        .c()
        .ok_or("field c is required by eval (coefficient chains need it)")?;
    let expansion = norm_expansion(c, gram).map_err(err)?;
    let m = double_sum_m(c, gram).map_err(err)?;
    rows.push(BoundRow::new(
        "combination_double_sum",
        m,
        expansion,
        params,
    ));
    let holder = holder_bound(c, gram, pq).map_err(err)?;
    rows.push(BoundRow::new(
        "combination_holder",
        holder,
        expansion,
        params,
    ));
    let ctx = EvalContext::Combination { alphas: c, gram };
    push_branches(&mut rows, &ctx, expansion)?;

    // classical bounds
    let w_lhs = pecaric_lhs(proj, c).map_err(err)?;
    let (b1, b2) = pecaric_bounds(proj, c, gram).map_err(err)?;
    rows.push(BoundRow::new("pecaric_row_sum", b1, w_lhs, params));
    rows.push(BoundRow::new("pecaric_max_row", b2, w_lhs, params));
    let (self_lhs, self_b1, self_b2) = pecaric_self_bounds(proj, gram).map_err(err)?;
    rows.push(BoundRow::new(
        "pecaric_self_row_sum",
        self_b1,
        self_lhs,
        params,
    ));
    rows.push(BoundRow::new(
        "pecaric_self_max_row",
        self_b2,
        self_lhs,
        params,
    ));
    let (energy, bombieri) = bombieri_bound(proj, gram).map_err(err)?;
    rows.push(BoundRow::new("bombieri", bombieri, energy, params));

    // Pecaric-type chain
    let conj_c: Vec<Complex> = c.iter().map(|z| z.conj()).collect();
    let ctx = EvalContext::Pecaric {
        c: &conj_c,
        proj,
        gram,
    };
    let w_middle = middle_value(&ctx, pq).map_err(err)?;
    rows.push(BoundRow::new("pecaric_holder", w_middle, w_lhs, params));
    push_branches(&mut rows, &ctx, w_lhs)?;

    // Bombieri-type chain
    let ctx = EvalContext::Bombieri { proj, gram };
    let b_middle = middle_value(&ctx, pq).map_err(err)?;
    rows.push(BoundRow::new("bombieri_middle", b_middle, energy, params));
    push_branches(&mut rows, &ctx, energy)?;

    // ratio refinement
    let (ratio_lhs, ratio_rhs) = ratio_bound(proj, gram, pq).map_err(err)?;
    rows.push(BoundRow::new("ratio_bound", ratio_rhs, ratio_lhs, params));

    Ok(EvalReport {
        instance: InstanceSummary::from_instance(instance),
        params: *params,
        rows,
    })
}

fn cmd_eval(args: EvalArgs) -> Result<i32, String> {
    let instance = read_instance(&args.instance)?;
    let params = build_params(args.p, args.alpha, args.gamma)?;
    let branches = parse_branches(&args.branch)?;
    let report = build_eval_report(&instance, &params, &branches, args.printed)?;
    let content = match args.format {
        OutputFormat::Structured => report.to_json(),
        OutputFormat::Tabular => report.to_tabular(),
    };
    write_or_print(args.out.as_deref(), &content)?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct OptimizeReport {
    target: String,
    scope: ObjectiveScope,
    result: OptimResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    dense: Option<DenseCrossCheck>,
}

#[derive(serde::Serialize)]
struct DenseCrossCheck {
    grid_points: usize,
    result: OptimResult,
    relative_gap: f64,
}

fn cmd_optimize(args: OptimizeArgs) -> Result<i32, String> {
    let instance = read_instance(&args.instance)?;
    let target: OptimTarget = args.target.parse().map_err(|e| format!("--target: {e}"))?;
    let scope = match args.scope {
        ScopeArg::SingleBranch => ObjectiveScope::SingleBranch,
        ScopeArg::BestOfAll => ObjectiveScope::BestOfAll,
    };
    let mut config = OptimConfig::new(target).with_scope(scope);
    config.p_grid =
        crate::optimizer::geomspace(crate::optimizer::grid_low(), 100.0, args.grid_points.max(2));
    config.secondary_grid = crate::optimizer::geomspace(
        crate::optimizer::grid_low(),
        100.0,
        args.secondary_points.max(2),
    );
    config.refine_iters = args.refine_iters;
    let result = optimize(&instance, &config).map_err(|e| e.to_string())?;
    if result.skipped_fraction() > 0.01 {
        eprintln!(
            "warning: {:.2}% of parameter points were skipped for numeric overflow",
            100.0 * result.skipped_fraction()
        );
    }
    let dense = if args.dense_grid {
        let dense_config = config.dense(400);
        let dense_result = optimize(&instance, &dense_config).map_err(|e| e.to_string())?;
        let scale = result
            .best_value
            .abs()
            .max(dense_result.best_value.abs())
            .max(1e-300);
        let relative_gap = (result.best_value - dense_result.best_value).abs() / scale;
        Some(DenseCrossCheck {
            grid_points: 400,
            result: dense_result,
            relative_gap,
        })
    } else {
        None
    };
    let report = OptimizeReport {
        target: target.to_string(),
        scope,
        result,
        dense,
    };
    let content = serde_json::to_string_pretty(&report).expect("report serializes");
    write_or_print(args.out.as_deref(), &content)?;
    Ok(0)
}

fn cmd_fuzz(args: FuzzArgs) -> Result<i32, String> {
    let mut config = FuzzConfig::new(args.seed);
    config.instances = args.instances;
    config.n_range = (1, args.n_max.max(1));
    config.d_range = (1, args.d_max.max(1));
    config.pq_samples = args.pq_samples.max(1);
    if args.self_test_corrupt_bounds {
        config.fault_injection = 0.25;
    }
    let summary = fuzz(&config).map_err(|e| e.to_string())?;
    let content = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&args.out, &content)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    println!(
        "fuzz: {} instances, {} checks, {} derived violations ({} numeric skips) -> {}",
        summary.instances,
        summary.total_checks,
        summary.derived_violations,
        summary.numeric_skips,
        args.out.display()
    );
    if summary.derived_violations > 0 {
        let ce_path = counterexample_path(&args.out, "violation");
        if let Some(first) = summary.violations.first() {
            let instance = crate::verify::random_instance(&config, first.instance_index);
            let file = InstanceFile::from_instance(&instance);
            let text = serde_json::to_string_pretty(&file).expect("instance serializes");
            std::fs::write(&ce_path, text)
                .map_err(|e| format!("cannot write {}: {e}", ce_path.display()))?;
            eprintln!(
                "derived violation on link {} (instance {}, sample {}): counterexample at {}",
                first.link,
                first.instance_index,
                first.sample_index,
                ce_path.display()
            );
        }
        return Ok(1);
    }
    Ok(0)
}

fn counterexample_path(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    out.with_file_name(format!("{stem}_{tag}.json"))
}

fn cmd_audit(args: AuditArgs) -> Result<i32, String> {
    let mut config = FuzzConfig::new(args.seed);
    config.instances = args.instances;
    config.n_range = (1, args.n_max.max(1));
    config.d_range = (1, args.d_max.max(1));
    config.pq_samples = args.pq_samples.max(1);
    config.include_gram_direct = !args.coordinates_only;
    let report = audit_printed_forms(&config).map_err(|e| e.to_string())?;
    let content = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&args.out, &content)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    let mut findings = 0u64;
    for row in &report.rows {
        if let Some(worst) = &row.worst {
            findings += row.violations;
            let tag = format!("ce_{}_branch{}", row.source.label(), row.branch);
            let ce_path = counterexample_path(&args.out, &tag);
            let text = serde_json::to_string_pretty(&worst.instance).expect("instance serializes");
            std::fs::write(&ce_path, text)
                .map_err(|e| format!("cannot write {}: {e}", ce_path.display()))?;
            println!(
                "{} branch {}: {} violations / {} checks; worst printed {:.6e} vs middle {:.6e} \
                 (p = {}), counterexample at {}",
                row.source.label(),
                row.branch,
                row.violations,
                row.checks,
                worst.printed_value,
                worst.middle_value,
                worst.params.pq().p(),
                ce_path.display()
            );
        }
    }
    println!(
        "audit: {} printed-form violations across {} rows -> {}",
        findings,
        report.rows.len(),
        args.out.display()
    );
    Ok(0)
}
