use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gwlab::config::CONSTRUCTION_NAMES;
use gwlab::experiments::{output_paths, write_csv, write_json, CsvRow};
use gwlab::io;
use gwlab::suites::{run_suite, SuiteOptions, SUITES};
use gwlab::{coupled_window_study, run_experiment, write_outputs, Error, ExperimentConfig, Result, SpecArgs};
use gwlab_core::analysis::bounds::{theoretical_bounds, BoundParams};
use gwlab_core::analysis::events::first_lead_gap;
use gwlab_core::processes::generate_stream;
use gwlab_core::walk::run_walk;
use gwlab_core::{Construction, ProcessSpec, Site, Space, StopRule};

#[derive(Parser)]
#[command(name = "gwlab", version, about = "Greedy walks on point processes over one and two lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicated walks and write per-run CSV, report and manifest.
    Simulate(SimulateArgs),
    /// Run a verification suite; exits 0 iff no violation is found.
    Verify(VerifyArgs),
    /// Repeat an experiment over values of one parameter.
    Sweep(SweepArgs),
    /// Print the closed-form tail bounds.
    Bounds(BoundsArgs),
    /// Turn a trajectory export into plot-ready CSV with cluster annotations.
    ExportPlotData(ExportArgs),
}

#[derive(Args, Clone, Default)]
struct ProcessFlags {
    /// single-line, intersecting, parallel-duplicated, parallel-thinned or parallel-shifted.
    #[arg(long)]
    construction: Option<String>,
    /// Half-width L of the simulation window [-L, L].
    #[arg(long)]
    window: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Distance between parallel lines.
    #[arg(long)]
    r: Option<f64>,
    /// Angle between intersecting lines, in radians.
    #[arg(long)]
    alpha: Option<f64>,
    /// Thinning probability (parallel-thinned).
    #[arg(long)]
    p: Option<f64>,
    /// Shift of line r (parallel-shifted).
    #[arg(long)]
    s: Option<f64>,
    /// Accept shifts up to r instead of r/sqrt(3); results are labeled exploratory.
    #[arg(long)]
    allow_unproven_s: bool,
}

impl ProcessFlags {
    fn spec_args(&self) -> Result<SpecArgs> {
        let construction = self
            .construction
            .clone()
            .ok_or_else(|| Error::usage("--construction", format!("required; one of {}", CONSTRUCTION_NAMES.join(", "))))?;
        let window = self.window.ok_or_else(|| Error::usage("--window", "required"))?;
        Ok(SpecArgs {
            construction,
            lambda: self.lambda,
            window,
            r: self.r,
            alpha: self.alpha,
            p: self.p,
            s: self.s,
            allow_unproven_s: self.allow_unproven_s,
        })
    }

    fn spec(&self) -> Result<ProcessSpec> {
        self.spec_args()?.build()
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    process: ProcessFlags,
    /// JSON experiment config; replaces the process, run and seed flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u64>,
    /// Comma-separated increasing windows for a coupled-window study.
    #[arg(long, value_delimiter = ',')]
    windows: Vec<f64>,
    /// Per-run CSV; the report and manifest are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes one run's trajectory (JSON) and realization next to it.
    #[arg(long)]
    trajectory_out: Option<PathBuf>,
    /// Run whose trajectory is exported.
    #[arg(long, default_value_t = 0)]
    trajectory_run: u64,
    /// Also write the binary columnar trajectory dump.
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: Option<String>,
    /// List the available suites and exit.
    #[arg(long)]
    list_suites: bool,
    #[arg(long, default_value_t = 1000)]
    runs: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Replaces the suite's default process when --construction is given.
    #[command(flatten)]
    process: ProcessFlags,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    process: ProcessFlags,
    /// One of p, s, r, alpha.
    #[arg(long)]
    param: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 15)]
    max_index: u32,
    /// Duplicated runs used to estimate the lead-gap tail next to the A_m bound.
    #[arg(long, default_value_t = 0)]
    runs: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100.0)]
    window: f64,
}

#[derive(Args)]
struct ExportArgs {
    /// Trajectory JSON (or binary dump with extension .bin).
    #[arg(long)]
    input: PathBuf,
    /// Realization JSON; defaults to `<input stem>.realization.json` when present.
    #[arg(long)]
    realization: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::usage(flag, "required"))
}

fn print_summary(report: &gwlab::AggregateReport) {
    for (name, m) in &report.statistics {
        let label = if name == "crossings" { "mean_crossings".to_string() } else { format!("mean_{name}") };
        println!("{label}={:.4}±{:.4} (median {})", m.mean, m.std_error, m.quantiles[2].1);
    }
    for (name, c) in &report.events {
        println!(
            "events {name}: occurred {}, not occurred {}, undecided {}",
            c.occurred, c.not_occurred, c.undecided
        );
    }
    for (name, c) in &report.checks {
        println!("check {name}: checked {}, violations {}", c.checked, c.violations);
    }
    for (name, v) in &report.observations {
        println!("observed {name}: {v}");
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => {
            let mut flags = args.process.clone();
            if flags.window.is_none() {
                flags.window = args.windows.last().copied();
            }
            let spec = flags.spec()?;
            ExperimentConfig::new(spec, required(args.runs, "--runs")?, required(args.seed, "--seed")?)
        }
    };
    if !args.windows.is_empty() {
        cfg.windows = args.windows.clone();
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    if args.out.is_some() {
        cfg.output_path = args.out.clone();
    }
    cfg.validate()?;
    if cfg.spec.is_exploratory() {
        println!("note: exploratory shift outside the proven range");
    }

    if cfg.windows.len() > 1 {
        let study = coupled_window_study(&cfg)?;
        for row in &study.table.rows {
            println!(
                "L={}: mean_crossings={:.4}±{:.4}, median {}",
                row.window, row.mean_crossings, row.std_error, row.median_crossings
            );
        }
        if let Some(out) = &cfg.output_path {
            let largest = study.per_window.len() - 1;
            let mut report = gwlab::aggregate(&study.per_window[largest], cfg.max_index);
            report.growth = Some(study.table.clone());
            let rows = study.per_window.iter().flatten().map(|s| s.csv_row());
            write_csv(rows, out, &[])?;
            let (report_path, manifest_path) = output_paths(out);
            write_json(&report, &report_path)?;
            write_json(&gwlab::experiments::Manifest::new(&cfg), &manifest_path)?;
        }
    } else {
        let (summaries, report) = run_experiment(&cfg)?;
        print_summary(&report);
        if let Some(out) = &cfg.output_path {
            write_outputs(&summaries, &report, &cfg, out)?;
            println!("wrote {}", out.display());
        }
    }

    if let Some(path) = &args.trajectory_out {
        let real = generate_stream(&cfg.spec, cfg.base_seed, args.trajectory_run)?;
        let traj = run_walk(&real, Site::ORIGIN, StopRule::TruncationSafe)?;
        io::write_trajectory(&traj, path)?;
        io::write_realization(&real, &path.with_extension("realization.json"))?;
        if args.binary {
            io::write_trajectory_binary(&traj, &path.with_extension("bin"))?;
        }
        println!("wrote trajectory of run {} ({} steps) to {}", args.trajectory_run, traj.len(), path.display());
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<bool> {
    if args.list_suites {
        for s in SUITES {
            println!("{s}");
        }
        return Ok(true);
    }
    let suite = required(args.suite, "--suite")?;
    let spec = match args.process.construction {
        Some(_) => Some(args.process.spec()?),
        None => None,
    };
    let report = run_suite(
        &suite,
        &SuiteOptions {
            runs: args.runs,
            seed: args.seed,
            spec,
            workers: args.workers,
        },
    )?;
    for line in &report.lines {
        println!("{line}");
    }
    println!(
        "{}: {} runs, checked {}, violations {} -> {}",
        report.suite,
        report.runs,
        report.checked,
        report.violations,
        if report.passed() { "PASS" } else { "FAIL" }
    );
    Ok(report.passed())
}

fn sweep_spec(base: &ProcessFlags, param: &str, value: f64) -> Result<ProcessSpec> {
    let mut flags = base.clone();
    match param {
        "p" => flags.p = Some(value),
        "s" => flags.s = Some(value),
        "r" => flags.r = Some(value),
        "alpha" => flags.alpha = Some(value),
        other => return Err(Error::usage("--param", format!("expected p, s, r or alpha, got {other:?}"))),
    }
    flags.spec_args()?.build().map_err(|e| match e {
        Error::Usage { reason, .. } => Error::usage("--values", format!("{param}={value}: {reason}")),
        other => other,
    })
}

fn sweep(args: SweepArgs) -> Result<()> {
    let runs = required(args.runs, "--runs")?;
    let seed = required(args.seed, "--seed")?;
    if runs == 0 {
        return Err(Error::usage("--runs", "must be at least 1"));
    }
    // Validate every value before running anything.
    let specs: Vec<ProcessSpec> = args
        .values
        .iter()
        .map(|&v| sweep_spec(&args.process, &args.param, v))
        .collect::<Result<_>>()?;
    let mut rows: Vec<(String, CsvRow)> = Vec::new();
    for (&value, spec) in args.values.iter().zip(specs) {
        let mut cfg = ExperimentConfig::new(spec, runs, seed);
        cfg.workers = args.workers;
        let (summaries, report) = run_experiment(&cfg)?;
        let m = &report.statistics["crossings"];
        println!("{}={value}: mean_crossings={:.4}±{:.4}", args.param, m.mean, m.std_error);
        rows.extend(summaries.iter().map(|s| (value.to_string(), s.csv_row())));
    }
    write_sweep_csv(&args.param, &rows, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn write_sweep_csv(param: &str, rows: &[(String, CsvRow)], out: &Path) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: out.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(out).map_err(csv_err)?;
    let mut header = vec!["sweep_param".to_string(), "sweep_value".to_string()];
    header.extend(gwlab::experiments::CSV_COLUMNS.iter().map(|s| s.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for (value, row) in rows {
        let mut record = vec![param.to_string(), value.clone()];
        record.extend(row.fields());
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: out.to_path_buf(),
        source,
    })
}

fn bounds(args: BoundsArgs) -> Result<()> {
    if args.alpha.is_none() && args.r.is_none() {
        return Err(Error::usage("--alpha/--r", "give at least one"));
    }
    let mut lead_gaps = Vec::new();
    if let (Some(r), true) = (args.r, args.runs > 0) {
        let spec = ProcessSpec::new(
            Construction::ParallelDuplicated,
            1.0,
            Space::parallel(r, args.window).map_err(|e| Error::usage("--r", e.to_string()))?,
        )?;
        for i in 0..args.runs {
            let real = generate_stream(&spec, args.seed, i)?;
            lead_gaps.extend(first_lead_gap(&real));
        }
    }
    let rows = theoretical_bounds(&BoundParams {
        alpha: args.alpha,
        r: args.r,
        max_index: args.max_index,
        lead_gaps,
    })
    .map_err(|e| Error::usage("--alpha/--r/--max-index", e.to_string()))?;
    println!("name,index,bound,empirical_lead_gap_tail");
    for row in rows {
        let tail = row.empirical_tail.map(|t| t.to_string()).unwrap_or_default();
        println!("{},{},{:e},{tail}", row.name, row.index, row.value);
    }
    Ok(())
}

fn export(args: ExportArgs) -> Result<()> {
    let rows = if args.input.extension().is_some_and(|e| e == "bin") {
        io::read_trajectory_binary(&args.input)?
    } else {
        io::read_trajectory_rows(&args.input)?
    };
    let real_path = args.realization.clone().or_else(|| {
        let p = args.input.with_extension("realization.json");
        p.exists().then_some(p)
    });
    let real = real_path.as_deref().map(io::read_realization).transpose()?;
    let clusters = io::export_plot_data(&rows, real.as_ref(), &args.out)?;
    println!("wrote {} steps to {}", rows.len(), args.out.display());
    if let Some(n) = clusters {
        println!("wrote {n} clusters to {}", args.out.with_extension("clusters.csv").display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a).map(|_| true),
        Command::Bounds(a) => bounds(a).map(|_| true),
        Command::ExportPlotData(a) => export(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

