//! Verification suites: each runs a batch of seeded walks and counts
//! violations of one property.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use gwlab_core::processes::generate_stream;
use gwlab_core::walk::{couple_restrict, run_walk, run_walk_naive};
use gwlab_core::{Construction, ProcessSpec, Site, Space, StopReason, StopRule};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiments::{par_runs, run_experiment, summarize_run, AggregateReport, CheckCounts};

pub const SUITES: [&str; 9] = [
    "oracle-equivalence",
    "prefix-stability",
    "lemma-distance",
    "empty-interval",
    "cluster-consecutive",
    "indented-entry",
    "povratak",
    "dx-bounds",
    "uv-no-C",
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub runs: u64,
    pub seed: u64,
    /// Overrides the suite's default process.
    pub spec: Option<ProcessSpec>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub runs: u64,
    /// The suite's own property, summed over its runs.
    pub checked: usize,
    pub violations: usize,
    /// Every checker evaluated on the suite's runs.
    pub checks: BTreeMap<String, CheckCounts>,
    pub lines: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn absorb(&mut self, checks: &BTreeMap<String, CheckCounts>) {
        for (k, v) in checks {
            self.checks.entry(k.clone()).or_default().add(v);
        }
    }
}

/// The five constructions with the parameters the suites use by default.
pub fn default_specs(window: f64) -> Vec<ProcessSpec> {
    let par = |c| ProcessSpec::new(c, 1.0, Space::parallel(1.0, window).expect("window")).expect("spec");
    vec![
        ProcessSpec::new(Construction::SingleLinePoisson, 1.0, Space::single_line(window).expect("window"))
            .expect("spec"),
        ProcessSpec::new(
            Construction::IntersectingIndependent,
            1.0,
            Space::intersecting(FRAC_PI_2, window).expect("window"),
        )
        .expect("spec"),
        par(Construction::ParallelDuplicated),
        par(Construction::ParallelThinned { p: 0.5 }),
        par(Construction::ParallelShifted { s: 0.3 }),
    ]
}

fn parallel(c: Construction, r: f64, window: f64) -> ProcessSpec {
    ProcessSpec::new(c, 1.0, Space::parallel(r, window).expect("window")).expect("spec")
}

fn config(spec: ProcessSpec, opts: &SuiteOptions, runs: u64, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(spec, runs, seed);
    cfg.workers = opts.workers;
    cfg
}

/// Optimized engine against the linear-scan oracle, `runs` walks per construction.
pub fn oracle_equivalence(opts: &SuiteOptions) -> Result<SuiteReport> {
    let specs = opts.spec.map_or_else(|| default_specs(50.0), |s| vec![s]);
    let mut report = SuiteReport {
        suite: "oracle-equivalence".into(),
        ..SuiteReport::default()
    };
    for spec in specs {
        let cfg = config(spec, opts, opts.runs, opts.seed);
        let outcomes = par_runs(&cfg, |i| {
            let real = generate_stream(&spec, opts.seed, i).map_err(run_error(i))?;
            let fast = run_walk(&real, Site::ORIGIN, StopRule::TruncationSafe).map_err(run_error(i))?;
            let slow = run_walk_naive(&real, Site::ORIGIN, StopRule::TruncationSafe).map_err(run_error(i))?;
            let summary = summarize_run(&real, &fast, i, opts.seed, &cfg).map_err(run_error(i))?;
            Ok((fast == slow, summary.checks))
        })?;
        let mismatches = outcomes.iter().filter(|(same, _)| !same).count();
        for (_, checks) in &outcomes {
            report.absorb(checks);
        }
        report.runs += opts.runs;
        report.checked += outcomes.len();
        report.violations += mismatches;
        report
            .lines
            .push(format!("{}: {} walks, mismatches: {mismatches}", spec.construction.name(), outcomes.len()));
    }
    Ok(report)
}

fn run_error(run_index: u64) -> impl FnOnce(gwlab_core::Error) -> Error {
    move |source| Error::Run { run_index, source }
}

/// The truncated walk on a window is a strict prefix of the walk on twice
/// the window, for coupled realizations.
pub fn prefix_stability(opts: &SuiteOptions) -> Result<SuiteReport> {
    let specs = opts.spec.map_or_else(|| default_specs(50.0), |s| vec![s]);
    let mut report = SuiteReport {
        suite: "prefix-stability".into(),
        ..SuiteReport::default()
    };
    for spec in specs {
        let large = spec.space.window;
        let small = large / 2.0;
        let cfg = config(spec, opts, opts.runs, opts.seed);
        let outcomes = par_runs(&cfg, |i| {
            let real = generate_stream(&spec, opts.seed, i).map_err(run_error(i))?;
            let inner = couple_restrict(&real, small).map_err(run_error(i))?;
            let a = run_walk(&inner, Site::ORIGIN, StopRule::TruncationSafe).map_err(run_error(i))?;
            let b = run_walk(&real, Site::ORIGIN, StopRule::TruncationSafe).map_err(run_error(i))?;
            let strict = a.stop_reason == StopReason::Truncated
                && a.len() < b.len()
                && b.steps[..a.len()] == a.steps[..]
                && b.step_distances[..a.len()] == a.step_distances[..];
            let mut checks = summarize_run(&inner, &a, i, opts.seed, &cfg).map_err(run_error(i))?.checks;
            for (k, v) in summarize_run(&real, &b, i, opts.seed, &cfg).map_err(run_error(i))?.checks {
                checks.entry(k).or_default().add(&v);
            }
            Ok((strict, checks))
        })?;
        let failures = outcomes.iter().filter(|(ok, _)| !ok).count();
        for (_, checks) in &outcomes {
            report.absorb(checks);
        }
        report.runs += opts.runs;
        report.checked += outcomes.len();
        report.violations += failures;
        report.lines.push(format!(
            "{}: {} pairs (L={small} vs L={large}), not a strict prefix: {failures}",
            spec.construction.name(),
            outcomes.len()
        ));
    }
    Ok(report)
}

fn check_suite(
    name: &str,
    checkers: &[&str],
    specs: Vec<(ProcessSpec, u64)>,
    opts: &SuiteOptions,
) -> Result<(SuiteReport, Vec<AggregateReport>)> {
    let mut report = SuiteReport {
        suite: name.into(),
        ..SuiteReport::default()
    };
    let mut aggregates = Vec::new();
    for (k, (spec, runs)) in specs.into_iter().enumerate() {
        let cfg = config(spec, opts, runs, opts.seed.wrapping_add(k as u64));
        let (_, agg) = run_experiment(&cfg)?;
        report.runs += runs;
        report.absorb(&agg.checks);
        aggregates.push(agg);
    }
    for &c in checkers {
        let counts = report.checks.get(c).copied().unwrap_or_default();
        report.checked += counts.checked;
        report.violations += counts.violations;
        report
            .lines
            .push(format!("{c}: checked {}, violations: {}", counts.checked, counts.violations));
    }
    Ok((report, aggregates))
}

fn one_spec(opts: &SuiteOptions, default: ProcessSpec) -> Vec<(ProcessSpec, u64)> {
    vec![(opts.spec.unwrap_or(default), opts.runs)]
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    if opts.runs == 0 {
        return Err(Error::usage("--runs", "must be at least 1"));
    }
    let thinned = parallel(Construction::ParallelThinned { p: 0.5 }, 1.0, 100.0);
    let shifted = parallel(Construction::ParallelShifted { s: 0.3 }, 1.0, 100.0);
    match name {
        "oracle-equivalence" => oracle_equivalence(opts),
        "prefix-stability" => prefix_stability(opts),
        "lemma-distance" => Ok(check_suite(
            name,
            &["lemma_distance_a", "lemma_distance_b"],
            one_spec(opts, thinned),
            opts,
        )?
        .0),
        "empty-interval" => Ok(check_suite(name, &["empty_interval"], one_spec(opts, thinned), opts)?.0),
        "dx-bounds" => Ok(check_suite(name, &["dx_bounds"], one_spec(opts, thinned), opts)?.0),
        "povratak" => {
            let (mut report, aggs) = check_suite(name, &["povratak"], one_spec(opts, thinned), opts)?;
            let occ: usize = aggs.iter().map(|a| a.observations.get("povratak_occurrences").copied().unwrap_or(0)).sum();
            report.lines.insert(
                0,
                format!("A_k occurrences: {occ}, implications violated: {}", report.violations),
            );
            Ok(report)
        }
        "cluster-consecutive" => {
            let specs = match opts.spec {
                Some(s) => vec![(s, opts.runs)],
                None => {
                    let rs = [0.5, 1.0, 2.0];
                    (0..3)
                        .map(|k| {
                            let runs = opts.runs / 3 + u64::from((k as u64) < opts.runs % 3);
                            (parallel(Construction::ParallelDuplicated, rs[k], 100.0), runs)
                        })
                        .filter(|(_, runs)| *runs > 0)
                        .collect()
                }
            };
            let (mut report, aggs) = check_suite(name, &["cluster_consecutive", "reduced_alignment"], specs, opts)?;
            let entered: usize = aggs.iter().map(|a| a.observations.get("clusters_entered").copied().unwrap_or(0)).sum();
            report.lines.insert(0, format!("clusters entered: {entered}"));
            Ok(report)
        }
        "indented-entry" => {
            let (mut report, aggs) = check_suite(name, &["indented_entry"], one_spec(opts, shifted), opts)?;
            let obs = |k: &str| aggs.iter().map(|a| a.observations.get(k).copied().unwrap_or(0)).sum::<usize>();
            report.lines.push(format!(
                "entries: indented {}, unindented {}, other {}; early exits after unindented entry: {}",
                obs("indented_entries"),
                obs("unindented_entries"),
                obs("other_entries"),
                obs("early_exits"),
            ));
            Ok(report)
        }
        "uv-no-C" => {
            let default = ProcessSpec::new(
                Construction::IntersectingIndependent,
                1.0,
                Space::intersecting(FRAC_PI_2, 60.0).expect("window"),
            )
            .expect("spec");
            Ok(check_suite(name, &["uv_no_c"], one_spec(opts, default), opts)?.0)
        }
        other => Err(Error::usage(
            "--suite",
            format!("unknown suite {other:?}; expected one of {}", SUITES.join(", ")),
        )),
    }
}
