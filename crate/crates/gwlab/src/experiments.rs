//! Replicated runs, aggregation and output files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gwlab_core::analysis::bounds::{a_m_first_term, b_n_bound, survival};
use gwlab_core::analysis::events::{detect_a_events, detect_b_c, first_lead_gap, EventFamily, EventRecord};
use gwlab_core::analysis::lemmas::{check_dx_bounds, check_lemmas, Tally};
use gwlab_core::analysis::traversal::{check_cluster_consecutive, check_indented_entry, check_reduced_alignment};
use gwlab_core::analysis::{check_povratak, detect_crossings, extract_halfline_changes};
use gwlab_core::processes::generate_stream;
use gwlab_core::walk::{couple_restrict, run_walk};
use gwlab_core::{Construction, Geometry, ProcessSpec, Realization, Site, StopReason, StopRule, Trajectory};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Statistic};
use crate::error::{Error, Result};
use crate::stats::{self, Moments};

/// Identifier of the random number generator written to manifests.
pub const RNG_ID: &str = "ChaCha8 (rand_chacha 0.9): seed_from_u64(base_seed), set_stream(run_index)";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub occurred: usize,
    pub not_occurred: usize,
    pub undecided: usize,
}

impl EventCounts {
    fn add(&mut self, other: &EventCounts) {
        self.occurred += other.occurred;
        self.not_occurred += other.not_occurred;
        self.undecided += other.undecided;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub checked: usize,
    pub violations: usize,
}

impl CheckCounts {
    pub fn add(&mut self, other: &CheckCounts) {
        self.checked += other.checked;
        self.violations += other.violations;
    }
}

impl From<Tally> for CheckCounts {
    fn from(t: Tally) -> CheckCounts {
        CheckCounts {
            checked: t.checked,
            violations: t.violations,
        }
    }
}

/// Which statistics of a run describe the infinite-process walk exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// The walk visited every point of the realization.
    Complete,
    /// Counts are exact for the emitted prefix and lower bounds for the full
    /// walk; events the prefix does not decide are counted as undecided.
    Prefix,
}

/// Per-run statistics, reproducible from `(spec, base_seed, run_index)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_index: u64,
    pub seed: u64,
    pub construction: String,
    pub lambda: f64,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(rename = "L")]
    pub window: f64,
    pub n_points: usize,
    pub n_steps: usize,
    pub stop_reason: StopReason,
    pub exactness: Exactness,
    pub crossings: usize,
    pub halfline_changes: Option<usize>,
    pub max_shadow: f64,
    pub min_shadow: f64,
    pub events: BTreeMap<String, EventCounts>,
    /// Indices of the events that occurred, per family.
    pub event_indices: BTreeMap<String, Vec<usize>>,
    pub checks: BTreeMap<String, CheckCounts>,
    /// Counters that are not pass/fail, such as cluster entries by kind.
    pub observations: BTreeMap<String, usize>,
    /// `X_{τ_2} - X_{τ_1}` for duplicated realizations.
    pub lead_gap: Option<f64>,
}

impl RunSummary {
    /// Occurrences of the `A` event families.
    pub fn a_events(&self) -> usize {
        self.events
            .iter()
            .filter(|(k, _)| k.starts_with("A_"))
            .map(|(_, c)| c.occurred)
            .sum()
    }

    pub fn lemma_failures(&self) -> usize {
        self.checks.values().map(|c| c.violations).sum()
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            run_index: self.run_index,
            seed: self.seed,
            construction: self.construction.clone(),
            lambda: self.lambda,
            r: self.r,
            s: self.s,
            p: self.p,
            alpha: self.alpha,
            window: self.window,
            n_points: self.n_points,
            n_steps: self.n_steps,
            stop_reason: self.stop_reason.as_str().to_string(),
            crossings: self.crossings,
            halfline_changes: self.halfline_changes,
            a_events: self.a_events(),
            lemma_failures: self.lemma_failures(),
        }
    }
}

/// One CSV line; field order is the file's column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub run_index: u64,
    pub seed: u64,
    pub construction: String,
    pub lambda: f64,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub p: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(rename = "L")]
    pub window: f64,
    pub n_points: usize,
    pub n_steps: usize,
    pub stop_reason: String,
    pub crossings: usize,
    pub halfline_changes: Option<usize>,
    pub a_events: usize,
    pub lemma_failures: usize,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRow {
    /// Values in column order; absent values are empty.
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.run_index.to_string(),
            self.seed.to_string(),
            self.construction.clone(),
            self.lambda.to_string(),
            opt(self.r),
            opt(self.s),
            opt(self.p),
            opt(self.alpha),
            self.window.to_string(),
            self.n_points.to_string(),
            self.n_steps.to_string(),
            self.stop_reason.clone(),
            self.crossings.to_string(),
            opt(self.halfline_changes),
            self.a_events.to_string(),
            self.lemma_failures.to_string(),
        ]
    }
}

pub const CSV_COLUMNS: [&str; 16] = [
    "run_index",
    "seed",
    "construction",
    "lambda",
    "r",
    "s",
    "p",
    "alpha",
    "L",
    "n_points",
    "n_steps",
    "stop_reason",
    "crossings",
    "halfline_changes",
    "a_events",
    "lemma_failures",
];

fn event_key(family: EventFamily) -> String {
    family.as_str().to_string()
}

fn tally_events(records: &[EventRecord], summary: &mut RunSummary) {
    for rec in records {
        let counts = summary.events.entry(event_key(rec.family)).or_default();
        match rec.occurred {
            Some(true) => {
                counts.occurred += 1;
                summary.event_indices.entry(event_key(rec.family)).or_default().push(rec.index);
            }
            Some(false) => counts.not_occurred += 1,
            None => counts.undecided += 1,
        }
    }
}

fn observe(summary: &mut RunSummary, key: &str, value: usize) {
    *summary.observations.entry(key.to_string()).or_default() += value;
}

/// Computes the requested statistics of one walk.
pub fn summarize_run(
    real: &Realization,
    traj: &Trajectory,
    run_index: u64,
    base_seed: u64,
    cfg: &ExperimentConfig,
) -> gwlab_core::Result<RunSummary> {
    let spec = &real.spec;
    let shadows: Vec<f64> = traj.shadows().collect();
    let mut summary = RunSummary {
        run_index,
        seed: base_seed,
        construction: spec.construction.name().to_string(),
        lambda: spec.rate_lambda,
        r: spec.separation(),
        s: spec.construction.shift_s(),
        p: spec.construction.thinning_p(),
        alpha: spec.space.geometry.alpha(),
        window: spec.space.window,
        n_points: real.point_count(),
        n_steps: traj.len(),
        stop_reason: traj.stop_reason,
        exactness: match traj.stop_reason {
            StopReason::Exhausted => Exactness::Complete,
            StopReason::Truncated => Exactness::Prefix,
        },
        crossings: 0,
        halfline_changes: None,
        max_shadow: shadows.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min_shadow: shadows.iter().copied().fold(f64::INFINITY, f64::min),
        events: BTreeMap::new(),
        event_indices: BTreeMap::new(),
        checks: BTreeMap::new(),
        observations: BTreeMap::new(),
        lead_gap: None,
    };
    let intersecting = matches!(spec.space.geometry, Geometry::IntersectingLines { .. });
    if cfg.wants(Statistic::Crossings) {
        summary.crossings = detect_crossings(traj).len();
    }
    if cfg.wants(Statistic::HalflineChanges) && intersecting {
        summary.halfline_changes = Some(extract_halfline_changes(traj, &spec.space)?.len());
    }
    let want_events = cfg.wants(Statistic::Events);
    let want_checks = cfg.wants(Statistic::Checks);
    if !(want_events || want_checks) {
        return Ok(summary);
    }
    let events = match spec.construction {
        Construction::IntersectingIndependent => detect_b_c(real, traj, cfg.max_index)?,
        _ => detect_a_events(real, traj)?,
    };
    if want_events {
        tally_events(&events, &mut summary);
        if spec.construction == Construction::ParallelDuplicated {
            summary.lead_gap = first_lead_gap(real);
        }
    }
    if !want_checks {
        return Ok(summary);
    }
    let mut put = |name: &str, counts: CheckCounts| {
        summary.checks.insert(name.to_string(), counts);
    };
    if intersecting {
        let c = events.iter().filter(|e| e.family == EventFamily::CnIntersect);
        put(
            "uv_no_c",
            CheckCounts {
                checked: c.clone().count(),
                violations: c.filter(|e| e.occurred == Some(true)).count(),
            },
        );
        return Ok(summary);
    }
    let lemmas = check_lemmas(real, traj)?;
    put("lemma_distance_a", lemmas.distance_a.into());
    put("lemma_distance_b", lemmas.distance_b.into());
    put("empty_interval", lemmas.empty_int.into());
    match spec.construction {
        Construction::ParallelThinned { .. } | Construction::ParallelShifted { .. } => {
            put("dx_bounds", check_dx_bounds(real, traj).into());
            let pov = check_povratak(real, traj, &events);
            put(
                "povratak",
                CheckCounts {
                    checked: pov.premise_held,
                    violations: pov.violations,
                },
            );
            observe(&mut summary, "povratak_occurrences", pov.occurrences);
            observe(&mut summary, "povratak_undecided", pov.undecided);
        }
        _ => {}
    }
    match spec.construction {
        Construction::ParallelDuplicated => {
            let clusters = check_cluster_consecutive(real, traj)?;
            summary.checks.insert(
                "cluster_consecutive".into(),
                CheckCounts {
                    checked: clusters.consecutive + clusters.broken,
                    violations: clusters.violations(),
                },
            );
            observe(&mut summary, "clusters_entered", clusters.entered);
            observe(&mut summary, "clusters_in_progress", clusters.in_progress);
            let align = check_reduced_alignment(real, traj)?;
            summary.checks.insert(
                "reduced_alignment".into(),
                CheckCounts {
                    checked: align.compared + usize::from(align.origin_first.is_some()),
                    violations: align.violations(),
                },
            );
        }
        Construction::ParallelShifted { .. } => {
            let ind = check_indented_entry(real, traj)?;
            summary.checks.insert(
                "indented_entry".into(),
                CheckCounts {
                    checked: ind.indented_entries,
                    violations: ind.violations(),
                },
            );
            observe(&mut summary, "clusters_entered", ind.entered);
            observe(&mut summary, "irregular_clusters", ind.irregular_skipped);
            observe(&mut summary, "indented_entries", ind.indented_entries);
            observe(&mut summary, "unindented_entries", ind.unindented_entries);
            observe(&mut summary, "early_exits", ind.unindented_early_exits);
            observe(&mut summary, "other_entries", ind.other_entries);
        }
        _ => {}
    }
    Ok(summary)
}

fn pool(cfg: &ExperimentConfig) -> Result<Option<rayon::ThreadPool>> {
    match cfg.worker_count()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(Some)
            .map_err(|e| Error::usage("workers", e.to_string())),
        None => Ok(None),
    }
}

pub(crate) fn par_runs<T: Send>(cfg: &ExperimentConfig, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let job = || (0..cfg.runs).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match pool(cfg)? {
        Some(p) => p.install(job),
        None => job(),
    }
}

fn run_error(run_index: u64) -> impl FnOnce(gwlab_core::Error) -> Error {
    move |source| Error::Run { run_index, source }
}

/// Runs `cfg.runs` replications; run `i` uses stream `(base_seed, i)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<RunSummary>, AggregateReport)> {
    cfg.validate()?;
    let summaries = par_runs(cfg, |i| {
        let real = generate_stream(&cfg.spec, cfg.base_seed, i).map_err(run_error(i))?;
        let traj = run_walk(&real, Site::ORIGIN, StopRule::TruncationSafe).map_err(run_error(i))?;
        summarize_run(&real, &traj, i, cfg.base_seed, cfg).map_err(run_error(i))
    })?;
    let report = aggregate(&summaries, cfg.max_index);
    Ok((summaries, report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    #[serde(rename = "L")]
    pub window: f64,
    pub runs: usize,
    pub mean_crossings: f64,
    pub std_error: f64,
    pub median_crossings: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

#[derive(Clone, Debug)]
pub struct CoupledStudy {
    pub table: GrowthTable,
    /// `per_window[w][i]`: run `i` restricted to `cfg.windows[w]`.
    pub per_window: Vec<Vec<RunSummary>>,
}

impl CoupledStudy {
    pub fn crossings(&self, w: usize) -> Vec<usize> {
        self.per_window[w].iter().map(|s| s.crossings).collect()
    }
}

/// For each run, samples on the largest window and walks on the restriction
/// of that realization to every window of `cfg.windows`.
pub fn coupled_window_study(cfg: &ExperimentConfig) -> Result<CoupledStudy> {
    cfg.validate()?;
    let largest = *cfg
        .windows
        .last()
        .ok_or_else(|| Error::usage("windows", "a coupled study needs at least one window"))?;
    let mut spec: ProcessSpec = cfg.spec;
    spec.space.window = largest;
    spec.validate()?;
    let per_run = par_runs(cfg, |i| {
        let real = generate_stream(&spec, cfg.base_seed, i).map_err(run_error(i))?;
        cfg.windows
            .iter()
            .map(|&l| {
                let restricted = if l == largest {
                    real.clone()
                } else {
                    couple_restrict(&real, l)?
                };
                let traj = run_walk(&restricted, Site::ORIGIN, StopRule::TruncationSafe)?;
                summarize_run(&restricted, &traj, i, cfg.base_seed, cfg)
            })
            .collect::<gwlab_core::Result<Vec<_>>>()
            .map_err(run_error(i))
    })?;
    let per_window: Vec<Vec<RunSummary>> = (0..cfg.windows.len())
        .map(|w| per_run.iter().map(|runs| runs[w].clone()).collect())
        .collect();
    let rows = cfg
        .windows
        .iter()
        .zip(&per_window)
        .map(|(&l, runs)| {
            let xs: Vec<f64> = runs.iter().map(|s| s.crossings as f64).collect();
            let m = stats::moments(&xs);
            GrowthRow {
                window: l,
                runs: runs.len(),
                mean_crossings: m.mean,
                std_error: m.std_error,
                median_crossings: stats::median(&xs),
            }
        })
        .collect();
    Ok(CoupledStudy {
        table: GrowthTable { rows },
        per_window,
    })
}

/// Empirical event frequency next to its closed-form bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub name: String,
    pub index: usize,
    pub runs: usize,
    pub empirical: f64,
    pub std_error: f64,
    pub bound: f64,
    /// For `A_m`: empirical `P(X_{τ_2} - X_{τ_1} > r m)` from the runs' lead gaps.
    pub empirical_tail: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub runs: usize,
    pub statistics: BTreeMap<String, Moments>,
    pub stop_reasons: BTreeMap<String, usize>,
    pub events: BTreeMap<String, EventCounts>,
    pub checks: BTreeMap<String, CheckCounts>,
    pub observations: BTreeMap<String, usize>,
    pub bounds: Vec<BoundComparison>,
    pub growth: Option<GrowthTable>,
}

impl AggregateReport {
    pub fn total_violations(&self) -> usize {
        self.checks.values().map(|c| c.violations).sum()
    }
}

fn index_frequency(summaries: &[RunSummary], family: EventFamily, index: usize) -> (f64, f64) {
    let key = family.as_str();
    let hits = summaries
        .iter()
        .filter(|s| s.event_indices.get(key).is_some_and(|v| v.contains(&index)))
        .count();
    stats::proportion(hits, summaries.len())
}

/// Deterministic summary of a multiset of runs (input order is irrelevant).
pub fn aggregate(summaries: &[RunSummary], max_index: usize) -> AggregateReport {
    let mut sorted: Vec<&RunSummary> = summaries.iter().collect();
    sorted.sort_by_key(|s| s.run_index);
    let sorted: Vec<RunSummary> = sorted.into_iter().cloned().collect();
    let mut report = AggregateReport {
        runs: sorted.len(),
        ..AggregateReport::default()
    };
    if sorted.is_empty() {
        return report;
    }
    type Column<'a> = &'a dyn Fn(&RunSummary) -> Option<f64>;
    let column = |f: Column| -> Option<Moments> {
        let xs: Vec<f64> = sorted.iter().filter_map(f).collect();
        (!xs.is_empty()).then(|| stats::moments(&xs))
    };
    let columns: [(&str, Column); 5] = [
        ("crossings", &|s| Some(s.crossings as f64)),
        ("n_steps", &|s| Some(s.n_steps as f64)),
        ("n_points", &|s| Some(s.n_points as f64)),
        ("halfline_changes", &|s| s.halfline_changes.map(|h| h as f64)),
        ("a_events", &|s| Some(s.a_events() as f64)),
    ];
    for (name, f) in columns {
        if let Some(m) = column(f) {
            report.statistics.insert(name.to_string(), m);
        }
    }
    for s in &sorted {
        *report.stop_reasons.entry(s.stop_reason.as_str().to_string()).or_default() += 1;
        for (k, v) in &s.events {
            report.events.entry(k.clone()).or_default().add(v);
        }
        for (k, v) in &s.checks {
            report.checks.entry(k.clone()).or_default().add(v);
        }
        for (k, v) in &s.observations {
            *report.observations.entry(k.clone()).or_default() += v;
        }
    }
    let first = &sorted[0];
    if let Some(alpha) = first.alpha {
        if report.events.contains_key(EventFamily::BnIntersect.as_str()) {
            for n in 1..=max_index {
                let (freq, se) = index_frequency(&sorted, EventFamily::BnIntersect, n);
                report.bounds.push(BoundComparison {
                    name: "B_n".into(),
                    index: n,
                    runs: sorted.len(),
                    empirical: freq,
                    std_error: se,
                    bound: b_n_bound(n as u32, alpha).expect("validated angle"),
                    empirical_tail: None,
                });
            }
        }
    }
    if let (Some(r), true) = (first.r, report.events.contains_key(EventFamily::AmParallel.as_str())) {
        let gaps: Vec<f64> = sorted.iter().filter_map(|s| s.lead_gap).collect();
        let mut m = 1;
        while r * (m + 1) as f64 <= first.window && m <= max_index {
            let (freq, se) = index_frequency(&sorted, EventFamily::AmParallel, m);
            report.bounds.push(BoundComparison {
                name: "A_m".into(),
                index: m,
                runs: sorted.len(),
                empirical: freq,
                std_error: se,
                bound: a_m_first_term(m as u32, r).expect("validated separation"),
                empirical_tail: survival(&gaps, r * m as f64),
            });
            m += 1;
        }
    }
    report
}

/// Run manifest written next to the CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    pub base_seed: u64,
    pub rng: String,
    pub version: String,
    /// Seconds since the epoch: `SOURCE_DATE_EPOCH` when set, else the clock.
    pub timestamp: u64,
    /// Set when the shift lies outside the proven range.
    pub exploratory: bool,
}

impl Manifest {
    pub fn new(cfg: &ExperimentConfig) -> Manifest {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Manifest {
            config: cfg.clone(),
            base_seed: cfg.base_seed,
            rng: RNG_ID.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            exploratory: cfg.spec.is_exploratory(),
        }
    }
}

/// Paths of the files written for CSV path `csv`.
pub fn output_paths(csv: &Path) -> (PathBuf, PathBuf) {
    (csv.with_extension("report.json"), csv.with_extension("manifest.json"))
}

pub fn write_csv(rows: impl IntoIterator<Item = CsvRow>, path: &Path, extra: &[(&str, String)]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    let mut header: Vec<&str> = extra.iter().map(|(k, _)| *k).collect();
    header.extend(CSV_COLUMNS);
    w.write_record(&header).map_err(csv_err)?;
    for row in rows {
        let mut record: Vec<String> = extra.iter().map(|(_, v)| v.clone()).collect();
        record.extend(row.fields());
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush().map_err(Error::io(path))?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            reason: format!("unexpected header {header:?}"),
        });
    }
    r.deserialize().collect::<std::result::Result<Vec<CsvRow>, _>>().map_err(csv_err)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    std::fs::write(path, text + "\n").map_err(Error::io(path))
}

/// Writes the CSV at `csv`, the report at `<stem>.report.json` and the
/// manifest at `<stem>.manifest.json`.
pub fn write_outputs(
    summaries: &[RunSummary],
    report: &AggregateReport,
    cfg: &ExperimentConfig,
    csv: &Path,
) -> Result<()> {
    if let Some(dir) = csv.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    let mut sorted: Vec<&RunSummary> = summaries.iter().collect();
    sorted.sort_by_key(|s| s.run_index);
    write_csv(sorted.into_iter().map(RunSummary::csv_row), csv, &[])?;
    let (report_path, manifest_path) = output_paths(csv);
    write_json(report, &report_path)?;
    write_json(&Manifest::new(cfg), &manifest_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gwlab_core::Space;

    fn cfg(construction: Construction, space: Space, runs: u64) -> ExperimentConfig {
        ExperimentConfig::new(ProcessSpec::new(construction, 1.0, space).unwrap(), runs, 11)
    }

    #[test]
    fn one_run_report_is_that_run() {
        let c = cfg(Construction::SingleLinePoisson, Space::single_line(20.0).unwrap(), 1);
        let (runs, report) = run_experiment(&c).unwrap();
        assert_eq!(runs.len(), 1);
        let m = &report.statistics["crossings"];
        assert_eq!(m.mean, runs[0].crossings as f64);
        assert_eq!(m.std_error, 0.0);
        assert_eq!(report.statistics["n_steps"].mean, runs[0].n_steps as f64);
    }

    #[test]
    fn aggregate_ignores_order() {
        let c = cfg(
            Construction::ParallelThinned { p: 0.5 },
            Space::parallel(1.0, 15.0).unwrap(),
            12,
        );
        let (mut runs, report) = run_experiment(&c).unwrap();
        runs.reverse();
        assert_eq!(aggregate(&runs, c.max_index), report);
        assert!(report.checks.contains_key("dx_bounds"));
    }

    #[test]
    fn intersecting_runs_compare_with_bounds() {
        let c = cfg(
            Construction::IntersectingIndependent,
            Space::intersecting(std::f64::consts::FRAC_PI_2, 20.0).unwrap(),
            20,
        );
        let (runs, report) = run_experiment(&c).unwrap();
        assert!(runs.iter().all(|s| s.halfline_changes.is_some()));
        assert_eq!(report.bounds.len(), 15);
        assert_eq!(report.bounds[9].bound, b_n_bound(10, std::f64::consts::FRAC_PI_2).unwrap());
    }

    #[test]
    fn coupled_windows_share_prefixes() {
        let c = cfg(Construction::ParallelDuplicated, Space::parallel(1.0, 40.0).unwrap(), 10)
            .with_windows(&[10.0, 20.0, 40.0]);
        let study = coupled_window_study(&c).unwrap();
        assert_eq!(study.table.rows.len(), 3);
        for i in 0..10 {
            let a = &study.per_window[0][i];
            let b = &study.per_window[2][i];
            assert!(a.n_steps <= b.n_steps);
            assert!(a.crossings <= b.crossings);
        }
        let single = coupled_window_study(&c.clone().with_windows(&[40.0])).unwrap();
        assert_eq!(single.table.rows.len(), 1);
        assert!(coupled_window_study(&c.with_windows(&[])).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut c = cfg(Construction::ParallelShifted { s: 0.3 }, Space::parallel(1.0, 15.0).unwrap(), 16);
        c.workers = Some(1);
        let (a, _) = run_experiment(&c).unwrap();
        c.workers = Some(4);
        let (b, _) = run_experiment(&c).unwrap();
        assert_eq!(a, b);
    }
}
