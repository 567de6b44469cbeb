//! Metrics, SNR sweeps, result files, and re-scoring of externally produced
//! predictions. Every accuracy and NMSE number reported anywhere goes through
//! the functions here.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channelgeom::Position3D;
use crate::dataset::{read_dataset, split_indices, DatasetKind, DetectionSample, LocalizationSample, SampleGenerator};
use crate::error::{Error, Result};
use crate::estimators::{
    default_greedy_tolerance, detect_faults_exhaustive, detect_faults_greedy, nmse, DetectionResult,
};
use crate::fault::{effective_profile, sample_fault_scenario, FaultStatusVector, PhaseProfile};
use crate::scene::SceneConfig;
use crate::signal::{add_awgn, bs_received, effective_bs_matrix, BsSignal, NoiseSpec, Pilot};

/// Bumped whenever a metric definition changes.
pub const METRIC_VERSION: u32 = 1;

/// Version of the predictions schema accepted by [`import_neural_results`].
pub const RESULTS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Greedy,
    Exhaustive,
}

/// Runs `solver` on one observation. The greedy solver stops at the default
/// tolerance for `snr_db`.
pub fn solve(
    solver: Solver,
    y: &BsSignal,
    a: &crate::CMatrix,
    phases: &PhaseProfile,
    max_faulty: usize,
    snr_db: f64,
) -> Result<DetectionResult> {
    match solver {
        Solver::Exhaustive => detect_faults_exhaustive(y, a, phases),
        Solver::Greedy => {
            let tol = default_greedy_tolerance(y, snr_db);
            detect_faults_greedy(y, a, phases, max_faulty.min(a.ncols()), tol)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub accuracy: f64,
    pub cumulative_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    /// Fraction of trials whose whole status vector is right.
    pub scenario_accuracy: f64,
    /// Fraction of correct element statuses, pooled over trials.
    pub elementwise_accuracy: f64,
    /// Empirical CDF of per-trial elementwise accuracy, one row per distinct value.
    pub accuracy_cdf: Vec<CdfPoint>,
    pub trials: usize,
}

/// Empirical CDF of `values`, ascending, one point per distinct value.
pub fn empirical_cdf(values: &[f64]) -> Vec<CdfPoint> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<CdfPoint> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.accuracy == v => last.cumulative_probability = p,
            _ => out.push(CdfPoint { accuracy: v, cumulative_probability: p }),
        }
    }
    if let Some(last) = out.last_mut() {
        last.cumulative_probability = 1.0;
    }
    out
}

pub fn detection_accuracy(estimates: &[FaultStatusVector], truths: &[FaultStatusVector]) -> Result<DetectionReport> {
    if estimates.len() != truths.len() {
        return Err(Error::dim(truths.len(), estimates.len(), "estimates vs truths"));
    }
    if truths.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut exact = 0usize;
    let mut matched = 0usize;
    let mut total = 0usize;
    let mut per_trial = Vec::with_capacity(truths.len());
    for (e, t) in estimates.iter().zip(truths) {
        if e.len() != t.len() {
            return Err(Error::dim(t.len(), e.len(), "estimated vs true status length"));
        }
        let hits = e.as_slice().iter().zip(t.as_slice()).filter(|(a, b)| a == b).count();
        exact += usize::from(hits == t.len());
        matched += hits;
        total += t.len();
        per_trial.push(if t.is_empty() { 1.0 } else { hits as f64 / t.len() as f64 });
    }
    Ok(DetectionReport {
        scenario_accuracy: exact as f64 / truths.len() as f64,
        elementwise_accuracy: if total == 0 { 1.0 } else { matched as f64 / total as f64 },
        accuracy_cdf: empirical_cdf(&per_trial),
        trials: truths.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub nmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub nmse: f64,
    pub count: usize,
    /// What `points[..].x` measures, e.g. `snr_db` or `epoch`.
    pub axis: String,
    pub points: Vec<CurvePoint>,
}

/// NMSE over all records plus a per-SNR curve.
pub fn localization_report(estimates: &[Position3D], truths: &[Position3D], snr_db: &[f64]) -> Result<LocalizationReport> {
    let total = nmse(estimates, truths)?;
    if snr_db.len() != truths.len() {
        return Err(Error::dim(truths.len(), snr_db.len(), "snr labels vs truths"));
    }
    let mut groups: BTreeMap<u64, (f64, Vec<Position3D>, Vec<Position3D>)> = BTreeMap::new();
    for ((e, t), s) in estimates.iter().zip(truths).zip(snr_db) {
        // order-preserving key for finite and infinite values alike
        let bits = s.to_bits();
        let key = if bits >> 63 == 1 { !bits } else { bits | 1 << 63 };
        let g = groups.entry(key).or_insert_with(|| (*s, Vec::new(), Vec::new()));
        g.1.push(*e);
        g.2.push(*t);
    }
    let mut points = Vec::new();
    for (x, e, t) in groups.values() {
        // a single-position group has no spread to normalize by
        if let Ok(v) = nmse(e, t) {
            points.push(CurvePoint { x: *x, nmse: v });
        }
    }
    Ok(LocalizationReport {
        nmse: total,
        count: truths.len(),
        axis: "snr_db".into(),
        points,
    })
}

/// Fixed part of an SNR sweep; channels and faults are redrawn every trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scene: SceneConfig,
    pub mu_position: Position3D,
    pub max_faulty: usize,
}

impl Default for SweepConfig {
    /// 4x4 BS, 4x4 RIS, up to two faults.
    fn default() -> Self {
        let mut scene = SceneConfig::default();
        scene.ris_array = crate::scene::ArraySize::new(4, 4);
        Self {
            scene,
            mu_position: Position3D::new(30.0, 6.0, 0.5),
            max_faulty: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub report: DetectionReport,
}

fn mix(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed driving the noise at sweep point `point`.
pub fn point_seed(seed: u64, point: usize) -> u64 {
    mix(seed, point as u64 + 1)
}

/// Detection accuracy at each SNR. Trial `t` sees the same channel and fault
/// scenario at every point (drawn from `seed`); only the noise differs, drawn
/// from [`point_seed`].
pub fn snr_sweep(
    config: &SweepConfig,
    snr_points: &[f64],
    solver: Solver,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if snr_points.is_empty() {
        return Err(Error::InvalidInput("snr sweep needs at least one point".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("snr sweep needs at least one trial".into()));
    }
    config.scene.validate()?;
    if !config.scene.is_visible(config.mu_position) {
        return Err(Error::InvalidInput(format!("user {:?} is behind the RIS", config.mu_position)));
    }
    let n = config.scene.ris_array.len();
    if config.max_faulty > n {
        return Err(Error::InvalidInput(format!("max_faulty {} exceeds N = {n}", config.max_faulty)));
    }
    let phases = PhaseProfile::unity(n);
    let pilot = Pilot::default();

    let scenarios: Vec<_> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = crate::dataset::sample_rng(seed, t);
            let ch = config
                .scene
                .draw_environment(&mut rng, config.mu_position)?
                .realize(&config.scene, config.mu_position)?;
            let truth = sample_fault_scenario(&mut rng, n, config.max_faulty)?;
            let profile = effective_profile(&phases, &truth)?;
            let clean = bs_received::<rand_chacha::ChaCha8Rng>(&ch.h_rb, &profile, &ch.g_ur, pilot, None)?;
            let a = effective_bs_matrix(&ch.h_rb, &ch.g_ur, pilot)?;
            Ok((a, clean, truth))
        })
        .collect::<Result<_>>()?;

    snr_points
        .iter()
        .enumerate()
        .map(|(p, &snr_db)| {
            let pseed = point_seed(seed, p);
            let spec = NoiseSpec::new(snr_db)?;
            let (est, truth): (Vec<_>, Vec<_>) = scenarios
                .par_iter()
                .enumerate()
                .map(|(t, (a, clean, truth))| {
                    let y = if clean.0.norm_squared() == 0.0 {
                        clean.clone()
                    } else {
                        let mut rng = crate::dataset::sample_rng(pseed, t as u64);
                        BsSignal(add_awgn(&clean.0, spec, &mut rng)?)
                    };
                    let r = solve(solver, &y, a, &phases, config.max_faulty, snr_db)?;
                    Ok((r.estimated_statuses, truth.clone()))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip();
            Ok(SweepPoint {
                snr_db,
                report: detection_accuracy(&est, &truth)?,
            })
        })
        .collect()
}

/// Any report this crate can write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Detection(DetectionReport),
    Localization(LocalizationReport),
    Sweep { points: Vec<SweepPoint> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ResultFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
struct JsonEnvelope {
    metric_version: u32,
    #[serde(flatten)]
    report: Report,
}

fn summary_line(pairs: &[(&str, String)]) -> String {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}\n", body.join(","))
}

/// Writes a report.
///
/// CSV layouts (first line is a `#` summary, then a header row):
///
/// * detection: `# scenario_accuracy=..,elementwise_accuracy=..,trials=..`, then
///   `accuracy,cumulative_probability` rows, ascending;
/// * localization: `# nmse=..,count=..,axis=..`, then `x,nmse` rows;
/// * sweep: `# metric_version=..`, then `snr_db,scenario_accuracy,elementwise_accuracy,trials`
///   rows. Per-point CDFs are only kept in JSON.
///
/// JSON is `{"metric_version": .., "report": "<kind>", ..fields}`.
pub fn emit_results(report: &Report, path: &Path, format: ResultFormat) -> Result<()> {
    let bytes = match format {
        ResultFormat::Json => serde_json::to_vec_pretty(&JsonEnvelope {
            metric_version: METRIC_VERSION,
            report: report.clone(),
        })?,
        ResultFormat::Csv => {
            let (summary, mut w) = match report {
                Report::Detection(r) => (
                    summary_line(&[
                        ("scenario_accuracy", r.scenario_accuracy.to_string()),
                        ("elementwise_accuracy", r.elementwise_accuracy.to_string()),
                        ("trials", r.trials.to_string()),
                    ]),
                    csv::Writer::from_writer(Vec::new()),
                ),
                Report::Localization(r) => (
                    summary_line(&[
                        ("nmse", r.nmse.to_string()),
                        ("count", r.count.to_string()),
                        ("axis", r.axis.clone()),
                    ]),
                    csv::Writer::from_writer(Vec::new()),
                ),
                Report::Sweep { .. } => (
                    summary_line(&[("metric_version", METRIC_VERSION.to_string())]),
                    csv::Writer::from_writer(Vec::new()),
                ),
            };
            match report {
                Report::Detection(r) => {
                    w.write_record(["accuracy", "cumulative_probability"])?;
                    for p in &r.accuracy_cdf {
                        w.write_record([p.accuracy.to_string(), p.cumulative_probability.to_string()])?;
                    }
                }
                Report::Localization(r) => {
                    w.write_record(["x", "nmse"])?;
                    for p in &r.points {
                        w.write_record([p.x.to_string(), p.nmse.to_string()])?;
                    }
                }
                Report::Sweep { points } => {
                    w.write_record(["snr_db", "scenario_accuracy", "elementwise_accuracy", "trials"])?;
                    for p in points {
                        w.write_record([
                            p.snr_db.to_string(),
                            p.report.scenario_accuracy.to_string(),
                            p.report.elementwise_accuracy.to_string(),
                            p.report.trials.to_string(),
                        ])?;
                    }
                }
            }
            let body = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
            let mut out = summary.into_bytes();
            out.extend(body);
            out
        }
    };
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Format(format!("cannot parse {what} from {s:?}")))
}

/// Reads a file written by [`emit_results`]. A sweep CSV comes back with
/// empty per-point CDFs.
pub fn read_results(path: &Path, format: ResultFormat) -> Result<Report> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    match format {
        ResultFormat::Json => {
            let env: JsonEnvelope = serde_json::from_reader(BufReader::new(file))?;
            if env.metric_version != METRIC_VERSION {
                return Err(Error::VersionMismatch {
                    found: env.metric_version,
                    expected: METRIC_VERSION,
                });
            }
            Ok(env.report)
        }
        ResultFormat::Csv => {
            let mut reader = BufReader::new(file);
            let mut first = String::new();
            reader.read_line(&mut first).map_err(|e| Error::io(path, e))?;
            let summary: BTreeMap<String, String> = first
                .trim()
                .strip_prefix('#')
                .ok_or_else(|| Error::Format("missing '#' summary line".into()))?
                .split(',')
                .filter_map(|kv| kv.trim().split_once('='))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            let get = |k: &str| summary.get(k).ok_or_else(|| Error::Format(format!("summary lacks {k}")));
            let mut csv = csv::Reader::from_reader(reader);
            let header: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
            let rows: Vec<csv::StringRecord> = csv.records().collect::<std::result::Result<_, _>>()?;
            match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
                ["accuracy", "cumulative_probability"] => Ok(Report::Detection(DetectionReport {
                    scenario_accuracy: parse_num(get("scenario_accuracy")?, "scenario_accuracy")?,
                    elementwise_accuracy: parse_num(get("elementwise_accuracy")?, "elementwise_accuracy")?,
                    trials: parse_num(get("trials")?, "trials")?,
                    accuracy_cdf: rows
                        .iter()
                        .map(|r| {
                            Ok(CdfPoint {
                                accuracy: parse_num(&r[0], "accuracy")?,
                                cumulative_probability: parse_num(&r[1], "cumulative_probability")?,
                            })
                        })
                        .collect::<Result<_>>()?,
                })),
                ["x", "nmse"] => Ok(Report::Localization(LocalizationReport {
                    nmse: parse_num(get("nmse")?, "nmse")?,
                    count: parse_num(get("count")?, "count")?,
                    axis: get("axis")?.clone(),
                    points: rows
                        .iter()
                        .map(|r| Ok(CurvePoint { x: parse_num(&r[0], "x")?, nmse: parse_num(&r[1], "nmse")? }))
                        .collect::<Result<_>>()?,
                })),
                ["snr_db", "scenario_accuracy", "elementwise_accuracy", "trials"] => Ok(Report::Sweep {
                    points: rows
                        .iter()
                        .map(|r| {
                            Ok(SweepPoint {
                                snr_db: parse_num(&r[0], "snr_db")?,
                                report: DetectionReport {
                                    scenario_accuracy: parse_num(&r[1], "scenario_accuracy")?,
                                    elementwise_accuracy: parse_num(&r[2], "elementwise_accuracy")?,
                                    accuracy_cdf: Vec::new(),
                                    trials: parse_num(&r[3], "trials")?,
                                },
                            })
                        })
                        .collect::<Result<_>>()?,
                }),
                other => Err(Error::Format(format!("unrecognized CSV header {other:?}"))),
            }
        }
    }
}

/// A predictions file re-scored against its dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedResults {
    pub algorithm: String,
    pub dataset_checksum: String,
    /// Dataset record indices that were scored, ascending.
    pub indices: Vec<usize>,
    pub report: Report,
}

fn schema(location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Schema {
        location: location.into(),
        reason: reason.into(),
    }
}

fn field<'a>(v: &'a Value, key: &str, loc: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| schema(loc, format!("missing field `{key}`")))
}

/// Re-scores a predictions file against the test split of the dataset at
/// `dataset_path`.
///
/// Schema:
///
/// ```json
/// {
///   "format_version": 1,
///   "dataset_checksum": "<16 hex digits from the dataset manifest>",
///   "algorithm": "neural",
///   "task": "detection" | "localization",
///   "predictions": [
///     {"index": 3, "statuses": [1, 0, 1, ...]},
///     {"index": 7, "position": [30.1, 5.9, 0.5]}
///   ]
/// }
/// ```
///
/// `predictions` must list exactly the test-split record indices of the
/// dataset, in ascending order. The split is
/// `split_indices(record_count, split_ratio, master_seed)`.
pub fn import_neural_results(results_path: &Path, dataset_path: &Path) -> Result<ImportedResults> {
    let text = fs::read_to_string(results_path).map_err(|e| Error::io(results_path, e))?;
    let doc: Value = serde_json::from_str(&text)?;
    let version = field(&doc, "format_version", "$")?
        .as_u64()
        .ok_or_else(|| schema("$.format_version", "expected an unsigned integer"))?;
    if version != u64::from(RESULTS_FORMAT_VERSION) {
        return Err(Error::VersionMismatch {
            found: version as u32,
            expected: RESULTS_FORMAT_VERSION,
        });
    }
    let checksum = field(&doc, "dataset_checksum", "$")?
        .as_str()
        .ok_or_else(|| schema("$.dataset_checksum", "expected a string"))?
        .to_string();
    let algorithm = field(&doc, "algorithm", "$")?
        .as_str()
        .ok_or_else(|| schema("$.algorithm", "expected a string"))?
        .to_string();
    let task: DatasetKind = serde_json::from_value(field(&doc, "task", "$")?.clone())
        .map_err(|e| schema("$.task", e.to_string()))?;
    let preds = field(&doc, "predictions", "$")?
        .as_array()
        .ok_or_else(|| schema("$.predictions", "expected an array"))?;

    let manifest = crate::dataset::read_manifest(dataset_path)?;
    if !checksum.eq_ignore_ascii_case(&manifest.checksum) {
        return Err(Error::Provenance {
            expected: manifest.checksum,
            found: checksum,
        });
    }
    if task != manifest.manifest.kind {
        return Err(schema("$.task", format!("dataset holds {:?} records", manifest.manifest.kind)));
    }
    let (_, test) = split_indices(manifest.record_count as usize, manifest.manifest.split_ratio, manifest.manifest.master_seed)?;
    if preds.len() != test.len() {
        return Err(schema(
            "$.predictions",
            format!("{} predictions, test split has {} records", preds.len(), test.len()),
        ));
    }
    for (i, (p, &want)) in preds.iter().zip(&test).enumerate() {
        let loc = format!("predictions[{i}]");
        let idx = field(p, "index", &loc)?
            .as_u64()
            .ok_or_else(|| schema(&loc, "index must be an unsigned integer"))?;
        if idx != want as u64 {
            return Err(schema(&loc, format!("index {idx}, expected test record {want}")));
        }
    }

    let report = match task {
        DatasetKind::Detection => {
            let data = read_dataset::<DetectionSample>(dataset_path)?;
            let n = data.manifest().scene.ris_array.len();
            let mut est = Vec::with_capacity(test.len());
            for (i, p) in preds.iter().enumerate() {
                let loc = format!("predictions[{i}]");
                let arr = field(p, "statuses", &loc)?
                    .as_array()
                    .ok_or_else(|| schema(&loc, "statuses must be an array"))?;
                if arr.len() != n {
                    return Err(schema(&loc, format!("{} statuses, expected {n}", arr.len())));
                }
                let bytes: Vec<u8> = arr
                    .iter()
                    .map(|b| match b.as_u64() {
                        Some(v @ (0 | 1)) => Ok(v as u8),
                        _ => Err(schema(&loc, format!("status {b} is not 0 or 1"))),
                    })
                    .collect::<Result<_>>()?;
                est.push(FaultStatusVector::from_bytes(&bytes)?);
            }
            let truth: Vec<_> = test.iter().map(|&i| data.samples[i].element_statuses.clone()).collect();
            Report::Detection(detection_accuracy(&est, &truth)?)
        }
        DatasetKind::Localization => {
            let data = read_dataset::<LocalizationSample>(dataset_path)?;
            let mut est = Vec::with_capacity(test.len());
            for (i, p) in preds.iter().enumerate() {
                let loc = format!("predictions[{i}]");
                let arr: [f64; 3] = serde_json::from_value(field(p, "position", &loc)?.clone())
                    .map_err(|_| schema(&loc, "position must be three numbers"))?;
                if arr.iter().any(|v| !v.is_finite()) {
                    return Err(schema(&loc, "position must be finite"));
                }
                est.push(Position3D::from_array(arr));
            }
            let truth: Vec<_> = test.iter().map(|&i| data.samples[i].mu_position).collect();
            let snr: Vec<_> = test.iter().map(|&i| data.samples[i].snr_db).collect();
            Report::Localization(localization_report(&est, &truth, &snr)?)
        }
    };
    Ok(ImportedResults {
        algorithm,
        dataset_checksum: checksum,
        indices: test,
        report,
    })
}

/// Runs a classical solver over `indices` of a detection dataset. Channels are
/// regenerated from the manifest.
pub fn detect_dataset(
    samples: &[DetectionSample],
    generator: &SampleGenerator,
    indices: &[usize],
    solver: Solver,
) -> Result<DetectionReport> {
    let pilot = generator.pilot();
    let max_faulty = generator.manifest().max_faulty;
    let (est, truth): (Vec<_>, Vec<_>) = indices
        .par_iter()
        .map(|&i| {
            let s = samples.get(i).ok_or(Error::IndexOutOfRange { index: i, len: samples.len() })?;
            let ch = generator.channel(i as u64)?;
            let a = effective_bs_matrix(&ch.h_rb, &ch.g_ur, pilot)?;
            let r = solve(solver, &s.bs_signal(), &a, generator.phases(), max_faulty, s.snr_db)?;
            Ok((r.estimated_statuses, s.element_statuses.clone()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    detection_accuracy(&est, &truth)
}
