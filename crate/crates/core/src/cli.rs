//! The `risfaultsim` command line.
//!
//! ```text
//! risfaultsim gen detect --count 20000 --max-faulty 15 --seed 7 --out det.bin
//! risfaultsim gen loc --count 60000 --seed 7 --out loc.bin --split-files
//! risfaultsim detect --alg greedy --dataset det.bin --out det_greedy
//! risfaultsim detect --alg exhaustive --n 10 --m 16 --trials 100 --out small
//! risfaultsim localize --db loc_train.bin --query loc_test.bin --k 1 --fingerprint ris --out loc_ris
//! risfaultsim sweep --snr 0:30:5 --trials 500 --out sweep
//! risfaultsim score --results preds.json --dataset det.bin --out scored
//! ```
//!
//! `--snr` takes one value, a comma list (`0,10,20`), or an inclusive range
//! `start:stop:step` (`0:30:5` is 0, 5, .., 30).
//!
//! Exit codes: 0 success, 2 usage error, 3 data error. Every command that
//! writes output also writes `<out>.run.json` with its full configuration,
//! seeds, and the checksums of the datasets it touched.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::channelgeom::Position3D;
use crate::dataset::{
    gen_detection_dataset, gen_localization_dataset, read_dataset, split_indices, write_dataset,
    write_dataset_subset, DatasetFile, DatasetKind, DatasetManifest, DetectionSample, LocalizationSample, Record,
    SampleGenerator,
};
use crate::error::Error;
use crate::estimators::{build_fingerprint_db, fingerprint_localize_nn, sample_fingerprint, FingerprintKind};
use crate::evaluation::{
    detect_dataset, detection_accuracy, emit_results, import_neural_results, localization_report, snr_sweep, solve,
    Report, ResultFormat, Solver, SweepConfig,
};
use crate::fault::{effective_profile, sample_fault_scenario, PhaseProfile};
use crate::scene::ArraySize;
use crate::signal::{add_awgn, bs_received, effective_bs_matrix, BsSignal, NoiseSpec, Pilot};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "risfaultsim", version, about = "RIS fault detection and localization testbed")]
pub struct Cli {
    /// Worker threads (default: logical cores). Output does not depend on it.
    #[arg(long, global = true, env = "RISFAULTSIM_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Generate a dataset (binary + JSON manifest).
    Gen(GenArgs),
    /// Run a classical fault detector on a dataset or on synthetic trials.
    Detect(DetectArgs),
    /// k-NN fingerprint localization.
    Localize(LocalizeArgs),
    /// Detection accuracy versus SNR.
    Sweep(SweepArgs),
    /// Re-score an external predictions file against its dataset.
    Score(ScoreArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum GenKind {
    Detect,
    Loc,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    /// Base manifest JSON; flags below override its fields.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long)]
    pub max_faulty: Option<usize>,
    /// Sub-array count K.
    #[arg(long)]
    pub sa_count: Option<usize>,
    /// Master seed; drawn from entropy and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_snr_list)]
    pub snr: Option<SnrList>,
    /// Keep one multipath environment for all samples.
    #[arg(long)]
    pub fixed_channels: Option<bool>,
    /// Seed of the shared environment (default: the master seed).
    #[arg(long)]
    pub env_seed: Option<u64>,
    /// Train fraction of the train/test split.
    #[arg(long)]
    pub split: Option<f64>,
    /// Also write `<stem>_train.bin` and `<stem>_test.bin`.
    #[arg(long)]
    pub split_files: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[arg(long, value_enum, default_value = "greedy")]
    pub alg: Solver,
    /// Detection dataset; channels are regenerated from its manifest.
    #[arg(long, conflicts_with_all = ["n", "m", "trials"])]
    pub dataset: Option<PathBuf>,
    /// Score only the test split of the dataset.
    #[arg(long, requires = "dataset")]
    pub test_only: bool,
    /// RIS elements for synthetic trials.
    #[arg(long)]
    pub n: Option<usize>,
    /// BS antennas for synthetic trials.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub max_faulty: usize,
    /// SNR of synthetic trials in dB; omit for noiseless.
    #[arg(long)]
    pub snr: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output prefix: writes `<out>.json`, `<out>.csv`, `<out>.run.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct LocalizeArgs {
    #[arg(long, requires = "query", conflicts_with = "dataset")]
    pub db: Option<PathBuf>,
    #[arg(long, requires = "db")]
    pub query: Option<PathBuf>,
    /// Localization dataset, split by its manifest into database and queries.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "ris")]
    pub fingerprint: FingerprintKind,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_snr_list, default_value = "0:30:10")]
    pub snr: SnrList,
    #[arg(long, value_enum, default_value = "greedy")]
    pub alg: Solver,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub max_faulty: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ScoreArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnrList(pub Vec<f64>);

/// Parses `30`, `0,10,20` or `start:stop:step` (inclusive, step > 0).
pub fn parse_snr_list(s: &str) -> Result<SnrList, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
                return Err(format!("bad range {s:?}: need start <= stop and step > 0"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > 10_000 {
                return Err(format!("range {s:?} has too many points"));
            }
            (0..count).map(|i| start + i as f64 * step).collect()
        }
        [single] => single.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("bad SNR spec {s:?}: use a value, a comma list or start:stop:step")),
    };
    if values.is_empty() || values.iter().any(|v| v.is_nan()) {
        return Err(format!("bad SNR spec {s:?}"));
    }
    Ok(SnrList(values))
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::TooLarge { .. } => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        // a global pool can only be installed once per process; later calls keep the first
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Detect(a) => cmd_detect(cli, a),
        Command::Localize(a) => cmd_localize(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Score(a) => cmd_score(cli, a),
    }
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_run_record(cli: &Cli, out: &Path, seeds: serde_json::Value, extra: serde_json::Value) -> CliResult<()> {
    let record = json!({
        "tool": "risfaultsim",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli,
        "seeds": seeds,
        "outputs": extra,
    });
    let path = with_suffix(out, ".run.json");
    let text = serde_json::to_string_pretty(&record).map_err(Error::from)?;
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(())
}

fn emit_both(report: &Report, out: &Path) -> CliResult<(PathBuf, PathBuf)> {
    let j = with_suffix(out, ".json");
    let c = with_suffix(out, ".csv");
    emit_results(report, &j, ResultFormat::Json)?;
    emit_results(report, &c, ResultFormat::Csv)?;
    Ok((j, c))
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> CliResult<()> {
    let kind = match a.kind {
        GenKind::Detect => DatasetKind::Detection,
        GenKind::Loc => DatasetKind::Localization,
    };
    let mut m = match &a.manifest {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let m: DatasetManifest = serde_json::from_str(&text).map_err(Error::from)?;
            if m.kind != kind {
                return Err(usage(format!("manifest {} is for {:?} data", p.display(), m.kind)));
            }
            m
        }
        None => match kind {
            DatasetKind::Detection => DatasetManifest::detection_default(0),
            DatasetKind::Localization => DatasetManifest::localization_default(0),
        },
    };
    if a.manifest.is_none() || a.seed.is_some() {
        m.master_seed = seed_or_entropy(a.seed);
        m.environment_seed = m.master_seed;
    }
    if let Some(v) = a.count {
        m.sample_count = v;
    }
    if let Some(v) = a.max_faulty {
        m.max_faulty = v;
    }
    if let Some(v) = a.sa_count {
        m.sa_count = v;
    }
    if let Some(v) = &a.snr {
        m.snr_db = v.0.clone();
    }
    if let Some(v) = a.fixed_channels {
        m.fixed_channels = v;
    }
    if let Some(v) = a.env_seed {
        m.environment_seed = v;
    }
    if let Some(v) = a.split {
        m.split_ratio = v;
    }
    m.validate().map_err(|e| usage(e.to_string()))?;

    let mut outputs = Vec::new();
    match kind {
        DatasetKind::Detection => {
            let samples = gen_detection_dataset(&m)?;
            outputs.extend(write_all(&m, &samples, &a.out, a.split_files)?);
        }
        DatasetKind::Localization => {
            let samples = gen_localization_dataset(&m)?;
            outputs.extend(write_all(&m, &samples, &a.out, a.split_files)?);
        }
    }
    println!(
        "{:?} dataset: {} samples, N = {}, M = {}, K = {}, max_faulty = {}, snr_db = {:?}, fixed_channels = {}, seed = {}",
        m.kind,
        m.sample_count,
        m.scene.ris_array.len(),
        m.scene.bs_array.len(),
        m.sa_count,
        m.max_faulty,
        m.snr_db,
        m.fixed_channels,
        m.master_seed
    );
    for (path, sum) in &outputs {
        println!("{}  {sum}", path.display());
    }
    let files: Vec<_> = outputs.iter().map(|(p, s)| json!({"path": p, "checksum": s})).collect();
    write_run_record(
        cli,
        &a.out,
        json!({"master_seed": m.master_seed, "environment_seed": m.environment_seed}),
        json!(files),
    )
}

fn write_all<R: Record + Clone>(
    m: &DatasetManifest,
    samples: &[R],
    out: &Path,
    split_files: bool,
) -> CliResult<Vec<(PathBuf, String)>> {
    let mut written = vec![(out.to_path_buf(), crate::dataset::io::checksum_hex(write_dataset(out, m, samples)?))];
    if split_files {
        let (train, test) = split_indices(samples.len(), m.split_ratio, m.master_seed)?;
        let stem = out.with_extension("");
        for (name, idx) in [("_train.bin", train), ("_test.bin", test)] {
            let path = with_suffix(&stem, name);
            let subset: Vec<R> = idx.iter().map(|&i| samples[i].clone()).collect();
            let mut sm = m.clone();
            sm.sample_count = subset.len() as u64;
            let sum = write_dataset_subset(&path, &sm, &subset, Some(idx.iter().map(|&i| i as u64).collect()))?;
            written.push((path, crate::dataset::io::checksum_hex(sum)));
        }
    }
    Ok(written)
}

/// Most nearly square `rows x cols` factorization of `n`.
fn squarish(n: usize) -> ArraySize {
    let mut rows = (n as f64).sqrt() as usize;
    while rows > 1 && !n.is_multiple_of(rows) {
        rows -= 1;
    }
    ArraySize::new(rows.max(1), n / rows.max(1))
}

fn cmd_detect(cli: &Cli, a: &DetectArgs) -> CliResult<()> {
    let (report, seeds, inputs) = if let Some(path) = &a.dataset {
        let data: DatasetFile<DetectionSample> = read_dataset(path)?;
        let generator = SampleGenerator::new(data.manifest())?;
        if data.manifest_file.source_indices.is_some() {
            return Err(usage("detect needs the full generated dataset, not a split file"));
        }
        let indices: Vec<usize> = if a.test_only {
            let m = data.manifest();
            split_indices(data.samples.len(), m.split_ratio, m.master_seed)?.1
        } else {
            (0..data.samples.len()).collect()
        };
        let report = detect_dataset(&data.samples, &generator, &indices, a.alg)?;
        (
            report,
            json!({"master_seed": data.manifest().master_seed}),
            json!([{"path": path, "checksum": data.checksum()}]),
        )
    } else {
        let (Some(n), Some(m)) = (a.n, a.m) else {
            return Err(usage("detect needs --dataset or synthetic --n and --m"));
        };
        let trials = a.trials.unwrap_or(100);
        if trials == 0 || n == 0 || m == 0 {
            return Err(usage("--n, --m and --trials must be positive"));
        }
        let seed = seed_or_entropy(a.seed);
        let mut cfg = SweepConfig::default();
        cfg.scene.ris_array = squarish(n);
        cfg.scene.bs_array = squarish(m);
        cfg.max_faulty = a.max_faulty;
        let report = synthetic_detection(&cfg, a.alg, trials, a.snr, seed)?;
        (report, json!({"seed": seed}), json!([]))
    };
    println!(
        "{:?}: scenario accuracy {:.4}, elementwise accuracy {:.6} over {} trials",
        a.alg, report.scenario_accuracy, report.elementwise_accuracy, report.trials
    );
    let (j, c) = emit_both(&Report::Detection(report), &a.out)?;
    write_run_record(cli, &a.out, seeds, json!({"inputs": inputs, "reports": [j, c]}))
}

/// Independent trials on a small scene, noiseless when `snr_db` is `None`.
pub fn synthetic_detection(
    cfg: &SweepConfig,
    solver: Solver,
    trials: usize,
    snr_db: Option<f64>,
    seed: u64,
) -> crate::Result<crate::evaluation::DetectionReport> {
    use rayon::prelude::*;
    cfg.scene.validate()?;
    let n = cfg.scene.ris_array.len();
    if cfg.max_faulty > n {
        return Err(Error::InvalidInput(format!("max_faulty {} exceeds N = {n}", cfg.max_faulty)));
    }
    let phases = PhaseProfile::unity(n);
    let pilot = Pilot::default();
    let (est, truth): (Vec<_>, Vec<_>) = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = crate::dataset::sample_rng(seed, t);
            let ch = cfg.scene.draw_environment(&mut rng, cfg.mu_position)?.realize(&cfg.scene, cfg.mu_position)?;
            let truth = sample_fault_scenario(&mut rng, n, cfg.max_faulty)?;
            let profile = effective_profile(&phases, &truth)?;
            let clean = bs_received::<rand_chacha::ChaCha8Rng>(&ch.h_rb, &profile, &ch.g_ur, pilot, None)?;
            let y = match snr_db {
                Some(s) if clean.0.norm_squared() > 0.0 => BsSignal(add_awgn(&clean.0, NoiseSpec::new(s)?, &mut rng)?),
                _ => clean,
            };
            let a = effective_bs_matrix(&ch.h_rb, &ch.g_ur, pilot)?;
            let r = solve(solver, &y, &a, &phases, cfg.max_faulty, snr_db.unwrap_or(f64::INFINITY))?;
            Ok((r.estimated_statuses, truth))
        })
        .collect::<crate::Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    detection_accuracy(&est, &truth)
}

fn cmd_localize(cli: &Cli, a: &LocalizeArgs) -> CliResult<()> {
    let (db_samples, queries, inputs) = match (&a.db, &a.query, &a.dataset) {
        (Some(db), Some(q), None) => {
            let d: DatasetFile<LocalizationSample> = read_dataset(db)?;
            let qf: DatasetFile<LocalizationSample> = read_dataset(q)?;
            let inputs = json!([{"path": db, "checksum": d.checksum()}, {"path": q, "checksum": qf.checksum()}]);
            (d.samples, qf.samples, inputs)
        }
        (None, None, Some(path)) => {
            let d: DatasetFile<LocalizationSample> = read_dataset(path)?;
            let m = d.manifest();
            let (train, test) = split_indices(d.samples.len(), m.split_ratio, m.master_seed)?;
            let pick = |ix: &[usize]| ix.iter().map(|&i| d.samples[i].clone()).collect::<Vec<_>>();
            let inputs = json!([{"path": path, "checksum": d.checksum()}]);
            (pick(&train), pick(&test), inputs)
        }
        _ => return Err(usage("localize needs --db and --query, or --dataset")),
    };
    if a.k == 0 || a.k > db_samples.len() {
        return Err(usage(format!("--k {} must be in 1..={}", a.k, db_samples.len())));
    }
    let report = localize_samples(&db_samples, &queries, a.fingerprint, a.k)?;
    println!(
        "{:?} fingerprints, k = {}: NMSE {:.6e} over {} queries",
        a.fingerprint, a.k, report.nmse, report.count
    );
    let (j, c) = emit_both(&Report::Localization(report), &a.out)?;
    write_run_record(cli, &a.out, json!({}), json!({"inputs": inputs, "reports": [j, c]}))
}

/// k-NN localization of every query against a database built from `db`.
pub fn localize_samples(
    db: &[LocalizationSample],
    queries: &[LocalizationSample],
    kind: FingerprintKind,
    k: usize,
) -> crate::Result<crate::evaluation::LocalizationReport> {
    use rayon::prelude::*;
    let fdb = build_fingerprint_db(db, kind)?;
    let est: Vec<Position3D> = queries
        .par_iter()
        .map(|q| fingerprint_localize_nn(&fdb, &sample_fingerprint(q, kind), k).map(|r| r.estimate))
        .collect::<crate::Result<_>>()?;
    let truth: Vec<_> = queries.iter().map(|q| q.mu_position).collect();
    let snr: Vec<_> = queries.iter().map(|q| q.snr_db).collect();
    localization_report(&est, &truth, &snr)
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> CliResult<()> {
    let seed = seed_or_entropy(a.seed);
    let mut cfg = SweepConfig::default();
    cfg.scene.ris_array = squarish(a.n);
    cfg.scene.bs_array = squarish(a.m);
    cfg.max_faulty = a.max_faulty;
    let points = snr_sweep(&cfg, &a.snr.0, a.alg, a.trials, seed)?;
    for p in &points {
        println!(
            "{:>7.2} dB  scenario {:.4}  elementwise {:.6}",
            p.snr_db, p.report.scenario_accuracy, p.report.elementwise_accuracy
        );
    }
    let (j, c) = emit_both(&Report::Sweep { points }, &a.out)?;
    write_run_record(cli, &a.out, json!({"seed": seed}), json!({"reports": [j, c]}))
}

fn cmd_score(cli: &Cli, a: &ScoreArgs) -> CliResult<()> {
    let imported = import_neural_results(&a.results, &a.dataset)?;
    match &imported.report {
        Report::Detection(r) => println!(
            "{}: scenario accuracy {:.4}, elementwise {:.6} over {} test records",
            imported.algorithm, r.scenario_accuracy, r.elementwise_accuracy, r.trials
        ),
        Report::Localization(r) => {
            println!("{}: NMSE {:.6e} over {} test records", imported.algorithm, r.nmse, r.count)
        }
        Report::Sweep { .. } => {}
    }
    let (j, c) = emit_both(&imported.report, &a.out)?;
    write_run_record(
        cli,
        &a.out,
        json!({}),
        json!({"inputs": [{"path": a.dataset, "checksum": imported.dataset_checksum}, {"path": a.results}], "reports": [j, c]}),
    )
}
