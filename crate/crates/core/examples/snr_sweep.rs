//! Detection accuracy versus SNR, written as CSV and JSON.
//!
//! cargo run --release --example snr_sweep [out_prefix]

use std::path::PathBuf;

use risfaultsim::evaluation::{emit_results, snr_sweep, Report, ResultFormat, Solver, SweepConfig};

fn main() -> risfaultsim::Result<()> {
    let prefix = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("sweep"));
    let config = SweepConfig::default();
    let snr = [0.0, 10.0, 20.0, 30.0];

    for solver in [Solver::Greedy, Solver::Exhaustive] {
        let points = snr_sweep(&config, &snr, solver, 500, 1)?;
        println!("{solver:?}");
        for p in &points {
            println!(
                "  {:>4} dB: scenario {:.3}, elementwise {:.4}",
                p.snr_db, p.report.scenario_accuracy, p.report.elementwise_accuracy
            );
        }
        if solver == Solver::Greedy {
            let report = Report::Sweep { points };
            emit_results(&report, &prefix.with_extension("csv"), ResultFormat::Csv)?;
            emit_results(&report, &prefix.with_extension("json"), ResultFormat::Json)?;
            println!("  written to {}.{{csv,json}}", prefix.display());
        }
    }
    Ok(())
}
