//! Scoring an external predictions file (as a learned model would export it)
//! against the test split of a detection dataset.
//!
//! cargo run --release --example score_predictions

use risfaultsim::dataset::{dataset_checksum, gen_detection_dataset, split_indices, write_dataset, DatasetManifest};
use risfaultsim::evaluation::{import_neural_results, Report};
use serde_json::json;

fn main() -> risfaultsim::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| risfaultsim::Error::Format(e.to_string()))?;
    let manifest = DatasetManifest {
        sample_count: 500,
        ..DatasetManifest::detection_default(4)
    };
    let samples = gen_detection_dataset(&manifest)?;
    let data = dir.path().join("det.bin");
    write_dataset(&data, &manifest, &samples)?;
    let (_, test) = split_indices(samples.len(), manifest.split_ratio, manifest.master_seed)?;

    // a "model" that always answers all-healthy
    let predictions: Vec<_> = test
        .iter()
        .map(|&i| json!({"index": i, "statuses": vec![1u8; samples[i].element_statuses.len()]}))
        .collect();
    let file = json!({
        "format_version": 1,
        "dataset_checksum": dataset_checksum(&data)?,
        "algorithm": "all_healthy",
        "task": "detection",
        "predictions": predictions,
    });
    let results = dir.path().join("preds.json");
    std::fs::write(&results, file.to_string()).map_err(|e| risfaultsim::Error::Format(e.to_string()))?;

    let scored = import_neural_results(&results, &data)?;
    if let Report::Detection(r) = &scored.report {
        println!(
            "{}: {} test records, scenario accuracy {:.3}, elementwise {:.4}",
            scored.algorithm, r.trials, r.scenario_accuracy, r.elementwise_accuracy
        );
    }

    // a file made for a different dataset is refused
    let mut wrong = file.clone();
    wrong["dataset_checksum"] = json!("0000000000000000");
    std::fs::write(&results, wrong.to_string()).map_err(|e| risfaultsim::Error::Format(e.to_string()))?;
    println!("wrong checksum: {}", import_neural_results(&results, &data).unwrap_err());
    Ok(())
}
