//! Reproducible datasets: generate, write, read back, split.
//!
//! cargo run --release --example generate_datasets [out_dir]

use std::path::PathBuf;

use risfaultsim::dataset::{
    dataset_checksum, gen_detection_dataset, gen_localization_dataset, read_dataset, split_indices, write_dataset,
    DatasetManifest, DetectionSample, LocalizationSample,
};

fn main() -> risfaultsim::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let det = DatasetManifest {
        sample_count: 2_000,
        ..DatasetManifest::detection_default(7)
    };
    let samples = gen_detection_dataset(&det)?;
    let path = dir.join("detection.bin");
    write_dataset(&path, &det, &samples)?;
    println!("wrote {} ({} records), checksum {}", path.display(), samples.len(), dataset_checksum(&path)?);

    let back = read_dataset::<DetectionSample>(&path)?;
    println!("read back identical: {}", back.samples == samples);
    println!("regenerated identical: {}", gen_detection_dataset(&det)? == samples);

    let mean_faults = samples.iter().map(|s| s.element_statuses.fault_count()).sum::<usize>() as f64 / samples.len() as f64;
    println!("mean faults per scenario: {mean_faults:.2} (uniform over 0..=15)");

    let loc = DatasetManifest {
        sample_count: 3_000,
        ..DatasetManifest::localization_default(7)
    };
    let lsamples = gen_localization_dataset(&loc)?;
    let lpath = dir.join("localization.bin");
    write_dataset(&lpath, &loc, &lsamples)?;
    let back = read_dataset::<LocalizationSample>(&lpath)?;
    let (train, test) = split_indices(back.samples.len(), loc.split_ratio, loc.master_seed)?;
    println!(
        "wrote {}, split {} train / {} test, first test index {}",
        lpath.display(),
        train.len(),
        test.len(),
        test[0]
    );
    Ok(())
}
