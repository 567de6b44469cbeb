//! Writes a tiny dataset pair plus a JSON description of the record layout.
//! Readers in other languages check their index maps against these files.
//!
//! cargo run --example record_layout <out_dir>

use std::path::PathBuf;

use risfaultsim::dataset::{
    gen_detection_dataset, gen_localization_dataset, record_layout, write_dataset, DatasetKind, DatasetManifest,
    RecordDims,
};
use risfaultsim::scene::ArraySize;
use serde_json::json;

fn main() -> risfaultsim::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let mut det = DatasetManifest {
        sample_count: 4,
        max_faulty: 3,
        sa_count: 4,
        ..DatasetManifest::detection_default(99)
    };
    det.scene.ris_array = ArraySize::new(4, 4);
    det.scene.bs_array = ArraySize::new(2, 2);
    let loc = DatasetManifest {
        kind: DatasetKind::Localization,
        fixed_channels: true,
        ..det.clone()
    };

    write_dataset(&dir.join("fixture_detection.bin"), &det, &gen_detection_dataset(&det)?)?;
    write_dataset(&dir.join("fixture_localization.bin"), &loc, &gen_localization_dataset(&loc)?)?;

    let dims = RecordDims::of(&det);
    let layout = json!({
        "header_bytes": risfaultsim::dataset::io::HEADER_LEN,
        "trailer_bytes": risfaultsim::dataset::io::TRAILER_LEN,
        "record_crc_bytes": 4,
        "element_order": "elevation-major: index = m * n_azim + n",
        "detection": record_layout(DatasetKind::Detection, dims),
        "localization": record_layout(DatasetKind::Localization, dims),
    });
    let path = dir.join("fixture_layout.json");
    std::fs::write(&path, serde_json::to_string_pretty(&layout)?).map_err(|e| risfaultsim::Error::Format(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&layout)?);
    println!("fixtures written to {}", dir.display());
    Ok(())
}
