//! Reproducible generation, splitting and persistence of the detection and
//! localization datasets.

mod generate;
pub mod io;
mod manifest;

pub use generate::{
    gen_detection_dataset, gen_localization_dataset, sample_rng, split, split_indices, DetectionSample,
    LocalizationSample, SampleDraw, SampleGenerator,
};
pub use io::{
    dataset_checksum, read_dataset, read_manifest, record_layout, write_dataset, write_dataset_subset, DatasetFile,
    FieldLayout, ManifestFile, Record, RecordDims,
};
pub use manifest::{DatasetKind, DatasetManifest, LocalizationRegion, FORMAT_VERSION};
