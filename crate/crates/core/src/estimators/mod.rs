//! Classical model-based baselines: fault detection, RIS-signal
//! reconstruction and fingerprint localization.

pub mod detection;
pub mod fingerprint;
pub mod reconstruction;

pub use detection::{
    default_greedy_tolerance, detect_faults_exhaustive, detect_faults_greedy, DetectionResult, EXHAUSTIVE_LIMIT,
};
pub use fingerprint::{
    build_fingerprint_db, fingerprint_localize_nn, nearest_entries, nmse, sample_fingerprint, FingerprintDatabase,
    FingerprintEntry, FingerprintKind, LocalizationResult,
};
pub use reconstruction::reconstruct_ris_ls;
