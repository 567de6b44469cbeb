//! k-NN fingerprint localization with RIS versus BS fingerprints.
//!
//! cargo run --release --example fingerprint_localization

use risfaultsim::cli::localize_samples;
use risfaultsim::dataset::{gen_localization_dataset, split, DatasetManifest};
use risfaultsim::estimators::FingerprintKind;

fn main() -> risfaultsim::Result<()> {
    let manifest = DatasetManifest {
        sample_count: 5_000,
        ..DatasetManifest::localization_default(21)
    };
    let samples = gen_localization_dataset(&manifest)?;
    let (db, queries) = split(&samples, manifest.split_ratio, manifest.master_seed)?;
    println!("{} database entries, {} queries", db.len(), queries.len());

    for kind in [FingerprintKind::Ris, FingerprintKind::Bs] {
        for k in [1, 4] {
            let r = localize_samples(&db, &queries, kind, k)?;
            println!("{kind:?} fingerprints, k = {k}: NMSE {:.4}", r.nmse);
        }
    }
    Ok(())
}
