//! Fingerprint localization by k-nearest neighbours, and the NMSE metric.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channelgeom::Position3D;
use crate::dataset::LocalizationSample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FingerprintKind {
    /// BS received signal `y`.
    Bs,
    /// Complete RIS received signal `y_r`.
    Ris,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FingerprintEntry {
    pub fingerprint: Vec<Complex64>,
    pub position: Position3D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FingerprintDatabase {
    kind: FingerprintKind,
    entries: Vec<FingerprintEntry>,
}

impl FingerprintDatabase {
    pub fn new(kind: FingerprintKind, entries: Vec<FingerprintEntry>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyDataset)?.fingerprint.len();
        if let Some(bad) = entries.iter().find(|e| e.fingerprint.len() != first) {
            return Err(Error::dim(first, bad.fingerprint.len(), "fingerprint length"));
        }
        Ok(Self { kind, entries })
    }

    pub fn kind(&self) -> FingerprintKind {
        self.kind
    }

    pub fn entries(&self) -> &[FingerprintEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn fingerprint_len(&self) -> usize {
        self.entries[0].fingerprint.len()
    }
}

/// Fingerprint of one localization record.
pub fn sample_fingerprint(sample: &LocalizationSample, kind: FingerprintKind) -> Vec<Complex64> {
    let src = match kind {
        FingerprintKind::Bs => &sample.bs_signal,
        FingerprintKind::Ris => &sample.ris_signal_complete,
    };
    src.iter().map(|c| Complex64::new(c.re.into(), c.im.into())).collect()
}

pub fn build_fingerprint_db(samples: &[LocalizationSample], kind: FingerprintKind) -> Result<FingerprintDatabase> {
    let entries = samples
        .iter()
        .map(|s| FingerprintEntry {
            fingerprint: sample_fingerprint(s, kind),
            position: s.mu_position,
        })
        .collect();
    FingerprintDatabase::new(kind, entries)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationResult {
    pub estimate: Position3D,
}

fn sq_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// Indices of the `k` entries closest to `query`, nearest first; ties go to the lower index.
pub fn nearest_entries(db: &FingerprintDatabase, query: &[Complex64], k: usize) -> Result<Vec<usize>> {
    if query.len() != db.fingerprint_len() {
        return Err(Error::dim(db.fingerprint_len(), query.len(), "query vs fingerprint length"));
    }
    if k == 0 || k > db.len() {
        return Err(Error::InvalidInput(format!("k = {k} must be in 1..={}", db.len())));
    }
    let mut dist: Vec<(f64, usize)> = db
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| (sq_distance(query, &e.fingerprint), i))
        .collect();
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < dist.len() {
        dist.select_nth_unstable_by(k - 1, cmp);
        dist.truncate(k);
    }
    dist.sort_by(cmp);
    Ok(dist.into_iter().map(|(_, i)| i).collect())
}

/// Mean position of the `k` nearest fingerprints in Euclidean distance.
pub fn fingerprint_localize_nn(db: &FingerprintDatabase, query: &[Complex64], k: usize) -> Result<LocalizationResult> {
    let idx = nearest_entries(db, query, k)?;
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for &i in &idx {
        let p = db.entries[i].position;
        x += p.x;
        y += p.y;
        z += p.z;
    }
    let kf = k as f64;
    Ok(LocalizationResult {
        estimate: Position3D::new(x / kf, y / kf, z / kf),
    })
}

/// `Σ‖p̂ − p‖² / Σ‖p − p̄‖²` with `p̄` the mean true position.
pub fn nmse(estimates: &[Position3D], truths: &[Position3D]) -> Result<f64> {
    if estimates.len() != truths.len() {
        return Err(Error::dim(truths.len(), estimates.len(), "estimates vs truths"));
    }
    if truths.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = truths.len() as f64;
    let mean = Position3D::new(
        truths.iter().map(|p| p.x).sum::<f64>() / n,
        truths.iter().map(|p| p.y).sum::<f64>() / n,
        truths.iter().map(|p| p.z).sum::<f64>() / n,
    );
    let spread: f64 = truths.iter().map(|p| p.distance_squared(&mean)).sum();
    if spread == 0.0 || truths.iter().all(|p| *p == truths[0]) {
        return Err(Error::DegenerateNormalization);
    }
    let err: f64 = estimates.iter().zip(truths).map(|(e, t)| e.distance_squared(t)).sum();
    Ok(err / spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn db(points: &[(f64, Position3D)]) -> FingerprintDatabase {
        FingerprintDatabase::new(
            FingerprintKind::Bs,
            points
                .iter()
                .map(|&(f, p)| FingerprintEntry { fingerprint: vec![c(f), c(0.0)], position: p })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn exact_match_returns_stored_position() {
        let d = db(&[(0.0, Position3D::new(1.0, 2.0, 3.0)), (5.0, Position3D::new(4.0, 5.0, 6.0))]);
        let r = fingerprint_localize_nn(&d, &[c(5.0), c(0.0)], 1).unwrap();
        assert_eq!(r.estimate, Position3D::new(4.0, 5.0, 6.0));
    }

    #[test]
    fn equidistant_tie_goes_to_lower_index() {
        let d = db(&[(-1.0, Position3D::new(1.0, 0.0, 0.0)), (1.0, Position3D::new(2.0, 0.0, 0.0))]);
        let r = fingerprint_localize_nn(&d, &[c(0.0), c(0.0)], 1).unwrap();
        assert_eq!(r.estimate.x, 1.0);
    }

    #[test]
    fn k_equal_db_size_gives_mean() {
        let d = db(&[
            (0.0, Position3D::new(0.0, 0.0, 0.0)),
            (1.0, Position3D::new(2.0, 4.0, 0.0)),
            (9.0, Position3D::new(4.0, 2.0, 3.0)),
        ]);
        let r = fingerprint_localize_nn(&d, &[c(0.3), c(0.0)], 3).unwrap();
        assert!((r.estimate.x - 2.0).abs() < 1e-15);
        assert!((r.estimate.y - 2.0).abs() < 1e-15);
        assert!((r.estimate.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_queries_rejected() {
        let d = db(&[(0.0, Position3D::new(0.0, 0.0, 0.0))]);
        assert!(fingerprint_localize_nn(&d, &[c(0.0)], 1).is_err());
        assert!(fingerprint_localize_nn(&d, &[c(0.0), c(0.0)], 2).is_err());
        assert!(FingerprintDatabase::new(FingerprintKind::Ris, vec![]).is_err());
        let mixed = vec![
            FingerprintEntry { fingerprint: vec![c(0.0)], position: Position3D::new(0.0, 0.0, 0.0) },
            FingerprintEntry { fingerprint: vec![c(0.0), c(1.0)], position: Position3D::new(0.0, 0.0, 0.0) },
        ];
        assert!(FingerprintDatabase::new(FingerprintKind::Ris, mixed).is_err());
    }

    #[test]
    fn nmse_cases() {
        let truths = [Position3D::new(0.0, 0.0, 0.0), Position3D::new(2.0, 0.0, 0.0), Position3D::new(4.0, 3.0, 0.0)];
        assert_eq!(nmse(&truths, &truths).unwrap(), 0.0);
        let mean = Position3D::new(2.0, 1.0, 0.0);
        assert!((nmse(&[mean; 3], &truths).unwrap() - 1.0).abs() < 1e-15);
        // spread: (4+1) + (0+1) + (4+4) = 14; error: 1 + 0 + 4 = 5
        let est = [Position3D::new(1.0, 0.0, 0.0), Position3D::new(2.0, 0.0, 0.0), Position3D::new(4.0, 1.0, 0.0)];
        assert!((nmse(&est, &truths).unwrap() - 5.0 / 14.0).abs() < 1e-15);
        assert!(matches!(nmse(&[mean; 2], &[mean; 2]), Err(Error::DegenerateNormalization)));
        assert!(nmse(&[mean; 2], &truths).is_err());
        assert!(nmse(&[], &[]).is_err());
    }

    proptest! {
        #[test]
        fn nmse_translation_invariant(
            pts in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0), 2..20),
            noise in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 20),
            shift in (-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0),
        ) {
            let truths: Vec<Position3D> = pts.iter().map(|&(x, y, z)| Position3D::new(x, y, z)).collect();
            prop_assume!(truths.iter().any(|p| *p != truths[0]));
            let est: Vec<Position3D> = truths.iter().zip(&noise).map(|(p, n)| Position3D::new(p.x + n.0, p.y + n.1, p.z + n.2)).collect();
            let mv = |p: &Position3D| Position3D::new(p.x + shift.0, p.y + shift.1, p.z + shift.2);
            let a = nmse(&est, &truths).unwrap();
            let b = nmse(&est.iter().map(mv).collect::<Vec<_>>(), &truths.iter().map(mv).collect::<Vec<_>>()).unwrap();
            prop_assert!((a - b).abs() <= 1e-6 * a.max(1e-12));
        }
    }
}
