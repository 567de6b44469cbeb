use serde::{Deserialize, Serialize};

use crate::channelgeom::Position3D;
use crate::error::{Error, Result};
use crate::scene::SceneConfig;

/// Binary and manifest format version written by this build.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Detection,
    Localization,
}

/// Union of horizontal rectangles at fixed heights over which users are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationRegion {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub heights: Vec<f64>,
}

impl Default for LocalizationRegion {
    /// 10 m x 10 m planes at 0.5, 1.5 and 2 m, centred on (30, 6).
    fn default() -> Self {
        Self {
            x_min: 25.0,
            x_max: 35.0,
            y_min: 1.0,
            y_max: 11.0,
            heights: vec![0.5, 1.5, 2.0],
        }
    }
}

impl LocalizationRegion {
    pub fn center(&self) -> Position3D {
        let z = self.heights.iter().sum::<f64>() / self.heights.len() as f64;
        Position3D::new((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0, z)
    }

    pub fn contains(&self, p: &Position3D) -> bool {
        p.x >= self.x_min
            && p.x <= self.x_max
            && p.y >= self.y_min
            && p.y <= self.y_max
            && self.heights.contains(&p.z)
    }

    fn corners(&self) -> impl Iterator<Item = Position3D> + '_ {
        self.heights.iter().flat_map(move |&z| {
            [
                Position3D::new(self.x_min, self.y_min, z),
                Position3D::new(self.x_min, self.y_max, z),
                Position3D::new(self.x_max, self.y_min, z),
                Position3D::new(self.x_max, self.y_max, z),
            ]
        })
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .chain(&self.heights)
            .all(|v| v.is_finite());
        if !finite || self.x_min > self.x_max || self.y_min > self.y_max || self.heights.is_empty() {
            return Err(Error::InvalidManifest(format!("bad localization region {self:?}")));
        }
        Ok(())
    }
}

/// Everything needed to regenerate a dataset bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub kind: DatasetKind,
    pub scene: SceneConfig,
    /// User position for detection datasets.
    pub mu_position: Position3D,
    /// User region for localization datasets.
    pub region: LocalizationRegion,
    pub max_faulty: usize,
    /// Number of sub-arrays `K`.
    pub sa_count: usize,
    pub sample_count: u64,
    pub split_ratio: f64,
    pub master_seed: u64,
    /// Seed of the shared multipath environment when `fixed_channels` is set.
    pub environment_seed: u64,
    /// Per-sample SNR is drawn uniformly from this list.
    pub snr_db: Vec<f64>,
    /// Keep one multipath environment for every sample instead of redrawing it.
    pub fixed_channels: bool,
    /// Pilot symbol as `[re, im]`.
    pub pilot: [f64; 2],
}

impl DatasetManifest {
    /// 20,000 fault scenarios, at most 15 faults, user at (30, 6, 0.5).
    pub fn detection_default(master_seed: u64) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            kind: DatasetKind::Detection,
            scene: SceneConfig::default(),
            mu_position: Position3D::new(30.0, 6.0, 0.5),
            region: LocalizationRegion::default(),
            max_faulty: 15,
            sa_count: 9,
            sample_count: 20_000,
            split_ratio: 0.8,
            master_seed,
            environment_seed: master_seed,
            snr_db: vec![30.0],
            fixed_channels: false,
            pilot: [1.0, 0.0],
        }
    }

    /// 60,000 users over three height planes in one fixed environment.
    pub fn localization_default(master_seed: u64) -> Self {
        Self {
            kind: DatasetKind::Localization,
            sample_count: 60_000,
            fixed_channels: true,
            ..Self::detection_default(master_seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        self.scene.validate()?;
        let n = self.scene.ris_array.len();
        if self.max_faulty > n {
            return Err(Error::InvalidManifest(format!("max_faulty {} > N = {n}", self.max_faulty)));
        }
        crate::fault::sa_partition(&self.scene.ris_geometry()?, self.sa_count)
            .map_err(|e| Error::InvalidManifest(e.to_string()))?;
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidManifest(format!("split ratio {} not in (0, 1)", self.split_ratio)));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidManifest("snr_db must list at least one value".into()));
        }
        if !(self.pilot[0].is_finite() && self.pilot[1].is_finite()) || self.pilot == [0.0, 0.0] {
            return Err(Error::InvalidManifest("pilot must be finite and non-zero".into()));
        }
        match self.kind {
            DatasetKind::Detection => {
                if !self.mu_position.is_finite() || !self.scene.is_visible(self.mu_position) {
                    return Err(Error::InvalidManifest(format!(
                        "user position {:?} is not in front of the RIS",
                        self.mu_position
                    )));
                }
            }
            DatasetKind::Localization => {
                self.region.validate()?;
                if let Some(p) = self.region.corners().find(|p| !self.scene.is_visible(*p)) {
                    return Err(Error::InvalidManifest(format!("region corner {p:?} is behind the RIS")));
                }
            }
        }
        Ok(())
    }
}
