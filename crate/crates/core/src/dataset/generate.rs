//! Sample generation. Sample `i` is drawn from its own ChaCha stream keyed
//! by `(master_seed, i)`, so output does not depend on generation order or
//! thread count.

use num_complex::{Complex32, Complex64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::manifest::{DatasetKind, DatasetManifest};
use crate::channelgeom::{ChannelRealization, Position3D};
use crate::error::{Error, Result};
use crate::fault::{
    effective_profile, sa_partition, sa_statuses, sample_fault_scenario, FaultStatusVector, PhaseProfile, SaPartition,
    SaStatusVector,
};
use crate::scene::ChannelEnvironment;
use crate::signal::{add_awgn, bs_received, ris_received, BsSignal, NoiseSpec, Pilot, RisSignal};

/// Stream reserved for the shared environment.
const ENVIRONMENT_STREAM: u64 = u64::MAX;
const SPLIT_STREAM: u64 = u64::MAX - 1;

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn quantize(v: impl IntoIterator<Item = Complex64>) -> Vec<Complex32> {
    v.into_iter().map(|c| Complex32::new(c.re as f32, c.im as f32)).collect()
}

fn widen(v: &[Complex32]) -> crate::CVector {
    crate::CVector::from_iterator(v.len(), v.iter().map(|c| Complex64::new(c.re.into(), c.im.into())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionSample {
    pub bs_signal: Vec<Complex32>,
    pub element_statuses: FaultStatusVector,
    pub sa_statuses: SaStatusVector,
    pub mu_position: Position3D,
    pub snr_db: f64,
}

impl DetectionSample {
    pub fn bs_signal(&self) -> BsSignal {
        BsSignal(widen(&self.bs_signal))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationSample {
    pub bs_signal: Vec<Complex32>,
    /// Pre-mask RIS signal `y_r = g_ur s`.
    pub ris_signal_complete: Vec<Complex32>,
    pub element_statuses: FaultStatusVector,
    pub mu_position: Position3D,
    pub snr_db: f64,
}

impl LocalizationSample {
    pub fn bs_signal(&self) -> BsSignal {
        BsSignal(widen(&self.bs_signal))
    }

    pub fn ris_signal_complete(&self) -> RisSignal {
        RisSignal(widen(&self.ris_signal_complete))
    }
}

/// Latent state of one sample before the receiver noise.
#[derive(Debug, Clone)]
pub struct SampleDraw {
    pub index: u64,
    pub mu_position: Position3D,
    pub channel: ChannelRealization,
    pub statuses: FaultStatusVector,
    pub snr_db: f64,
    rng: ChaCha8Rng,
}

/// Regenerates samples, and their hidden channels, from a manifest.
#[derive(Debug, Clone)]
pub struct SampleGenerator {
    manifest: DatasetManifest,
    partition: SaPartition,
    phases: PhaseProfile,
    pilot: Pilot,
    environment: Option<ChannelEnvironment>,
}

impl SampleGenerator {
    pub fn new(manifest: &DatasetManifest) -> Result<Self> {
        manifest.validate()?;
        let ris = manifest.scene.ris_geometry()?;
        let partition = sa_partition(&ris, manifest.sa_count)?;
        let pilot = Pilot::new(Complex64::new(manifest.pilot[0], manifest.pilot[1]))?;
        let environment = if manifest.fixed_channels {
            let anchor = match manifest.kind {
                DatasetKind::Detection => manifest.mu_position,
                DatasetKind::Localization => manifest.region.center(),
            };
            let mut rng = sample_rng(manifest.environment_seed, ENVIRONMENT_STREAM);
            Some(manifest.scene.draw_environment(&mut rng, anchor)?)
        } else {
            None
        };
        Ok(Self {
            manifest: manifest.clone(),
            partition,
            phases: PhaseProfile::unity(ris.len()),
            pilot,
            environment,
        })
    }

    pub fn manifest(&self) -> &DatasetManifest {
        &self.manifest
    }

    pub fn partition(&self) -> &SaPartition {
        &self.partition
    }

    /// The RIS phase profile every sample uses (all ones).
    pub fn phases(&self) -> &PhaseProfile {
        &self.phases
    }

    pub fn pilot(&self) -> Pilot {
        self.pilot
    }

    /// The shared environment when channels are fixed.
    pub fn environment(&self) -> Option<&ChannelEnvironment> {
        self.environment.as_ref()
    }

    fn draw_position<R: Rng>(&self, rng: &mut R) -> Position3D {
        match self.manifest.kind {
            DatasetKind::Detection => self.manifest.mu_position,
            DatasetKind::Localization => {
                let r = &self.manifest.region;
                let plane = rng.random_range(0..r.heights.len());
                let x = r.x_min + (r.x_max - r.x_min) * rng.random::<f64>();
                let y = r.y_min + (r.y_max - r.y_min) * rng.random::<f64>();
                Position3D::new(x, y, r.heights[plane])
            }
        }
    }

    pub fn draw(&self, index: u64) -> Result<SampleDraw> {
        let mut rng = sample_rng(self.manifest.master_seed, index);
        let mu_position = self.draw_position(&mut rng);
        let scene = &self.manifest.scene;
        let channel = match &self.environment {
            Some(env) => env.realize(scene, mu_position)?,
            None => scene.draw_environment(&mut rng, mu_position)?.realize(scene, mu_position)?,
        };
        let statuses = sample_fault_scenario(&mut rng, scene.ris_array.len(), self.manifest.max_faulty)?;
        let snr_db = match self.manifest.snr_db.as_slice() {
            [single] => *single,
            many => many[rng.random_range(0..many.len())],
        };
        Ok(SampleDraw {
            index,
            mu_position,
            channel,
            statuses,
            snr_db,
            rng,
        })
    }

    /// Hidden channels of sample `index`.
    pub fn channel(&self, index: u64) -> Result<ChannelRealization> {
        self.draw(index).map(|d| d.channel)
    }

    fn observe(&self, draw: &mut SampleDraw) -> Result<BsSignal> {
        let profile = effective_profile(&self.phases, &draw.statuses)?;
        let noise = NoiseSpec::new(draw.snr_db)?;
        let ch = &draw.channel;
        // a fully faulty panel yields y = 0 and has no defined SNR; keep it noiseless
        let clean = bs_received::<ChaCha8Rng>(&ch.h_rb, &profile, &ch.g_ur, self.pilot, None)?;
        if clean.0.norm_squared() == 0.0 {
            return Ok(clean);
        }
        add_awgn(&clean.0, noise, &mut draw.rng).map(BsSignal)
    }

    pub fn detection_sample(&self, index: u64) -> Result<DetectionSample> {
        let mut draw = self.draw(index)?;
        let y = self.observe(&mut draw)?;
        Ok(DetectionSample {
            bs_signal: quantize(y.0.iter().copied()),
            sa_statuses: sa_statuses(&draw.statuses, &self.partition)?,
            element_statuses: draw.statuses,
            mu_position: draw.mu_position,
            snr_db: draw.snr_db,
        })
    }

    pub fn localization_sample(&self, index: u64) -> Result<LocalizationSample> {
        let mut draw = self.draw(index)?;
        let y = self.observe(&mut draw)?;
        let y_r = ris_received(&draw.channel.g_ur, self.pilot);
        Ok(LocalizationSample {
            bs_signal: quantize(y.0.iter().copied()),
            ris_signal_complete: quantize(y_r.0.iter().copied()),
            element_statuses: draw.statuses,
            mu_position: draw.mu_position,
            snr_db: draw.snr_db,
        })
    }
}

fn expect_kind(manifest: &DatasetManifest, kind: DatasetKind) -> Result<()> {
    if manifest.kind != kind {
        return Err(Error::InvalidManifest(format!(
            "manifest describes a {:?} dataset, expected {kind:?}",
            manifest.kind
        )));
    }
    Ok(())
}

/// All `sample_count` detection samples, generated in parallel.
pub fn gen_detection_dataset(manifest: &DatasetManifest) -> Result<Vec<DetectionSample>> {
    expect_kind(manifest, DatasetKind::Detection)?;
    let generator = SampleGenerator::new(manifest)?;
    (0..manifest.sample_count)
        .into_par_iter()
        .map(|i| generator.detection_sample(i))
        .collect()
}

/// All `sample_count` localization samples, generated in parallel.
pub fn gen_localization_dataset(manifest: &DatasetManifest) -> Result<Vec<LocalizationSample>> {
    expect_kind(manifest, DatasetKind::Localization)?;
    let generator = SampleGenerator::new(manifest)?;
    (0..manifest.sample_count)
        .into_par_iter()
        .map(|i| generator.localization_sample(i))
        .collect()
}

/// Shuffled train/test index split; each side is returned in ascending order.
pub fn split_indices(len: usize, ratio: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if len == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidInput(format!("split ratio {ratio} not in (0, 1)")));
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(&mut sample_rng(seed, SPLIT_STREAM));
    let n_train = ((len as f64) * ratio).round() as usize;
    let mut train = order[..n_train].to_vec();
    let mut test = order[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split<T: Clone>(samples: &[T], ratio: f64, seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    let (train, test) = split_indices(samples.len(), ratio, seed)?;
    Ok((
        train.into_iter().map(|i| samples[i].clone()).collect(),
        test.into_iter().map(|i| samples[i].clone()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_detection(count: u64, max_faulty: usize) -> DatasetManifest {
        DatasetManifest {
            sample_count: count,
            max_faulty,
            ..DatasetManifest::detection_default(7)
        }
    }

    #[test]
    fn single_healthy_sample() {
        let s = gen_detection_dataset(&small_detection(1, 0)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].element_statuses.fault_count(), 0);
        assert!(s[0].sa_statuses.as_slice().iter().all(|&b| b));
        assert_eq!(s[0].bs_signal.len(), 16);
    }

    #[test]
    fn caps_and_labels_hold() {
        let m = small_detection(300, 15);
        let p = SampleGenerator::new(&m).unwrap().partition().clone();
        for s in gen_detection_dataset(&m).unwrap() {
            assert!(s.element_statuses.fault_count() <= 15);
            assert_eq!(s.sa_statuses, sa_statuses(&s.element_statuses, &p).unwrap());
            assert_eq!(s.mu_position, Position3D::new(30.0, 6.0, 0.5));
        }
    }

    #[test]
    fn order_independent_generation() {
        let m = small_detection(50, 15);
        let all = gen_detection_dataset(&m).unwrap();
        let g = SampleGenerator::new(&m).unwrap();
        for i in [49u64, 3, 17] {
            assert_eq!(g.detection_sample(i).unwrap(), all[i as usize]);
        }
    }

    #[test]
    fn kind_mismatch_rejected() {
        assert!(gen_localization_dataset(&small_detection(1, 0)).is_err());
    }

    #[test]
    fn positions_on_planes() {
        let m = DatasetManifest {
            sample_count: 500,
            ..DatasetManifest::localization_default(3)
        };
        for s in gen_localization_dataset(&m).unwrap() {
            assert!(m.region.contains(&s.mu_position));
            assert_eq!(s.ris_signal_complete.len(), 81);
        }
    }

    #[test]
    fn degenerate_square_region() {
        let mut m = DatasetManifest {
            sample_count: 100,
            ..DatasetManifest::localization_default(3)
        };
        m.region.x_min = 30.0;
        m.region.x_max = 31.0;
        m.region.y_min = 5.0;
        m.region.y_max = 6.0;
        for s in gen_localization_dataset(&m).unwrap() {
            let p = s.mu_position;
            assert!((30.0..=31.0).contains(&p.x) && (5.0..=6.0).contains(&p.y));
        }
    }

    #[test]
    fn split_sizes_and_partition() {
        let (a, b) = split_indices(20_000, 0.8, 1).unwrap();
        assert_eq!((a.len(), b.len()), (16_000, 4_000));
        let (a, b) = split_indices(10, 0.8, 1).unwrap();
        assert_eq!((a.len(), b.len()), (8, 2));
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert!(split_indices(0, 0.8, 1).is_err());
        assert!(split_indices(10, 1.0, 1).is_err());
        assert_eq!(split_indices(100, 0.8, 5).unwrap(), split_indices(100, 0.8, 5).unwrap());
    }
}
