//! Deployment layout (BS, RIS, carrier, path counts) and channel draws for it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channelgeom::{
    angles_between_facing, sample_path_set, ChannelRealization, Facing, GeometricAnchor, PathSet,
    PathSetSpec, Position3D, UpaGeometry,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArraySize {
    pub n_elev: usize,
    pub n_azim: usize,
}

impl ArraySize {
    pub const fn new(n_elev: usize, n_azim: usize) -> Self {
        Self { n_elev, n_azim }
    }

    pub fn len(&self) -> usize {
        self.n_elev * self.n_azim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub carrier_frequency_hz: f64,
    pub bs_array: ArraySize,
    pub ris_array: ArraySize,
    pub bs_position: Position3D,
    pub bs_facing: Facing,
    pub ris_position: Position3D,
    pub ris_facing: Facing,
    /// MU-RIS path count `P`.
    pub mu_ris_paths: usize,
    /// RIS-BS path count `J`.
    pub ris_bs_paths: usize,
    /// Standard deviation of a scattered path's complex gain.
    pub gain_scale: f64,
    /// Power of the line-of-sight path relative to one scattered path.
    pub geometric_power_ratio: f64,
}

impl Default for SceneConfig {
    /// 90 GHz, 4x4 BS at (0, 10, 1.5), 9x9 RIS at (15, 0, 2), P = J = 10.
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 90e9,
            bs_array: ArraySize::new(4, 4),
            ris_array: ArraySize::new(9, 9),
            bs_position: Position3D::new(0.0, 10.0, 1.5),
            bs_facing: Facing::NegativeY,
            ris_position: Position3D::new(15.0, 0.0, 2.0),
            ris_facing: Facing::PositiveY,
            mu_ris_paths: 10,
            ris_bs_paths: 10,
            gain_scale: 1.0,
            geometric_power_ratio: 10.0,
        }
    }
}

impl SceneConfig {
    pub fn bs_geometry(&self) -> Result<UpaGeometry> {
        UpaGeometry::half_wavelength(self.bs_array.n_elev, self.bs_array.n_azim, self.carrier_frequency_hz)
    }

    pub fn ris_geometry(&self) -> Result<UpaGeometry> {
        UpaGeometry::half_wavelength(self.ris_array.n_elev, self.ris_array.n_azim, self.carrier_frequency_hz)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_frequency_hz > 0.0 && self.carrier_frequency_hz.is_finite()) {
            return Err(Error::InvalidManifest(format!("carrier {}", self.carrier_frequency_hz)));
        }
        self.bs_geometry()?;
        self.ris_geometry()?;
        if self.mu_ris_paths == 0 || self.ris_bs_paths == 0 {
            return Err(Error::InvalidManifest("path counts must be >= 1".into()));
        }
        if !(self.gain_scale > 0.0 && self.gain_scale.is_finite()) {
            return Err(Error::InvalidManifest(format!("gain scale {}", self.gain_scale)));
        }
        if !(self.geometric_power_ratio > 0.0 && self.geometric_power_ratio.is_finite()) {
            return Err(Error::InvalidManifest(format!(
                "geometric power ratio {}",
                self.geometric_power_ratio
            )));
        }
        if !(self.bs_position.is_finite() && self.ris_position.is_finite()) {
            return Err(Error::InvalidManifest("non-finite BS/RIS position".into()));
        }
        // the line-of-sight RIS-BS geometry must sit in both panels' front half-spaces
        self.ris_bs_anchor().arrival()?;
        self.ris_bs_anchor().departure()?;
        Ok(())
    }

    fn ris_bs_anchor(&self) -> GeometricAnchor {
        GeometricAnchor {
            receiver: self.bs_position,
            receiver_facing: self.bs_facing,
            transmitter: self.ris_position,
            transmitter_facing: self.ris_facing,
        }
    }

    fn mu_ris_anchor(&self, mu_position: Position3D) -> GeometricAnchor {
        GeometricAnchor {
            receiver: self.ris_position,
            receiver_facing: self.ris_facing,
            transmitter: mu_position,
            transmitter_facing: Facing::PositiveY,
        }
    }

    /// Whether a user at `mu_position` is inside the RIS's front half-space.
    pub fn is_visible(&self, mu_position: Position3D) -> bool {
        angles_between_facing(self.ris_position, mu_position, self.ris_facing).is_ok()
    }

    /// Draws both links' paths; the first path of each is the line-of-sight one.
    pub fn draw_environment<R: Rng + ?Sized>(&self, rng: &mut R, mu_position: Position3D) -> Result<ChannelEnvironment> {
        let mu_spec = PathSetSpec {
            count: self.mu_ris_paths,
            anchor: Some(self.mu_ris_anchor(mu_position)),
            gain_scale: self.gain_scale,
            geometric_power_ratio: self.geometric_power_ratio,
            with_departure: false,
        };
        let rb_spec = PathSetSpec {
            count: self.ris_bs_paths,
            anchor: Some(self.ris_bs_anchor()),
            gain_scale: self.gain_scale,
            geometric_power_ratio: self.geometric_power_ratio,
            with_departure: true,
        };
        let mu_ris = sample_path_set(rng, &mu_spec)?;
        let ris_bs = sample_path_set(rng, &rb_spec)?;
        Ok(ChannelEnvironment { mu_ris, ris_bs })
    }
}

/// Multipath state of both links.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEnvironment {
    pub mu_ris: PathSet,
    pub ris_bs: PathSet,
}

impl ChannelEnvironment {
    /// Channels for a user at `mu_position`, keeping every gain and every
    /// scattered path fixed and re-pointing the line-of-sight MU-RIS path.
    pub fn realize(&self, scene: &SceneConfig, mu_position: Position3D) -> Result<ChannelRealization> {
        let arrival = scene.mu_ris_anchor(mu_position).arrival()?;
        let mu_ris = self.mu_ris.with_first_path_angles(arrival, None)?;
        ChannelRealization::synthesize(&mu_ris, &self.ris_bs, &scene.bs_geometry()?, &scene.ris_geometry()?)
    }
}
