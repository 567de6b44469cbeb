//! Panel geometry, UPA array responses and far-field multipath channels.
//!
//! Elements are indexed 0-based and elevation-major: element `(m, n)` with
//! `m < n_elev`, `n < n_azim` sits at flat index `m * n_azim + n`. Every
//! vector and matrix produced here, and every record written by
//! [`crate::dataset`], uses this order.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angles computed as exactly zero are replaced by this value so they stay in (0, pi].
pub const MIN_ANGLE: f64 = f64::MIN_POSITIVE;

/// Carrier wavelength in meters.
pub fn wavelength(carrier_hz: f64) -> f64 {
    SPEED_OF_LIGHT / carrier_hz
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::InvalidInput(format!("non-finite position {p:?}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn distance_squared(&self, other: &Position3D) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        dx * dx + dy * dy + dz * dz
    }

    pub fn distance(&self, other: &Position3D) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

/// Uniform planar array layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpaGeometry {
    n_elev: usize,
    n_azim: usize,
    spacing: f64,
    wavelength: f64,
}

impl UpaGeometry {
    pub fn new(n_elev: usize, n_azim: usize, spacing: f64, wavelength: f64) -> Result<Self> {
        if n_elev == 0 || n_azim == 0 {
            return Err(Error::InvalidGeometry(format!(
                "array dimensions must be positive, got {n_elev}x{n_azim}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGeometry(format!("spacing must be > 0, got {spacing}")));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "wavelength must be > 0, got {wavelength}"
            )));
        }
        Ok(Self {
            n_elev,
            n_azim,
            spacing,
            wavelength,
        })
    }

    /// Half-wavelength spaced array at the given carrier frequency.
    pub fn half_wavelength(n_elev: usize, n_azim: usize, carrier_hz: f64) -> Result<Self> {
        let lambda = wavelength(carrier_hz);
        Self::new(n_elev, n_azim, lambda / 2.0, lambda)
    }

    pub fn n_elev(&self) -> usize {
        self.n_elev
    }

    pub fn n_azim(&self) -> usize {
        self.n_azim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Total element count.
    pub fn len(&self) -> usize {
        self.n_elev * self.n_azim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of element `(m, n)`.
    pub fn index(&self, m: usize, n: usize) -> usize {
        m * self.n_azim + n
    }

    /// Inverse of [`UpaGeometry::index`].
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.n_azim, index % self.n_azim)
    }
}

/// Elevation and azimuth, both in (0, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathAngles {
    elevation: f64,
    azimuth: f64,
}

fn in_angle_domain(a: f64) -> bool {
    a > 0.0 && a <= PI
}

impl PathAngles {
    pub fn new(elevation: f64, azimuth: f64) -> Result<Self> {
        if !in_angle_domain(elevation) || !in_angle_domain(azimuth) {
            return Err(Error::InvalidInput(format!(
                "angles ({elevation}, {azimuth}) outside (0, pi]"
            )));
        }
        Ok(Self { elevation, azimuth })
    }

    pub fn elevation(&self) -> f64 {
        self.elevation
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// Uniform draw on (0, pi] x (0, pi].
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let elevation = PI * (1.0 - rng.random::<f64>());
        let azimuth = PI * (1.0 - rng.random::<f64>());
        Self { elevation, azimuth }
    }
}

/// Which way a panel's front half-space points in the horizontal plane.
///
/// Azimuth is measured in the panel's local frame; `NegativeY` is the global
/// frame rotated by pi about the z axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Facing {
    #[default]
    PositiveY,
    NegativeY,
}

/// Direction from `from` to `to` for a panel at `from` facing `+y`.
pub fn angles_between(from: Position3D, to: Position3D) -> Result<PathAngles> {
    angles_between_facing(from, to, Facing::PositiveY)
}

/// Direction from `from` to `to` in the local frame of a panel at `from`.
///
/// Elevation is measured from `+z`. Azimuth is the angle of the horizontal
/// displacement from the panel's local `+x` axis; displacements with a
/// negative local `y` component are behind the panel and rejected. A purely
/// vertical displacement gets azimuth pi/2.
pub fn angles_between_facing(from: Position3D, to: Position3D, facing: Facing) -> Result<PathAngles> {
    let (mut dx, mut dy, dz) = (to.x - from.x, to.y - from.y, to.z - from.z);
    if facing == Facing::NegativeY {
        dx = -dx;
        dy = -dy;
    }
    let dist = (dx * dx + dy * dy + dz * dz).sqrt();
    if !dist.is_finite() {
        return Err(Error::DegenerateGeometry("non-finite displacement".into()));
    }
    if dist == 0.0 {
        return Err(Error::DegenerateGeometry(format!("coincident points {from:?}")));
    }
    let mut elevation = (dz / dist).clamp(-1.0, 1.0).acos();
    if elevation <= 0.0 {
        elevation = MIN_ANGLE;
    }
    let mut azimuth = if dx == 0.0 && dy == 0.0 {
        PI / 2.0
    } else if dy == 0.0 {
        // atan2(-0.0, x<0) would give -pi
        if dx < 0.0 {
            PI
        } else {
            0.0
        }
    } else {
        dy.atan2(dx)
    };
    if azimuth < 0.0 {
        return Err(Error::BehindPanel { azimuth });
    }
    if azimuth == 0.0 {
        azimuth = MIN_ANGLE;
    }
    Ok(PathAngles { elevation, azimuth })
}

/// Elevation factor `a^(e)(theta)`, length `n_elev`.
pub fn elevation_response(geom: &UpaGeometry, elevation: f64) -> CVector {
    let k = 2.0 * PI * geom.spacing / geom.wavelength;
    DVector::from_iterator(
        geom.n_elev,
        (0..geom.n_elev).map(|m| Complex64::from_polar(1.0, -k * m as f64 * elevation.cos())),
    )
}

/// Azimuth factor `a^(a)(theta, phi)`, length `n_azim`.
pub fn azimuth_response(geom: &UpaGeometry, angles: &PathAngles) -> CVector {
    let k = 2.0 * PI * geom.spacing / geom.wavelength;
    let u = angles.elevation.sin() * angles.azimuth.cos();
    DVector::from_iterator(
        geom.n_azim,
        (0..geom.n_azim).map(|n| Complex64::from_polar(1.0, -k * n as f64 * u)),
    )
}

/// Array response `a^(e)(theta) ⊗ a^(a)(theta, phi)`.
pub fn steering_vector(geom: &UpaGeometry, angles: &PathAngles) -> CVector {
    let elev = elevation_response(geom, angles.elevation);
    let azim = azimuth_response(geom, angles);
    elev.kronecker(&azim)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub gain: Complex64,
    pub arrival: PathAngles,
    pub departure: Option<PathAngles>,
}

/// Ordered, non-empty list of propagation paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSet {
    paths: Vec<Path>,
}

impl PathSet {
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidPathSet("path set is empty".into()));
        }
        if paths.iter().any(|p| !(p.gain.re.is_finite() && p.gain.im.is_finite())) {
            return Err(Error::InvalidPathSet("non-finite path gain".into()));
        }
        let with_departure = paths.iter().filter(|p| p.departure.is_some()).count();
        if with_departure != 0 && with_departure != paths.len() {
            return Err(Error::InvalidPathSet(
                "departure angles must be present on all paths or none".into(),
            ));
        }
        Ok(Self { paths })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn has_departure(&self) -> bool {
        self.paths[0].departure.is_some()
    }

    /// Copy with every gain multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let paths = self
            .paths
            .iter()
            .map(|p| Path {
                gain: p.gain * c,
                ..*p
            })
            .collect();
        Self { paths }
    }

    /// Copy with the first path's angles replaced.
    pub fn with_first_path_angles(&self, arrival: PathAngles, departure: Option<PathAngles>) -> Result<Self> {
        let mut paths = self.paths.clone();
        paths[0].arrival = arrival;
        if departure.is_some() {
            paths[0].departure = departure;
        }
        Self::new(paths)
    }
}

/// Line-of-sight anchor for the first path of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricAnchor {
    /// Panel the signal arrives at.
    pub receiver: Position3D,
    pub receiver_facing: Facing,
    /// Panel the signal departs from; only used for departure angles.
    pub transmitter: Position3D,
    pub transmitter_facing: Facing,
}

impl GeometricAnchor {
    pub fn arrival(&self) -> Result<PathAngles> {
        angles_between_facing(self.receiver, self.transmitter, self.receiver_facing)
    }

    pub fn departure(&self) -> Result<PathAngles> {
        angles_between_facing(self.transmitter, self.receiver, self.transmitter_facing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSetSpec {
    pub count: usize,
    pub anchor: Option<GeometricAnchor>,
    /// Standard deviation of a scattered path's complex gain.
    pub gain_scale: f64,
    /// Power of the anchored path relative to a scattered one.
    pub geometric_power_ratio: f64,
    pub with_departure: bool,
}

impl PathSetSpec {
    pub fn new(count: usize, gain_scale: f64) -> Self {
        Self {
            count,
            anchor: None,
            gain_scale,
            geometric_power_ratio: 10.0,
            with_departure: false,
        }
    }

    pub fn anchored(mut self, anchor: GeometricAnchor) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn with_departure(mut self) -> Self {
        self.with_departure = true;
        self
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws a path set: CN(0, gain_scale^2) gains, uniform angles, and an
/// optional geometric first path carrying `geometric_power_ratio` times the power.
pub fn sample_path_set<R: Rng + ?Sized>(rng: &mut R, spec: &PathSetSpec) -> Result<PathSet> {
    if spec.count == 0 {
        return Err(Error::InvalidPathSet("path count must be >= 1".into()));
    }
    if !(spec.gain_scale >= 0.0 && spec.gain_scale.is_finite()) {
        return Err(Error::InvalidInput(format!("gain scale {}", spec.gain_scale)));
    }
    let anchored = match &spec.anchor {
        Some(anchor) => Some((
            anchor.arrival()?,
            if spec.with_departure { Some(anchor.departure()?) } else { None },
        )),
        None => None,
    };
    let base_var = spec.gain_scale * spec.gain_scale;
    let mut paths = Vec::with_capacity(spec.count);
    for p in 0..spec.count {
        let geometric = if p == 0 { anchored } else { None };
        let variance = if geometric.is_some() {
            base_var * spec.geometric_power_ratio
        } else {
            base_var
        };
        let gain = complex_gaussian(rng, variance);
        let (arrival, departure) = match geometric {
            Some(angles) => angles,
            None => {
                let arrival = PathAngles::sample(rng);
                let departure = spec.with_departure.then(|| PathAngles::sample(rng));
                (arrival, departure)
            }
        };
        paths.push(Path {
            gain,
            arrival,
            departure,
        });
    }
    PathSet::new(paths)
}

/// MU-RIS channel `g_ur = sum_p alpha_p a_R(theta_p, phi_p)`.
pub fn mu_ris_channel(paths: &PathSet, ris_geom: &UpaGeometry) -> Result<CVector> {
    if paths.has_departure() {
        return Err(Error::InvalidPathSet(
            "MU-RIS paths carry departure angles; expected arrival only".into(),
        ));
    }
    let mut g = DVector::zeros(ris_geom.len());
    for path in paths.paths() {
        g.axpy(path.gain, &steering_vector(ris_geom, &path.arrival), Complex64::new(1.0, 0.0));
    }
    Ok(g)
}

/// RIS-BS channel `H_rb = sum_j beta_j a_B(theta_j, phi_j) a_R(psi_j, omega_j)^H`.
pub fn ris_bs_channel(paths: &PathSet, bs_geom: &UpaGeometry, ris_geom: &UpaGeometry) -> Result<CMatrix> {
    let mut h = DMatrix::zeros(bs_geom.len(), ris_geom.len());
    for path in paths.paths() {
        let departure = path
            .departure
            .ok_or_else(|| Error::InvalidPathSet("RIS-BS path without departure angles".into()))?;
        let a_b = steering_vector(bs_geom, &path.arrival);
        let a_r = steering_vector(ris_geom, &departure);
        h.gerc(path.gain, &a_b, &a_r, Complex64::new(1.0, 0.0));
    }
    Ok(h)
}

/// Assembled channel pair for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub g_ur: CVector,
    pub h_rb: CMatrix,
}

impl ChannelRealization {
    pub fn new(g_ur: CVector, h_rb: CMatrix) -> Result<Self> {
        if h_rb.ncols() != g_ur.len() {
            return Err(Error::dim(g_ur.len(), h_rb.ncols(), "H_rb columns vs g_ur length"));
        }
        Ok(Self { g_ur, h_rb })
    }

    pub fn synthesize(
        mu_ris: &PathSet,
        ris_bs: &PathSet,
        bs_geom: &UpaGeometry,
        ris_geom: &UpaGeometry,
    ) -> Result<Self> {
        let g_ur = mu_ris_channel(mu_ris, ris_geom)?;
        let h_rb = ris_bs_channel(ris_bs, bs_geom, ris_geom)?;
        Self::new(g_ur, h_rb)
    }
}
