//! Faulty-element model: element and sub-array status vectors, masked phase
//! profiles, and fault-scenario sampling.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channelgeom::UpaGeometry;
use crate::error::{Error, Result};
use crate::CVector;

/// Thresholds of the element fault model, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultModelParams {
    /// An element whose received strength is at or below this is faulty.
    pub strength_threshold: f64,
    /// Minimum power delivered to a working element.
    pub min_receive_power: f64,
}

impl Default for FaultModelParams {
    fn default() -> Self {
        Self {
            strength_threshold: 1e-12,
            min_receive_power: 1e-6,
        }
    }
}

impl FaultModelParams {
    pub fn new(strength_threshold: f64, min_receive_power: f64) -> Result<Self> {
        if !(strength_threshold > 0.0 && strength_threshold < min_receive_power) {
            return Err(Error::InvalidInput(format!(
                "need 0 < threshold ({strength_threshold}) < min receive power ({min_receive_power})"
            )));
        }
        Ok(Self {
            strength_threshold,
            min_receive_power,
        })
    }
}

/// Element status from received strength `|y_r,n|^2`: `false` (faulty) at or below the threshold.
pub fn classify_element(strength: f64, params: &FaultModelParams) -> Result<bool> {
    if strength.is_nan() || strength < 0.0 {
        return Err(Error::InvalidInput(format!("negative signal strength {strength}")));
    }
    Ok(strength > params.strength_threshold)
}

/// Per-element status; `true` is a working element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaultStatusVector(Vec<bool>);

impl FaultStatusVector {
    pub fn new(statuses: Vec<bool>) -> Self {
        Self(statuses)
    }

    pub fn all_healthy(n: usize) -> Self {
        Self(vec![true; n])
    }

    pub fn with_faults(n: usize, faulty: &[usize]) -> Result<Self> {
        let mut s = vec![true; n];
        for &i in faulty {
            *s.get_mut(i).ok_or(Error::IndexOutOfRange { index: i, len: n })? = false;
        }
        Ok(Self(s))
    }

    /// Parses 0/1 bytes.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        bytes
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidInput(format!("status byte {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fault_count(&self) -> usize {
        self.0.iter().filter(|&&b| !b).count()
    }

    pub fn faulty_indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i).collect()
    }

    pub fn is_healthy(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn set(&mut self, index: usize, healthy: bool) {
        self.0[index] = healthy;
    }
}

impl From<Vec<bool>> for FaultStatusVector {
    fn from(v: Vec<bool>) -> Self {
        Self(v)
    }
}

/// RIS phase-shift vector `omega`; unit-modulus entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile(CVector);

impl PhaseProfile {
    pub fn new(phases: CVector) -> Result<Self> {
        if phases.iter().any(|p| (p.norm() - 1.0).abs() > 1e-9) {
            return Err(Error::InvalidInput("phase profile entries must have unit modulus".into()));
        }
        Ok(Self(phases))
    }

    /// All-ones profile.
    pub fn unity(n: usize) -> Self {
        Self(DVector::from_element(n, Complex64::new(1.0, 0.0)))
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        Self(DVector::from_iterator(
            angles.len(),
            angles.iter().map(|&a| Complex64::from_polar(1.0, a)),
        ))
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Masked profile `omega ⊙ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveProfile(CVector);

impl EffectiveProfile {
    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn into_vector(self) -> CVector {
        self.0
    }

    /// Wraps an arbitrary vector; used for the fully-off and scaled cases.
    pub fn from_raw(v: CVector) -> Self {
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn effective_profile(phases: &PhaseProfile, statuses: &FaultStatusVector) -> Result<EffectiveProfile> {
    if phases.len() != statuses.len() {
        return Err(Error::dim(phases.len(), statuses.len(), "status vector vs phase profile"));
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok(EffectiveProfile(DVector::from_iterator(
        phases.len(),
        phases
            .0
            .iter()
            .zip(statuses.as_slice())
            .map(|(&w, &ok)| if ok { w } else { zero }),
    )))
}

/// Fault count uniform on `0..=max_faulty`, positions a uniform subset of that size.
pub fn sample_fault_scenario<R: Rng + ?Sized>(
    rng: &mut R,
    n_elements: usize,
    max_faulty: usize,
) -> Result<FaultStatusVector> {
    if max_faulty > n_elements {
        return Err(Error::InvalidInput(format!(
            "fault cap {max_faulty} exceeds element count {n_elements}"
        )));
    }
    let count = rng.random_range(0..=max_faulty);
    let picked = rand::seq::index::sample(rng, n_elements, count);
    let mut statuses = vec![true; n_elements];
    for i in picked.iter() {
        statuses[i] = false;
    }
    Ok(FaultStatusVector(statuses))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SaLayout {
    /// `tile_rows x tile_cols` grid of square tiles, numbered row-major.
    Tiles { tile_rows: usize, tile_cols: usize, tile_side: usize },
    /// Consecutive flat-index chunks of `sa_size` elements.
    Chunks,
}

/// Assignment of elements to `K` equal-size sub-arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaPartition {
    k_count: usize,
    sa_size: usize,
    layout: SaLayout,
    element_to_sa: Vec<usize>,
}

impl SaPartition {
    pub fn k_count(&self) -> usize {
        self.k_count
    }

    pub fn sa_size(&self) -> usize {
        self.sa_size
    }

    pub fn layout(&self) -> SaLayout {
        self.layout
    }

    pub fn n_elements(&self) -> usize {
        self.element_to_sa.len()
    }

    pub fn sa_of(&self, element: usize) -> usize {
        self.element_to_sa[element]
    }

    pub fn element_to_sa(&self) -> &[usize] {
        &self.element_to_sa
    }

    /// Element indices of sub-array `k`, ascending.
    pub fn members(&self, k: usize) -> Vec<usize> {
        self.element_to_sa
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == k)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Partitions the panel into `K` sub-arrays.
///
/// Square tiles are used when the panel can be cut into `K` equal square
/// blocks; otherwise, as long as `K` divides `N`, consecutive row-major
/// chunks of `N / K` elements.
pub fn sa_partition(ris_geom: &UpaGeometry, k_count: usize) -> Result<SaPartition> {
    let n = ris_geom.len();
    if k_count == 0 || k_count > n || !n.is_multiple_of(k_count) {
        return Err(Error::Partition {
            elements: n,
            k: k_count,
            reason: "K must be positive and divide the element count".into(),
        });
    }
    let sa_size = n / k_count;
    let (rows, cols) = (ris_geom.n_elev(), ris_geom.n_azim());

    let side = (sa_size as f64).sqrt().round() as usize;
    let tileable = side * side == sa_size && rows % side == 0 && cols % side == 0;
    let (layout, element_to_sa) = if tileable {
        let tile_rows = rows / side;
        let tile_cols = cols / side;
        let map = (0..n)
            .map(|i| {
                let (m, c) = ris_geom.coords(i);
                (m / side) * tile_cols + c / side
            })
            .collect();
        (
            SaLayout::Tiles {
                tile_rows,
                tile_cols,
                tile_side: side,
            },
            map,
        )
    } else {
        (SaLayout::Chunks, (0..n).map(|i| i / sa_size).collect())
    };
    Ok(SaPartition {
        k_count,
        sa_size,
        layout,
        element_to_sa,
    })
}

/// Per-sub-array status; `true` when the sub-array has no faulty element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SaStatusVector(Vec<bool>);

impl SaStatusVector {
    pub fn new(statuses: Vec<bool>) -> Self {
        Self(statuses)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        FaultStatusVector::from_bytes(bytes).map(|f| Self(f.0))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn faulty_sas(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i).collect()
    }
}

pub fn sa_statuses(statuses: &FaultStatusVector, partition: &SaPartition) -> Result<SaStatusVector> {
    if statuses.len() != partition.n_elements() {
        return Err(Error::dim(partition.n_elements(), statuses.len(), "status vector vs partition"));
    }
    let mut out = vec![true; partition.k_count];
    for (i, &ok) in statuses.as_slice().iter().enumerate() {
        if !ok {
            out[partition.element_to_sa[i]] = false;
        }
    }
    Ok(SaStatusVector(out))
}

/// Statuses with every element outside `target_sa` switched off.
pub fn sa_isolation_mask(
    partition: &SaPartition,
    target_sa: usize,
    statuses: &FaultStatusVector,
) -> Result<FaultStatusVector> {
    if target_sa >= partition.k_count {
        return Err(Error::IndexOutOfRange {
            index: target_sa,
            len: partition.k_count,
        });
    }
    if statuses.len() != partition.n_elements() {
        return Err(Error::dim(partition.n_elements(), statuses.len(), "status vector vs partition"));
    }
    Ok(FaultStatusVector(
        statuses
            .as_slice()
            .iter()
            .zip(&partition.element_to_sa)
            .map(|(&ok, &sa)| ok && sa == target_sa)
            .collect(),
    ))
}
