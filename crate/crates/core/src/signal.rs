//! Uplink signals at the RIS and the BS, receiver noise, and the linear
//! measurement operator `y = A·ϖ + n` used by the classical estimators.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fault::EffectiveProfile;
use crate::{CMatrix, CVector};

/// SNR values above this are treated as this value.
pub const MAX_SNR_DB: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pilot(Complex64);

impl Pilot {
    pub fn new(symbol: Complex64) -> Result<Self> {
        if !(symbol.norm() > 0.0 && symbol.re.is_finite() && symbol.im.is_finite()) {
            return Err(Error::InvalidInput(format!("pilot symbol {symbol} must be non-zero and finite")));
        }
        Ok(Self(symbol))
    }

    pub fn symbol(&self) -> Complex64 {
        self.0
    }
}

impl Default for Pilot {
    fn default() -> Self {
        Self(Complex64::new(1.0, 0.0))
    }
}

/// Signal observed across the RIS elements, length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RisSignal(pub CVector);

/// Signal observed across the BS antennas, length `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BsSignal(pub CVector);

impl BsSignal {
    pub fn samples(&self) -> &CVector {
        &self.0
    }
}

impl RisSignal {
    pub fn samples(&self) -> &CVector {
        &self.0
    }
}

/// Receiver noise level.
///
/// SNR is the per-antenna average power of the noiseless signal over the
/// per-entry noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub snr_db: f64,
}

impl NoiseSpec {
    pub fn new(snr_db: f64) -> Result<Self> {
        if snr_db.is_nan() || snr_db == f64::NEG_INFINITY {
            return Err(Error::InvalidInput(format!("snr {snr_db} dB")));
        }
        Ok(Self { snr_db })
    }

    pub fn effective_snr_db(&self) -> f64 {
        self.snr_db.min(MAX_SNR_DB)
    }

    /// Noise variance for a signal with the given mean power per entry.
    pub fn noise_variance(&self, signal_power: f64) -> f64 {
        signal_power * 10f64.powf(-self.effective_snr_db() / 10.0)
    }
}

/// Complete (fault-independent) RIS signal `y_r = g_ur s`.
pub fn ris_received(g_ur: &CVector, pilot: Pilot) -> RisSignal {
    RisSignal(g_ur * pilot.0)
}

/// BS signal `y = H_rb diag(ϖ) g_ur s + n`; noiseless when `noise` is `None`.
pub fn bs_received<R: Rng + ?Sized>(
    h_rb: &CMatrix,
    profile: &EffectiveProfile,
    g_ur: &CVector,
    pilot: Pilot,
    noise: Option<(NoiseSpec, &mut R)>,
) -> Result<BsSignal> {
    let n = h_rb.ncols();
    if g_ur.len() != n {
        return Err(Error::dim(n, g_ur.len(), "g_ur vs H_rb columns"));
    }
    if profile.len() != n {
        return Err(Error::dim(n, profile.len(), "profile vs H_rb columns"));
    }
    let reflected = profile.as_vector().component_mul(g_ur) * pilot.0;
    let y = h_rb * reflected;
    match noise {
        None => Ok(BsSignal(y)),
        Some((spec, rng)) => add_awgn(&y, spec, rng).map(BsSignal),
    }
}

/// Linear operator `A = H_rb diag(g_ur) s`, so that noiseless `y = A ϖ`.
pub fn effective_bs_matrix(h_rb: &CMatrix, g_ur: &CVector, pilot: Pilot) -> Result<CMatrix> {
    if g_ur.len() != h_rb.ncols() {
        return Err(Error::dim(h_rb.ncols(), g_ur.len(), "g_ur vs H_rb columns"));
    }
    let mut a = h_rb.clone();
    for (mut col, &g) in a.column_iter_mut().zip(g_ur.iter()) {
        col *= g * pilot.0;
    }
    Ok(a)
}

/// Adds circularly-symmetric complex Gaussian noise at the given SNR.
pub fn add_awgn<R: Rng + ?Sized>(signal: &CVector, spec: NoiseSpec, rng: &mut R) -> Result<CVector> {
    if signal.is_empty() {
        return Err(Error::InvalidInput("cannot add noise to an empty signal".into()));
    }
    let power = signal.norm_squared() / signal.len() as f64;
    if power == 0.0 {
        return Err(Error::DegenerateSnr { snr_db: spec.snr_db });
    }
    let sigma = (spec.noise_variance(power) / 2.0).sqrt();
    Ok(DVector::from_iterator(
        signal.len(),
        signal.iter().map(|&s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex64::new(sigma * re, sigma * im)
        }),
    ))
}
