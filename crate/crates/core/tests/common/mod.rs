//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use risfaultsim::channelgeom::{PathAngles, PathSet, UpaGeometry};
use risfaultsim::{CMatrix, CVector};

/// Per-element phase `exp(-j 2π d/λ (m cosθ + n sinθ cosφ))`, element (m, n)
/// at index `m * n_azim + n`.
pub fn steering_oracle(g: &UpaGeometry, a: &PathAngles) -> CVector {
    let k = 2.0 * PI * g.spacing() / g.wavelength();
    let (th, ph) = (a.elevation(), a.azimuth());
    let mut out = CVector::zeros(g.len());
    for m in 0..g.n_elev() {
        for n in 0..g.n_azim() {
            let phase = -k * (m as f64 * th.cos() + n as f64 * th.sin() * ph.cos());
            out[m * g.n_azim() + n] = Complex64::from_polar(1.0, phase);
        }
    }
    out
}

pub fn g_ur_oracle(paths: &PathSet, ris: &UpaGeometry) -> CVector {
    let mut g = CVector::zeros(ris.len());
    for p in paths.paths() {
        let a = steering_oracle(ris, &p.arrival);
        for i in 0..ris.len() {
            g[i] += p.gain * a[i];
        }
    }
    g
}

pub fn h_rb_oracle(paths: &PathSet, bs: &UpaGeometry, ris: &UpaGeometry) -> CMatrix {
    let mut h = CMatrix::zeros(bs.len(), ris.len());
    for p in paths.paths() {
        let ab = steering_oracle(bs, &p.arrival);
        let ar = steering_oracle(ris, p.departure.as_ref().expect("RIS-BS path has a departure"));
        for i in 0..bs.len() {
            for j in 0..ris.len() {
                h[(i, j)] += p.gain * ab[i] * ar[j].conj();
            }
        }
    }
    h
}

pub fn rel_err(a: &CVector, b: &CVector) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
