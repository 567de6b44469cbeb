//! Fault detection from the BS signal given the linear model `y = A(ω⊙B) + n`.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fault::{FaultStatusVector, PhaseProfile};
use crate::signal::BsSignal;
use crate::{CMatrix, CVector};

/// Largest element count [`detect_faults_exhaustive`] will enumerate.
pub const EXHAUSTIVE_LIMIT: usize = 22;

const RESYNC_EVERY: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub estimated_statuses: FaultStatusVector,
    /// `‖y − A(ω⊙B̂)‖₂` at the returned estimate.
    pub residual_norm: f64,
    /// Several masks reproduce `y` to within numerical zero.
    pub ambiguous: bool,
    /// False when the greedy estimate leaves a residual above tolerance.
    pub converged: bool,
}

fn check_dims(y: &BsSignal, a: &CMatrix, phases: &PhaseProfile) -> Result<()> {
    if y.0.len() != a.nrows() {
        return Err(Error::dim(a.nrows(), y.0.len(), "y vs A rows"));
    }
    if phases.len() != a.ncols() {
        return Err(Error::dim(a.ncols(), phases.len(), "phase profile vs A columns"));
    }
    Ok(())
}

/// Columns of `A diag(ω)`.
fn phased_columns(a: &CMatrix, phases: &PhaseProfile) -> CMatrix {
    let mut d = a.clone();
    for (mut col, &w) in d.column_iter_mut().zip(phases.as_vector().iter()) {
        col *= w;
    }
    d
}

fn residual_for_mask(y: &CVector, d: &CMatrix, mask: u64) -> CVector {
    let mut r = y.clone();
    for n in 0..d.ncols() {
        if mask >> n & 1 == 1 {
            r -= d.column(n);
        }
    }
    r
}

fn mask_to_statuses(mask: u64, n: usize) -> FaultStatusVector {
    FaultStatusVector::new((0..n).map(|i| mask >> i & 1 == 1).collect())
}

/// Orders masks by fault count, then by status vector read from element 0
/// (lexicographically smaller first).
fn tie_break(a: u64, b: u64) -> Ordering {
    // more set bits means fewer faults
    match b.count_ones().cmp(&a.count_ones()) {
        Ordering::Equal => {}
        other => return other,
    }
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let first = diff.trailing_zeros();
    if a >> first & 1 == 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Brute-force minimizer of `‖y − A(ω⊙B)‖₂` over all `2^N` status vectors.
///
/// Ties (within a relative `1e-12` on the squared residual) go to fewer
/// faults, then to the lexicographically smaller status vector.
pub fn detect_faults_exhaustive(y: &BsSignal, a: &CMatrix, phases: &PhaseProfile) -> Result<DetectionResult> {
    check_dims(y, a, phases)?;
    let n = a.ncols();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let d = phased_columns(a, phases);
    let scale2 = y.0.norm_squared() + d.column_iter().map(|c| c.norm_squared()).sum::<f64>();
    let tie_tol = 1e-12 * scale2;
    let zero_tol = 1e-20 * scale2;

    let mut mask = 0u64;
    let mut r = y.0.clone();
    let mut best = (r.norm_squared(), 0u64);
    let mut zero_count = usize::from(best.0 <= zero_tol);

    for g in 1..(1u64 << n) {
        let bit = g.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if g % RESYNC_EVERY == 0 {
            r = residual_for_mask(&y.0, &d, mask);
        } else if mask >> bit & 1 == 1 {
            r -= d.column(bit);
        } else {
            r += d.column(bit);
        }
        let res = r.norm_squared();
        if res <= zero_tol {
            zero_count += 1;
        }
        let better = if res < best.0 - tie_tol {
            true
        } else if res <= best.0 + tie_tol {
            tie_break(mask, best.1) == Ordering::Less
        } else {
            false
        };
        if better {
            best = (res, mask);
        }
    }

    let residual_norm = residual_for_mask(&y.0, &d, best.1).norm();
    Ok(DetectionResult {
        estimated_statuses: mask_to_statuses(best.1, n),
        residual_norm,
        ambiguous: zero_count > 1,
        converged: true,
    })
}

/// Default greedy stopping tolerance `‖y‖·10^(−snr/20)`, the expected norm
/// of the noise added at that SNR.
pub fn default_greedy_tolerance(y: &BsSignal, snr_db: f64) -> f64 {
    let snr = snr_db.min(crate::signal::MAX_SNR_DB);
    y.0.norm() * 10f64.powf(-snr / 20.0)
}

/// Greedy support recovery on the fault indicator `x = 1 − B`.
///
/// Orthogonal matching pursuit on `r = A ω − y ≈ A diag(ω) x`: each step adds
/// the column of `A diag(ω)` with the largest normalized correlation to the
/// residual and re-fits the support by least squares, until the residual is
/// within `tol` or the support reaches `min(M, N)`. Support entries with
/// real part `>= 0.5` are faults; if more than `max_faulty` qualify, the ones
/// whose coefficient is closest to 1 are kept.
///
/// If the rounded estimate still misses `tol`, single flips and pair swaps
/// that lower `‖y − A(ω⊙B̂)‖` are applied until none helps (fault count stays
/// within `max_faulty`).
pub fn detect_faults_greedy(
    y: &BsSignal,
    a: &CMatrix,
    phases: &PhaseProfile,
    max_faulty: usize,
    tol: f64,
) -> Result<DetectionResult> {
    check_dims(y, a, phases)?;
    let (m, n) = a.shape();
    if max_faulty > n {
        return Err(Error::InvalidInput(format!("max_faulty {max_faulty} exceeds N = {n}")));
    }
    let d = phased_columns(a, phases);
    let col_norms: Vec<f64> = d.column_iter().map(|c| c.norm()).collect();
    let ones = CVector::from_element(n, Complex64::new(1.0, 0.0));
    let r0 = &d * &ones - &y.0;

    let cap = if max_faulty == 0 { 0 } else { m.min(n) };
    let mut support: Vec<usize> = Vec::new();
    let mut coeffs = CVector::zeros(0);
    let mut r = r0.clone();
    while r.norm() > tol && support.len() < cap {
        let pick = (0..n)
            .filter(|i| !support.contains(i) && col_norms[*i] > 0.0)
            .map(|i| (i, d.column(i).dotc(&r).norm() / col_norms[i]))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)));
        let Some((idx, _)) = pick else { break };
        support.push(idx);

        let sub = DMatrix::from_columns(&support.iter().map(|&i| d.column(i)).collect::<Vec<_>>());
        coeffs = sub
            .clone()
            .svd(true, true)
            .solve(&r0, 1e-12)
            .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
        r = &r0 - &sub * &coeffs;
    }

    let one = Complex64::new(1.0, 0.0);
    let mut faulty: Vec<(usize, f64)> = support
        .iter()
        .zip(coeffs.iter())
        .filter(|(_, c)| c.re >= 0.5)
        .map(|(&i, c)| (i, (c - one).norm()))
        .collect();
    faulty.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    let mut statuses = vec![true; n];
    for &(i, _) in faulty.iter().take(max_faulty) {
        statuses[i] = false;
    }

    // residual y − D·B̂, updated in place while refining
    let mut res = y.0.clone();
    for (i, &ok) in statuses.iter().enumerate() {
        if ok {
            res -= d.column(i);
        }
    }
    let mut best = res.norm();
    let mut n_faulty = statuses.iter().filter(|ok| !**ok).count();
    // toggling element i changes the residual by +d_i (healthy→faulty) or −d_i
    let sign = |ok: bool| if ok { 1.0 } else { -1.0 };
    while best > tol {
        let mut improved = false;
        for i in 0..n {
            for j in i..n {
                let delta_faults = |k: usize| if statuses[k] { 1isize } else { -1 };
                let new_faulty = n_faulty as isize + delta_faults(i) + if j != i { delta_faults(j) } else { 0 };
                if new_faulty > max_faulty as isize {
                    continue;
                }
                let mut cand = &res + d.column(i) * Complex64::from(sign(statuses[i]));
                if j != i {
                    cand += d.column(j) * Complex64::from(sign(statuses[j]));
                }
                let v = cand.norm();
                if v < best * (1.0 - 1e-12) {
                    statuses[i] = !statuses[i];
                    if j != i {
                        statuses[j] = !statuses[j];
                    }
                    n_faulty = new_faulty as usize;
                    res = cand;
                    best = v;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }

    let active = CVector::from_iterator(n, statuses.iter().map(|&ok| Complex64::new(f64::from(u8::from(ok)), 0.0)));
    let residual_norm = (&y.0 - &d * active).norm();
    Ok(DetectionResult {
        estimated_statuses: FaultStatusVector::new(statuses),
        residual_norm,
        ambiguous: false,
        converged: residual_norm <= tol,
    })
}
