//! Ridge-regularized recovery of the RIS signal on working elements.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fault::{FaultStatusVector, PhaseProfile};
use crate::signal::{BsSignal, RisSignal};
use crate::CMatrix;

/// Relative singular-value cutoff used when `ridge == 0`.
const RANK_TOL: f64 = 1e-12;

/// Minimizes `‖y − H_a v‖² + ridge·‖v‖²` where `H_a = H_rb diag(ω)` restricted
/// to working elements, and scatters `v` back to length `N` with zeros at
/// faulty indices.
///
/// Solved through the SVD `H_a = U Σ Vᴴ` as `v = V diag(σ/(σ² + ridge)) Uᴴ y`.
/// With `ridge == 0` this is the minimum-norm least-squares solution.
pub fn reconstruct_ris_ls(
    y: &BsSignal,
    h_rb: &CMatrix,
    phases: &PhaseProfile,
    statuses: &FaultStatusVector,
    ridge: f64,
) -> Result<RisSignal> {
    let (m, n) = h_rb.shape();
    if y.0.len() != m {
        return Err(Error::dim(m, y.0.len(), "y vs H_rb rows"));
    }
    if phases.len() != n {
        return Err(Error::dim(n, phases.len(), "phase profile vs H_rb columns"));
    }
    if statuses.len() != n {
        return Err(Error::dim(n, statuses.len(), "statuses vs H_rb columns"));
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidInput(format!("ridge must be >= 0, got {ridge}")));
    }
    let active: Vec<usize> = (0..n).filter(|&i| statuses.is_healthy(i)).collect();
    if active.is_empty() {
        return Err(Error::NoActiveElements);
    }

    let w = phases.as_vector();
    let h_a = DMatrix::from_fn(m, active.len(), |r, c| h_rb[(r, active[c])] * w[active[c]]);
    let svd = h_a.svd(true, true);
    let u = svd.u.as_ref().expect("svd computed with u");
    let v_t = svd.v_t.as_ref().expect("svd computed with v_t");
    let s_max = svd.singular_values.max();

    let uhy = u.adjoint() * &y.0;
    let filtered = DVector::from_iterator(
        svd.singular_values.len(),
        svd.singular_values.iter().zip(uhy.iter()).map(|(&s, &c)| {
            let gain = if ridge > 0.0 {
                s / (s * s + ridge)
            } else if s > RANK_TOL * s_max {
                1.0 / s
            } else {
                0.0
            };
            c * gain
        }),
    );
    let v = v_t.adjoint() * filtered;

    let mut out = DVector::from_element(n, Complex64::new(0.0, 0.0));
    for (&i, &val) in active.iter().zip(v.iter()) {
        out[i] = val;
    }
    Ok(RisSignal(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::effective_profile;
    use crate::signal::{bs_received, Pilot};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    #[test]
    fn recovers_active_entries_against_pinv_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (m, n) = (16, 20);
        let h = DMatrix::from_fn(m, n, |_, _| cgauss(&mut rng));
        let g = DVector::from_fn(n, |_, _| cgauss(&mut rng));
        let w = PhaseProfile::from_angles(&(0..n).map(|i| 0.2 * i as f64).collect::<Vec<_>>());
        let b = FaultStatusVector::with_faults(n, &[0, 3, 5, 9, 11, 17]).unwrap();
        let y = bs_received::<ChaCha8Rng>(&h, &effective_profile(&w, &b).unwrap(), &g, Pilot::default(), None).unwrap();

        let out = reconstruct_ris_ls(&y, &h, &w, &b, 0.0).unwrap();
        for i in 0..n {
            if b.is_healthy(i) {
                assert!((out.0[i] - g[i]).norm() <= 1e-8 * g[i].norm().max(1.0));
            } else {
                assert_eq!(out.0[i], Complex64::new(0.0, 0.0));
            }
        }

        // independent route: nalgebra pseudo-inverse of the active block
        let active: Vec<usize> = (0..n).filter(|&i| b.is_healthy(i)).collect();
        let h_a = DMatrix::from_fn(m, active.len(), |r, c| h[(r, active[c])] * w.as_vector()[active[c]]);
        let pinv = h_a.pseudo_inverse(1e-12).unwrap();
        let v = pinv * &y.0;
        for (k, &i) in active.iter().enumerate() {
            assert!((v[k] - out.0[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn small_ridge_is_close_to_plain_ls() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = DMatrix::from_fn(16, 8, |_, _| cgauss(&mut rng));
        let g = DVector::from_fn(8, |_, _| cgauss(&mut rng));
        let w = PhaseProfile::unity(8);
        let b = FaultStatusVector::with_faults(8, &[4]).unwrap();
        let y = bs_received::<ChaCha8Rng>(&h, &effective_profile(&w, &b).unwrap(), &g, Pilot::default(), None).unwrap();
        let plain = reconstruct_ris_ls(&y, &h, &w, &b, 0.0).unwrap();
        let ridged = reconstruct_ris_ls(&y, &h, &w, &b, 1e-6).unwrap();
        assert!((plain.0 - ridged.0).camax() < 1e-4);
    }

    #[test]
    fn all_faulty_is_error() {
        let h = DMatrix::from_element(2, 3, Complex64::new(1.0, 0.0));
        let y = BsSignal(DVector::zeros(2));
        let r = reconstruct_ris_ls(&y, &h, &PhaseProfile::unity(3), &FaultStatusVector::new(vec![false; 3]), 0.0);
        assert!(matches!(r, Err(Error::NoActiveElements)));
    }

    #[test]
    fn negative_ridge_rejected() {
        let h = DMatrix::from_element(2, 3, Complex64::new(1.0, 0.0));
        let y = BsSignal(DVector::zeros(2));
        assert!(reconstruct_ris_ls(&y, &h, &PhaseProfile::unity(3), &FaultStatusVector::all_healthy(3), -1.0).is_err());
    }
}
