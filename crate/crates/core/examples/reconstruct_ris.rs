//! Least-squares recovery of the RIS signal on working elements from the BS signal.
//!
//! cargo run --example reconstruct_ris

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risfaultsim::channelgeom::Position3D;
use risfaultsim::estimators::reconstruct_ris_ls;
use risfaultsim::fault::{effective_profile, FaultStatusVector, PhaseProfile};
use risfaultsim::scene::{ArraySize, SceneConfig};
use risfaultsim::signal::{bs_received, ris_received, NoiseSpec, Pilot};

fn main() -> risfaultsim::Result<()> {
    // H_rb built from J paths has rank <= J, so at most J = 10 working elements
    // can be recovered; a 4x4 RIS with six dead elements leaves 10 unknowns
    let scene = SceneConfig {
        ris_array: ArraySize::new(4, 4),
        ..SceneConfig::default()
    };
    let user = Position3D::new(28.0, 4.0, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ch = scene.draw_environment(&mut rng, user)?.realize(&scene, user)?;
    let n = ch.g_ur.len();
    let phases = PhaseProfile::unity(n);
    let statuses = FaultStatusVector::with_faults(n, &[0, 3, 5, 10, 12, 15])?;
    let profile = effective_profile(&phases, &statuses)?;
    let pilot = Pilot::default();
    let y_r = ris_received(&ch.g_ur, pilot);

    let active_err = |est: &risfaultsim::CVector| {
        (0..n)
            .filter(|&i| statuses.is_healthy(i))
            .map(|i| (est[i] - y_r.0[i]).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / y_r.0.norm()
    };

    let y = bs_received::<ChaCha8Rng>(&ch.h_rb, &profile, &ch.g_ur, pilot, None)?;
    let est = reconstruct_ris_ls(&y, &ch.h_rb, &phases, &statuses, 0.0)?;
    println!("noiseless, ridge 0: relative error on active entries {:.2e}", active_err(&est.0));
    println!("faulty entries are zero: {}", statuses.faulty_indices().iter().all(|&i| est.0[i].norm() == 0.0));

    let noisy = bs_received(&ch.h_rb, &profile, &ch.g_ur, pilot, Some((NoiseSpec::new(20.0)?, &mut rng)))?;
    for ridge in [0.0, 1e-3, 1e-1, 10.0] {
        let est = reconstruct_ris_ls(&noisy, &ch.h_rb, &phases, &statuses, ridge)?;
        println!("20 dB, ridge {ridge:>6}: relative error {:.3}", active_err(&est.0));
    }
    Ok(())
}
