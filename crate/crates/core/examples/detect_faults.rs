//! Exhaustive and greedy fault detection on a small RIS.
//!
//! cargo run --release --example detect_faults

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use risfaultsim::channelgeom::Position3D;
use risfaultsim::estimators::{default_greedy_tolerance, detect_faults_exhaustive, detect_faults_greedy};
use risfaultsim::fault::{effective_profile, FaultStatusVector, PhaseProfile};
use risfaultsim::scene::{ArraySize, SceneConfig};
use risfaultsim::signal::{bs_received, effective_bs_matrix, NoiseSpec, Pilot};

fn main() -> risfaultsim::Result<()> {
    let scene = SceneConfig {
        ris_array: ArraySize::new(2, 5),
        ..SceneConfig::default()
    };
    let user = Position3D::new(30.0, 6.0, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ch = scene.draw_environment(&mut rng, user)?.realize(&scene, user)?;
    let n = ch.g_ur.len();
    let phases = PhaseProfile::unity(n);
    let pilot = Pilot::default();
    let a = effective_bs_matrix(&ch.h_rb, &ch.g_ur, pilot)?;

    let truth = FaultStatusVector::with_faults(n, &[2, 7])?;
    let profile = effective_profile(&phases, &truth)?;
    println!("true faults: {:?}", truth.faulty_indices());

    for snr in [None, Some(30.0), Some(10.0)] {
        let noise = snr.map(|s| (NoiseSpec::new(s).unwrap(), &mut rng));
        let y = bs_received(&ch.h_rb, &profile, &ch.g_ur, pilot, noise)?;
        let ex = detect_faults_exhaustive(&y, &a, &phases)?;
        let tol = default_greedy_tolerance(&y, snr.unwrap_or(f64::INFINITY));
        let gr = detect_faults_greedy(&y, &a, &phases, 2, tol)?;
        println!(
            "snr {:>8}: exhaustive {:?} (residual {:.2e}), greedy {:?} (residual {:.2e}, converged {})",
            snr.map_or("none".to_string(), |s| format!("{s} dB")),
            ex.estimated_statuses.faulty_indices(),
            ex.residual_norm,
            gr.estimated_statuses.faulty_indices(),
            gr.residual_norm,
            gr.converged
        );
    }
    Ok(())
}
