//! UPA steering vectors and the angle conventions used for line-of-sight paths.
//!
//! cargo run --example steering_vectors

use std::f64::consts::PI;

use risfaultsim::channelgeom::{angles_between_facing, steering_vector, Facing, PathAngles, Position3D, UpaGeometry};

fn main() -> risfaultsim::Result<()> {
    // 9x9 RIS at 90 GHz, half-wavelength spacing
    let ris = UpaGeometry::half_wavelength(9, 9, 90e9)?;
    println!("RIS: {} elements, spacing {:.3e} m", ris.len(), ris.spacing());

    let broadside = steering_vector(&ris, &PathAngles::new(PI / 2.0, PI / 2.0)?);
    println!("broadside response is flat: max |a_i - 1| = {:.1e}", broadside.iter().map(|a| (a - 1.0).norm()).fold(0.0, f64::max));

    let ris_pos = Position3D::new(15.0, 0.0, 2.0);
    let user = Position3D::new(30.0, 6.0, 0.5);
    let angles = angles_between_facing(ris_pos, user, Facing::PositiveY)?;
    println!(
        "user seen from RIS: elevation {:.4} rad, azimuth {:.4} rad",
        angles.elevation(),
        angles.azimuth()
    );

    let a = steering_vector(&ris, &angles);
    // element (m, n) sits at index m * n_azim + n
    for (m, n) in [(0, 0), (0, 1), (1, 0), (8, 8)] {
        let v = a[ris.index(m, n)];
        println!("a[{m},{n}] = {:+.4} {:+.4}j", v.re, v.im);
    }

    // behind the panel is rejected rather than folded into (0, pi]
    let behind = Position3D::new(20.0, -3.0, 1.0);
    println!("behind the panel: {:?}", angles_between_facing(ris_pos, behind, Facing::PositiveY).unwrap_err());
    Ok(())
}
