//! The energy along a line through conformal factors of the genus-two fan.
//!
//! `E` is convex and its slope is the angle defect, through the flips at
//! `u_0 = -ln 4`.

use disc_uniform::delaunay::{conformal_flow, DelaunayOptions};
use disc_uniform::energy::{evaluate, EnergyOptions};
use disc_uniform::fixtures;

fn main() {
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let opts = EnergyOptions::default();
    println!("{:>6} {:>14} {:>14} {:>14} {:>6}", "u0", "E", "W0", "A0", "flips");
    for k in -12..=8 {
        let u0 = k as f64 * 0.25;
        let (mut m, mut d) = (mesh.clone(), dm.clone());
        let flow = conformal_flow(&mut m, &mut d, &[u0, 0.0], &DelaunayOptions::default()).unwrap();
        let r = evaluate(&mut m, &mut d, &opts).unwrap();
        println!(
            "{u0:>6.2} {:>14.8} {:>14.8} {:>14.8} {:>6}",
            r.energy,
            r.angle_defects[0],
            r.areas[0],
            flow.flip_count()
        );
    }
    let r = evaluate(&mut mesh.clone(), &mut dm.clone(), &opts).unwrap();
    let h = r.hessian.unwrap();
    println!("Hessian at 0:\n{h}");
    println!("eigenvalues: {}", h.symmetric_eigenvalues());
}
