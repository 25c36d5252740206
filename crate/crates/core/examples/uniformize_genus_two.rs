//! Constant curvature on the genus-two fan, with the solver trace.

use disc_uniform::fixtures;
use disc_uniform::uniformizer::{uniformize, SolverOptions};

fn main() {
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let opts = SolverOptions { seed_u: Some(vec![-3.0, 1.0]), ..SolverOptions::default() };
    let r = uniformize(&mesh, &dm, &opts).unwrap();
    for (k, rec) in r.trace.iter().enumerate() {
        println!(
            "{k:>2}: objective {:.15} residual {:.3e} flips {} step {:?} t = {}",
            rec.objective, rec.residual, rec.flips, rec.step, rec.step_length
        );
    }
    println!("u         = {:?}", r.u);
    println!("K         = {:?}", r.curvatures);
    println!("K_bar     = {} (pi chi = {})", r.k_bar, std::f64::consts::PI * r.euler_characteristic as f64);
    println!("A_tot     = {}", r.total_area);
    println!("spread    = {:e}", r.curvature_spread());
    println!("faces     = {:?}", r.mesh.face_list());
}
