//! Weighted Delaunay flips, and moving a surface along a conformal path.

use disc_uniform::delaunay::{conformal_flow, height_sums, make_weighted_delaunay, DelaunayOptions};
use disc_uniform::fixtures;

fn main() {
    let opts = DelaunayOptions::default();
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    println!("height sums at u = 0: {:?}", height_sums(&mesh, &dm).unwrap());

    // shrinking the center circle makes the rim loops flat at u = -ln 4;
    // the flow flips them there and carries on
    let (mut m, mut d) = (mesh.clone(), dm.clone());
    let log = conformal_flow(&mut m, &mut d, &[-4.0, 0.0], &opts).unwrap();
    println!("flow to (-4, 0): {} flips", log.flip_count());
    for rec in &log.flips {
        println!("  edge {} at height sum {:e}", rec.edge.0, rec.height_sum);
    }
    println!("faces now {:?}", m.face_list());
    println!("height sums {:?}", height_sums(&m, &d).unwrap());

    // in the fixed triangulation the same factor is not even a metric
    let fixed = dm.with_conformal_factor(&[-4.0, 0.0]);
    match height_sums(&mesh, &fixed) {
        Ok(_) => println!("fixed triangulation still valid"),
        Err(e) => println!("fixed triangulation at (-4, 0): {e}"),
    }

    // flowing back restores a Delaunay triangulation of the original metric
    let back = conformal_flow(&mut m, &mut d, &[0.0, 0.0], &opts).unwrap();
    println!("flow back: {} flips", back.flip_count());

    // an already Delaunay surface needs nothing
    let (mut m, mut d) = (mesh.clone(), dm.clone());
    let again = make_weighted_delaunay(&mut m, &mut d, &opts).unwrap();
    println!("make_weighted_delaunay at u = 0: {} flips", again.flip_count());
}
