//! Closed-form geometry of a single decorated triangle.

use disc_uniform::metric::edge_length;
use disc_uniform::trigeom::TriangleGeometry;

fn main() {
    // unit circles, inversive distance 2 on every edge: an equilateral
    // triangle of side sqrt(6)
    let g = TriangleGeometry::new([1.0; 3], [2.0; 3]).unwrap();
    println!("lengths        {:?}", g.lengths);
    println!("angles         {:?}", g.angles);
    println!("split d_ab     {:?}", g.split);
    println!("heights h_ab   {:?}", g.heights);
    println!("face circle    {}", g.face_circle_radius);
    println!("alphas         {:?}", g.alphas);
    println!("area           {} (corner areas {:?})", g.area, g.corner_areas);

    // scaling one circle changes the edges at that vertex only
    let grown = TriangleGeometry::new([2.0, 1.0, 1.0], [2.0; 3]).unwrap();
    println!("r_i = 2: lengths {:?}", grown.lengths);
    println!("         angles  {:?}", grown.angles);
    println!("l(2, 1, I = 2) = {}", edge_length(2.0, 1.0, 2.0).unwrap());

    // circles so large that the triangle inequality fails
    match TriangleGeometry::new([10.0, 0.1, 0.1], [1.0, 5.0, 1.0]) {
        Ok(g) => println!("unexpectedly valid: {:?}", g.angles),
        Err(e) => println!("rejected: {e}"),
    }
}
