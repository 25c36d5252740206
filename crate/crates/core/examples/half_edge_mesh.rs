//! Builds the three fixture surfaces and walks their half-edge structure.

use disc_uniform::fixtures;
use disc_uniform::Mesh;

fn describe(name: &str, mesh: &Mesh) {
    println!(
        "{name}: V = {}, E = {}, F = {}, chi = {}",
        mesh.vertex_count(),
        mesh.edge_count(),
        mesh.face_count(),
        mesh.euler_characteristic()
    );
    for v in mesh.vertices() {
        println!("  vertex {} has {} corners", v.index(), mesh.vertex_star(v).len());
    }
}

fn main() {
    describe("torus", &fixtures::one_vertex_torus());
    describe("icosahedron", &fixtures::icosahedron());

    let mut g2 = fixtures::genus_two_fan();
    describe("genus two", &g2);

    // every edge of the fan is a loop or joins the center to the rim vertex
    for e in g2.edges() {
        let [a, b] = g2.edge_endpoints(e);
        let [h, t] = g2.edge_half_edges(e);
        println!("  edge {}: {} -> {} (half-edges {}, {})", e.0, a.index(), b.index(), h.0, t.0);
    }

    // flipping an edge twice gives back the same faces
    let e = disc_uniform::EdgeId(0);
    g2.flip_edge(e).unwrap();
    println!("after one flip: {:?}", g2.face_list());
    g2.flip_edge(e).unwrap();
    g2.check_invariants().unwrap();
    println!("after two flips: {:?}", g2.face_list());
}
