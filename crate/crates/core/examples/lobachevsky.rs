//! Values and symmetries of the Lobachevsky function.

use std::f64::consts::PI;

use disc_uniform::energy::lobachevsky;

fn main() {
    for k in 0..=12 {
        let x = k as f64 * PI / 12.0;
        println!("Л({k}π/12) = {:+.16}", lobachevsky(x));
    }
    // maximum at π/6
    println!("Л(π/6) = {}", lobachevsky(PI / 6.0));
    // π-periodic and odd
    let x = 0.3;
    println!("Л(x + π) - Л(x) = {:e}", lobachevsky(x + PI) - lobachevsky(x));
    println!("Л(-x) + Л(x)    = {:e}", lobachevsky(-x) + lobachevsky(x));
    // Л(2x) = 2Л(x) + 2Л(x + π/2)
    let dup = lobachevsky(2.0 * x) - 2.0 * (lobachevsky(x) + lobachevsky(x + PI / 2.0));
    println!("duplication residual {dup:e}");
}
