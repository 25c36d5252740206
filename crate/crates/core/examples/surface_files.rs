//! Reads the bundled surface files, uniformizes the ones with χ ≤ 0 and
//! writes a result file.

use std::path::Path;

use disc_uniform::io::{ResultFile, SurfaceFile};
use disc_uniform::metric::{validate_metric, MetricTolerances};
use disc_uniform::uniformizer::{uniformize_trace, SolverOptions};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["t1.json", "g2.json", "icosahedron.json", "g2_bad_separation.json", "g2_truncated.json"] {
        let file = match SurfaceFile::load(data.join(name)) {
            Ok(f) => f,
            Err(e) => {
                println!("{name}: {e}");
                continue;
            }
        };
        let (mesh, dm) = file.build().unwrap();
        let violations = validate_metric(&mesh, &dm, MetricTolerances::default());
        if !violations.is_empty() {
            println!("{name}: {} violation(s), first: {}", violations.len(), violations[0]);
            continue;
        }
        match uniformize_trace(&mesh, &dm, &SolverOptions::default()) {
            Ok(r) => {
                let out = ResultFile::from(&r);
                println!("{name}: converged {} in {} iterations, K_bar {}", r.converged, r.iterations, r.k_bar);
                println!("  u = {:?}, residuals {:?}", out.u, out.residual_history);
            }
            Err(e) => println!("{name}: {e}"),
        }
    }
}
