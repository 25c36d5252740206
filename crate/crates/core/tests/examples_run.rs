//! Runs every example program and checks it exits cleanly.
//!
//! `cargo test` compiles the examples next to the binary before running tests.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 7] = [
    "half_edge_mesh",
    "decorated_triangle",
    "lobachevsky",
    "weighted_delaunay",
    "energy_landscape",
    "uniformize_genus_two",
    "surface_files",
];

fn example_path(name: &str) -> PathBuf {
    let bin = PathBuf::from(env!("CARGO_BIN_EXE_disc-uniform"));
    let mut path = bin.parent().unwrap().join("examples").join(name);
    path.set_extension(std::env::consts::EXE_EXTENSION);
    path
}

#[test]
fn examples_exit_cleanly() {
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "{} is not built; run `cargo test` without a target filter", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name} failed:\n{}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn every_example_is_listed() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "rs"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    found.sort();
    let mut listed: Vec<String> = EXAMPLES.iter().map(|s| s.to_string()).collect();
    listed.sort();
    assert_eq!(found, listed);
}
