//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use skewtower::{parse_tower_file, OreTower};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.tw"))
}

pub fn fixture_source(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

pub fn fixture(name: &str) -> OreTower {
    parse_tower_file(&fixture_source(name)).expect("fixture parses")
}
