#![allow(dead_code)]

use std::path::PathBuf;

use skewtower::{parse_tower_file, OreTower};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> OreTower {
    let path = fixture_dir().join(format!("{name}.tw"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_tower_file(&src).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every fixture except the deliberately invalid one, sorted by name.
pub fn valid_fixtures() -> Vec<(String, OreTower)> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "tw").then(|| p.file_stem()?.to_str().map(String::from))?
        })
        .filter(|n| n != "broken")
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), fixture(&n))).collect()
}
