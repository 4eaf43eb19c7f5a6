#![allow(dead_code)]

pub mod oracles;

use std::path::{Path, PathBuf};

use fwlab::{parse_scenario, run_scenario, RunConfig, SourceError};

pub fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

/// Sorted `.fw` files in a fixture directory.
pub fn fixtures(name: &str) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir(name))
        .expect("fixture directory exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "fw"))
        .collect();
    files.sort();
    files
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("fixture is readable")
}

pub fn run_json(text: &str, config: &RunConfig) -> String {
    let ast = parse_scenario(text).expect("scenario parses");
    run_scenario(&ast, config)
        .expect("scenario runs")
        .to_json_string()
}

/// First source error from parsing, or from running when parsing succeeds.
pub fn first_error(text: &str) -> Option<SourceError> {
    match parse_scenario(text) {
        Err(errors) => errors.into_iter().next(),
        Ok(ast) => match run_scenario(&ast, &RunConfig::default()) {
            Err(fwlab::RunError::Source(errors)) => errors.into_iter().next(),
            _ => None,
        },
    }
}
