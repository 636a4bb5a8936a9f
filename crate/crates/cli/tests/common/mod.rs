#![allow(dead_code)]

use std::path::PathBuf;

use sectional_cli::{run, Report, RunOptions, Selection, Source};

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn example(name: &str) -> PathBuf {
    root().join("examples").join(name)
}

pub fn fixture(name: &str) -> PathBuf {
    root().join("tests").join("fixtures").join(name)
}

pub fn examples() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("examples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

pub fn source(path: &PathBuf) -> Source {
    Source {
        path: path.file_name().unwrap().to_string_lossy().into_owned(),
        text: Ok(std::fs::read_to_string(path).unwrap()),
    }
}

pub fn run_files(paths: &[PathBuf], selection: Selection, seed: u64) -> Report {
    let sources: Vec<Source> = paths.iter().map(source).collect();
    run("test", &sources, &RunOptions { selection, seed, ..RunOptions::default() })
}
