//! Benchmark fixtures: corpus groups loaded from the workspace copy.

use std::path::PathBuf;

use zcv_core::pipeline::{CorpusIndex, GroupInput};

pub fn corpus() -> CorpusIndex {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    CorpusIndex::load(&root).expect("workspace corpus")
}

pub fn input(key: &str) -> GroupInput {
    let index = corpus();
    let entry = index.find(key).unwrap_or_else(|| panic!("no corpus entry {key}"));
    index.load_input(entry).expect("corpus input")
}
