#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use zcv_core::groups::{dixon_character_table, CharacterTable, ClassData};
use zcv_core::pipeline::{CorpusEntry, CorpusIndex, GroupInput, Pipeline, PipelineConfig};

pub fn corpus_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn index() -> &'static CorpusIndex {
    static INDEX: OnceLock<CorpusIndex> = OnceLock::new();
    INDEX.get_or_init(|| CorpusIndex::load(&corpus_root()).expect("corpus index loads"))
}

/// Shared pipeline so quotient and sieve lookups are memoised across tests in one binary.
pub fn pipeline() -> &'static Pipeline {
    static PIPELINE: OnceLock<Pipeline> = OnceLock::new();
    PIPELINE.get_or_init(|| Pipeline::new(PipelineConfig::default()))
}

pub fn entry(key: &str) -> Option<&'static CorpusEntry> {
    index().find(key)
}

pub fn input(key: &str) -> GroupInput {
    let e = entry(key).unwrap_or_else(|| panic!("{key} is not in the corpus"));
    index().load_input(e).expect("corpus input loads")
}

pub fn table(input: &GroupInput) -> CharacterTable {
    match &input.table {
        Some(t) => t.clone(),
        None => dixon_character_table(&input.group, &ClassData::compute(&input.group)).expect("table computes"),
    }
}

/// Group order encoded in a corpus key such as `48_30`.
pub fn key_order(e: &CorpusEntry) -> usize {
    e.key.split(['_', ',']).next().and_then(|s| s.parse().ok()).expect("key starts with the order")
}

pub fn entries_up_to(order: usize) -> Vec<&'static CorpusEntry> {
    index().entries.iter().filter(|e| key_order(e) <= order).collect()
}

pub mod oracles;
