//! Orchestration: corpus ingestion, the per-group pipeline, verdict reports and the report store.

pub mod corpus;
pub mod report;
pub mod run;
pub mod store;

pub use corpus::{ingest, CorpusEntry, CorpusIndex, GroupInput};
pub use report::{
    diff_reports, match_table_fragment, match_up_to_table_automorphism, Comparison, FragmentMatch, Golden, MatchResult,
    OrderReport, PatternRecord, SolutionReport, Status, TableFragment, VerdictReport, SCHEMA,
};
pub use run::{compare_with_golden, recheck_report, run_corpus, CorpusResult, ExitStatus, Pipeline, PipelineConfig};
pub use store::Store;

use thiserror::Error;

use crate::eliminate::EliminateError;
use crate::groups::GroupError;
use crate::help::HelpError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Help(#[from] HelpError),
    #[error(transparent)]
    Eliminate(#[from] EliminateError),
    #[error("store: {0}")]
    Store(String),
}

impl PipelineError {
    pub fn input(path: impl std::fmt::Display, message: impl std::fmt::Display) -> Self {
        PipelineError::Input { path: path.to_string(), message: message.to_string() }
    }
}
