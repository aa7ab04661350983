use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid initial configuration: {0}")]
    InvalidInit(String),

    #[error("vertex {vertex} out of range (graph has {vertices} vertices)")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("vertex {0} is assigned both red and blue particles")]
    MixedSite(usize),

    #[error("invalid biased walk: {0}")]
    InvalidWalk(String),

    #[error("alternating trials with p1 = {p1}, p2 = {p2} never succeed")]
    DegenerateTrials { p1: f64, p2: f64 },

    #[error("exact solver refused: state space of {states} states exceeds the limit of {limit}")]
    StateSpaceTooLarge { states: usize, limit: usize },

    #[error("exact solver does not support {0}")]
    UnsupportedOracle(String),

    #[error("singular linear system in {0}")]
    Singular(&'static str),

    #[error("failed writing {path} after {records_written} records: {source}")]
    Output {
        path: PathBuf,
        records_written: usize,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed constants file: {0}")]
    Constants(String),
}
