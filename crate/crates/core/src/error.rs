use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} is out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: u32, n: usize },

    #[error("graph has no seed nodes")]
    NoSeeds,

    #[error("graph is invalid: {0}")]
    InvalidGraph(String),

    #[error("LT merge overflow: unified seed edge into node {node} would have probability {sum}")]
    LtMergeOverflow { node: NodeId, sum: f64 },

    #[error("seed node {0} cannot be blocked")]
    BlockedSeed(NodeId),

    #[error("edge {src} -> {dst} does not exist")]
    MissingEdge { src: NodeId, dst: NodeId },

    #[error("number of sampling rounds must be positive")]
    ZeroRounds,

    #[error("exact enumeration infeasible: {uncertain} uncertain edges exceed the cap of {cap}")]
    ExactInfeasible { uncertain: usize, cap: usize },

    #[error("exhaustive search infeasible: {subsets} candidate subsets exceed the cap of {cap}")]
    SearchInfeasible { subsets: u128, cap: u128 },

    #[error("not an LT world: node {node} has {in_degree} live incoming edges")]
    NotLtWorld { node: NodeId, in_degree: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}:{line}: duplicate edge {src} -> {dst}", path.display())]
    DuplicateEdge {
        path: PathBuf,
        line: usize,
        src: u64,
        dst: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
