//! Enrichment of conceptual visual index structures (VIS) of web images
//! with concepts mined from the text of their webpages.
//!
//! The crate covers the whole pipeline: a hypernym lattice of semantic
//! concepts, the VIS text format, context extraction from HTML, fuzzy
//! membership aggregation, term/VIS matching and fusion, and retrieval
//! evaluation with NDCG.

use std::path::PathBuf;

pub mod cli;
pub mod config;
pub mod context;
pub mod fusion;
pub mod fuzzy;
pub mod lattice;
pub mod pipeline;
pub mod retrieval;
pub mod store;
pub mod vis;
pub mod vocab;

/// Any failure of the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Vis(#[from] vis::VisError),
    #[error(transparent)]
    Pattern(#[from] context::PatternError),
    #[error(transparent)]
    Fuzzy(#[from] fuzzy::FuzzyError),
    #[error(transparent)]
    Fusion(#[from] fusion::FusionError),
    #[error(transparent)]
    Retrieval(#[from] retrieval::RetrievalError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Store(#[from] store::StoreError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Data(String),
}
