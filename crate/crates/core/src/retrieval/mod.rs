//! Topic queries, ranking under the four indexing strategies, and NDCG
//! evaluation.

mod eval;
mod index;
mod ndcg;
mod query;
mod tfidf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eval::{eval_report, parse_queries, EvalReport, QueryScore, SummaryRow, TopicQuery};
pub use index::{document_lattice, rank, IndexedDocument, SearchIndex, SearchSettings};
pub use ndcg::{ndcg_at_n, ndcg_from_grades, Qrels, MAX_GRADE};
pub use query::{parse_query, Query};
pub use tfidf::{index_term, TfIdfIndex};

use crate::fusion::FusionError;
use crate::fuzzy::FuzzyError;
use crate::lattice::LatticeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RetrievalError {
    #[error("unindexable query `{0}`: no vocabulary concept found")]
    Unindexable(String),
    #[error("unknown strategy `{0}` (expected vis, cx, vis+cx or tfidf)")]
    UnknownStrategy(String),
    #[error("the index is empty")]
    EmptyIndex,
    #[error("the index has not been enriched; run `enrich` first")]
    NotEnriched,
    #[error("cutoff n must be at least 1")]
    Cutoff,
    #[error("relevance grade `{0}` is not one of 0, 1, 2")]
    Grade(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// Original visual index structures.
    #[serde(rename = "vis")]
    Vis,
    /// Syntactic terms mined from context.
    #[serde(rename = "cx")]
    Cx,
    /// Visual structures enriched with context.
    #[serde(rename = "vis+cx")]
    VisCx,
    /// Bag-of-words over context text.
    #[serde(rename = "tfidf")]
    TfIdf,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Vis, Strategy::Cx, Strategy::VisCx, Strategy::TfIdf];

    pub fn key(self) -> &'static str {
        match self {
            Strategy::Vis => "vis",
            Strategy::Cx => "cx",
            Strategy::VisCx => "vis+cx",
            Strategy::TfIdf => "tfidf",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Strategy {
    type Err = RetrievalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vis" => Ok(Strategy::Vis),
            "cx" => Ok(Strategy::Cx),
            "vis+cx" | "vis_cx" => Ok(Strategy::VisCx),
            "tfidf" | "tf-idf" => Ok(Strategy::TfIdf),
            _ => Err(RetrievalError::UnknownStrategy(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub doc_id: String,
    pub score: f64,
}

/// Documents in decreasing score order, ties broken by doc id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub query_id: String,
    pub entries: Vec<RankedEntry>,
}

impl RankedList {
    /// Sorts `scored` into rank order and keeps the first `k`.
    pub fn from_scores(query_id: impl Into<String>, mut scored: Vec<RankedEntry>, k: usize) -> Self {
        scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.doc_id.cmp(&b.doc_id)));
        scored.truncate(k);
        RankedList {
            query_id: query_id.into(),
            entries: scored,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.key().parse::<Strategy>().unwrap(), s);
        }
        assert!("sem".parse::<Strategy>().is_err());
    }

    #[test]
    fn ties_break_on_doc_id() {
        let e = |d: &str, s: f64| RankedEntry {
            doc_id: d.into(),
            score: s,
        };
        let l = RankedList::from_scores("q", vec![e("b", 1.0), e("a", 1.0), e("c", 2.0)], 10);
        assert_eq!(l.doc_ids().collect::<Vec<_>>(), ["c", "a", "b"]);
        let l = RankedList::from_scores("q", vec![e("b", 1.0), e("a", 1.0), e("c", 2.0)], 2);
        assert_eq!(l.len(), 2);
    }
}
