//! Topic queries go through the same tagging and pattern matching as page
//! context.

use serde::{Deserialize, Serialize};

use super::RetrievalError;
use crate::context::{apply_patterns, attributes, tag_tokens, tokenize, Lexicon, SyntacticPattern, SyntacticTerm};
use crate::lattice::SemanticLattice;

/// Impact of every concept named in a query.
pub const QUERY_IMPACT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub text: String,
    /// Structured form; empty for a query that is only searched as text.
    pub terms: Vec<SyntacticTerm>,
}

impl Query {
    /// A query with no structured form.
    pub fn text_only(text: impl Into<String>) -> Self {
        Query {
            text: text.into(),
            terms: Vec::new(),
        }
    }

    /// Canonical ids of the semantic heads, deduplicated.
    pub fn heads(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for h in self.terms.iter().filter_map(SyntacticTerm::head_concept) {
            if !out.contains(&h) {
                out.push(h);
            }
        }
        out
    }
}

/// Parses a topic query. A query naming only attributes yields one term
/// without a semantic head.
pub fn parse_query(
    text: &str,
    lexicon: &Lexicon,
    lattice: &SemanticLattice,
    patterns: &[SyntacticPattern],
) -> Result<Query, RetrievalError> {
    let tagged = tag_tokens(&tokenize(text), lexicon, lattice);
    let mut terms = apply_patterns(&tagged, patterns, |_| QUERY_IMPACT);
    if terms.is_empty() {
        let mut st = SyntacticTerm::default();
        for a in attributes(&tagged) {
            st.add_attribute(a, QUERY_IMPACT);
        }
        if st.field_count() > 0 {
            terms.push(st);
        }
    }
    if terms.is_empty() {
        return Err(RetrievalError::Unindexable(text.to_owned()));
    }
    Ok(Query {
        text: text.to_owned(),
        terms,
    })
}
