//! Batch evaluation: every strategy and cutoff over a query set.

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;

use super::index::rank_as;
use super::{ndcg_at_n, parse_query, Qrels, Query, RetrievalError, SearchIndex, Strategy};
use crate::context::{Lexicon, SyntacticPattern};

/// A line of the queries file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicQuery {
    pub id: String,
    pub text: String,
}

/// Parses `id <tab> text` lines; blank lines and `#` comments are skipped.
pub fn parse_queries(text: &str) -> Result<Vec<TopicQuery>, RetrievalError> {
    let mut out: Vec<TopicQuery> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, q)) = line.split_once('\t') else {
            return Err(RetrievalError::Format {
                line: no + 1,
                message: "expected `id<TAB>text`".into(),
            });
        };
        let (id, q) = (id.trim(), q.trim());
        if id.is_empty() || q.is_empty() {
            return Err(RetrievalError::Format {
                line: no + 1,
                message: "empty query id or text".into(),
            });
        }
        if out.iter().any(|t| t.id == id) {
            return Err(RetrievalError::Format {
                line: no + 1,
                message: format!("duplicate query id `{id}`"),
            });
        }
        out.push(TopicQuery {
            id: id.to_owned(),
            text: q.to_owned(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryScore {
    pub query_id: String,
    pub strategy: Strategy,
    pub n: usize,
    pub ndcg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub strategy: Strategy,
    pub n: usize,
    pub mean_ndcg: f64,
    /// Number of queries averaged.
    pub queries: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalReport {
    pub summary: Vec<SummaryRow>,
    pub per_query: Vec<QueryScore>,
    pub warnings: Vec<String>,
}

fn csv_field(s: &str) -> Cow<'_, str> {
    if s.contains([',', '"', '\n']) {
        Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        Cow::Borrowed(s)
    }
}

impl EvalReport {
    pub fn mean(&self, strategy: Strategy, n: usize) -> Option<f64> {
        self.summary
            .iter()
            .find(|r| r.strategy == strategy && r.n == n)
            .map(|r| r.mean_ndcg)
    }

    /// `strategy,n,mean_ndcg` table.
    pub fn summary_csv(&self) -> String {
        let mut s = String::from("strategy,n,mean_ndcg\n");
        for r in &self.summary {
            let _ = writeln!(s, "{},{},{:.6}", r.strategy, r.n, r.mean_ndcg);
        }
        s
    }

    /// `query_id,strategy,n,ndcg` table.
    pub fn per_query_csv(&self) -> String {
        let mut s = String::from("query_id,strategy,n,ndcg\n");
        for r in &self.per_query {
            let _ = writeln!(s, "{},{},{},{:.6}", csv_field(&r.query_id), r.strategy, r.n, r.ndcg);
        }
        s
    }
}

/// Ranks every judged query under every strategy and averages NDCG per
/// strategy and cutoff.
///
/// Queries without judgments are left out; judgments on documents missing
/// from the index are dropped. A query the structured parser cannot index
/// gets an empty ranking under the structural strategies.
pub fn eval_report(
    index: &SearchIndex,
    queries: &[TopicQuery],
    qrels: &Qrels,
    strategies: &[Strategy],
    ns: &[usize],
    lexicon: &Lexicon,
    patterns: &[SyntacticPattern],
) -> Result<EvalReport, RetrievalError> {
    if ns.contains(&0) {
        return Err(RetrievalError::Cutoff);
    }
    let mut warnings = Vec::new();
    let known: BTreeSet<&str> = index.documents().iter().map(|d| d.doc_id.as_str()).collect();
    let mut qrels = qrels.clone();
    for (q, d) in qrels.retain_docs(&known) {
        warnings.push(format!("qrels for query `{q}` reference unknown document `{d}`; ignored"));
    }
    let structural = strategies.iter().any(|s| *s != Strategy::TfIdf);
    let mut judged: Vec<(&TopicQuery, Query)> = Vec::new();
    for tq in queries {
        if !qrels.has_query(&tq.id) {
            warnings.push(format!("query `{}` has no relevance judgments; excluded", tq.id));
            continue;
        }
        let parsed = if structural {
            let taxonomy = index.taxonomy().ok_or(RetrievalError::NotEnriched)?;
            match parse_query(&tq.text, lexicon, taxonomy, patterns) {
                Ok(q) => q,
                Err(RetrievalError::Unindexable(_)) => {
                    warnings.push(format!("query `{}` is unindexable; structural strategies return nothing", tq.id));
                    Query::text_only(&tq.text)
                }
                Err(e) => return Err(e),
            }
        } else {
            Query::text_only(&tq.text)
        };
        judged.push((tq, parsed));
    }
    for w in &warnings {
        warn!("{w}");
    }

    let jobs: Vec<(usize, Strategy)> = (0..judged.len())
        .flat_map(|q| strategies.iter().map(move |s| (q, *s)))
        .collect();
    let scored: Vec<Vec<QueryScore>> = jobs
        .par_iter()
        .map(|&(qi, strategy)| {
            let (tq, query) = &judged[qi];
            let list = if index.is_empty() {
                super::RankedList::from_scores(tq.id.clone(), Vec::new(), 0)
            } else {
                rank_as(index, &tq.id, query, strategy, usize::MAX)?
            };
            ns.iter()
                .map(|&n| {
                    Ok(QueryScore {
                        query_id: tq.id.clone(),
                        strategy,
                        n,
                        ndcg: ndcg_at_n(&list, &qrels, n)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_, RetrievalError>>()?;
    let per_query: Vec<QueryScore> = scored.into_iter().flatten().collect();

    let mut summary = Vec::new();
    for &strategy in strategies {
        for &n in ns {
            let cells: Vec<f64> = per_query
                .iter()
                .filter(|r| r.strategy == strategy && r.n == n)
                .map(|r| r.ndcg)
                .collect();
            let mean = if cells.is_empty() {
                0.0
            } else {
                cells.iter().sum::<f64>() / cells.len() as f64
            };
            summary.push(SummaryRow {
                strategy,
                n,
                mean_ndcg: mean,
                queries: cells.len(),
            });
        }
    }
    Ok(EvalReport {
        summary,
        per_query,
        warnings,
    })
}
