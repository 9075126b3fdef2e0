//! Graded relevance judgments and normalized discounted cumulative gain.

use std::collections::{BTreeMap, BTreeSet};

use super::{RankedList, RetrievalError};

/// Highest relevance grade.
pub const MAX_GRADE: u8 = 2;

/// Relevance grades per `(query id, doc id)`; missing pairs are grade 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Qrels {
    grades: BTreeMap<String, BTreeMap<String, u8>>,
}

impl Qrels {
    pub fn new() -> Self {
        Qrels::default()
    }

    pub fn insert(&mut self, query: impl Into<String>, doc: impl Into<String>, grade: u8) -> Result<(), RetrievalError> {
        if grade > MAX_GRADE {
            return Err(RetrievalError::Grade(grade.to_string()));
        }
        self.grades.entry(query.into()).or_default().insert(doc.into(), grade);
        Ok(())
    }

    /// Parses `query_id <tab> doc_id <tab> grade` lines. Blank lines and
    /// lines starting with `#` are ignored; a repeated pair keeps the last
    /// grade.
    pub fn parse(text: &str) -> Result<Self, RetrievalError> {
        let mut q = Qrels::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [query, doc, grade] = fields[..] else {
                return Err(RetrievalError::Format {
                    line: no + 1,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            };
            if query.is_empty() || doc.is_empty() {
                return Err(RetrievalError::Format {
                    line: no + 1,
                    message: "empty query or doc id".into(),
                });
            }
            let g: u8 = grade.parse().map_err(|_| RetrievalError::Grade(grade.to_owned()))?;
            q.insert(query, doc, g)?;
        }
        Ok(q)
    }

    pub fn grade(&self, query: &str, doc: &str) -> u8 {
        self.grades
            .get(query)
            .and_then(|m| m.get(doc))
            .copied()
            .unwrap_or(0)
    }

    pub fn has_query(&self, query: &str) -> bool {
        self.grades.contains_key(query)
    }

    pub fn queries(&self) -> impl Iterator<Item = &str> {
        self.grades.keys().map(String::as_str)
    }

    /// All judged grades of a query, in doc id order.
    pub fn grades_of(&self, query: &str) -> Vec<u8> {
        self.grades
            .get(query)
            .map(|m| m.values().copied().collect())
            .unwrap_or_default()
    }

    /// Drops judgments on docs outside `known`, returning the dropped pairs.
    pub fn retain_docs(&mut self, known: &BTreeSet<&str>) -> Vec<(String, String)> {
        let mut dropped = Vec::new();
        for (q, docs) in &mut self.grades {
            docs.retain(|d, _| {
                let keep = known.contains(d.as_str());
                if !keep {
                    dropped.push((q.clone(), d.clone()));
                }
                keep
            });
        }
        dropped
    }
}

fn dcg(grades: impl Iterator<Item = u8>) -> f64 {
    grades
        .enumerate()
        .map(|(i, g)| ((1u32 << g) - 1) as f64 / ((i + 2) as f64).log2())
        .sum()
}

/// NDCG@n of grades listed in rank order, normalized by the ideal ordering
/// of `judged` (every grade known for the query). Returns 0 when the ideal
/// gain is 0.
pub fn ndcg_from_grades(ranked: &[u8], judged: &[u8], n: usize) -> Result<f64, RetrievalError> {
    if n == 0 {
        return Err(RetrievalError::Cutoff);
    }
    let mut ideal = judged.to_vec();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = dcg(ideal.into_iter().take(n));
    if idcg == 0.0 {
        return Ok(0.0);
    }
    Ok((dcg(ranked.iter().copied().take(n)) / idcg).min(1.0))
}

/// NDCG@n of a ranked list against the judgments for its query.
pub fn ndcg_at_n(list: &RankedList, qrels: &Qrels, n: usize) -> Result<f64, RetrievalError> {
    let ranked: Vec<u8> = list
        .entries
        .iter()
        .map(|e| qrels.grade(&list.query_id, &e.doc_id))
        .collect();
    ndcg_from_grades(&ranked, &qrels.grades_of(&list.query_id), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::RankedEntry;

    #[test]
    fn perfect_and_reversed() {
        assert!((ndcg_from_grades(&[2, 1, 0], &[2, 1, 0], 3).unwrap() - 1.0).abs() < 1e-12);
        let v = ndcg_from_grades(&[0, 1, 2], &[2, 1, 0], 3).unwrap();
        assert!((v - 0.5869).abs() < 1e-3, "{v}");
        assert_eq!(ndcg_from_grades(&[0, 0, 0], &[0, 0, 0], 3).unwrap(), 0.0);
        assert_eq!(ndcg_from_grades(&[2], &[2], 0), Err(RetrievalError::Cutoff));
    }

    #[test]
    fn qrels_parse_and_lookup() {
        let q = Qrels::parse("q1\td1\t2\nq1\td2\t1\n\n# note\nq2\td1\t0\n").unwrap();
        assert_eq!(q.grade("q1", "d1"), 2);
        assert_eq!(q.grade("q1", "d9"), 0);
        assert!(q.has_query("q2"));
        assert!(!q.has_query("q3"));
        assert!(Qrels::parse("q1\td1\t3\n").is_err());
        assert!(Qrels::parse("q1\td1\n").is_err());
        assert!(Qrels::parse("q1\td1\t-1\n").is_err());
    }

    #[test]
    fn list_against_qrels() {
        let q = Qrels::parse("q\ta\t2\nq\tb\t1\nq\tc\t0\n").unwrap();
        let list = RankedList {
            query_id: "q".into(),
            entries: ["c", "b", "a"]
                .iter()
                .map(|d| RankedEntry {
                    doc_id: d.to_string(),
                    score: 1.0,
                })
                .collect(),
        };
        let v = ndcg_at_n(&list, &q, 3).unwrap();
        assert!((v - 0.5869).abs() < 1e-3);
    }
}
