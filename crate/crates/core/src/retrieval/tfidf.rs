//! Bag-of-words baseline: tf·log(N/df) weights with cosine scoring.

use std::collections::BTreeMap;

use crate::context::{fold_candidates, tokenize};

/// Index term of a token: its most aggressive plural folding, so that
/// "roses" and "rose" meet.
pub fn index_term(token: &str) -> String {
    fold_candidates(token).pop().unwrap_or_else(|| token.to_owned())
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TfIdfIndex {
    doc_ids: Vec<String>,
    /// Unit-length weight vectors (zero vectors stay zero).
    vectors: Vec<BTreeMap<String, f64>>,
    df: BTreeMap<String, usize>,
}

fn counts<'a, I: IntoIterator<Item = &'a String>>(tokens: I) -> BTreeMap<String, usize> {
    let mut tf = BTreeMap::new();
    for t in tokens {
        *tf.entry(index_term(t)).or_insert(0) += 1;
    }
    tf
}

impl TfIdfIndex {
    /// Builds the index from `(doc id, tokens)` pairs.
    pub fn build<'a, I>(docs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a [String])>,
    {
        let mut doc_ids = Vec::new();
        let mut tfs = Vec::new();
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for (id, tokens) in docs {
            let tf = counts(tokens);
            for term in tf.keys() {
                *df.entry(term.clone()).or_insert(0) += 1;
            }
            doc_ids.push(id.to_owned());
            tfs.push(tf);
        }
        let mut index = TfIdfIndex {
            doc_ids,
            vectors: Vec::new(),
            df,
        };
        index.vectors = tfs.iter().map(|tf| index.weigh(tf)).collect();
        index
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn idf(&self, term: &str) -> f64 {
        match self.df.get(term) {
            Some(&df) if df > 0 => (self.len() as f64 / df as f64).ln(),
            _ => 0.0,
        }
    }

    fn weigh(&self, tf: &BTreeMap<String, usize>) -> BTreeMap<String, f64> {
        let mut v: BTreeMap<String, f64> = tf
            .iter()
            .filter(|(t, _)| self.df.contains_key(*t))
            .map(|(t, n)| (t.clone(), *n as f64 * self.idf(t)))
            .collect();
        let norm = v.values().map(|w| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.values_mut().for_each(|w| *w /= norm);
        }
        v
    }

    /// Cosine score of every document sharing at least one index term with
    /// the query, in index order. Documents sharing only terms that occur
    /// everywhere score 0 but are still returned.
    pub fn search(&self, query: &str) -> Vec<(&str, f64)> {
        let tokens = tokenize(query);
        let tf = counts(&tokens);
        let q = self.weigh(&tf);
        self.vectors
            .iter()
            .zip(&self.doc_ids)
            .filter(|(v, _)| tf.keys().any(|t| v.contains_key(t)))
            .map(|(v, id)| {
                let dot: f64 = q.iter().filter_map(|(t, w)| v.get(t).map(|x| x * w)).sum();
                (id.as_str(), dot)
            })
            .collect()
    }
}
