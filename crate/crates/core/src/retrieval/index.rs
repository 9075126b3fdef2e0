//! Read-only search index over a corpus of documents.

use std::borrow::Cow;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Query, RankedEntry, RankedList, RetrievalError, Strategy, TfIdfIndex};
use crate::context::SyntacticTerm;
use crate::fusion::{view_similarity, EnrichedVisRecord, FacetKernel, StructureView};
use crate::fuzzy::{aggregate_mu_tot, TConorm};
use crate::lattice::SemanticLattice;
use crate::vis::VisRecord;

/// `(concept, value)` sources feeding one side of a membership table.
type Sources = Vec<(String, f64)>;

/// Everything a document contributes to search.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IndexedDocument {
    pub doc_id: String,
    pub vis: Vec<VisRecord>,
    /// Contextual lattice concepts with their impacts.
    pub context: Vec<(String, f64)>,
    pub terms: Vec<SyntacticTerm>,
    pub enriched: Option<Vec<EnrichedVisRecord>>,
    /// Context tokens for the bag-of-words baseline.
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchSettings {
    pub tconorm: TConorm,
    pub kernel: FacetKernel,
}

/// Per-document lattice: the visual-concept projection of the taxonomy
/// extended with `extra` concepts and their missing ancestors.
pub fn document_lattice<S: AsRef<str>>(
    base: &SemanticLattice,
    taxonomy: &SemanticLattice,
    extra: &[S],
) -> Result<SemanticLattice, RetrievalError> {
    let mut lattice = base.clone();
    for c in extra {
        lattice.enrich_from(taxonomy, c.as_ref())?;
    }
    Ok(lattice)
}

#[derive(Debug, Clone)]
struct Semantics {
    taxonomy: SemanticLattice,
    lattices: Vec<SemanticLattice>,
}

#[derive(Debug, Clone)]
pub struct SearchIndex {
    docs: Vec<IndexedDocument>,
    /// Absent for a corpus that was never enriched.
    semantics: Option<Semantics>,
    tfidf: TfIdfIndex,
    settings: SearchSettings,
}

impl SearchIndex {
    /// `vsem` lists the visual semantic concepts the base lattice is
    /// projected onto.
    pub fn new<S: AsRef<str>>(
        taxonomy: Option<SemanticLattice>,
        vsem: &[S],
        docs: Vec<IndexedDocument>,
        settings: SearchSettings,
    ) -> Result<Self, RetrievalError> {
        let semantics = match taxonomy {
            Some(taxonomy) => {
                let base = taxonomy.restricted_to(vsem.iter().map(AsRef::as_ref))?;
                let lattices = docs
                    .iter()
                    .map(|d| {
                        let names: Vec<&str> = d.context.iter().map(|(c, _)| c.as_str()).collect();
                        document_lattice(&base, &taxonomy, &names)
                    })
                    .collect::<Result<_, _>>()?;
                Some(Semantics { taxonomy, lattices })
            }
            None => None,
        };
        let tfidf = TfIdfIndex::build(docs.iter().map(|d| (d.doc_id.as_str(), &d.tokens[..])));
        Ok(SearchIndex {
            docs,
            semantics,
            tfidf,
            settings,
        })
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn documents(&self) -> &[IndexedDocument] {
        &self.docs
    }

    pub fn settings(&self) -> SearchSettings {
        self.settings
    }

    /// Full taxonomy, once the corpus has been enriched.
    pub fn taxonomy(&self) -> Option<&SemanticLattice> {
        self.semantics.as_ref().map(|s| &s.taxonomy)
    }

    pub fn tfidf(&self) -> &TfIdfIndex {
        &self.tfidf
    }

    /// Structural score of one document: for each query term the best
    /// similarity over the document's structures, averaged over terms.
    pub fn score(&self, doc: usize, query: &Query, strategy: Strategy) -> Result<f64, RetrievalError> {
        if strategy == Strategy::TfIdf {
            let id = &self.docs[doc].doc_id;
            return Ok(self
                .tfidf
                .search(&query.text)
                .into_iter()
                .find(|(d, _)| d == id)
                .map_or(0.0, |(_, s)| s));
        }
        if query.terms.is_empty() {
            return Ok(0.0);
        }
        let sem = self.semantics.as_ref().ok_or(RetrievalError::NotEnriched)?;
        let d = &self.docs[doc];
        let base = &sem.lattices[doc];
        let heads = query.heads();
        let lattice: Cow<'_, SemanticLattice> = if heads.iter().all(|h| base.contains(h)) {
            Cow::Borrowed(base)
        } else {
            Cow::Owned(document_lattice(base, &sem.taxonomy, &heads)?)
        };

        let (vis_side, cx_side, views): (Sources, &[(String, f64)], Vec<StructureView<'_>>) = match strategy {
            Strategy::Vis => (
                d.vis.iter().map(|r| (r.vsc.clone(), r.r_vsc)).collect(),
                &[],
                d.vis.iter().map(StructureView::from).collect(),
            ),
            Strategy::Cx => (Vec::new(), &d.context, d.terms.iter().map(StructureView::from).collect()),
            Strategy::VisCx => {
                let enriched = d.enriched.as_ref().ok_or(RetrievalError::NotEnriched)?;
                (
                    enriched.iter().map(|e| (e.record.vsc.clone(), e.final_mu)).collect(),
                    &d.context,
                    enriched.iter().map(|e| StructureView::from(&e.record)).collect(),
                )
            }
            Strategy::TfIdf => unreachable!("handled above"),
        };
        if views.is_empty() {
            return Ok(0.0);
        }

        let mut universe: BTreeSet<&str> = heads.iter().copied().collect();
        universe.extend(views.iter().filter_map(|v| v.concept));
        let universe: Vec<&str> = universe.into_iter().collect();
        let table = aggregate_mu_tot(&universe, &vis_side, cx_side, &lattice, self.settings.tconorm)?;

        let mut total = 0.0;
        for term in &query.terms {
            let q = StructureView::from(term);
            let mut best = 0.0f64;
            for v in &views {
                best = best.max(view_similarity(&q, v, &table, &lattice, self.settings.kernel)?);
            }
            total += best;
        }
        Ok(total / query.terms.len() as f64)
    }
}

/// Top `k` documents for `query` under `strategy`. Structural strategies
/// return documents with a positive score; the bag-of-words baseline
/// returns documents sharing a term with the query.
pub fn rank(index: &SearchIndex, query: &Query, strategy: Strategy, k: usize) -> Result<RankedList, RetrievalError> {
    rank_as(index, "", query, strategy, k)
}

pub(crate) fn rank_as(
    index: &SearchIndex,
    query_id: &str,
    query: &Query,
    strategy: Strategy,
    k: usize,
) -> Result<RankedList, RetrievalError> {
    if index.is_empty() {
        return Err(RetrievalError::EmptyIndex);
    }
    let scored = if strategy == Strategy::TfIdf {
        index
            .tfidf
            .search(&query.text)
            .into_iter()
            .map(|(d, score)| RankedEntry {
                doc_id: d.to_owned(),
                score,
            })
            .collect()
    } else {
        let mut out = Vec::new();
        for (i, d) in index.docs.iter().enumerate() {
            let score = index.score(i, query, strategy)?;
            if score > 0.0 {
                out.push(RankedEntry {
                    doc_id: d.doc_id.clone(),
                    score,
                });
            }
        }
        out
    };
    Ok(RankedList::from_scores(query_id, scored, k))
}
