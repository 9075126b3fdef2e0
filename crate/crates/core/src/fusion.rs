//! Structure similarity between syntactic terms and VIS records, best
//! correspondences, and fusion of matched pairs into enriched records.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{term_vectors, SyntacticTerm};
use crate::fuzzy::MembershipTable;
use crate::lattice::{LatticeError, SemRelation, SemanticLattice};
use crate::vis::{facet_vectors, FacetVectors, VisRecord};
use crate::vocab::VOCAB_SIZE;

/// Ties on similarity are resolved within this tolerance.
pub const TIE_EPSILON: f64 = 1e-9;
/// Slack on the `|Δμ| ≤ T_μ` comparison so that values such as
/// `0.8 - 0.7` land inside a 0.1 band.
const BAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("concept `{0}` missing from the membership table")]
    MissingFromTable(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown facet kernel `{0}` (expected max, min or product)")]
    UnknownKernel(String),
    #[error("correspondence ({term}, {vis}) outside a {rows}x{cols} matrix")]
    PairOutOfRange {
        term: usize,
        vis: usize,
        rows: usize,
        cols: usize,
    },
}

/// Combines two facet entries at the same vocabulary index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKernel {
    #[default]
    Max,
    Min,
    Product,
}

impl FacetKernel {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            FacetKernel::Max => a.max(b),
            FacetKernel::Min => a.min(b),
            FacetKernel::Product => a * b,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            FacetKernel::Max => "max",
            FacetKernel::Min => "min",
            FacetKernel::Product => "product",
        }
    }
}

impl fmt::Display for FacetKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for FacetKernel {
    type Err = FusionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "max" => Ok(FacetKernel::Max),
            "min" => Ok(FacetKernel::Min),
            "product" => Ok(FacetKernel::Product),
            other => Err(FusionError::UnknownKernel(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    pub t_mu: f64,
    pub t_sim: f64,
    pub kernel: FacetKernel,
    /// Follow the correction rule exactly as first stated (keep `vsc` when
    /// its μ is lower, replace it otherwise) instead of keeping the higher-μ
    /// concept.
    pub literal: bool,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            t_mu: 0.1,
            t_sim: 0.05,
            kernel: FacetKernel::Max,
            literal: false,
        }
    }
}

/// Semantic concept plus facet vectors: the shape shared by VIS records and
/// syntactic terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureView<'a> {
    pub concept: Option<&'a str>,
    pub facets: FacetVectors,
}

impl<'a> From<&'a VisRecord> for StructureView<'a> {
    fn from(r: &'a VisRecord) -> Self {
        StructureView {
            concept: Some(&r.vsc),
            facets: facet_vectors(r),
        }
    }
}

impl<'a> From<&'a SyntacticTerm> for StructureView<'a> {
    fn from(st: &'a SyntacticTerm) -> Self {
        StructureView {
            concept: st.head_concept(),
            facets: term_vectors(st),
        }
    }
}

fn facet_sum(a: &[f64; VOCAB_SIZE], b: &[f64; VOCAB_SIZE], kernel: FacetKernel) -> f64 {
    a.iter().zip(b).map(|(x, y)| kernel.apply(*x, *y)).sum::<f64>() / VOCAB_SIZE as f64
}

/// Texture, spatial and color agreement; each facet contributes at most 1.
pub fn facet_similarity(a: &FacetVectors, b: &FacetVectors, kernel: FacetKernel) -> f64 {
    facet_sum(&a.texture, &b.texture, kernel)
        + facet_sum(&a.spatial, &b.spatial, kernel)
        + facet_sum(&a.color, &b.color, kernel)
}

fn table_mu(table: &MembershipTable, lattice: &SemanticLattice, concept: &str) -> Result<f64, FusionError> {
    let id = lattice
        .resolve(concept)
        .ok_or_else(|| LatticeError::UnknownConcept(concept.to_owned()))?;
    table
        .mu_tot(id)
        .ok_or_else(|| FusionError::MissingFromTable(id.to_owned()))
}

/// `ε(a, b) · (μ_tot(a) + μ_tot(b))`, or 0 when either side has no concept.
pub fn semantic_similarity(
    a: Option<&str>,
    b: Option<&str>,
    table: &MembershipTable,
    lattice: &SemanticLattice,
) -> Result<f64, FusionError> {
    let (Some(a), Some(b)) = (a, b) else {
        return Ok(0.0);
    };
    let eps = lattice.path_sim_epsilon(a, b)?;
    Ok(eps * (table_mu(table, lattice, a)? + table_mu(table, lattice, b)?))
}

/// Similarity between any two structures.
pub fn view_similarity(
    a: &StructureView<'_>,
    b: &StructureView<'_>,
    table: &MembershipTable,
    lattice: &SemanticLattice,
    kernel: FacetKernel,
) -> Result<f64, FusionError> {
    Ok(facet_similarity(&a.facets, &b.facets, kernel) + semantic_similarity(a.concept, b.concept, table, lattice)?)
}

/// Similarity between a syntactic term and a VIS record.
pub fn structure_similarity(
    st: &SyntacticTerm,
    vis: &VisRecord,
    table: &MembershipTable,
    lattice: &SemanticLattice,
    kernel: FacetKernel,
) -> Result<f64, FusionError> {
    view_similarity(&st.into(), &vis.into(), table, lattice, kernel)
}

/// Term × VIS similarity values, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    /// Head impact of each term, used to break ties.
    head_imps: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>, head_imps: Vec<f64>) -> Self {
        assert_eq!(values.len(), rows * cols, "matrix values do not match dimensions");
        assert_eq!(head_imps.len(), rows, "one head impact per row");
        SimilarityMatrix {
            rows,
            cols,
            values,
            head_imps,
        }
    }

    pub fn compute(
        terms: &[SyntacticTerm],
        records: &[VisRecord],
        table: &MembershipTable,
        lattice: &SemanticLattice,
        kernel: FacetKernel,
    ) -> Result<Self, FusionError> {
        let mut values = Vec::with_capacity(terms.len() * records.len());
        for st in terms {
            for vis in records {
                values.push(structure_similarity(st, vis, table, lattice, kernel)?);
            }
        }
        Ok(SimilarityMatrix::new(
            terms.len(),
            records.len(),
            values,
            terms.iter().map(SyntacticTerm::head_imp).collect(),
        ))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, term: usize, vis: usize) -> f64 {
        self.values[term * self.cols + vis]
    }

    pub fn head_imp(&self, term: usize) -> f64 {
        self.head_imps[term]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrespondencePair {
    pub term: usize,
    pub vis: usize,
    pub sim: f64,
}

/// For each VIS column, the term with maximal similarity when it reaches the
/// `t_sim` floor. Terms within [`TIE_EPSILON`] of the column maximum count as
/// tied; the tie goes to the higher head impact, then the lower term index.
pub fn best_correspondences(matrix: &SimilarityMatrix, config: &FusionConfig) -> Vec<CorrespondencePair> {
    let mut out = Vec::new();
    for k in 0..matrix.cols() {
        let max = (0..matrix.rows()).map(|i| matrix.get(i, k)).fold(f64::NEG_INFINITY, f64::max);
        let best = (0..matrix.rows())
            .filter(|&i| matrix.get(i, k) >= max - TIE_EPSILON)
            .reduce(|b, i| if matrix.head_imp(i) > matrix.head_imp(b) { i } else { b });
        if let Some(i) = best {
            let sim = matrix.get(i, k);
            if sim >= config.t_sim {
                out.push(CorrespondencePair { term: i, vis: k, sim });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Kept,
    Replaced,
    Corrected,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Kept => "kept",
            Provenance::Replaced => "replaced",
            Provenance::Corrected => "corrected",
        })
    }
}

/// Everything needed to replay a fusion decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionDecision {
    pub provenance: Provenance,
    /// Index of the matched syntactic term, if any.
    pub term: Option<usize>,
    pub cx: Option<String>,
    pub mu_vsc: f64,
    pub mu_cx: Option<f64>,
    pub similarity: Option<f64>,
    /// Relation of `vsc` to `cx` when a term was matched.
    pub relation: Option<SemRelation>,
    /// Whether `|Δμ| ≤ T_μ` held.
    pub correspondence: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrichedVisRecord {
    pub record: VisRecord,
    pub original_vsc: String,
    pub final_mu: f64,
    pub decision: FusionDecision,
}

impl EnrichedVisRecord {
    pub fn provenance(&self) -> Provenance {
        self.decision.provenance
    }
}

/// Pass-through for a VIS no term was matched with.
pub fn unmatched(
    vis: &VisRecord,
    table: &MembershipTable,
    lattice: &SemanticLattice,
) -> Result<EnrichedVisRecord, FusionError> {
    let mu = table_mu(table, lattice, &vis.vsc)?;
    Ok(EnrichedVisRecord {
        record: vis.clone(),
        original_vsc: vis.vsc.clone(),
        final_mu: mu,
        decision: FusionDecision {
            provenance: Provenance::Kept,
            term: None,
            cx: None,
            mu_vsc: mu,
            mu_cx: None,
            similarity: None,
            relation: None,
            correspondence: None,
        },
    })
}

/// Decides which concept the VIS keeps and its reinforced fuzzy value.
///
/// Within the `T_μ` band the VIS only moves toward a more specific concept.
/// Outside it the concept with the higher μ wins (or, with
/// `config.literal`, `vsc` is kept exactly when its μ is the lower one).
pub fn fuse(
    pair: &CorrespondencePair,
    vis: &VisRecord,
    st: &SyntacticTerm,
    table: &MembershipTable,
    lattice: &SemanticLattice,
    config: &FusionConfig,
) -> Result<EnrichedVisRecord, FusionError> {
    let Some(cx) = st.head_concept() else {
        let mut kept = unmatched(vis, table, lattice)?;
        kept.decision.term = Some(pair.term);
        kept.decision.similarity = Some(pair.sim);
        return Ok(kept);
    };
    let mu_vsc = table_mu(table, lattice, &vis.vsc)?;
    let mu_cx = table_mu(table, lattice, cx)?;
    let relation = lattice.relation(&vis.vsc, cx)?;
    let delta = mu_vsc - mu_cx;
    let correspondence = delta.abs() <= config.t_mu + BAND_SLACK;
    let provenance = if correspondence {
        match relation {
            SemRelation::Generic => Provenance::Replaced,
            SemRelation::Equal | SemRelation::Specific | SemRelation::Unrelated => Provenance::Kept,
        }
    } else {
        let replace = if config.literal { delta >= 0.0 } else { mu_cx > mu_vsc };
        if replace && relation != SemRelation::Equal {
            Provenance::Corrected
        } else {
            Provenance::Kept
        }
    };
    let mut record = vis.clone();
    if provenance != Provenance::Kept {
        record.vsc = lattice.resolve(cx).unwrap_or(cx).to_owned();
    }
    Ok(EnrichedVisRecord {
        record,
        original_vsc: vis.vsc.clone(),
        final_mu: mu_vsc.max(mu_cx),
        decision: FusionDecision {
            provenance,
            term: Some(pair.term),
            cx: Some(cx.to_owned()),
            mu_vsc,
            mu_cx: Some(mu_cx),
            similarity: Some(pair.sim),
            relation: Some(relation),
            correspondence: Some(correspondence),
        },
    })
}

/// Matches terms against records and fuses every matched pair; unmatched
/// records pass through unchanged. Output follows record order.
pub fn enrich_records(
    records: &[VisRecord],
    terms: &[SyntacticTerm],
    table: &MembershipTable,
    lattice: &SemanticLattice,
    config: &FusionConfig,
) -> Result<Vec<EnrichedVisRecord>, FusionError> {
    let matrix = SimilarityMatrix::compute(terms, records, table, lattice, config.kernel)?;
    let pairs = best_correspondences(&matrix, config);
    records
        .iter()
        .enumerate()
        .map(|(k, vis)| match pairs.iter().find(|p| p.vis == k) {
            Some(pair) => fuse(pair, vis, &terms[pair.term], table, lattice, config),
            None => unmatched(vis, table, lattice),
        })
        .collect()
}
