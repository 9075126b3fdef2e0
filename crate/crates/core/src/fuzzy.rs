//! Membership functions over the semantic universe and their t-conorm
//! aggregation into per-concept likelihood tables.
//!
//! For a source concept `s` carrying value `v` (an impact for contextual
//! concepts, a recognition probability for visual ones), the membership of a
//! concept `c` is:
//!
//! * `v` when `c` equals `s` or is one of its ancestors,
//! * `min(v + path(c, s), 1)` when `c` is a descendant of `s`, with `path`
//!   the chain length normalized by the lattice's longest chain,
//! * `0` when the two are unrelated.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LatticeError, SemRelation, SemanticLattice};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("membership value {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unknown t-conorm `{0}` (expected max, psum or bsum)")]
    UnknownTConorm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TConorm {
    Max,
    #[default]
    ProbabilisticSum,
    BoundedSum,
}

impl TConorm {
    pub const ALL: [TConorm; 3] = [TConorm::Max, TConorm::ProbabilisticSum, TConorm::BoundedSum];

    /// Applies the operator without range checks.
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TConorm::Max => a.max(b),
            TConorm::ProbabilisticSum => a + b - a * b,
            TConorm::BoundedSum => (a + b).min(1.0),
        }
    }

    pub fn try_apply(self, a: f64, b: f64) -> Result<f64, FuzzyError> {
        check_unit(a)?;
        check_unit(b)?;
        Ok(self.apply(a, b))
    }

    /// Left fold starting from the identity 0.
    pub fn fold<I: IntoIterator<Item = f64>>(self, values: I) -> f64 {
        values.into_iter().fold(0.0, |acc, x| self.apply(acc, x))
    }

    pub fn key(self) -> &'static str {
        match self {
            TConorm::Max => "max",
            TConorm::ProbabilisticSum => "psum",
            TConorm::BoundedSum => "bsum",
        }
    }
}

impl fmt::Display for TConorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for TConorm {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "max" => Ok(TConorm::Max),
            "psum" => Ok(TConorm::ProbabilisticSum),
            "bsum" => Ok(TConorm::BoundedSum),
            other => Err(FuzzyError::UnknownTConorm(other.to_owned())),
        }
    }
}

/// Convenience wrapper matching the operator-first calling convention.
pub fn tconorm(kind: TConorm, a: f64, b: f64) -> Result<f64, FuzzyError> {
    kind.try_apply(a, b)
}

fn check_unit(x: f64) -> Result<f64, FuzzyError> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(FuzzyError::OutOfRange(x))
    }
}

fn membership(lattice: &SemanticLattice, c: &str, source: &str, value: f64) -> Result<f64, FuzzyError> {
    check_unit(value)?;
    Ok(match lattice.relation(c, source)? {
        SemRelation::Equal | SemRelation::Generic => value,
        SemRelation::Specific => (value + lattice.path_length_norm(source, c)?).min(1.0),
        SemRelation::Unrelated => 0.0,
    })
}

/// Likelihood that `c` describes an entity also described by contextual
/// concept `cx` extracted with impact `imp`.
pub fn mu_cx(lattice: &SemanticLattice, c: &str, cx: &str, imp: f64) -> Result<f64, FuzzyError> {
    membership(lattice, c, cx, imp)
}

/// Likelihood that `c` describes the content indexed by visual concept `vsc`
/// recognized with probability `r`.
pub fn mu_vsc(lattice: &SemanticLattice, c: &str, vsc: &str, r: f64) -> Result<f64, FuzzyError> {
    membership(lattice, c, vsc, r)
}

/// Per-concept membership values for one document.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipTable {
    pub universe: Vec<String>,
    pub mu_tot_vis: Vec<f64>,
    pub mu_tot_cx: Vec<f64>,
    pub mu_tot: Vec<f64>,
    index: HashMap<String, usize>,
}

impl MembershipTable {
    fn position(&self, concept: &str) -> Option<usize> {
        self.index.get(concept).copied()
    }

    /// Aggregated likelihood of a canonical concept id.
    pub fn mu_tot(&self, concept: &str) -> Option<f64> {
        self.position(concept).map(|i| self.mu_tot[i])
    }

    pub fn mu_tot_vis(&self, concept: &str) -> Option<f64> {
        self.position(concept).map(|i| self.mu_tot_vis[i])
    }

    pub fn mu_tot_cx(&self, concept: &str) -> Option<f64> {
        self.position(concept).map(|i| self.mu_tot_cx[i])
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }
}

/// Builds the membership table over `universe`.
///
/// Universe entries are resolved to canonical ids and deduplicated, keeping
/// first occurrence order. Both sides are folded left to right in
/// declaration order.
pub fn aggregate_mu_tot<S: AsRef<str>>(
    universe: &[S],
    vis_concepts: &[(String, f64)],
    cx_concepts: &[(String, f64)],
    lattice: &SemanticLattice,
    kind: TConorm,
) -> Result<MembershipTable, FuzzyError> {
    let mut ids: Vec<String> = Vec::with_capacity(universe.len());
    let mut index = HashMap::new();
    for name in universe {
        let id = lattice
            .resolve(name.as_ref())
            .ok_or_else(|| LatticeError::UnknownConcept(name.as_ref().to_owned()))?;
        if !index.contains_key(id) {
            index.insert(id.to_owned(), ids.len());
            ids.push(id.to_owned());
        }
    }
    let mut vis = Vec::with_capacity(ids.len());
    let mut cx = Vec::with_capacity(ids.len());
    let mut tot = Vec::with_capacity(ids.len());
    for c in &ids {
        let mut acc_vis = 0.0;
        for (vsc, r) in vis_concepts {
            acc_vis = kind.apply(acc_vis, mu_vsc(lattice, c, vsc, *r)?);
        }
        let mut acc_cx = 0.0;
        for (concept, imp) in cx_concepts {
            acc_cx = kind.apply(acc_cx, mu_cx(lattice, c, concept, *imp)?);
        }
        vis.push(acc_vis);
        cx.push(acc_cx);
        tot.push(kind.apply(acc_vis, acc_cx));
    }
    Ok(MembershipTable {
        universe: ids,
        mu_tot_vis: vis,
        mu_tot_cx: cx,
        mu_tot: tot,
        index,
    })
}
