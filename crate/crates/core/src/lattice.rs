//! Hypernym/hyponym lattice of semantic concepts.
//!
//! A [`SemanticLattice`] is a DAG of `is_a` edges (child → parent). It backs
//! the relation queries used by the membership functions (generic / specific /
//! equal / unrelated), the normalized chain length that reinforces specific
//! concepts, and the path similarity used when comparing structures.
//!
//! Lattices are loaded from a tab-separated taxonomy file:
//!
//! ```text
//! concept <TAB> parent1,parent2 <TAB> synonym1,synonym2
//! ```
//!
//! Roots leave the parent column empty. Blank lines and lines starting with
//! `#` are ignored.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Taxonomy shipped with the crate.
pub const BUNDLED_TAXONOMY: &str = include_str!("../data/taxonomy.base.tsv");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("taxonomy has no roots")]
    NoRoots,
    #[error("taxonomy line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("concept `{0}` declared twice")]
    DuplicateConcept(String),
    #[error("concept `{concept}` names unknown parent `{parent}`")]
    DanglingParent { concept: String, parent: String },
    #[error("is_a cycle through edges {}", format_edges(.0))]
    Cycle(Vec<(String, String)>),
    #[error("synonym `{synonym}` claimed by both `{first}` and `{second}`")]
    SynonymConflict {
        synonym: String,
        first: String,
        second: String,
    },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("concepts `{0}` and `{1}` are not related by is_a")]
    Unrelated(String, String),
    #[error("inserting `{concept}` would create an is_a cycle")]
    WouldCycle { concept: String },
}

fn format_edges(edges: &[(String, String)]) -> String {
    edges
        .iter()
        .map(|(c, p)| format!("{c}->{p}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A semantic concept and the surface forms that resolve to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: String,
    pub synonyms: BTreeSet<String>,
}

impl Concept {
    pub fn new(id: impl Into<String>) -> Self {
        Concept {
            id: normalize(&id.into()),
            synonyms: BTreeSet::new(),
        }
    }

    pub fn with_synonyms<I, S>(mut self, synonyms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.synonyms
            .extend(synonyms.into_iter().map(|s| normalize(s.as_ref())));
        self
    }
}

/// How concept `a` stands with respect to concept `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemRelation {
    Equal,
    /// `a` is an ancestor of `b`.
    Generic,
    /// `a` is a descendant of `b`.
    Specific,
    Unrelated,
}

impl SemRelation {
    pub fn inverse(self) -> Self {
        match self {
            SemRelation::Generic => SemRelation::Specific,
            SemRelation::Specific => SemRelation::Generic,
            other => other,
        }
    }
}

impl fmt::Display for SemRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SemRelation::Equal => "equal",
            SemRelation::Generic => "generic",
            SemRelation::Specific => "specific",
            SemRelation::Unrelated => "unrelated",
        };
        f.write_str(s)
    }
}

/// Directed acyclic `is_a` graph over concepts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SemanticLattice {
    concepts: BTreeMap<String, Concept>,
    parents: BTreeMap<String, BTreeSet<String>>,
    children: BTreeMap<String, BTreeSet<String>>,
    synonyms: BTreeMap<String, String>,
    /// Longest chain (in edges) from any root down to each concept.
    depth: BTreeMap<String, usize>,
    longest_path: usize,
}

pub(crate) fn normalize(s: &str) -> String {
    s.trim().to_lowercase()
}

impl SemanticLattice {
    /// Parses a taxonomy document.
    pub fn load_taxonomy(source: &str) -> Result<Self, LatticeError> {
        let mut declared: Vec<(Concept, Vec<String>)> = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line_no = idx + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = raw.split('\t');
            let id = normalize(fields.next().unwrap_or_default());
            if id.is_empty() {
                return Err(LatticeError::Syntax {
                    line: line_no,
                    message: "empty concept id".into(),
                });
            }
            let parents = split_list(fields.next().unwrap_or_default());
            let synonyms = split_list(fields.next().unwrap_or_default());
            if fields.next().is_some_and(|rest| !rest.trim().is_empty()) {
                return Err(LatticeError::Syntax {
                    line: line_no,
                    message: "expected at most three tab-separated fields".into(),
                });
            }
            declared.push((Concept::new(id).with_synonyms(synonyms), parents));
        }
        Self::from_declarations(declared)
    }

    /// Loads the taxonomy bundled with the crate.
    pub fn bundled() -> Self {
        Self::load_taxonomy(BUNDLED_TAXONOMY).expect("bundled taxonomy is valid")
    }

    fn from_declarations(declared: Vec<(Concept, Vec<String>)>) -> Result<Self, LatticeError> {
        let mut lattice = SemanticLattice::default();
        for (concept, _) in &declared {
            if lattice.concepts.contains_key(&concept.id) {
                return Err(LatticeError::DuplicateConcept(concept.id.clone()));
            }
            lattice.concepts.insert(concept.id.clone(), concept.clone());
            lattice.parents.insert(concept.id.clone(), BTreeSet::new());
            lattice.children.insert(concept.id.clone(), BTreeSet::new());
        }
        for (concept, parents) in &declared {
            for parent in parents {
                if !lattice.concepts.contains_key(parent) {
                    return Err(LatticeError::DanglingParent {
                        concept: concept.id.clone(),
                        parent: parent.clone(),
                    });
                }
                lattice.add_edge_unchecked(&concept.id, parent);
            }
        }
        for concept in lattice.concepts.values() {
            for syn in &concept.synonyms {
                if syn == &concept.id {
                    continue;
                }
                if lattice.concepts.contains_key(syn) {
                    return Err(LatticeError::SynonymConflict {
                        synonym: syn.clone(),
                        first: syn.clone(),
                        second: concept.id.clone(),
                    });
                }
                if let Some(first) = lattice.synonyms.get(syn) {
                    return Err(LatticeError::SynonymConflict {
                        synonym: syn.clone(),
                        first: first.clone(),
                        second: concept.id.clone(),
                    });
                }
                lattice.synonyms.insert(syn.clone(), concept.id.clone());
            }
        }
        if let Some(cycle) = lattice.cycle_edges() {
            return Err(LatticeError::Cycle(cycle));
        }
        if lattice.roots().next().is_none() {
            return Err(LatticeError::NoRoots);
        }
        lattice.recompute_depths();
        Ok(lattice)
    }

    fn add_edge_unchecked(&mut self, child: &str, parent: &str) {
        self.parents
            .entry(child.to_owned())
            .or_default()
            .insert(parent.to_owned());
        self.children
            .entry(parent.to_owned())
            .or_default()
            .insert(child.to_owned());
    }

    /// Edges left over after peeling sources and sinks, i.e. the edges that
    /// sit on or between cycles. `None` when the graph is acyclic.
    fn cycle_edges(&self) -> Option<Vec<(String, String)>> {
        let mut alive: BTreeSet<&str> = self.concepts.keys().map(String::as_str).collect();
        loop {
            let removable: Vec<&str> = alive
                .iter()
                .copied()
                .filter(|id| {
                    let no_live_parent = !self.parents[*id].iter().any(|p| alive.contains(p.as_str()));
                    let no_live_child = !self.children[*id].iter().any(|c| alive.contains(c.as_str()));
                    no_live_parent || no_live_child
                })
                .collect();
            if removable.is_empty() {
                break;
            }
            for id in removable {
                alive.remove(id);
            }
        }
        if alive.is_empty() {
            return None;
        }
        let mut edges = Vec::new();
        for child in &alive {
            for parent in &self.parents[*child] {
                if alive.contains(parent.as_str()) {
                    edges.push((child.to_string(), parent.clone()));
                }
            }
        }
        Some(edges)
    }

    fn recompute_depths(&mut self) {
        self.depth = longest_depths(&self.parents, &self.children);
        self.longest_path = self.depth.values().copied().max().unwrap_or(0);
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// Edge count of the longest root-to-leaf chain.
    pub fn longest_path(&self) -> usize {
        self.longest_path
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn concept_ids(&self) -> impl Iterator<Item = &str> {
        self.concepts.keys().map(String::as_str)
    }

    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.parents
            .iter()
            .filter(|(_, ps)| ps.is_empty())
            .map(|(id, _)| id.as_str())
    }

    pub fn parents_of(&self, id: &str) -> impl Iterator<Item = &str> {
        self.parents.get(id).into_iter().flatten().map(String::as_str)
    }

    pub fn children_of(&self, id: &str) -> impl Iterator<Item = &str> {
        self.children.get(id).into_iter().flatten().map(String::as_str)
    }

    /// All `(child, parent)` edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.parents
            .iter()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (c.as_str(), p.as_str())))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.resolve(name).is_some()
    }

    /// Maps a concept id or synonym to the canonical concept id.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        let key = normalize(name);
        if let Some((id, _)) = self.concepts.get_key_value(&key) {
            return Some(id.as_str());
        }
        self.synonyms.get(&key).map(String::as_str)
    }

    fn require(&self, name: &str) -> Result<&str, LatticeError> {
        self.resolve(name)
            .ok_or_else(|| LatticeError::UnknownConcept(normalize(name)))
    }

    /// Attaches a new concept below `parents`.
    ///
    /// Returns `Ok(false)` without touching the lattice when the concept (or
    /// one of its synonyms resolving to the same id) is already present.
    pub fn insert_concept<S: AsRef<str>>(
        &mut self,
        new: Concept,
        parents: &[S],
    ) -> Result<bool, LatticeError> {
        if new.id.is_empty() {
            return Err(LatticeError::UnknownConcept(String::new()));
        }
        if self.resolve(&new.id).is_some() {
            return Ok(false);
        }
        let mut resolved = BTreeSet::new();
        for p in parents {
            let id = self.require(p.as_ref())?;
            resolved.insert(id.to_owned());
        }
        // A fresh node has no descendants, so it can only close a cycle by
        // naming itself as a parent.
        if resolved.contains(&new.id) {
            return Err(LatticeError::WouldCycle { concept: new.id });
        }
        for syn in &new.synonyms {
            if syn == &new.id {
                continue;
            }
            if let Some(owner) = self.resolve(syn) {
                return Err(LatticeError::SynonymConflict {
                    synonym: syn.clone(),
                    first: owner.to_owned(),
                    second: new.id.clone(),
                });
            }
        }
        let id = new.id.clone();
        for syn in &new.synonyms {
            if syn != &id {
                self.synonyms.insert(syn.clone(), id.clone());
            }
        }
        self.concepts.insert(id.clone(), new);
        self.parents.insert(id.clone(), BTreeSet::new());
        self.children.insert(id.clone(), BTreeSet::new());
        for p in &resolved {
            self.add_edge_unchecked(&id, p);
        }
        let depth = resolved
            .iter()
            .map(|p| self.depth[p] + 1)
            .max()
            .unwrap_or(0);
        self.depth.insert(id, depth);
        self.longest_path = self.longest_path.max(depth);
        Ok(true)
    }

    /// Inserts `name` together with any missing ancestors, taking parents and
    /// synonyms from `source`. Returns the number of concepts added.
    pub fn enrich_from(&mut self, source: &SemanticLattice, name: &str) -> Result<usize, LatticeError> {
        let id = source.require(name)?.to_owned();
        if self.resolve(&id).is_some() {
            return Ok(0);
        }
        let mut added = 0;
        let parents: Vec<String> = source.parents_of(&id).map(str::to_owned).collect();
        for p in &parents {
            added += self.enrich_from(source, p)?;
        }
        let concept = source.concepts[&id].clone();
        if self.insert_concept(concept, &parents)? {
            added += 1;
        }
        Ok(added)
    }

    /// Sub-lattice holding `seeds` and all of their ancestors.
    pub fn restricted_to<I, S>(&self, seeds: I) -> Result<SemanticLattice, LatticeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut keep = BTreeSet::new();
        for seed in seeds {
            let id = self.require(seed.as_ref())?;
            keep.insert(id.to_owned());
            keep.extend(self.ancestors(id).map(str::to_owned));
        }
        let mut out = SemanticLattice::default();
        for id in &keep {
            out.concepts.insert(id.clone(), self.concepts[id].clone());
            out.parents.insert(id.clone(), self.parents[id].clone());
            let kids = self.children[id]
                .iter()
                .filter(|c| keep.contains(*c))
                .cloned()
                .collect();
            out.children.insert(id.clone(), kids);
            for syn in &self.concepts[id].synonyms {
                if syn != id {
                    out.synonyms.insert(syn.clone(), id.clone());
                }
            }
        }
        out.recompute_depths();
        Ok(out)
    }

    /// Strict ancestors of a canonical id, nearest first.
    pub fn ancestors<'a>(&'a self, id: &str) -> impl Iterator<Item = &'a str> + 'a {
        let dist = self.upward_distances(id);
        let mut v: Vec<(usize, &str)> = dist
            .into_iter()
            .filter(|(_, d)| *d > 0)
            .map(|(k, d)| (d, k))
            .collect();
        v.sort();
        v.into_iter().map(|(_, k)| k)
    }

    /// Shortest upward chain length from `id` to each of its ancestors
    /// (and 0 to itself).
    fn upward_distances(&self, id: &str) -> BTreeMap<&str, usize> {
        let mut dist = BTreeMap::new();
        let Some((start, _)) = self.concepts.get_key_value(id) else {
            return dist;
        };
        let mut queue = VecDeque::from([start.as_str()]);
        dist.insert(start.as_str(), 0);
        while let Some(cur) = queue.pop_front() {
            let d = dist[cur];
            for p in &self.parents[cur] {
                if !dist.contains_key(p.as_str()) {
                    dist.insert(p.as_str(), d + 1);
                    queue.push_back(p.as_str());
                }
            }
        }
        dist
    }

    /// How `a` stands with respect to `b`.
    pub fn relation(&self, a: &str, b: &str) -> Result<SemRelation, LatticeError> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        if a == b {
            return Ok(SemRelation::Equal);
        }
        if self.upward_distances(b).contains_key(a) {
            Ok(SemRelation::Generic)
        } else if self.upward_distances(a).contains_key(b) {
            Ok(SemRelation::Specific)
        } else {
            Ok(SemRelation::Unrelated)
        }
    }

    /// Edge count of the shortest `is_a` chain joining two related concepts.
    pub fn chain_length(&self, a: &str, b: &str) -> Result<usize, LatticeError> {
        let ra = self.require(a)?;
        let rb = self.require(b)?;
        if let Some(d) = self.upward_distances(ra).get(rb) {
            return Ok(*d);
        }
        if let Some(d) = self.upward_distances(rb).get(ra) {
            return Ok(*d);
        }
        Err(LatticeError::Unrelated(ra.to_owned(), rb.to_owned()))
    }

    /// Chain length between two related concepts divided by the longest
    /// root-to-leaf chain, clamped to `[0, 1]`.
    pub fn path_length_norm(&self, a: &str, b: &str) -> Result<f64, LatticeError> {
        let chain = self.chain_length(a, b)?;
        if chain == 0 || self.longest_path == 0 {
            return Ok(0.0);
        }
        Ok((chain as f64 / self.longest_path as f64).clamp(0.0, 1.0))
    }

    /// Path similarity `1 / (1 + d)` over the undirected `is_a` graph, where
    /// `d` is the shortest path length. 0 when no path exists.
    pub fn path_sim_epsilon(&self, a: &str, b: &str) -> Result<f64, LatticeError> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        if a == b {
            return Ok(1.0);
        }
        let mut seen = BTreeMap::from([(a, 0usize)]);
        let mut queue = VecDeque::from([a]);
        while let Some(cur) = queue.pop_front() {
            let d = seen[cur];
            let neighbours = self.parents[cur].iter().chain(self.children[cur].iter());
            for n in neighbours {
                if n == b {
                    return Ok(1.0 / (2.0 + d as f64));
                }
                if !seen.contains_key(n.as_str()) {
                    seen.insert(n.as_str(), d + 1);
                    queue.push_back(n.as_str());
                }
            }
        }
        Ok(0.0)
    }

    /// Serializes back to the taxonomy file format, one concept per line in
    /// topological order (parents before children, ties by id).
    pub fn to_taxonomy(&self) -> String {
        let mut out = String::new();
        let mut order: Vec<(&usize, &String)> = self.depth.iter().map(|(k, d)| (d, k)).collect();
        order.sort();
        for (_, id) in order {
            let parents: Vec<&str> = self.parents[id].iter().map(String::as_str).collect();
            let syns: Vec<&str> = self.concepts[id]
                .synonyms
                .iter()
                .map(String::as_str)
                .collect();
            out.push_str(id);
            out.push('\t');
            out.push_str(&parents.join(","));
            out.push('\t');
            out.push_str(&syns.join(","));
            out.push('\n');
        }
        out
    }
}

fn split_list(field: &str) -> Vec<String> {
    field
        .split(',')
        .map(normalize)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Longest distance from any root to each node of an acyclic graph.
fn longest_depths(
    parents: &BTreeMap<String, BTreeSet<String>>,
    children: &BTreeMap<String, BTreeSet<String>>,
) -> BTreeMap<String, usize> {
    let mut pending: BTreeMap<&str, usize> = parents
        .iter()
        .map(|(k, ps)| (k.as_str(), ps.len()))
        .collect();
    let mut depth: BTreeMap<String, usize> = BTreeMap::new();
    let mut queue: VecDeque<&str> = pending
        .iter()
        .filter(|(_, n)| **n == 0)
        .map(|(k, _)| *k)
        .collect();
    while let Some(cur) = queue.pop_front() {
        let d = parents[cur]
            .iter()
            .map(|p| depth[p] + 1)
            .max()
            .unwrap_or(0);
        depth.insert(cur.to_owned(), d);
        for c in &children[cur] {
            let n = pending.get_mut(c.as_str()).expect("child is a node");
            *n -= 1;
            if *n == 0 {
                queue.push_back(c.as_str());
            }
        }
    }
    depth
}
