//! Contextual text around a web image: extraction areas, impact values,
//! vocabulary tagging and syntactic terms.

mod html;
mod patterns;
mod tagger;
mod tokenize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use html::{extract_areas, has_image, ExtractConfig, ImageLocator, DEFAULT_WINDOW};
pub use patterns::{apply_patterns, attributes, default_patterns, PatternElem, PatternError, SyntacticPattern, DEFAULT_PATTERNS};
pub use tagger::{tag_tokens, Attribute, Category, Lexicon, Tag, TaggedToken};
pub use tokenize::{fold_candidates, src_tokens, tokenize};

use crate::lattice::SemanticLattice;
use crate::vis::FacetVectors;
use crate::vocab::{Color, Spatial, Texture};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AreaKind {
    Alt,
    Src,
    SurroundingText,
}

/// Base impact of each extraction area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactMap {
    pub alt: f64,
    pub src: f64,
    pub surrounding: f64,
}

impl Default for ImpactMap {
    fn default() -> Self {
        ImpactMap {
            alt: 0.9,
            src: 0.7,
            surrounding: 0.5,
        }
    }
}

impl ImpactMap {
    pub fn get(&self, kind: AreaKind) -> f64 {
        match kind {
            AreaKind::Alt => self.alt,
            AreaKind::Src => self.src,
            AreaKind::SurroundingText => self.surrounding,
        }
    }

    pub fn max(&self) -> f64 {
        self.alt.max(self.src).max(self.surrounding)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionArea {
    pub kind: AreaKind,
    pub text: String,
    pub tokens: Vec<String>,
    pub base_impact: f64,
}

impl ExtractionArea {
    pub fn new(kind: AreaKind, text: impl Into<String>, tokens: Vec<String>, base_impact: f64) -> Self {
        ExtractionArea {
            kind,
            text: text.into(),
            tokens,
            base_impact,
        }
    }
}

/// Concept mined from context: a lattice concept or a vocabulary attribute.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextConcept {
    Sem(String),
    Attr(Attribute),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualConcept {
    pub concept: ContextConcept,
    pub imp: f64,
    /// Area that supplied the maximum impact.
    pub area: AreaKind,
}

/// An extraction area after tagging.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedArea {
    pub kind: AreaKind,
    pub base_impact: f64,
    pub tokens: Vec<TaggedToken>,
}

impl TaggedArea {
    pub fn tag(area: &ExtractionArea, lexicon: &Lexicon, lattice: &SemanticLattice) -> Self {
        TaggedArea {
            kind: area.kind,
            base_impact: area.base_impact,
            tokens: tag_tokens(&area.tokens, lexicon, lattice),
        }
    }
}

/// One entry per distinct vocabulary concept, carrying the maximum base
/// impact over every area it occurs in. Sorted by concept.
pub fn assign_impacts(areas: &[TaggedArea]) -> Vec<ContextualConcept> {
    let mut best: BTreeMap<ContextConcept, (f64, AreaKind)> = BTreeMap::new();
    for area in areas {
        for tok in &area.tokens {
            let concept = match &tok.tag {
                Tag::Sem(id) => ContextConcept::Sem(id.clone()),
                Tag::Attr(a) => ContextConcept::Attr(*a),
                Tag::Other => continue,
            };
            best.entry(concept)
                .and_modify(|e| {
                    if area.base_impact > e.0 {
                        *e = (area.base_impact, area.kind);
                    }
                })
                .or_insert((area.base_impact, area.kind));
        }
    }
    best.into_iter()
        .map(|(concept, (imp, area))| ContextualConcept { concept, imp, area })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadConcept {
    pub concept: String,
    pub imp: f64,
}

/// Set of `(concept, impact)` pairs shaped like a VIS.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SyntacticTerm {
    pub head: Option<HeadConcept>,
    pub colors: BTreeMap<Color, f64>,
    pub textures: BTreeMap<Texture, f64>,
    pub spatials: BTreeMap<Spatial, f64>,
}

impl SyntacticTerm {
    pub fn with_head(concept: impl Into<String>, imp: f64) -> Self {
        SyntacticTerm {
            head: Some(HeadConcept {
                concept: concept.into(),
                imp,
            }),
            ..SyntacticTerm::default()
        }
    }

    pub fn add_attribute(&mut self, attr: Attribute, imp: f64) {
        let slot = match attr {
            Attribute::Color(c) => self.colors.entry(c).or_insert(imp),
            Attribute::Texture(t) => self.textures.entry(t).or_insert(imp),
            Attribute::Spatial(s) => self.spatials.entry(s).or_insert(imp),
        };
        *slot = slot.max(imp);
    }

    pub fn attr(mut self, attr: Attribute, imp: f64) -> Self {
        self.add_attribute(attr, imp);
        self
    }

    pub fn head_concept(&self) -> Option<&str> {
        self.head.as_ref().map(|h| h.concept.as_str())
    }

    pub fn head_imp(&self) -> f64 {
        self.head.as_ref().map_or(0.0, |h| h.imp)
    }

    pub fn attributes(&self) -> impl Iterator<Item = Attribute> + '_ {
        self.colors
            .keys()
            .map(|c| Attribute::Color(*c))
            .chain(self.textures.keys().map(|t| Attribute::Texture(*t)))
            .chain(self.spatials.keys().map(|s| Attribute::Spatial(*s)))
    }

    /// Number of `(concept, impact)` pairs in the term.
    pub fn field_count(&self) -> usize {
        usize::from(self.head.is_some()) + self.colors.len() + self.textures.len() + self.spatials.len()
    }

    fn subsumed_by(&self, other: &SyntacticTerm) -> bool {
        self.head_concept() == other.head_concept()
            && self.colors.keys().all(|k| other.colors.contains_key(k))
            && self.textures.keys().all(|k| other.textures.contains_key(k))
            && self.spatials.keys().all(|k| other.spatials.contains_key(k))
    }
}

/// Facet vectors of a term: each entry is the impact of the matching
/// vocabulary concept, 0 when absent.
pub fn term_vectors(st: &SyntacticTerm) -> FacetVectors {
    let mut v = FacetVectors::default();
    for (c, imp) in &st.colors {
        v.color[c.index()] = *imp;
    }
    for (t, imp) in &st.textures {
        v.texture[t.index()] = *imp;
    }
    for (s, imp) in &st.spatials {
        v.spatial[s.index()] = *imp;
    }
    v
}

/// Everything mined from a document's context.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContextAnalysis {
    pub concepts: Vec<ContextualConcept>,
    pub terms: Vec<SyntacticTerm>,
}

impl ContextAnalysis {
    /// Lattice concepts with their impacts, in concept order.
    pub fn semantic_concepts(&self) -> Vec<(String, f64)> {
        semantic_concepts(&self.concepts)
    }
}

pub fn semantic_concepts(concepts: &[ContextualConcept]) -> Vec<(String, f64)> {
    concepts
        .iter()
        .filter_map(|c| match &c.concept {
            ContextConcept::Sem(id) => Some((id.clone(), c.imp)),
            ContextConcept::Attr(_) => None,
        })
        .collect()
}

/// Tags each area, assigns impacts and applies patterns area by area.
pub fn analyze(
    areas: &[ExtractionArea],
    lexicon: &Lexicon,
    lattice: &SemanticLattice,
    patterns: &[SyntacticPattern],
) -> ContextAnalysis {
    let tagged: Vec<TaggedArea> = areas.iter().map(|a| TaggedArea::tag(a, lexicon, lattice)).collect();
    let concepts = assign_impacts(&tagged);
    let lookup: BTreeMap<&ContextConcept, f64> = concepts.iter().map(|c| (&c.concept, c.imp)).collect();
    let mut terms = Vec::new();
    for area in &tagged {
        for t in apply_patterns(&area.tokens, patterns, |c| lookup.get(c).copied().unwrap_or(0.0)) {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
    }
    ContextAnalysis {
        concepts,
        terms: patterns::prune_subsumed(terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(kind: AreaKind, base: f64, text: &str) -> TaggedArea {
        TaggedArea {
            kind,
            base_impact: base,
            tokens: tag_tokens(&tokenize(text), &Lexicon::default(), &SemanticLattice::bundled()),
        }
    }

    #[test]
    fn impact_is_max_over_areas() {
        let areas = [
            area(AreaKind::SurroundingText, 0.5, "a rose by the wall"),
            area(AreaKind::Alt, 0.9, "rose"),
        ];
        let got = assign_impacts(&areas);
        let rose = got.iter().find(|c| c.concept == ContextConcept::Sem("rose".into())).unwrap();
        assert_eq!(rose.imp, 0.9);
        assert_eq!(rose.area, AreaKind::Alt);
        let wall = got.iter().find(|c| c.concept == ContextConcept::Sem("wall".into())).unwrap();
        assert_eq!(wall.imp, 0.5);
    }

    #[test]
    fn no_vocabulary_no_concepts() {
        assert!(assign_impacts(&[area(AreaKind::Alt, 0.9, "hello world")]).is_empty());
    }

    #[test]
    fn term_vector_positions() {
        let st = SyntacticTerm::with_head("flower", 0.9)
            .attr(Attribute::Color(Color::Red), 0.9)
            .attr(Attribute::Spatial(Spatial::Near), 0.5);
        let v = term_vectors(&st);
        assert_eq!(v.color[9 - 1], 0.9);
        assert_eq!(v.color.iter().sum::<f64>(), 0.9);
        assert_eq!(v.spatial[10 - 1], 0.5);
        assert_eq!(term_vectors(&SyntacticTerm::default()), FacetVectors::default());
    }

    #[test]
    fn analyze_uses_concept_level_impacts() {
        let areas = vec![
            ExtractionArea::new(AreaKind::Alt, "a rose", tokenize("a rose"), 0.9),
            ExtractionArea::new(AreaKind::SurroundingText, "red roses", tokenize("red roses"), 0.5),
        ];
        let a = analyze(&areas, &Lexicon::default(), &SemanticLattice::bundled(), &default_patterns());
        assert_eq!(a.terms.len(), 1, "{:?}", a.terms);
        let t = &a.terms[0];
        assert_eq!(t.head_imp(), 0.9);
        assert_eq!(t.colors[&Color::Red], 0.5);
        assert_eq!(a.semantic_concepts(), vec![("rose".to_string(), 0.9)]);
    }
}
