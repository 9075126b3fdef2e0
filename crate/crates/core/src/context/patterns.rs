//! Syntactic patterns over tagged token streams.
//!
//! A pattern such as `SEM OTHER{0..3} COLOR SEM` is compiled to a regular
//! expression over the one-letter category codes of the stream (`S`, `C`,
//! `T`, `P`, `O`), so a match's byte span is also its token span.

use std::fmt;
use std::str::FromStr;

use regex::Regex;
use thiserror::Error;

use super::tagger::{Attribute, Category, Tag, TaggedToken};
use super::{ContextConcept, HeadConcept, SyntacticTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("unknown pattern symbol `{0}`")]
    Symbol(String),
    #[error("bad repetition `{0}`")]
    Repetition(String),
    #[error("pattern `{0}` has no non-OTHER symbol")]
    OnlyOther(String),
}

/// One pattern position: a category repeated `min..=max` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternElem {
    pub category: Category,
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone)]
pub struct SyntacticPattern {
    elems: Vec<PatternElem>,
    regex: Regex,
}

impl PartialEq for SyntacticPattern {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl SyntacticPattern {
    pub fn new(elems: Vec<PatternElem>) -> Result<Self, PatternError> {
        let pattern = Self::render(&elems);
        if !elems.iter().any(|e| e.category != Category::Other && e.max > 0) {
            return Err(PatternError::OnlyOther(pattern));
        }
        let mut re = String::new();
        for e in &elems {
            if e.min > e.max {
                return Err(PatternError::Repetition(pattern));
            }
            re.push(e.category.code());
            if (e.min, e.max) != (1, 1) {
                re.push_str(&format!("{{{},{}}}", e.min, e.max));
            }
        }
        let regex = Regex::new(&re).expect("category codes form a valid regex");
        Ok(SyntacticPattern { elems, regex })
    }

    pub fn elems(&self) -> &[PatternElem] {
        &self.elems
    }

    /// Longest run of OTHER tokens the pattern tolerates in one place.
    pub fn max_gap(&self) -> usize {
        self.elems
            .iter()
            .filter(|e| e.category == Category::Other)
            .map(|e| e.max)
            .max()
            .unwrap_or(0)
    }

    fn render(elems: &[PatternElem]) -> String {
        elems
            .iter()
            .map(|e| {
                if (e.min, e.max) == (1, 1) {
                    e.category.symbol().to_owned()
                } else {
                    format!("{}{{{}..{}}}", e.category.symbol(), e.min, e.max)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Leftmost non-overlapping matches as token ranges.
    pub fn find_matches(&self, tagged: &[TaggedToken]) -> Vec<std::ops::Range<usize>> {
        let codes: String = tagged.iter().map(|t| t.tag.category().code()).collect();
        self.regex
            .find_iter(&codes)
            .filter(|m| !m.is_empty())
            .map(|m| m.range())
            .collect()
    }
}

impl fmt::Display for SyntacticPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Self::render(&self.elems))
    }
}

impl FromStr for SyntacticPattern {
    type Err = PatternError;

    /// Parses `SEM OTHER{0..3} COLOR SEM`; brackets are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut elems = Vec::new();
        for sym in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (name, rep) = match sym.split_once('{') {
                Some((name, rest)) => (name, Some(rest)),
                None => (sym, None),
            };
            let category = Category::from_symbol(&name.to_uppercase())
                .ok_or_else(|| PatternError::Symbol(sym.to_owned()))?;
            let (min, max) = match rep {
                None => (1, 1),
                Some(rest) => {
                    let inner = rest
                        .strip_suffix('}')
                        .ok_or_else(|| PatternError::Repetition(sym.to_owned()))?;
                    let (lo, hi) = inner
                        .split_once("..")
                        .ok_or_else(|| PatternError::Repetition(sym.to_owned()))?;
                    let parse = |x: &str| {
                        x.trim()
                            .parse::<usize>()
                            .map_err(|_| PatternError::Repetition(sym.to_owned()))
                    };
                    (parse(lo)?, parse(hi)?)
                }
            };
            elems.push(PatternElem { category, min, max });
        }
        SyntacticPattern::new(elems)
    }
}

/// Pattern set used when no configuration overrides it. The trailing bare
/// `SEM` pattern lets a lone concept (an alt text such as "a rose in the
/// garden") yield a term.
pub const DEFAULT_PATTERNS: &[&str] = &[
    "COLOR SEM",
    "TEXTURE SEM",
    "SEM SPATIAL SEM",
    "SEM OTHER{0..3} COLOR SEM",
    "COLOR OTHER{0..1} COLOR SEM",
    "SEM",
];

pub fn default_patterns() -> Vec<SyntacticPattern> {
    DEFAULT_PATTERNS
        .iter()
        .map(|p| p.parse().expect("default patterns are valid"))
        .collect()
}

/// Turns one match into syntactic terms: one per SEM head, with each
/// attribute attached to the nearest SEM (to all of them on a distance tie).
/// A match without SEM gives a single headless term.
fn terms_of_match<F>(tokens: &[TaggedToken], impact: &F) -> Vec<SyntacticTerm>
where
    F: Fn(&ContextConcept) -> f64,
{
    let heads: Vec<(usize, &str)> = tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match &t.tag {
            Tag::Sem(id) => Some((i, id.as_str())),
            _ => None,
        })
        .collect();
    let mut terms: Vec<SyntacticTerm> = if heads.is_empty() {
        vec![SyntacticTerm::default()]
    } else {
        heads
            .iter()
            .map(|(_, id)| SyntacticTerm {
                head: Some(HeadConcept {
                    concept: (*id).to_owned(),
                    imp: impact(&ContextConcept::Sem((*id).to_owned())),
                }),
                ..SyntacticTerm::default()
            })
            .collect()
    };
    for (pos, tok) in tokens.iter().enumerate() {
        let Tag::Attr(attr) = &tok.tag else { continue };
        let imp = impact(&ContextConcept::Attr(*attr));
        if heads.is_empty() {
            terms[0].add_attribute(*attr, imp);
            continue;
        }
        let best = heads.iter().map(|(h, _)| h.abs_diff(pos)).min().unwrap_or(0);
        for (k, (h, _)) in heads.iter().enumerate() {
            if h.abs_diff(pos) == best {
                terms[k].add_attribute(*attr, imp);
            }
        }
    }
    terms
}

/// Applies every pattern to the stream and collects the resulting terms.
///
/// Exact duplicates are dropped, as is any term whose head equals another
/// term's head and whose attributes are a subset of that term's.
pub fn apply_patterns<F>(tagged: &[TaggedToken], patterns: &[SyntacticPattern], impact: F) -> Vec<SyntacticTerm>
where
    F: Fn(&ContextConcept) -> f64,
{
    let mut terms: Vec<SyntacticTerm> = Vec::new();
    for pattern in patterns {
        for range in pattern.find_matches(tagged) {
            for term in terms_of_match(&tagged[range], &impact) {
                if !terms.contains(&term) {
                    terms.push(term);
                }
            }
        }
    }
    prune_subsumed(terms)
}

pub(crate) fn prune_subsumed(terms: Vec<SyntacticTerm>) -> Vec<SyntacticTerm> {
    let keep: Vec<bool> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            !terms
                .iter()
                .enumerate()
                .any(|(j, u)| i != j && t != u && t.subsumed_by(u))
        })
        .collect();
    terms
        .into_iter()
        .zip(keep)
        .filter_map(|(t, k)| k.then_some(t))
        .collect()
}

/// Attributes carried by a tagged stream, in stream order.
pub fn attributes(tagged: &[TaggedToken]) -> impl Iterator<Item = Attribute> + '_ {
    tagged.iter().filter_map(|t| match t.tag {
        Tag::Attr(a) => Some(a),
        _ => None,
    })
}
