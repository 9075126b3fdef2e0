//! Labels tokens with the vocabulary category they belong to.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tokenize::{fold_candidates, tokenize};
use crate::lattice::SemanticLattice;
use crate::vocab::{Color, Spatial, Texture};

/// Longest phrase, in tokens, considered by the tagger.
const MAX_PHRASE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Sem,
    Color,
    Texture,
    Spatial,
    Other,
}

impl Category {
    /// One-letter code used when patterns are compiled to regular expressions.
    pub fn code(self) -> char {
        match self {
            Category::Sem => 'S',
            Category::Color => 'C',
            Category::Texture => 'T',
            Category::Spatial => 'P',
            Category::Other => 'O',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "SEM" => Some(Category::Sem),
            "COLOR" => Some(Category::Color),
            "TEXTURE" => Some(Category::Texture),
            "SPATIAL" => Some(Category::Spatial),
            "OTHER" => Some(Category::Other),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Category::Sem => "SEM",
            Category::Color => "COLOR",
            Category::Texture => "TEXTURE",
            Category::Spatial => "SPATIAL",
            Category::Other => "OTHER",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Color, texture or spatial concept named in text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "facet", content = "name", rename_all = "snake_case")]
pub enum Attribute {
    Color(Color),
    Texture(Texture),
    Spatial(Spatial),
}

impl Attribute {
    pub fn category(self) -> Category {
        match self {
            Attribute::Color(_) => Category::Color,
            Attribute::Texture(_) => Category::Texture,
            Attribute::Spatial(_) => Category::Spatial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tag {
    /// Canonical lattice id.
    Sem(String),
    Attr(Attribute),
    Other,
}

impl Tag {
    pub fn category(&self) -> Category {
        match self {
            Tag::Sem(_) => Category::Sem,
            Tag::Attr(a) => a.category(),
            Tag::Other => Category::Other,
        }
    }
}

/// A token, or a multi-word phrase matched as one unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub text: String,
    pub tag: Tag,
}

/// Surface phrases for the color, texture and spatial vocabularies.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    phrases: BTreeMap<Vec<String>, Attribute>,
}

const COLOR_SYNONYMS: &[(&str, Color)] = &[("gray", Color::Grey), ("violet", Color::Purple)];

const TEXTURE_SYNONYMS: &[(&str, Texture)] = &[
    ("smooth", Texture::Uniform),
    ("swirly", Texture::Whirly),
    ("swirling", Texture::Whirly),
    ("striped", Texture::Lined),
    ("dotted", Texture::Spotted),
    ("speckled", Texture::Spotted),
    ("rough", Texture::Bumpy),
];

const SPATIAL_SYNONYMS: &[(&str, Spatial)] = &[
    ("in front of", Spatial::Covers),
    ("covered by", Spatial::CoveredBy),
    ("behind", Spatial::CoveredBy),
    ("part of", Spatial::PartOf),
    ("inside", Spatial::PartOf),
    ("within", Spatial::PartOf),
    ("touching", Spatial::Touches),
    ("outside", Spatial::Disconnected),
    ("over", Spatial::Above),
    ("under", Spatial::Below),
    ("beneath", Spatial::Below),
    ("underneath", Spatial::Below),
    ("next to", Spatial::Near),
    ("beside", Spatial::Near),
    ("close to", Spatial::Near),
    ("far from", Spatial::Far),
];

impl Default for Lexicon {
    fn default() -> Self {
        let mut lex = Lexicon {
            phrases: BTreeMap::new(),
        };
        for c in Color::ALL {
            lex.insert(c.name(), Attribute::Color(c));
        }
        for t in Texture::ALL {
            lex.insert(t.name(), Attribute::Texture(t));
        }
        for s in Spatial::ALL {
            lex.insert(s.name(), Attribute::Spatial(s));
        }
        for (p, c) in COLOR_SYNONYMS {
            lex.insert(p, Attribute::Color(*c));
        }
        for (p, t) in TEXTURE_SYNONYMS {
            lex.insert(p, Attribute::Texture(*t));
        }
        for (p, s) in SPATIAL_SYNONYMS {
            lex.insert(p, Attribute::Spatial(*s));
        }
        lex
    }
}

impl Lexicon {
    /// Adds a phrase; underscores and spaces both separate words.
    pub fn insert(&mut self, phrase: &str, attr: Attribute) {
        let words = tokenize(phrase);
        if !words.is_empty() && words.len() <= MAX_PHRASE {
            self.phrases.insert(words, attr);
        }
    }

    pub fn lookup(&self, words: &[String]) -> Option<Attribute> {
        self.phrases.get(words).copied()
    }
}

/// Lattice lookup of a phrase, trying plural foldings of its last word.
fn lookup_sem<'a>(lattice: &'a SemanticLattice, words: &[String]) -> Option<&'a str> {
    let (last, head) = words.split_last()?;
    fold_candidates(last).into_iter().find_map(|cand| {
        let mut joined: Vec<&str> = head.iter().map(String::as_str).collect();
        joined.push(&cand);
        lattice.resolve(&joined.join("_"))
    })
}

fn lookup_attr(lexicon: &Lexicon, words: &[String]) -> Option<Attribute> {
    let (last, head) = words.split_last()?;
    fold_candidates(last).into_iter().find_map(|cand| {
        let mut phrase = head.to_vec();
        phrase.push(cand);
        lexicon.lookup(&phrase)
    })
}

/// Greedy longest-match tagging. At equal length, the fixed vocabularies
/// win over lattice concepts.
pub fn tag_tokens(tokens: &[String], lexicon: &Lexicon, lattice: &SemanticLattice) -> Vec<TaggedToken> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let mut matched = None;
        for len in (1..=MAX_PHRASE.min(tokens.len() - i)).rev() {
            let words = &tokens[i..i + len];
            if let Some(attr) = lookup_attr(lexicon, words) {
                matched = Some((len, Tag::Attr(attr)));
                break;
            }
            if let Some(id) = lookup_sem(lattice, words) {
                matched = Some((len, Tag::Sem(id.to_owned())));
                break;
            }
        }
        let (len, tag) = matched.unwrap_or((1, Tag::Other));
        out.push(TaggedToken {
            text: tokens[i..i + len].join(" "),
            tag,
        });
        i += len;
    }
    out
}
