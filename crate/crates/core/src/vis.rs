//! Visual index structures (VIS): one record per visual object.
//!
//! Text form, one or more records per `.vis` file:
//!
//! ```text
//! vis vo1 { sem: rose@0.80; color: red=0.55, green=0.20; texture: uniform=1.0; spa: near(vo2); }
//! ```
//!
//! `record ::= "vis" ID "{" sem color texture spatial "}"` with
//! `sem ::= "sem:" CONCEPT "@" PROB ";"`, `color:`/`texture:` holding
//! comma-separated `name=weight` pairs (a bare texture name means weight 1.0)
//! and `spa:` holding comma-separated `relation(ID)` terms. `#` starts a
//! comment that runs to the end of the line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vocab::{Color, Spatial, Texture, VOCAB_SIZE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VisError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{vo}: recognition probability {value} outside [0, 1]")]
    Probability { vo: String, value: f64 },
    #[error("{vo}: {facet} weight {value} outside [0, 1]")]
    Weight {
        vo: String,
        facet: &'static str,
        value: f64,
    },
    #[error("{vo}: color weights sum to {sum}, above 1")]
    ColorSum { vo: String, sum: f64 },
    #[error("{vo}: spatial target `{target}` is not a visual object of this document")]
    DanglingTarget { vo: String, target: String },
    #[error("visual object `{0}` defined twice")]
    DuplicateObject(String),
    #[error("invalid identifier `{0}`")]
    Identifier(String),
}

/// Directed spatial relation from the owning object to `target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpatialLink {
    pub relation: Spatial,
    pub target: String,
}

/// Index structure of one visual object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisRecord {
    pub vo_id: String,
    pub vsc: String,
    pub r_vsc: f64,
    pub colors: BTreeMap<Color, f64>,
    pub textures: BTreeMap<Texture, f64>,
    pub spatial: BTreeSet<SpatialLink>,
}

impl VisRecord {
    pub fn new(vo_id: impl Into<String>, vsc: impl Into<String>, r_vsc: f64) -> Self {
        VisRecord {
            vo_id: vo_id.into(),
            vsc: vsc.into(),
            r_vsc,
            colors: BTreeMap::new(),
            textures: BTreeMap::new(),
            spatial: BTreeSet::new(),
        }
    }

    pub fn color(mut self, c: Color, w: f64) -> Self {
        self.colors.insert(c, w);
        self
    }

    pub fn texture(mut self, t: Texture, w: f64) -> Self {
        self.textures.insert(t, w);
        self
    }

    pub fn link(mut self, relation: Spatial, target: impl Into<String>) -> Self {
        self.spatial.insert(SpatialLink {
            relation,
            target: target.into(),
        });
        self
    }

    /// Checks the per-record invariants (ranges, identifiers).
    pub fn check(&self) -> Result<(), VisError> {
        for id in [&self.vo_id, &self.vsc] {
            if !is_identifier(id) {
                return Err(VisError::Identifier(id.clone()));
            }
        }
        if !(0.0..=1.0).contains(&self.r_vsc) {
            return Err(VisError::Probability {
                vo: self.vo_id.clone(),
                value: self.r_vsc,
            });
        }
        let weight_err = |facet, value| VisError::Weight {
            vo: self.vo_id.clone(),
            facet,
            value,
        };
        for &w in self.colors.values() {
            if !(0.0..=1.0).contains(&w) {
                return Err(weight_err("color", w));
            }
        }
        for &w in self.textures.values() {
            if !(0.0..=1.0).contains(&w) {
                return Err(weight_err("texture", w));
            }
        }
        let sum: f64 = self.colors.values().sum();
        if sum > 1.0 + 1e-9 {
            return Err(VisError::ColorSum {
                vo: self.vo_id.clone(),
                sum,
            });
        }
        for link in &self.spatial {
            if !is_identifier(&link.target) {
                return Err(VisError::Identifier(link.target.clone()));
            }
        }
        Ok(())
    }
}

/// Texture, spatial and color facets of a structure as dense vectors indexed
/// by vocabulary position.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FacetVectors {
    pub color: [f64; VOCAB_SIZE],
    pub texture: [f64; VOCAB_SIZE],
    pub spatial: [f64; VOCAB_SIZE],
}

/// Facet vectors of a record: color/texture weights, and 1 for every
/// spatial relation the object takes part in as source.
pub fn facet_vectors(record: &VisRecord) -> FacetVectors {
    let mut v = FacetVectors::default();
    for (c, w) in &record.colors {
        v.color[c.index()] = *w;
    }
    for (t, w) in &record.textures {
        v.texture[t.index()] = *w;
    }
    for link in &record.spatial {
        v.spatial[link.relation.index()] = 1.0;
    }
    v
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Validates a whole document: record invariants, unique ids, and spatial
/// targets that resolve inside the document.
pub fn validate(records: &[VisRecord]) -> Result<(), VisError> {
    let mut ids = BTreeSet::new();
    for r in records {
        r.check()?;
        if !ids.insert(r.vo_id.as_str()) {
            return Err(VisError::DuplicateObject(r.vo_id.clone()));
        }
    }
    for r in records {
        for link in &r.spatial {
            if !ids.contains(link.target.as_str()) {
                return Err(VisError::DanglingTarget {
                    vo: r.vo_id.clone(),
                    target: link.target.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Canonical text form: records in `vo_id` order, facet entries in
/// vocabulary order.
pub fn serialize_vis(records: &[VisRecord]) -> Result<String, VisError> {
    validate(records)?;
    let mut sorted: Vec<&VisRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.vo_id.cmp(&b.vo_id));
    let mut out = String::new();
    for r in sorted {
        let colors: Vec<String> = r
            .colors
            .iter()
            .map(|(c, w)| format!("{}={}", c, fmt_num(*w)))
            .collect();
        let textures: Vec<String> = r
            .textures
            .iter()
            .map(|(t, w)| format!("{}={}", t, fmt_num(*w)))
            .collect();
        let spatial: Vec<String> = r
            .spatial
            .iter()
            .map(|l| format!("{}({})", l.relation, l.target))
            .collect();
        let _ = writeln!(
            out,
            "vis {} {{ sem: {}@{}; color: {}; texture: {}; spa: {}; }}",
            r.vo_id,
            r.vsc,
            fmt_num(r.r_vsc),
            colors.join(", "),
            textures.join(", "),
            spatial.join(", ")
        );
    }
    Ok(out)
}

/// Two decimals when that is exact, otherwise the shortest representation
/// that parses back to the same value.
fn fmt_num(x: f64) -> String {
    let fixed = format!("{x:.2}");
    if fixed.parse::<f64>().ok() == Some(x) {
        fixed
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, VisError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let column = i + 1;
            if "{}:;,=@()".contains(c) {
                out.push(Spanned {
                    tok: Tok::Punct(c),
                    line: li + 1,
                    column,
                });
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || "_-.+".contains(c) {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || "_-.+".contains(chars[i])) {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line: li + 1,
                    column,
                });
                continue;
            }
            return Err(VisError::Syntax {
                line: li + 1,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn err_at(&self, idx: usize, message: String) -> VisError {
        let (line, column) = self
            .toks
            .get(idx)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.eof);
        VisError::Syntax {
            line,
            column,
            message,
        }
    }

    fn err(&self, message: impl Into<String>) -> VisError {
        self.err_at(self.pos, message.into())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn punct(&mut self, c: char) -> Result<(), VisError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.pos += 1;
                Ok(())
            }
            Some(other) => Err(self.err(format!("expected `{c}`, found {}", describe(other)))),
            None => Err(self.err(format!("expected `{c}`, found end of input"))),
        }
    }

    fn at_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Tok::Punct(p)) if *p == c)
    }

    fn word(&mut self, what: &str) -> Result<(String, usize), VisError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok((w, self.pos - 1))
            }
            Some(other) => Err(self.err(format!("expected {what}, found {}", describe(other)))),
            None => Err(self.err(format!("expected {what}, found end of input"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), VisError> {
        let (w, at) = self.word(&format!("`{kw}`"))?;
        if w == kw {
            Ok(())
        } else {
            Err(self.err_at(at, format!("expected `{kw}`, found `{w}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, VisError> {
        let (w, at) = self.word(what)?;
        if is_identifier(&w) {
            Ok(w)
        } else {
            Err(self.err_at(at, format!("invalid {what} `{w}`")))
        }
    }

    fn number(&mut self) -> Result<(f64, usize), VisError> {
        let (w, at) = self.word("number")?;
        match w.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok((x, at)),
            _ => Err(self.err_at(at, format!("invalid number `{w}`"))),
        }
    }

    fn record(&mut self) -> Result<VisRecord, VisError> {
        self.keyword("vis")?;
        let vo_id = self.ident("object id")?;
        self.punct('{')?;

        self.keyword("sem")?;
        self.punct(':')?;
        let vsc = self.ident("concept")?.to_lowercase();
        self.punct('@')?;
        let (r_vsc, _) = self.number()?;
        if !(0.0..=1.0).contains(&r_vsc) {
            return Err(VisError::Probability { vo: vo_id, value: r_vsc });
        }
        self.punct(';')?;

        self.keyword("color")?;
        self.punct(':')?;
        let mut colors = BTreeMap::new();
        self.list(|p| {
            let (name, at) = p.word("color name")?;
            let c = Color::from_name(&name).ok_or_else(|| p.err_at(at, format!("unknown color `{name}`")))?;
            p.punct('=')?;
            let (w, _) = p.number()?;
            if colors.insert(c, w).is_some() {
                return Err(p.err_at(at, format!("duplicate color `{name}`")));
            }
            Ok(())
        })?;

        self.keyword("texture")?;
        self.punct(':')?;
        let mut textures = BTreeMap::new();
        self.list(|p| {
            let (name, at) = p.word("texture name")?;
            let t =
                Texture::from_name(&name).ok_or_else(|| p.err_at(at, format!("unknown texture `{name}`")))?;
            let w = if p.at_punct('=') {
                p.punct('=')?;
                p.number()?.0
            } else {
                1.0
            };
            if textures.insert(t, w).is_some() {
                return Err(p.err_at(at, format!("duplicate texture `{name}`")));
            }
            Ok(())
        })?;

        self.keyword("spa")?;
        self.punct(':')?;
        let mut spatial = BTreeSet::new();
        self.list(|p| {
            let (name, at) = p.word("spatial relation")?;
            let relation = Spatial::from_name(&name)
                .ok_or_else(|| p.err_at(at, format!("unknown spatial relation `{name}`")))?;
            p.punct('(')?;
            let target = p.ident("object id")?;
            p.punct(')')?;
            if !spatial.insert(SpatialLink { relation, target }) {
                return Err(p.err_at(at, format!("duplicate spatial relation `{name}`")));
            }
            Ok(())
        })?;

        self.punct('}')?;
        let record = VisRecord {
            vo_id,
            vsc,
            r_vsc,
            colors,
            textures,
            spatial,
        };
        record.check()?;
        Ok(record)
    }

    /// `item ("," item)* ";"` or a bare `;`.
    fn list<F>(&mut self, mut item: F) -> Result<(), VisError>
    where
        F: FnMut(&mut Self) -> Result<(), VisError>,
    {
        if self.at_punct(';') {
            self.pos += 1;
            return Ok(());
        }
        loop {
            item(self)?;
            if self.at_punct(',') {
                self.pos += 1;
                continue;
            }
            return self.punct(';');
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Punct(c) => format!("`{c}`"),
    }
}

/// Parses a VIS document into records, in document order.
pub fn parse_vis(text: &str) -> Result<Vec<VisRecord>, VisError> {
    let toks = lex(text)?;
    let last_line = text.lines().count().max(1);
    let last_col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    let mut parser = Parser {
        toks,
        pos: 0,
        eof: (last_line, last_col),
    };
    let mut records = Vec::new();
    while parser.pos < parser.toks.len() {
        records.push(parser.record()?);
    }
    validate(&records)?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str =
        "vis vo1 { sem: rose@0.80; color: red=0.55, green=0.20; texture: uniform=1.0; spa: near(vo2); }\n\
         vis vo2 { sem: flower@0.5; color: ; texture: ; spa: ; }\n";

    #[test]
    fn parses_example_record() {
        let recs = parse_vis(EXAMPLE).unwrap();
        assert_eq!(recs.len(), 2);
        let r = &recs[0];
        assert_eq!(r.vsc, "rose");
        assert_eq!(r.r_vsc, 0.80);
        assert_eq!(r.colors[&Color::Red], 0.55);
        assert_eq!(r.colors[&Color::Green], 0.20);
        assert_eq!(r.textures[&Texture::Uniform], 1.0);
        assert!(r.spatial.contains(&SpatialLink {
            relation: Spatial::Near,
            target: "vo2".into()
        }));
        assert_eq!(parse_vis(&serialize_vis(&recs).unwrap()).unwrap(), recs);
    }

    #[test]
    fn empty_document() {
        assert!(parse_vis("").unwrap().is_empty());
        assert!(parse_vis("  # nothing here\n\n").unwrap().is_empty());
    }

    #[test]
    fn probability_out_of_range() {
        let err = parse_vis("vis vo1 { sem: rose@1.3; color: ; texture: ; spa: ; }").unwrap_err();
        assert!(matches!(err, VisError::Probability { value, .. } if value == 1.3));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_vis("vis vo1 {\n  sem: rose 0.8; color: ; texture: ; spa: ; }").unwrap_err();
        assert_eq!(
            err,
            VisError::Syntax {
                line: 2,
                column: 13,
                message: "expected `@`, found `0.8`".into()
            }
        );
        let err = parse_vis("vis vo1 { sem: rose@0.8; color: red=0.1; texture: ; spa: ;").unwrap_err();
        assert!(matches!(err, VisError::Syntax { message, .. } if message.contains("end of input")));
    }

    #[test]
    fn unknown_vocabulary_rejected() {
        let err = parse_vis("vis vo1 { sem: rose@0.8; color: mauve=0.1; texture: ; spa: ; }").unwrap_err();
        assert!(matches!(err, VisError::Syntax { message, .. } if message.contains("unknown color")));
        let err = parse_vis("vis vo1 { sem: rose@0.8; color: ; texture: ; spa: inside(vo1); }").unwrap_err();
        assert!(matches!(err, VisError::Syntax { message, .. } if message.contains("unknown spatial")));
    }

    #[test]
    fn dangling_target_rejected() {
        let err = parse_vis("vis vo1 { sem: rose@0.8; color: ; texture: ; spa: near(vo9); }").unwrap_err();
        assert_eq!(
            err,
            VisError::DanglingTarget {
                vo: "vo1".into(),
                target: "vo9".into()
            }
        );
    }

    #[test]
    fn color_sum_bounded() {
        let err = parse_vis("vis vo1 { sem: rose@0.8; color: red=0.7, blue=0.6; texture: ; spa: ; }").unwrap_err();
        assert!(matches!(err, VisError::ColorSum { .. }));
    }

    #[test]
    fn bare_texture_defaults_to_one() {
        let recs = parse_vis("vis a { sem: sky@0.6; color: ; texture: whirly, lined=0.25; spa: ; }").unwrap();
        assert_eq!(recs[0].textures[&Texture::Whirly], 1.0);
        assert_eq!(recs[0].textures[&Texture::Lined], 0.25);
    }

    #[test]
    fn empty_facets_render_as_bare_semicolon() {
        let out = serialize_vis(&[VisRecord::new("vo1", "rose", 0.8)]).unwrap();
        assert_eq!(out, "vis vo1 { sem: rose@0.80; color: ; texture: ; spa: ; }\n");
    }

    #[test]
    fn serialization_sorts_by_object_id() {
        let a = VisRecord::new("b", "rose", 0.5);
        let b = VisRecord::new("a", "sky", 0.25);
        let out = serialize_vis(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(out, serialize_vis(&[b, a]).unwrap());
        assert!(out.starts_with("vis a "));
    }

    #[test]
    fn serialization_keeps_full_precision() {
        let r = VisRecord::new("vo1", "rose", 0.123456789).color(Color::Red, 1.0 / 3.0);
        let text = serialize_vis(std::slice::from_ref(&r)).unwrap();
        assert_eq!(parse_vis(&text).unwrap(), vec![r]);
    }

    #[test]
    fn serializer_rejects_invalid_records() {
        let bad = VisRecord::new("vo1", "rose", 2.0);
        assert!(serialize_vis(&[bad]).is_err());
        let dup = VisRecord::new("vo1", "rose", 0.5);
        assert_eq!(
            serialize_vis(&[dup.clone(), dup]),
            Err(VisError::DuplicateObject("vo1".into()))
        );
    }

    #[test]
    fn facet_vector_positions() {
        let r = VisRecord::new("vo1", "rose", 0.8)
            .color(Color::Red, 0.55)
            .link(Spatial::Near, "vo2")
            .link(Spatial::Far, "vo3");
        let v = facet_vectors(&r);
        // 1-based c_9 = red, s_10 = near, s_11 = far
        assert_eq!(v.color[9 - 1], 0.55);
        assert_eq!(v.color.iter().filter(|x| **x != 0.0).count(), 1);
        assert_eq!(v.spatial[10 - 1], 1.0);
        assert_eq!(v.spatial[11 - 1], 1.0);
        assert_eq!(v.texture, [0.0; VOCAB_SIZE]);
        let plain = facet_vectors(&VisRecord::new("vo1", "rose", 0.8));
        assert_eq!(plain.spatial, [0.0; VOCAB_SIZE]);
    }
}
