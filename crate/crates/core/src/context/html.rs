//! Locating an image in a webpage and cutting out its extraction areas.

use scraper::node::Node;
use scraper::Html;
use ego_tree::iter::Edge;

use super::tokenize::{src_tokens, tokenize};
use super::{AreaKind, ExtractionArea, ImpactMap};

/// Surrounding-text window, in characters, on each side of the image.
pub const DEFAULT_WINDOW: usize = 600;

/// Which `<img>` of the page the areas are cut around.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImageLocator {
    /// Matches the `src` attribute itself, its file name, or its file stem.
    Src(String),
    /// The n-th image of the page, zero based.
    Nth(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractConfig {
    pub impacts: ImpactMap,
    pub window: usize,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            impacts: ImpactMap::default(),
            window: DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Item {
    Text(String),
    Image { src: String, alt: String },
}

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "caption", "dd", "details", "div", "dl", "dt",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main",
    "nav", "ol", "p", "pre", "section", "summary", "table", "td", "th", "tr", "ul",
];

const SKIP_TAGS: &[&str] = &["head", "script", "style", "noscript", "template", "svg"];

/// Flattens the page into text blocks and images in document order.
fn flatten(page: &str) -> Vec<Item> {
    let doc = Html::parse_document(page);
    let mut items = Vec::new();
    let mut buf = String::new();
    let mut skip_depth = 0usize;

    fn flush(buf: &mut String, items: &mut Vec<Item>) {
        let text = buf.split_whitespace().collect::<Vec<_>>().join(" ");
        if !text.is_empty() {
            items.push(Item::Text(text));
        }
        buf.clear();
    }

    for edge in doc.tree.root().traverse() {
        match edge {
            Edge::Open(node) => match node.value() {
                Node::Element(el) => {
                    let name = el.name();
                    if SKIP_TAGS.contains(&name) {
                        skip_depth += 1;
                    } else if skip_depth == 0 && name == "img" {
                        flush(&mut buf, &mut items);
                        items.push(Item::Image {
                            src: el.attr("src").unwrap_or_default().to_owned(),
                            alt: el.attr("alt").unwrap_or_default().to_owned(),
                        });
                    } else if skip_depth == 0 && BLOCK_TAGS.contains(&name) {
                        flush(&mut buf, &mut items);
                    }
                }
                Node::Text(t) if skip_depth == 0 => {
                    buf.push(' ');
                    buf.push_str(&t.text);
                }
                _ => {}
            },
            Edge::Close(node) => {
                if let Node::Element(el) = node.value() {
                    let name = el.name();
                    if SKIP_TAGS.contains(&name) {
                        skip_depth -= 1;
                    } else if skip_depth == 0 && BLOCK_TAGS.contains(&name) {
                        flush(&mut buf, &mut items);
                    }
                }
            }
        }
    }
    flush(&mut buf, &mut items);
    items
}

fn matches_src(src: &str, wanted: &str) -> bool {
    if src == wanted {
        return true;
    }
    let path = src.split(['?', '#']).next().unwrap_or_default();
    let file = path.rsplit('/').next().unwrap_or_default();
    let stem = file.rsplit_once('.').map(|(s, _)| s).unwrap_or(file);
    file == wanted || (!stem.is_empty() && stem == wanted)
}

/// Keeps the last `budget` characters of `text`, dropping a leading partial word.
fn tail_chars(text: &str, budget: usize) -> String {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() <= budget {
        return text.to_owned();
    }
    let start = chars.len() - budget;
    let cut: String = chars[start..].iter().collect();
    if chars[start - 1] == ' ' {
        return cut;
    }
    match cut.find(' ') {
        Some(i) => cut[i + 1..].to_owned(),
        None => String::new(),
    }
}

/// Keeps the first `budget` characters of `text`, dropping a trailing partial word.
fn head_chars(text: &str, budget: usize) -> String {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() <= budget {
        return text.to_owned();
    }
    let cut: String = chars[..budget].iter().collect();
    if chars[budget] == ' ' {
        return cut;
    }
    match cut.rfind(' ') {
        Some(i) => cut[..i].to_owned(),
        None => String::new(),
    }
}

fn locate(items: &[Item], locator: &ImageLocator) -> Option<usize> {
    let mut image_no = 0usize;
    items.iter().position(|item| match item {
        Item::Image { src, .. } => {
            let hit = match locator {
                ImageLocator::Src(wanted) => matches_src(src, wanted),
                ImageLocator::Nth(n) => *n == image_no,
            };
            image_no += 1;
            hit
        }
        Item::Text(_) => false,
    })
}

/// Whether the locator matches an image of the page.
pub fn has_image(page: &str, locator: &ImageLocator) -> bool {
    locate(&flatten(page), locator).is_some()
}

/// Cuts the alt, src and surrounding-text areas around the located image.
///
/// Areas with no tokens are omitted. A page where the locator matches no
/// image yields no areas and a warning.
pub fn extract_areas(page: &str, locator: &ImageLocator, config: &ExtractConfig) -> Vec<ExtractionArea> {
    let items = flatten(page);
    let Some(pos) = locate(&items, locator) else {
        log::warn!("image {locator:?} not found in page");
        return Vec::new();
    };
    let Item::Image { src, alt } = &items[pos] else {
        unreachable!("position points at an image");
    };

    let mut areas = Vec::new();
    let alt_tokens = tokenize(alt);
    if !alt_tokens.is_empty() {
        areas.push(ExtractionArea::new(AreaKind::Alt, alt.trim(), alt_tokens, config.impacts.alt));
    }
    let src_toks = src_tokens(src);
    if !src_toks.is_empty() {
        areas.push(ExtractionArea::new(
            AreaKind::Src,
            src_toks.join(" "),
            src_toks,
            config.impacts.src,
        ));
    }

    let mut before = Vec::new();
    let mut used = 0usize;
    for item in items[..pos].iter().rev() {
        if used >= config.window {
            break;
        }
        if let Item::Text(t) = item {
            let part = tail_chars(t, config.window - used);
            used += t.chars().count() + 1;
            before.push(part);
        }
    }
    before.reverse();
    let mut after = Vec::new();
    used = 0;
    for item in &items[pos + 1..] {
        if used >= config.window {
            break;
        }
        if let Item::Text(t) = item {
            let part = head_chars(t, config.window - used);
            used += t.chars().count() + 1;
            after.push(part);
        }
    }
    let surrounding: Vec<String> = before.into_iter().chain(after).filter(|s| !s.is_empty()).collect();
    let text = surrounding.join(" ");
    let tokens = tokenize(&text);
    if !tokens.is_empty() {
        areas.push(ExtractionArea::new(
            AreaKind::SurroundingText,
            text,
            tokens,
            config.impacts.surrounding,
        ));
    }
    areas
}
