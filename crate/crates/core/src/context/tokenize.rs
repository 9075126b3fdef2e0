//! Lowercasing tokenizer and a suffix-stripping plural folder.

/// Splits on anything that is not alphanumeric and lowercases.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Tokens of an image `src`: file name without directories, query string or
/// extension, split on separators.
pub fn src_tokens(src: &str) -> Vec<String> {
    let path = src.split(['?', '#']).next().unwrap_or_default();
    let file = path.rsplit(['/', '\\']).next().unwrap_or_default();
    let stem = match file.rsplit_once('.') {
        Some((stem, ext)) if !stem.is_empty() && ext.chars().all(char::is_alphanumeric) => stem,
        _ => file,
    };
    tokenize(stem)
}

/// Candidate base forms of a token, most literal first: the token itself,
/// then `-ies → -y`, `-es`, `-s` strippings where they apply.
pub fn fold_candidates(token: &str) -> Vec<String> {
    let mut out = vec![token.to_owned()];
    if token.len() > 4 {
        if let Some(stem) = token.strip_suffix("ies") {
            out.push(format!("{stem}y"));
        }
    }
    if token.len() > 3 {
        if let Some(stem) = token.strip_suffix("es") {
            out.push(stem.to_owned());
        }
    }
    if token.len() > 2 && !token.ends_with("ss") {
        if let Some(stem) = token.strip_suffix('s') {
            out.push(stem.to_owned());
        }
    }
    out
}
