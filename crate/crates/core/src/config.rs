//! Pipeline settings, read from a flat `key = value` file.
//!
//! ```text
//! # every key is optional
//! taxonomy = taxonomy.tsv
//! impact.alt = 0.9
//! impact.src = 0.7
//! impact.surrounding = 0.5
//! window = 600
//! pattern = COLOR SEM          # repeatable; replaces the default set
//! tconorm = psum               # max | psum | bsum
//! kernel = max                 # max | min | product
//! t_mu = 0.1
//! t_sim = 0.05
//! fusion_literal = false
//! ndcg_n = 5,10,20
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::context::{default_patterns, ExtractConfig, ImpactMap, SyntacticPattern, DEFAULT_WINDOW};
use crate::fusion::{FacetKernel, FusionConfig};
use crate::fuzzy::TConorm;
use crate::retrieval::SearchSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`: {reason}")]
    Value {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Taxonomy file; the bundled taxonomy is used when absent.
    pub taxonomy: Option<PathBuf>,
    pub impacts: ImpactMap,
    pub window: usize,
    pub patterns: Vec<SyntacticPattern>,
    pub tconorm: TConorm,
    pub kernel: FacetKernel,
    pub t_mu: f64,
    pub t_sim: f64,
    pub fusion_literal: bool,
    pub ndcg_n: Vec<usize>,
}

pub const DEFAULT_NDCG_N: [usize; 3] = [5, 10, 20];

impl Default for PipelineConfig {
    fn default() -> Self {
        let fusion = FusionConfig::default();
        PipelineConfig {
            taxonomy: None,
            impacts: ImpactMap::default(),
            window: DEFAULT_WINDOW,
            patterns: default_patterns(),
            tconorm: TConorm::default(),
            kernel: fusion.kernel,
            t_mu: fusion.t_mu,
            t_sim: fusion.t_sim,
            fusion_literal: fusion.literal,
            ndcg_n: DEFAULT_NDCG_N.to_vec(),
        }
    }
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        line,
        key: key.to_owned(),
        value: value.to_owned(),
        reason: e.to_string(),
    })
}

fn unit(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let x: f64 = parse_value(line, key, value)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(ConfigError::Value {
            line,
            key: key.to_owned(),
            value: value.to_owned(),
            reason: "must lie in [0, 1]".into(),
        })
    }
}

impl PipelineConfig {
    /// Parses config text. A relative `taxonomy` path is kept as written.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = PipelineConfig::default();
        let mut patterns: Vec<SyntacticPattern> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or_default().trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "taxonomy" => cfg.taxonomy = Some(PathBuf::from(value)),
                "impact.alt" => cfg.impacts.alt = unit(line, key, value)?,
                "impact.src" => cfg.impacts.src = unit(line, key, value)?,
                "impact.surrounding" => cfg.impacts.surrounding = unit(line, key, value)?,
                "window" => cfg.window = parse_value(line, key, value)?,
                "pattern" => patterns.push(parse_value(line, key, value)?),
                "tconorm" => cfg.tconorm = parse_value(line, key, value)?,
                "kernel" => cfg.kernel = parse_value(line, key, value)?,
                "t_mu" => cfg.t_mu = unit(line, key, value)?,
                "t_sim" => {
                    let x: f64 = parse_value(line, key, value)?;
                    if !(x >= 0.0 && x.is_finite()) {
                        return Err(ConfigError::Value {
                            line,
                            key: key.to_owned(),
                            value: value.to_owned(),
                            reason: "must be a finite value ≥ 0".into(),
                        });
                    }
                    cfg.t_sim = x;
                }
                "fusion_literal" => cfg.fusion_literal = parse_value(line, key, value)?,
                "ndcg_n" => {
                    let ns = value
                        .split(',')
                        .map(|n| parse_value::<usize>(line, key, n.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    if ns.is_empty() || ns.contains(&0) {
                        return Err(ConfigError::Value {
                            line,
                            key: key.to_owned(),
                            value: value.to_owned(),
                            reason: "cutoffs must be ≥ 1".into(),
                        });
                    }
                    cfg.ndcg_n = ns;
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_owned(),
                    })
                }
            }
        }
        if !patterns.is_empty() {
            cfg.patterns = patterns;
        }
        Ok(cfg)
    }

    /// Reads a config file. A relative taxonomy path is resolved against the
    /// file's directory and must exist.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg = PipelineConfig::parse(&text)?;
        if let Some(tax) = &cfg.taxonomy {
            let resolved = if tax.is_relative() {
                path.parent().unwrap_or(Path::new("")).join(tax)
            } else {
                tax.clone()
            };
            if !resolved.is_file() {
                return Err(ConfigError::Invalid(format!("taxonomy file {} does not exist", resolved.display())));
            }
            cfg.taxonomy = Some(resolved);
        }
        Ok(cfg)
    }

    /// Canonical text form listing every key except `taxonomy`.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("impact.alt = {}", self.impacts.alt),
            format!("impact.src = {}", self.impacts.src),
            format!("impact.surrounding = {}", self.impacts.surrounding),
            format!("window = {}", self.window),
        ];
        lines.extend(self.patterns.iter().map(|p| format!("pattern = {p}")));
        lines.push(format!("tconorm = {}", self.tconorm));
        lines.push(format!("kernel = {}", self.kernel));
        lines.push(format!("t_mu = {}", self.t_mu));
        lines.push(format!("t_sim = {}", self.t_sim));
        lines.push(format!("fusion_literal = {}", self.fusion_literal));
        lines.push(format!(
            "ndcg_n = {}",
            self.ndcg_n.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
        ));
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            t_mu: self.t_mu,
            t_sim: self.t_sim,
            kernel: self.kernel,
            literal: self.fusion_literal,
        }
    }

    pub fn extract(&self) -> ExtractConfig {
        ExtractConfig {
            impacts: self.impacts,
            window: self.window,
        }
    }

    pub fn search(&self) -> SearchSettings {
        SearchSettings {
            tconorm: self.tconorm,
            kernel: self.kernel,
        }
    }
}
