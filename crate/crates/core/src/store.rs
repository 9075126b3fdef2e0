//! Line-delimited JSON index store: a header line, then one record per
//! document in `doc_id` order.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{semantic_concepts, AreaKind, ContextualConcept, ExtractionArea, SyntacticTerm};
use crate::fusion::EnrichedVisRecord;
use crate::retrieval::IndexedDocument;
use crate::vis::VisRecord;

pub const FORMAT: &str = "vis-enrich-index";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("not an index store: {0}")]
    Header(String),
    #[error("document `{0}` appears twice")]
    DuplicateDoc(String),
}

/// One webpage image and everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub doc_id: String,
    pub html_path: String,
    pub vis_path: String,
    pub areas: Vec<ExtractionArea>,
    pub vis: Vec<VisRecord>,
    #[serde(default)]
    pub concepts: Vec<ContextualConcept>,
    #[serde(default)]
    pub terms: Vec<SyntacticTerm>,
    /// Present once `enrich` has run.
    #[serde(default)]
    pub enriched: Option<Vec<EnrichedVisRecord>>,
    #[serde(default)]
    pub log: Vec<String>,
}

impl IndexRecord {
    /// Context tokens of every area, in area order.
    pub fn tokens(&self) -> Vec<String> {
        self.areas.iter().flat_map(|a| a.tokens.iter().cloned()).collect()
    }

    pub fn area(&self, kind: AreaKind) -> Option<&ExtractionArea> {
        self.areas.iter().find(|a| a.kind == kind)
    }

    pub fn to_document(&self) -> IndexedDocument {
        IndexedDocument {
            doc_id: self.doc_id.clone(),
            vis: self.vis.clone(),
            context: semantic_concepts(&self.concepts),
            terms: self.terms.clone(),
            enriched: self.enriched.clone(),
            tokens: self.tokens(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    taxonomy: Option<String>,
    vsem: Vec<String>,
    config: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IndexStore {
    /// Taxonomy text used by the last enrichment.
    pub taxonomy: Option<String>,
    /// Visual semantic concepts of the corpus, sorted.
    pub vsem: Vec<String>,
    /// Config text used by the last enrichment.
    pub config: Option<String>,
    pub records: Vec<IndexRecord>,
}

fn json_err(line: usize) -> impl Fn(serde_json::Error) -> StoreError {
    move |e| StoreError::Json {
        line,
        message: e.to_string(),
    }
}

impl IndexStore {
    pub fn new(records: Vec<IndexRecord>) -> Self {
        let mut store = IndexStore {
            records,
            ..IndexStore::default()
        };
        store.records.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        store
    }

    pub fn is_enriched(&self) -> bool {
        self.taxonomy.is_some()
    }

    pub fn to_jsonl(&self) -> String {
        let header = Header {
            format: FORMAT.into(),
            version: VERSION,
            taxonomy: self.taxonomy.clone(),
            vsem: self.vsem.clone(),
            config: self.config.clone(),
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, StoreError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((_, first)) = lines.next() else {
            return Err(StoreError::Header("empty file".into()));
        };
        let header: Header = serde_json::from_str(first).map_err(|e| StoreError::Header(e.to_string()))?;
        if header.format != FORMAT {
            return Err(StoreError::Header(format!("format `{}`", header.format)));
        }
        if header.version != VERSION {
            return Err(StoreError::Header(format!("unsupported version {}", header.version)));
        }
        let mut records = Vec::new();
        let mut seen = BTreeSet::new();
        for (no, line) in lines {
            let r: IndexRecord = serde_json::from_str(line).map_err(json_err(no + 1))?;
            if !seen.insert(r.doc_id.clone()) {
                return Err(StoreError::DuplicateDoc(r.doc_id));
            }
            records.push(r);
        }
        records.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
        Ok(IndexStore {
            taxonomy: header.taxonomy,
            vsem: header.vsem,
            config: header.config,
            records,
        })
    }

    pub fn load(path: &Path) -> Result<Self, StoreError> {
        let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io {
            path: path.to_owned(),
            source,
        })?;
        IndexStore::from_jsonl(&text)
    }

    /// Writes through a sibling temporary file, then renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let io = |source| StoreError::Io {
            path: path.to_owned(),
            source,
        };
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(self.to_jsonl().as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        std::fs::rename(&tmp, path).map_err(io)
    }
}
