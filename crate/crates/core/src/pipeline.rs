//! Corpus ingestion, enrichment and index loading.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::context::{analyze, extract_areas, has_image, ExtractionArea, ImageLocator, Lexicon};
use crate::fusion::enrich_records;
use crate::fuzzy::aggregate_mu_tot;
use crate::lattice::SemanticLattice;
use crate::retrieval::{document_lattice, SearchIndex, SearchSettings};
use crate::store::{IndexRecord, IndexStore};
use crate::vis::parse_vis;
use crate::Error;

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Loads the configured taxonomy, or the bundled one.
pub fn load_taxonomy(path: Option<&Path>) -> Result<SemanticLattice, Error> {
    match path {
        Some(p) => Ok(SemanticLattice::load_taxonomy(&read(p)?)?),
        None => Ok(SemanticLattice::bundled()),
    }
}

#[derive(Debug)]
pub struct IngestOutcome {
    pub store: IndexStore,
    pub warnings: Vec<String>,
}

/// Pairs every `NAME.html` (or `.htm`) of `corpus` with `NAME.vis` and cuts
/// the extraction areas around the image whose file stem is `NAME`, falling
/// back to the page's first image.
///
/// Unpaired files and malformed VIS documents are skipped with a warning.
pub fn ingest(corpus: &Path, config: &PipelineConfig) -> Result<IngestOutcome, Error> {
    let entries = std::fs::read_dir(corpus).map_err(|source| Error::Io {
        path: corpus.to_owned(),
        source,
    })?;
    let mut html: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut vis: BTreeMap<String, PathBuf> = BTreeMap::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Io {
                path: corpus.to_owned(),
                source,
            })?
            .path();
        if !path.is_file() {
            continue;
        }
        let (Some(stem), Some(ext)) = (path.file_stem(), path.extension()) else {
            continue;
        };
        let stem = stem.to_string_lossy().into_owned();
        match ext.to_string_lossy().to_ascii_lowercase().as_str() {
            "html" | "htm" => {
                if let Some(prev) = html.insert(stem.clone(), path.clone()) {
                    return Err(Error::Data(format!(
                        "document `{stem}` has two pages: {} and {}",
                        prev.display(),
                        path.display()
                    )));
                }
            }
            "vis" => {
                vis.insert(stem, path);
            }
            _ => {}
        }
    }

    let mut warnings = Vec::new();
    for stem in vis.keys().filter(|s| !html.contains_key(*s)) {
        warnings.push(format!("{stem}.vis has no page; skipped"));
    }
    let extract = config.extract();
    let mut records = Vec::new();
    for (stem, page_path) in &html {
        let Some(vis_path) = vis.get(stem) else {
            warnings.push(format!("{} has no .vis sidecar; skipped", page_path.display()));
            continue;
        };
        let page = read(page_path)?;
        let vis_text = read(vis_path)?;
        let records_vis = match parse_vis(&vis_text) {
            Ok(r) => r,
            Err(e) => {
                warnings.push(format!("{}: malformed VIS ({e}); skipped", vis_path.display()));
                continue;
            }
        };
        let mut locator = ImageLocator::Src(stem.clone());
        if !has_image(&page, &locator) {
            info!("{stem}: no image named after the document; using the first image");
            locator = ImageLocator::Nth(0);
        }
        let areas = extract_areas(&page, &locator, &extract);
        let log = vec![format!("ingested {} visual objects, {} context areas", records_vis.len(), areas.len())];
        records.push(IndexRecord {
            doc_id: stem.clone(),
            html_path: page_path.display().to_string(),
            vis_path: vis_path.display().to_string(),
            areas,
            vis: records_vis,
            concepts: Vec::new(),
            terms: Vec::new(),
            enriched: None,
            log,
        });
    }
    for w in &warnings {
        warn!("{w}");
    }
    Ok(IngestOutcome {
        store: IndexStore::new(records),
        warnings,
    })
}

/// Canonical visual semantic concepts of the corpus.
fn visual_concepts(store: &IndexStore, taxonomy: &SemanticLattice) -> Result<Vec<String>, Error> {
    let mut vsem = BTreeSet::new();
    for r in &store.records {
        for v in &r.vis {
            let id = taxonomy.resolve(&v.vsc).ok_or_else(|| {
                Error::Data(format!("{}: visual concept `{}` is not in the taxonomy", r.doc_id, v.vsc))
            })?;
            vsem.insert(id.to_owned());
        }
    }
    Ok(vsem.into_iter().collect())
}

/// Enriches one document. Everything is recomputed from the original VIS
/// and the stored areas, so running it twice gives the same record.
pub fn enrich_record(
    record: &IndexRecord,
    taxonomy: &SemanticLattice,
    base: &SemanticLattice,
    lexicon: &Lexicon,
    config: &PipelineConfig,
) -> Result<IndexRecord, Error> {
    let areas: Vec<ExtractionArea> = record
        .areas
        .iter()
        .map(|a| ExtractionArea {
            base_impact: config.impacts.get(a.kind),
            ..a.clone()
        })
        .collect();
    let analysis = analyze(&areas, lexicon, taxonomy, &config.patterns);
    let context = analysis.semantic_concepts();
    let names: Vec<&str> = context.iter().map(|(c, _)| c.as_str()).collect();
    let lattice = document_lattice(base, taxonomy, &names)?;
    let universe: Vec<&str> = lattice.concept_ids().collect();
    let vis_side: Vec<(String, f64)> = record.vis.iter().map(|r| (r.vsc.clone(), r.r_vsc)).collect();
    let table = aggregate_mu_tot(&universe, &vis_side, &context, &lattice, config.tconorm)?;
    let enriched = enrich_records(&record.vis, &analysis.terms, &table, &lattice, &config.fusion())?;

    let mut log = vec![format!(
        "{} contextual concepts, {} syntactic terms",
        analysis.concepts.len(),
        analysis.terms.len()
    )];
    for e in &enriched {
        let d = &e.decision;
        let mut line = format!("{}: {} {}", e.record.vo_id, d.provenance, e.original_vsc);
        if e.record.vsc != e.original_vsc {
            line.push_str(&format!(" -> {}", e.record.vsc));
        }
        line.push_str(&format!(" mu_vsc={:.4}", d.mu_vsc));
        if let (Some(cx), Some(mu_cx), Some(sim)) = (&d.cx, d.mu_cx, d.similarity) {
            line.push_str(&format!(" cx={cx} mu_cx={mu_cx:.4} sim={sim:.4}"));
        }
        log.push(line);
    }
    Ok(IndexRecord {
        areas,
        concepts: analysis.concepts,
        terms: analysis.terms,
        enriched: Some(enriched),
        log: record.log.iter().take(1).cloned().chain(log).collect(),
        ..record.clone()
    })
}

/// Enriches every document of the store in parallel.
pub fn enrich(store: &IndexStore, taxonomy: &SemanticLattice, config: &PipelineConfig) -> Result<IndexStore, Error> {
    let vsem = visual_concepts(store, taxonomy)?;
    let base = taxonomy.restricted_to(vsem.iter().map(String::as_str))?;
    let lexicon = Lexicon::default();
    let records = store
        .records
        .par_iter()
        .map(|r| {
            enrich_record(r, taxonomy, &base, &lexicon, config)
                .map_err(|e| Error::Data(format!("{}: {e}", r.doc_id)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IndexStore {
        taxonomy: Some(taxonomy.to_taxonomy()),
        vsem,
        config: Some(config.to_text()),
        records,
    })
}

/// Config recorded by the last enrichment, or the defaults.
pub fn stored_config(store: &IndexStore) -> Result<PipelineConfig, Error> {
    match &store.config {
        Some(text) => Ok(PipelineConfig::parse(text)?),
        None => Ok(PipelineConfig::default()),
    }
}

/// Builds the search index of a store.
pub fn search_index(store: &IndexStore, settings: SearchSettings) -> Result<SearchIndex, Error> {
    let taxonomy = store
        .taxonomy
        .as_deref()
        .map(SemanticLattice::load_taxonomy)
        .transpose()?;
    let docs = store.records.iter().map(IndexRecord::to_document).collect();
    Ok(SearchIndex::new(taxonomy, &store.vsem, docs, settings)?)
}
