use std::fs;
use std::path::Path;

use vis_enrich::config::PipelineConfig;
use vis_enrich::context::Lexicon;
use vis_enrich::fusion::Provenance;
use vis_enrich::lattice::SemanticLattice;
use vis_enrich::pipeline::{enrich, ingest, search_index};
use vis_enrich::retrieval::{eval_report, parse_queries, parse_query, rank, Qrels, Strategy};
use vis_enrich::store::IndexStore;

fn page(alt: &str, src: &str, text: &str) -> String {
    format!("<html><body><p>{text}</p><img src=\"{src}\" alt=\"{alt}\"></body></html>")
}

fn write_doc(dir: &Path, id: &str, html: &str, vis: &str) {
    fs::write(dir.join(format!("{id}.html")), html).unwrap();
    fs::write(dir.join(format!("{id}.vis")), vis).unwrap();
}

fn enriched(dir: &Path) -> IndexStore {
    let cfg = PipelineConfig::default();
    let store = ingest(dir, &cfg).unwrap().store;
    enrich(&store, &SemanticLattice::bundled(), &cfg).unwrap()
}

#[test]
fn rose_in_alt_specializes_flower() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(
        dir.path(),
        "d1",
        &page("rose", "d1.jpg", "Pictures from the weekend."),
        "vis vo1 { sem: flower@0.80; color: red=0.6; texture: ; spa: ; }\n",
    );
    let store = enriched(dir.path());
    let e = &store.records[0].enriched.as_ref().unwrap()[0];
    assert_eq!(e.record.vsc, "rose");
    assert_eq!(e.original_vsc, "flower");
    assert_eq!(e.provenance(), Provenance::Replaced);
    assert_eq!(e.decision.correspondence, Some(true));
    assert!(!store.records[0].log.is_empty());
}

#[test]
fn empty_context_is_a_fixpoint() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(
        dir.path(),
        "d1",
        &page("", "IMG_0001.jpg", "Nothing to see in this paragraph at all."),
        "vis vo1 { sem: flower@0.80; color: ; texture: ; spa: ; }\nvis vo2 { sem: sky@0.6; color: ; texture: ; spa: ; }\n",
    );
    let store = enriched(dir.path());
    let rec = &store.records[0];
    assert!(rec.concepts.is_empty());
    let out = rec.enriched.as_ref().unwrap();
    for (e, v) in out.iter().zip(&rec.vis) {
        assert_eq!(&e.record, v);
        assert_eq!(e.provenance(), Provenance::Kept);
    }
}

#[test]
fn enrich_is_idempotent_and_ingest_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (id, alt) in [("a", "red rose"), ("b", "a tower"), ("c", "")] {
        write_doc(
            dir.path(),
            id,
            &page(alt, &format!("{id}.jpg"), "A garden near the old church."),
            "vis vo1 { sem: flower@0.70; color: red=0.5; texture: uniform; spa: ; }\n",
        );
    }
    fs::write(dir.path().join("orphan.html"), page("x", "x.jpg", "")).unwrap();
    let cfg = PipelineConfig::default();
    let first = ingest(dir.path(), &cfg).unwrap();
    let second = ingest(dir.path(), &cfg).unwrap();
    assert_eq!(first.store.records.len(), 3);
    assert_eq!(first.warnings.len(), 1);
    assert!(first.warnings[0].contains("orphan"));
    assert_eq!(first.store.to_jsonl(), second.store.to_jsonl());

    let lattice = SemanticLattice::bundled();
    let once = enrich(&first.store, &lattice, &cfg).unwrap();
    let twice = enrich(&once, &lattice, &cfg).unwrap();
    assert_eq!(once.to_jsonl(), twice.to_jsonl());
}

#[test]
fn malformed_vis_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    write_doc(dir.path(), "ok", &page("rose", "ok.jpg", ""), "vis vo1 { sem: rose@0.5; color: ; texture: ; spa: ; }\n");
    write_doc(dir.path(), "bad", &page("rose", "bad.jpg", ""), "vis vo1 { sem: rose@1.5; }\n");
    let out = ingest(dir.path(), &PipelineConfig::default()).unwrap();
    assert_eq!(out.store.records.len(), 1);
    assert!(out.warnings.iter().any(|w| w.contains("malformed")));
}

#[test]
fn specialized_document_ranks_first_for_its_concept() {
    let dir = tempfile::tempdir().unwrap();
    let vis = "vis vo1 { sem: flower@0.80; color: red=0.5; texture: ; spa: ; }\n";
    write_doc(dir.path(), "a_flower", &page("", "IMG_1.jpg", "Nice weather today."), vis);
    write_doc(dir.path(), "b_rose", &page("rose", "IMG_2.jpg", "Nice weather today."), vis);
    let store = enriched(dir.path());
    let index = search_index(&store, PipelineConfig::default().search()).unwrap();
    let lattice = index.taxonomy().unwrap().clone();
    let q = parse_query("red rose", &Lexicon::default(), &lattice, &PipelineConfig::default().patterns).unwrap();
    let list = rank(&index, &q, Strategy::VisCx, 10).unwrap();
    assert_eq!(list.entries[0].doc_id, "b_rose");
    assert!(list.entries[0].score > list.entries[1].score);
    let plain = rank(&index, &q, Strategy::Vis, 10).unwrap();
    assert_eq!(plain.entries[0].score, plain.entries[1].score);
}

#[test]
fn tfidf_prefers_documents_repeating_the_word() {
    let dir = tempfile::tempdir().unwrap();
    let vis = "vis vo1 { sem: flower@0.5; color: ; texture: ; spa: ; }\n";
    write_doc(dir.path(), "a", &page("", "IMG_1.jpg", "tulip tulip tulip in the park"), vis);
    write_doc(dir.path(), "b", &page("", "IMG_2.jpg", "a walk in the park"), vis);
    write_doc(dir.path(), "c", &page("", "IMG_3.jpg", "the harbour at night"), vis);
    let store = enriched(dir.path());
    let index = search_index(&store, PipelineConfig::default().search()).unwrap();
    let q = parse_query("tulip", &Lexicon::default(), index.taxonomy().unwrap(), &PipelineConfig::default().patterns)
        .unwrap();
    let list = rank(&index, &q, Strategy::TfIdf, 10).unwrap();
    assert_eq!(list.entries.len(), 1);
    assert_eq!(list.entries[0].doc_id, "a");
}

#[test]
fn eval_report_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for (id, alt, concept) in [("d1", "rose", "flower"), ("d2", "tower", "building"), ("d3", "lake", "water"), ("d4", "", "rose")] {
        write_doc(
            dir.path(),
            id,
            &page(alt, &format!("{id}.jpg"), ""),
            &format!("vis vo1 {{ sem: {concept}@0.7; color: red=0.4; texture: ; spa: ; }}\n"),
        );
    }
    let store = enriched(dir.path());
    let index = search_index(&store, PipelineConfig::default().search()).unwrap();
    let queries = parse_queries("q1\tRed Roses\nq2\tGrey Towers\nq3\tBlue Lakes\nq4\tWhite Flowers\nq5\tasdf qwer\n").unwrap();
    let qrels = Qrels::parse("q1\td1\t2\nq1\td4\t1\nq2\td2\t2\nq3\td3\t1\nq4\td1\t1\nq5\td9\t2\n").unwrap();
    let cfg = PipelineConfig::default();
    let run = || eval_report(&index, &queries, &qrels, &Strategy::ALL, &cfg.ndcg_n, &Lexicon::default(), &cfg.patterns).unwrap();
    let a = run();
    assert_eq!(a.summary.len(), Strategy::ALL.len() * cfg.ndcg_n.len());
    assert!(a.warnings.iter().any(|w| w.contains("d9")));
    assert!(a.summary.iter().all(|r| r.queries == 5));
    let b = run();
    assert_eq!(a.summary_csv(), b.summary_csv());
    assert_eq!(a.per_query_csv(), b.per_query_csv());
}
