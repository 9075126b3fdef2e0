use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use vis_enrich_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ve_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn tconorm_and_ndcg() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(ve_tconorm(VeTconorm::ProbabilisticSum, 0.6, 0.5, &mut out), VeStatus::Ok);
        assert!((out - 0.8).abs() < 1e-12);
        assert_eq!(ve_tconorm(VeTconorm::BoundedSum, 0.7, 0.7, &mut out), VeStatus::Ok);
        assert_eq!(out, 1.0);
        assert_eq!(ve_tconorm(VeTconorm::Max, 1.5, 0.0, &mut out), VeStatus::InvalidArgument);
        assert!(last_error().contains("1.5"));
        assert_eq!(ve_tconorm(VeTconorm::Max, 0.1, 0.2, ptr::null_mut()), VeStatus::NullPointer);

        let ranked = [0u8, 1, 2];
        let judged = [2u8, 1, 0];
        assert_eq!(ve_ndcg(ranked.as_ptr(), 3, judged.as_ptr(), 3, 3, &mut out), VeStatus::Ok);
        assert!((out - 0.5869).abs() < 1e-3);
        assert_eq!(ve_ndcg(ptr::null(), 0, ptr::null(), 0, 5, &mut out), VeStatus::Ok);
        assert_eq!(out, 0.0);
        assert_eq!(ve_ndcg(ranked.as_ptr(), 3, judged.as_ptr(), 3, 0, &mut out), VeStatus::InvalidArgument);
    }
}

#[test]
fn lattice_handle() {
    let lat = ve_lattice_bundled();
    assert!(!lat.is_null());
    let mut rel = VeRelation::Unrelated;
    let mut v = 0.0;
    let mut n = 0usize;
    unsafe {
        assert_eq!(ve_lattice_len(lat, &mut n), VeStatus::Ok);
        assert!(n > 10);
        assert_eq!(ve_lattice_relation(lat, c("flower").as_ptr(), c("rose").as_ptr(), &mut rel), VeStatus::Ok);
        assert_eq!(rel, VeRelation::Generic);
        assert_eq!(ve_lattice_epsilon(lat, c("rose").as_ptr(), c("flower").as_ptr(), &mut v), VeStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(ve_mu(lat, c("flower").as_ptr(), c("rose").as_ptr(), 0.9, &mut v), VeStatus::Ok);
        assert_eq!(v, 0.9);
        assert_eq!(
            ve_mu(lat, c("unicorn").as_ptr(), c("rose").as_ptr(), 0.9, &mut v),
            VeStatus::UnknownConcept
        );
        assert!(last_error().contains("unicorn"));
        ve_lattice_free(lat);

        let mut own = ptr::null_mut();
        assert_eq!(ve_lattice_load(c("a\t\t\nb\ta\t\n").as_ptr(), &mut own), VeStatus::Ok);
        assert_eq!(ve_lattice_relation(own, c("b").as_ptr(), c("a").as_ptr(), &mut rel), VeStatus::Ok);
        assert_eq!(rel, VeRelation::Specific);
        ve_lattice_free(own);
        assert_eq!(ve_lattice_load(c("a\tb\t\nb\ta\t\n").as_ptr(), &mut own), VeStatus::Parse);
        ve_lattice_free(ptr::null_mut());
    }
}

#[test]
fn vis_canonical_text() {
    let mut out = ptr::null_mut();
    unsafe {
        let src = c("vis vo2 { sem: sky@0.5; color: blue=0.7; texture: uniform; spa: ; }\nvis vo1 { sem: rose@0.8; color: ; texture: ; spa: near(vo2); }\n");
        assert_eq!(ve_vis_canonicalize(src.as_ptr(), &mut out), VeStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        ve_string_free(out);
        assert!(text.starts_with("vis vo1 "), "{text}");
        assert!(text.contains("texture: uniform=1.00"), "{text}");
        assert_eq!(ve_vis_canonicalize(c("vis {").as_ptr(), &mut out), VeStatus::Parse);
        assert_eq!(ve_vis_canonicalize(ptr::null(), &mut out), VeStatus::NullPointer);
    }
}

#[test]
fn index_search_over_store_file() {
    let dir = tempfile::tempdir().unwrap();
    let page = |alt: &str| format!("<html><body><img src=\"x.jpg\" alt=\"{alt}\"></body></html>");
    std::fs::write(dir.path().join("a.html"), page("red rose")).unwrap();
    std::fs::write(dir.path().join("a.vis"), "vis vo1 { sem: flower@0.8; color: red=0.5; texture: ; spa: ; }\n").unwrap();
    std::fs::write(dir.path().join("b.html"), page("")).unwrap();
    std::fs::write(dir.path().join("b.vis"), "vis vo1 { sem: tower@0.8; color: grey=0.5; texture: ; spa: ; }\n").unwrap();
    let cfg = vis_enrich::config::PipelineConfig::default();
    let store = vis_enrich::pipeline::ingest(dir.path(), &cfg).unwrap().store;
    let store = vis_enrich::pipeline::enrich(&store, &vis_enrich::lattice::SemanticLattice::bundled(), &cfg).unwrap();
    let path = dir.path().join("index.jsonl");
    store.save(&path).unwrap();

    let mut index = ptr::null_mut();
    let mut out = ptr::null_mut();
    let mut n = 0usize;
    unsafe {
        assert_eq!(ve_index_open(c(path.to_str().unwrap()).as_ptr(), &mut index), VeStatus::Ok);
        assert_eq!(ve_index_len(index, &mut n), VeStatus::Ok);
        assert_eq!(n, 2);
        assert_eq!(
            ve_index_search(index, c("vis+cx").as_ptr(), c("red rose").as_ptr(), 5, &mut out),
            VeStatus::Ok
        );
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        ve_string_free(out);
        assert_eq!(json[0]["doc_id"], "a");
        assert_eq!(
            ve_index_search(index, c("sem").as_ptr(), c("rose").as_ptr(), 5, &mut out),
            VeStatus::InvalidArgument
        );
        assert_eq!(
            ve_index_search(index, c("vis").as_ptr(), c("asdf qwer").as_ptr(), 5, &mut out),
            VeStatus::InvalidArgument
        );
        ve_index_free(index);
        assert_eq!(ve_index_open(c("/nonexistent/index.jsonl").as_ptr(), &mut index), VeStatus::Io);
    }
}

#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"vis_enrich.h\"\nint main(void) { double v; return ve_tconorm(VE_TCONORM_MAX, 0.1, 0.2, &v) == VE_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
}
