//! C ABI over the enrichment library.
//!
//! Every entry point returns a [`VeStatus`]; results go through out
//! pointers. On failure [`ve_last_error`] describes what went wrong on the
//! calling thread. Handles and strings returned by the library must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use vis_enrich::context::Lexicon;
use vis_enrich::fuzzy::{mu_cx, TConorm};
use vis_enrich::lattice::{SemRelation, SemanticLattice};
use vis_enrich::pipeline::{search_index, stored_config};
use vis_enrich::retrieval::{ndcg_from_grades, parse_query, rank, Query, SearchIndex, Strategy};
use vis_enrich::store::IndexStore;
use vis_enrich::vis::{parse_vis, serialize_vis};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    UnknownConcept = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VeTconorm {
    Max = 0,
    ProbabilisticSum = 1,
    BoundedSum = 2,
}

/// How the first concept stands with respect to the second.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VeRelation {
    Equal = 0,
    Generic = 1,
    Specific = 2,
    Unrelated = 3,
}

/// Opaque concept lattice.
pub struct VeLattice(SemanticLattice);

/// Opaque searchable index loaded from a store file.
pub struct VeIndex {
    index: Option<SearchIndex>,
    patterns: Vec<vis_enrich::context::SyntacticPattern>,
    len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

type Outcome = Result<(), (VeStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome) -> VeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VeStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VeStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (VeStatus, String)> {
    if p.is_null() {
        return Err((VeStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (VeStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn non_null<T>(p: *const T, what: &str) -> Outcome {
    if p.is_null() {
        Err((VeStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> Result<*mut c_char, (VeStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (VeStatus::InvalidArgument, "result holds a NUL byte".into()))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ve_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ve_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Applies a t-conorm to two values in `[0, 1]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_tconorm(kind: VeTconorm, a: f64, b: f64, out: *mut f64) -> VeStatus {
    guard(|| {
        non_null(out, "out")?;
        let k = match kind {
            VeTconorm::Max => TConorm::Max,
            VeTconorm::ProbabilisticSum => TConorm::ProbabilisticSum,
            VeTconorm::BoundedSum => TConorm::BoundedSum,
        };
        let v = k.try_apply(a, b).map_err(|e| (VeStatus::InvalidArgument, e.to_string()))?;
        *out = v;
        Ok(())
    })
}

/// The taxonomy shipped with the library.
#[no_mangle]
pub extern "C" fn ve_lattice_bundled() -> *mut VeLattice {
    catch_unwind(|| Box::into_raw(Box::new(VeLattice(SemanticLattice::bundled())))).unwrap_or(ptr::null_mut())
}

/// Parses a taxonomy document.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_lattice_load(source: *const c_char, out: *mut *mut VeLattice) -> VeStatus {
    guard(|| {
        non_null(out, "out")?;
        let src = text(source, "source")?;
        let l = SemanticLattice::load_taxonomy(src).map_err(|e| (VeStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(VeLattice(l)));
        Ok(())
    })
}

/// # Safety
/// `lattice` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ve_lattice_free(lattice: *mut VeLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_lattice_len(lattice: *const VeLattice, out: *mut usize) -> VeStatus {
    guard(|| {
        non_null(lattice, "lattice")?;
        non_null(out, "out")?;
        *out = (*lattice).0.len();
        Ok(())
    })
}

/// Relation of concept `a` to concept `b`.
///
/// # Safety
/// `lattice` must be a live handle, `a` and `b` NUL-terminated strings and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_lattice_relation(
    lattice: *const VeLattice,
    a: *const c_char,
    b: *const c_char,
    out: *mut VeRelation,
) -> VeStatus {
    guard(|| {
        non_null(lattice, "lattice")?;
        non_null(out, "out")?;
        let rel = (*lattice)
            .0
            .relation(text(a, "a")?, text(b, "b")?)
            .map_err(|e| (VeStatus::UnknownConcept, e.to_string()))?;
        *out = match rel {
            SemRelation::Equal => VeRelation::Equal,
            SemRelation::Generic => VeRelation::Generic,
            SemRelation::Specific => VeRelation::Specific,
            SemRelation::Unrelated => VeRelation::Unrelated,
        };
        Ok(())
    })
}

/// Path similarity between two concepts.
///
/// # Safety
/// Same contract as [`ve_lattice_relation`].
#[no_mangle]
pub unsafe extern "C" fn ve_lattice_epsilon(
    lattice: *const VeLattice,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> VeStatus {
    guard(|| {
        non_null(lattice, "lattice")?;
        non_null(out, "out")?;
        *out = (*lattice)
            .0
            .path_sim_epsilon(text(a, "a")?, text(b, "b")?)
            .map_err(|e| (VeStatus::UnknownConcept, e.to_string()))?;
        Ok(())
    })
}

/// Membership of `concept` given a source concept carrying `value`.
///
/// # Safety
/// Same contract as [`ve_lattice_relation`].
#[no_mangle]
pub unsafe extern "C" fn ve_mu(
    lattice: *const VeLattice,
    concept: *const c_char,
    source: *const c_char,
    value: f64,
    out: *mut f64,
) -> VeStatus {
    guard(|| {
        non_null(lattice, "lattice")?;
        non_null(out, "out")?;
        let v = mu_cx(&(*lattice).0, text(concept, "concept")?, text(source, "source")?, value).map_err(|e| {
            let status = match e {
                vis_enrich::fuzzy::FuzzyError::OutOfRange(_) => VeStatus::InvalidArgument,
                _ => VeStatus::UnknownConcept,
            };
            (status, e.to_string())
        })?;
        *out = v;
        Ok(())
    })
}

/// Parses VIS text and writes back its canonical form.
///
/// # Safety
/// `vis` must be a NUL-terminated string; `out` must be valid for writes.
/// The result must be released with [`ve_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ve_vis_canonicalize(vis: *const c_char, out: *mut *mut c_char) -> VeStatus {
    guard(|| {
        non_null(out, "out")?;
        let records = parse_vis(text(vis, "vis")?).map_err(|e| (VeStatus::Parse, e.to_string()))?;
        let canonical = serialize_vis(&records).map_err(|e| (VeStatus::Parse, e.to_string()))?;
        *out = owned_string(canonical)?;
        Ok(())
    })
}

/// NDCG@n of grades in rank order against every judged grade of the query.
///
/// # Safety
/// `ranked` and `judged` must point to `ranked_len` and `judged_len`
/// readable bytes (either may be null when its length is 0).
#[no_mangle]
pub unsafe extern "C" fn ve_ndcg(
    ranked: *const u8,
    ranked_len: usize,
    judged: *const u8,
    judged_len: usize,
    n: usize,
    out: *mut f64,
) -> VeStatus {
    unsafe fn slice<'a>(p: *const u8, len: usize, what: &str) -> Result<&'a [u8], (VeStatus, String)> {
        if len == 0 {
            return Ok(&[]);
        }
        non_null(p, what)?;
        Ok(std::slice::from_raw_parts(p, len))
    }
    guard(|| {
        non_null(out, "out")?;
        let ranked = slice(ranked, ranked_len, "ranked")?;
        let judged = slice(judged, judged_len, "judged")?;
        *out = ndcg_from_grades(ranked, judged, n).map_err(|e| (VeStatus::InvalidArgument, e.to_string()))?;
        Ok(())
    })
}

/// Opens an index store file for searching.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_index_open(path: *const c_char, out: *mut *mut VeIndex) -> VeStatus {
    guard(|| {
        non_null(out, "out")?;
        let store = IndexStore::load(Path::new(text(path, "path")?)).map_err(|e| (VeStatus::Io, e.to_string()))?;
        let len = store.records.len();
        let (index, patterns) = if len == 0 {
            (None, Vec::new())
        } else {
            let config = stored_config(&store).map_err(|e| (VeStatus::Parse, e.to_string()))?;
            let index = search_index(&store, config.search()).map_err(|e| (VeStatus::Parse, e.to_string()))?;
            (Some(index), config.patterns)
        };
        *out = Box::into_raw(Box::new(VeIndex { index, patterns, len }));
        Ok(())
    })
}

/// # Safety
/// `index` must come from [`ve_index_open`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ve_index_free(index: *mut VeIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// # Safety
/// `index` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ve_index_len(index: *const VeIndex, out: *mut usize) -> VeStatus {
    guard(|| {
        non_null(index, "index")?;
        non_null(out, "out")?;
        *out = (*index).len;
        Ok(())
    })
}

/// Ranks documents for `query` and writes a JSON array of
/// `{"doc_id", "score"}` objects, best first. `strategy` is one of `vis`,
/// `cx`, `vis+cx` or `tfidf`.
///
/// # Safety
/// `index` must be a live handle, `strategy` and `query` NUL-terminated
/// strings and `out` valid for writes. Release the result with
/// [`ve_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ve_index_search(
    index: *const VeIndex,
    strategy: *const c_char,
    query: *const c_char,
    k: usize,
    out: *mut *mut c_char,
) -> VeStatus {
    guard(|| {
        non_null(index, "index")?;
        non_null(out, "out")?;
        let strategy: Strategy = text(strategy, "strategy")?
            .parse()
            .map_err(|e: vis_enrich::retrieval::RetrievalError| (VeStatus::InvalidArgument, e.to_string()))?;
        let query = text(query, "query")?;
        if k == 0 {
            return Err((VeStatus::InvalidArgument, "k must be at least 1".into()));
        }
        let handle = &*index;
        let entries = match &handle.index {
            None => Vec::new(),
            Some(idx) => {
                let parsed = match (strategy, idx.taxonomy()) {
                    (Strategy::TfIdf, _) | (_, None) => Query::text_only(query),
                    (_, Some(tax)) => parse_query(query, &Lexicon::default(), tax, &handle.patterns)
                        .map_err(|e| (VeStatus::InvalidArgument, e.to_string()))?,
                };
                rank(idx, &parsed, strategy, k)
                    .map_err(|e| (VeStatus::InvalidArgument, e.to_string()))?
                    .entries
            }
        };
        let json: Vec<serde_json::Value> = entries
            .iter()
            .map(|e| serde_json::json!({ "doc_id": e.doc_id, "score": e.score }))
            .collect();
        *out = owned_string(serde_json::Value::Array(json).to_string())?;
        Ok(())
    })
}
