//! C bindings for the folksonomy library.
//!
//! Corpora and graphs cross the boundary as opaque handles that the caller
//! frees with the matching `*_free` function. Every fallible call returns a
//! [`FolkStatus`]; on failure `folk_last_error_message` describes the problem
//! for the calling thread. Strings returned through `out` parameters are
//! owned by the caller and released with `folk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io::Cursor;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use folksonomy::corpus::read_corpus;
use folksonomy::graph::{degree_ratio, export_graph, extract_subgraph, ExportFormat};
use folksonomy::normalize::porter;
use folksonomy::pipeline::{build, resolve_query, PipelineConfig};
use folksonomy::{
    ConceptGraph, Constraint, Corpus, Error, InputFormat, NormalizerConfig, PruneConfig,
};

/// Result of a call across the C boundary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FolkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Config = 5,
    NotFound = 6,
    Panic = 7,
}

/// A loaded, deduplicated corpus.
pub struct FolkCorpus {
    corpus: Corpus,
}

/// A pruned concept graph and the normalizer that built it.
pub struct FolkGraph {
    graph: ConceptGraph,
    normalizer: NormalizerConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: FolkStatus,
    message: String,
}

impl Failure {
    fn new(status: FolkStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => FolkStatus::Io,
            Error::Malformed { .. } | Error::Artifact { .. } => FolkStatus::Parse,
            Error::Config(_) => FolkStatus::Config,
            Error::UnknownConcept(_) | Error::ConceptNotFound { .. } | Error::UnknownTerm(_) => {
                FolkStatus::NotFound
            }
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("NULs replaced"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard<F>(f: F) -> FolkStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    set_last_error(None);
    let failure = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return FolkStatus::Ok,
        Ok(Err(failure)) => failure,
        Err(_) => Failure::new(FolkStatus::Panic, "internal panic"),
    };
    set_last_error(Some(failure.message));
    failure.status
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            FolkStatus::NullArgument,
            format!("`{name}` is NULL"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(FolkStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(FolkStatus::NullArgument, format!("`{name}` is NULL")))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::new(FolkStatus::NullArgument, "`out` is NULL"))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(FolkStatus::Parse, "output contains a NUL byte"))
}

fn load_into(
    out: *mut *mut FolkCorpus,
    load: impl FnOnce() -> Result<Corpus, Failure>,
) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let corpus = load()?;
        unsafe { *out = Box::into_raw(Box::new(FolkCorpus { corpus })) };
        Ok(())
    })
}

/// Loads a corpus file. `format` is `"jsonl"`, `"tsv"` or NULL to guess
/// from the extension.
///
/// # Safety
/// `path` must be a valid C string, `format` NULL or a valid C string, and
/// `out` a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn folk_corpus_load(
    path: *const c_char,
    format: *const c_char,
    out: *mut *mut FolkCorpus,
) -> FolkStatus {
    load_into(out, || {
        let path = Path::new(str_arg(path, "path")?);
        let format = match opt_str_arg(format, "format")? {
            Some(f) => f.parse()?,
            None => InputFormat::from_path(path),
        };
        Ok(folksonomy::corpus::load_corpus(path, format)?.0)
    })
}

/// Parses a corpus held in memory; `format` is `"jsonl"` or `"tsv"`.
///
/// # Safety
/// `text` and `format` must be valid C strings and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_corpus_parse(
    text: *const c_char,
    format: *const c_char,
    out: *mut *mut FolkCorpus,
) -> FolkStatus {
    load_into(out, || {
        let text = str_arg(text, "text")?;
        let format: InputFormat = str_arg(format, "format")?.parse()?;
        Ok(read_corpus(Cursor::new(text), format)?.0)
    })
}

/// # Safety
/// `corpus` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn folk_corpus_free(corpus: *mut FolkCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of distinct records; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn folk_corpus_record_count(corpus: *const FolkCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.record_count())
}

/// Number of distinct users; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn folk_corpus_user_count(corpus: *const FolkCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.corpus.user_count())
}

/// Runs the pipeline with the default normalizer. `constraint` is
/// `"hard"`, `"soft"` or NULL for soft; `top_k` of 0 disables pruning.
///
/// # Safety
/// `corpus` must be a live handle, `constraint` NULL or a valid C string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_build(
    corpus: *const FolkCorpus,
    constraint: *const c_char,
    top_k: usize,
    epsilon: f64,
    out: *mut *mut FolkGraph,
) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let corpus = ref_arg(corpus, "corpus")?;
        let constraint = match opt_str_arg(constraint, "constraint")? {
            Some(c) => c.parse()?,
            None => Constraint::default(),
        };
        let cfg = PipelineConfig {
            constraint,
            top_k,
            epsilon,
            ..PipelineConfig::default()
        };
        let normalizer = NormalizerConfig::default();
        let built = build(&corpus.corpus, &cfg, &normalizer)?;
        let handle = FolkGraph {
            graph: built.pruned.graph,
            normalizer,
        };
        *out = Box::into_raw(Box::new(handle));
        Ok(())
    })
}

/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_free(graph: *mut FolkGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_node_count(graph: *const FolkGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_edge_count(graph: *const FolkGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// Smoothed out/in degree ratio of a normalized concept.
///
/// # Safety
/// `graph` must be a live handle, `term` a valid C string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_degree_ratio(
    graph: *const FolkGraph,
    term: *const c_char,
    epsilon: f64,
    out: *mut f64,
) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let graph = ref_arg(graph, "graph")?;
        let term = str_arg(term, "term")?;
        let cfg = PruneConfig {
            epsilon,
            ..PruneConfig::default()
        };
        *out = degree_ratio(&graph.graph, term, &cfg)?;
        Ok(())
    })
}

/// Serializes the whole graph as `"dot"`, `"graphml"` or `"tsv"`.
///
/// # Safety
/// `graph` must be a live handle, `format` a valid C string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_export(
    graph: *const FolkGraph,
    format: *const c_char,
    out: *mut *mut c_char,
) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let graph = ref_arg(graph, "graph")?;
        let format: ExportFormat = str_arg(format, "format")?.parse()?;
        *out = into_c_string(export_graph(&graph.graph, format))?;
        Ok(())
    })
}

/// Extracts the subgraph around `concept` (normalized like the corpus) and
/// serializes it. `max_depth` of 0 means unbounded.
///
/// # Safety
/// `graph` must be a live handle, `concept` and `format` valid C strings,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_graph_extract(
    graph: *const FolkGraph,
    concept: *const c_char,
    max_depth: usize,
    format: *const c_char,
    out: *mut *mut c_char,
) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let graph = ref_arg(graph, "graph")?;
        let concept = str_arg(concept, "concept")?;
        let format: ExportFormat = str_arg(format, "format")?.parse()?;
        let focus = resolve_query(&graph.graph, &graph.normalizer, concept)?;
        let depth = (max_depth > 0).then_some(max_depth);
        let view = extract_subgraph(&graph.graph, focus.as_str(), depth)?;
        *out = into_c_string(export_graph(&view, format))?;
        Ok(())
    })
}

/// Porter stem of one lowercase ASCII word.
///
/// # Safety
/// `word` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn folk_stem(word: *const c_char, out: *mut *mut c_char) -> FolkStatus {
    guard(|| {
        check_out(out)?;
        let word = str_arg(word, "word")?;
        if !word.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(Failure::new(
                FolkStatus::Parse,
                format!("`{word}` is not a lowercase ASCII word"),
            ));
        }
        *out = into_c_string(porter::stem(word))?;
        Ok(())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn folk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn folk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn folk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
