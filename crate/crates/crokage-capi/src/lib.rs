//! C ABI over the crokage engine: open artifacts once, run JSON searches,
//! and free everything explicitly. All functions are panic-safe.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use crokage::engine::{load_engine, EngineConfig, EngineHandle, EnginePaths, QueryRequest};
use crokage::error::Error;

/// Status codes mirroring the CLI exit classes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrokageStatus {
    Ok = 0,
    /// Bad argument: null pointer, non-UTF-8 text, invalid query or config.
    InvalidArgument = 2,
    /// Artifact missing, corrupt, or mismatched.
    ArtifactError = 3,
    /// Internal failure (including caught panics).
    InternalError = 4,
}

/// Opaque engine handle; create with `crokage_engine_open`, release with
/// `crokage_engine_close`.
pub struct CrokageEngine {
    inner: EngineHandle,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let stored = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = stored);
}

fn status_of(error: &Error) -> CrokageStatus {
    match error.exit_code() {
        2 => CrokageStatus::InvalidArgument,
        3 => CrokageStatus::ArtifactError,
        _ => CrokageStatus::InternalError,
    }
}

fn fail(error: &Error) -> CrokageStatus {
    set_last_error(&error.to_string());
    status_of(error)
}

fn catch(body: impl FnOnce() -> CrokageStatus) -> CrokageStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            CrokageStatus::InternalError
        }
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for reads.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, CrokageStatus> {
    if ptr.is_null() {
        set_last_error(&format!("{what} must not be null"));
        return Err(CrokageStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        CrokageStatus::InvalidArgument
    })
}

/// The message of the last error raised on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn crokage_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Loads the corpus and index artifacts (and word vectors unless
/// `vectors_path` is null, which disables the semantic factor) and writes an
/// engine handle to `out_engine`.
///
/// # Safety
/// `corpus_path` and `indices_path` must be NUL-terminated strings;
/// `vectors_path` may be null; `out_engine` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crokage_engine_open(
    corpus_path: *const c_char,
    indices_path: *const c_char,
    vectors_path: *const c_char,
    out_engine: *mut *mut CrokageEngine,
) -> CrokageStatus {
    catch(|| {
        if out_engine.is_null() {
            set_last_error("out_engine must not be null");
            return CrokageStatus::InvalidArgument;
        }
        *out_engine = ptr::null_mut();
        let corpus = match required_str(corpus_path, "corpus_path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let indices = match required_str(indices_path, "indices_path") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let vectors = if vectors_path.is_null() {
            None
        } else {
            match required_str(vectors_path, "vectors_path") {
                Ok(s) => Some(PathBuf::from(s)),
                Err(status) => return status,
            }
        };
        let paths = EnginePaths {
            corpus: PathBuf::from(corpus),
            indices: PathBuf::from(indices),
            vectors,
        };
        let config = EngineConfig {
            no_semantic: paths.vectors.is_none(),
            ..EngineConfig::default()
        };
        match load_engine(&paths, config) {
            Ok(inner) => {
                *out_engine = Box::into_raw(Box::new(CrokageEngine { inner }));
                CrokageStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases an engine. Passing null is a no-op.
///
/// # Safety
/// `engine` must be null or a pointer returned by `crokage_engine_open`
/// that has not been closed yet.
#[no_mangle]
pub unsafe extern "C" fn crokage_engine_close(engine: *mut CrokageEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Number of answers in the loaded corpus; 0 for a null engine.
///
/// # Safety
/// `engine` must be null or a live pointer from `crokage_engine_open`.
#[no_mangle]
pub unsafe extern "C" fn crokage_engine_doc_count(engine: *const CrokageEngine) -> u64 {
    if engine.is_null() {
        return 0;
    }
    (*engine).inner.doc_count() as u64
}

/// Runs one query and writes a heap-allocated JSON response (the same shape
/// the HTTP endpoint returns) to `out_json`. Free it with
/// `crokage_string_free`.
///
/// # Safety
/// `engine` must be a live pointer from `crokage_engine_open`; `query` must
/// be a NUL-terminated string; `out_json` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn crokage_engine_search_json(
    engine: *const CrokageEngine,
    query: *const c_char,
    top_k: u32,
    compose: bool,
    out_json: *mut *mut c_char,
) -> CrokageStatus {
    catch(|| {
        if out_json.is_null() {
            set_last_error("out_json must not be null");
            return CrokageStatus::InvalidArgument;
        }
        *out_json = ptr::null_mut();
        if engine.is_null() {
            set_last_error("engine must not be null");
            return CrokageStatus::InvalidArgument;
        }
        let query = match required_str(query, "query") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let request = QueryRequest {
            query: query.to_string(),
            top_k: top_k as usize,
            compose,
            solutions: None,
            include_timings: false,
        };
        let response = match (*engine).inner.handle_query(&request) {
            Ok(response) => response,
            Err(e) => return fail(&e),
        };
        let json = match serde_json::to_string(&response) {
            Ok(json) => json,
            Err(e) => {
                set_last_error(&format!("response serialization failed: {e}"));
                return CrokageStatus::InternalError;
            }
        };
        match CString::new(json) {
            Ok(cstring) => {
                *out_json = cstring.into_raw();
                CrokageStatus::Ok
            }
            Err(_) => {
                set_last_error("response contained an interior NUL byte");
                CrokageStatus::InternalError
            }
        }
    })
}

/// Frees a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer produced by `crokage_engine_search_json`
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn crokage_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
