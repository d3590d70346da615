//! C ABI over the `cuspcount` engine.
//!
//! An engine is an opaque handle created by [`cusp_engine_new`] or
//! [`cusp_engine_new_with_options`] and released with [`cusp_engine_free`]. Exact results
//! are written as NUL-terminated decimal strings (`p/q` for non-integral Φ values) into
//! caller-owned buffers. Every call returns a [`CuspStatus`]; on failure the message is
//! kept per thread and can be read with [`cusp_last_error`].
//!
//! A handle may be shared between threads for concurrent queries. It must not be used
//! after `cusp_engine_free`.
//!
//! Computations run on a helper thread with a large stack, since reconstruction recurses
//! through lower-degree invariants and foreign threads often have small stacks.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use cuspcount::gw_base::{ProviderConfig, ProviderMode};
use cuspcount::store::{self, format_rational};
use cuspcount::{CuspCounter, Error};

const STACK_BYTES: usize = 256 << 20;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspStatus {
    Ok = 0,
    NullPointer = 1,
    /// A precondition failed: dimension constraint, unsupported level, bad path text.
    InvalidArgument = 2,
    /// The output buffer cannot hold the result; `required` holds the needed size.
    BufferTooSmall = 3,
    /// Internal consistency failure: oracle or table mismatch, non-integral count.
    Engine = 4,
    /// Cache or table file rejected: version, fingerprint, parse, conflicting key.
    Cache = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuspProvider {
    Engine = 0,
    Table = 1,
    Hybrid = 2,
}

/// Opaque engine handle.
pub struct CuspEngine {
    counter: CuspCounter,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CuspStatus {
    match e {
        e if e.is_validation() => CuspStatus::InvalidArgument,
        Error::Io { .. } => CuspStatus::Io,
        Error::VersionMismatch { .. }
        | Error::FingerprintMismatch { .. }
        | Error::Parse { .. }
        | Error::DuplicateKey { .. } => CuspStatus::Cache,
        _ => CuspStatus::Engine,
    }
}

fn fail(status: CuspStatus, message: String) -> CuspStatus {
    set_last_error(message);
    status
}

/// Runs `f` on a large-stack thread and converts errors and panics to a status.
fn guarded<T, F>(f: F) -> Result<T, CuspStatus>
where
    T: Send,
    F: FnOnce() -> cuspcount::Result<T> + Send,
{
    let joined = std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(STACK_BYTES)
            .spawn_scoped(scope, f)
            .map(|h| h.join())
    });
    match joined {
        Ok(Ok(Ok(v))) => Ok(v),
        Ok(Ok(Err(e))) => Err(fail(status_of(&e), e.to_string())),
        Ok(Err(panic)) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(fail(CuspStatus::Panic, format!("internal panic: {msg}")))
        }
        Err(e) => Err(fail(
            CuspStatus::Panic,
            format!("cannot start worker thread: {e}"),
        )),
    }
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, CuspStatus> {
    if p.is_null() {
        return Err(fail(CuspStatus::NullPointer, "path is NULL".into()));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => Err(fail(
            CuspStatus::InvalidArgument,
            "path is not UTF-8".into(),
        )),
    }
}

unsafe fn engine_ref<'a>(engine: *const CuspEngine) -> Result<&'a CuspEngine, CuspStatus> {
    engine
        .as_ref()
        .ok_or_else(|| fail(CuspStatus::NullPointer, "engine is NULL".into()))
}

/// Copies `text` and a NUL into `buf`. `required`, when not NULL, receives the size
/// needed including the NUL, whether or not the copy happened.
unsafe fn write_out(text: &str, buf: *mut c_char, len: usize, required: *mut usize) -> CuspStatus {
    let needed = text.len() + 1;
    if !required.is_null() {
        *required = needed;
    }
    if buf.is_null() || len < needed {
        return fail(
            CuspStatus::BufferTooSmall,
            format!("result needs {needed} bytes, buffer has {len}"),
        );
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
    *buf.add(text.len()) = 0;
    CuspStatus::Ok
}

/// Engine with the default provider (WDVV reconstruction, consistency checks on).
#[no_mangle]
pub extern "C" fn cusp_engine_new() -> *mut CuspEngine {
    Box::into_raw(Box::new(CuspEngine {
        counter: CuspCounter::default(),
    }))
}

/// Engine with an explicit provider. `table_path` may be NULL for the `Engine` provider
/// and is required otherwise. On success `*out` receives the handle.
///
/// # Safety
/// `table_path` is NULL or a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_new_with_options(
    provider: CuspProvider,
    table_path: *const c_char,
    consistency_check: bool,
    allow_degree_one: bool,
    out: *mut *mut CuspEngine,
) -> CuspStatus {
    if out.is_null() {
        return fail(CuspStatus::NullPointer, "out is NULL".into());
    }
    *out = std::ptr::null_mut();
    let mode = match provider {
        CuspProvider::Engine => ProviderMode::Engine,
        CuspProvider::Table => ProviderMode::Table,
        CuspProvider::Hybrid => ProviderMode::Hybrid,
    };
    let table_path = if table_path.is_null() {
        None
    } else {
        match path_arg(table_path) {
            Ok(p) => Some(p),
            Err(s) => return s,
        }
    };
    if mode != ProviderMode::Engine && table_path.is_none() {
        return fail(
            CuspStatus::InvalidArgument,
            "table and hybrid providers need a table path".into(),
        );
    }
    let config = ProviderConfig {
        mode,
        table_path,
        consistency_check,
    };
    match guarded(move || CuspCounter::with_config(config)) {
        Ok(counter) => {
            let counter = counter.allow_degree_one(allow_degree_one);
            *out = Box::into_raw(Box::new(CuspEngine { counter }));
            CuspStatus::Ok
        }
        Err(s) => s,
    }
}

/// Releases an engine. NULL is ignored.
///
/// # Safety
/// `engine` is NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_free(engine: *mut CuspEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Writes `C_d(r, s)` as a decimal integer.
///
/// # Safety
/// `engine` is a live handle; `buf` points to `len` writable bytes or is NULL;
/// `required` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_count(
    engine: *const CuspEngine,
    d: u32,
    r: u32,
    s: u32,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match guarded(|| engine.counter.cusp_count(d, r, s)) {
        Ok(res) => write_out(&res.count.to_string(), buf, len, required),
        Err(s) => s,
    }
}

/// Writes the Euler class and boundary term of `C_d(r, s) = e − B` as `"<e> <B>"`.
///
/// # Safety
/// As for [`cusp_engine_count`].
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_count_parts(
    engine: *const CuspEngine,
    d: u32,
    r: u32,
    s: u32,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match guarded(|| engine.counter.cusp_count(d, r, s)) {
        Ok(res) => {
            let text = format!(
                "{} {}",
                format_rational(&res.euler),
                format_rational(&res.boundary)
            );
            write_out(&text, buf, len, required)
        }
        Err(s) => s,
    }
}

/// Writes `N_d(r, s, θ)` as a decimal integer.
///
/// # Safety
/// As for [`cusp_engine_count`].
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_base_number(
    engine: *const CuspEngine,
    d: u32,
    r: u32,
    s: u32,
    theta: u32,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match guarded(|| engine.counter.taut().base_number(d, r, s, theta)) {
        Ok(v) => write_out(&v.to_string(), buf, len, required),
        Err(s) => s,
    }
}

/// Writes `Φ_d(i, j, r, s, θ)` as an integer or reduced fraction `p/q`.
///
/// # Safety
/// As for [`cusp_engine_count`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn cusp_engine_phi(
    engine: *const CuspEngine,
    d: u32,
    i: u32,
    j: u32,
    r: u32,
    s: u32,
    theta: u32,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    match guarded(|| engine.counter.taut().phi(d, i, j, r, s, theta)) {
        Ok(v) => write_out(&format_rational(&v), buf, len, required),
        Err(s) => s,
    }
}

/// Seeds the engine's memo tables from a cache file.
///
/// # Safety
/// `engine` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_load_cache(
    engine: *const CuspEngine,
    path: *const c_char,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| engine.counter.import_cache(&store::load(&path)?)) {
        Ok(()) => CuspStatus::Ok,
        Err(s) => s,
    }
}

/// Writes the engine's memo tables to a cache file atomically.
///
/// # Safety
/// `engine` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cusp_engine_save_cache(
    engine: *const CuspEngine,
    path: *const c_char,
) -> CuspStatus {
    let engine = match engine_ref(engine) {
        Ok(e) => e,
        Err(s) => return s,
    };
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| store::save(&path, &engine.counter.export_cache())) {
        Ok(()) => CuspStatus::Ok,
        Err(s) => s,
    }
}

/// Copies the calling thread's most recent error message. Writes an empty string when
/// there is none.
///
/// # Safety
/// `buf` points to `len` writable bytes or is NULL; `required` is NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn cusp_last_error(
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> CuspStatus {
    let message = LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| c.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    // Do not let a short buffer overwrite the message being read.
    let needed = message.len() + 1;
    if !required.is_null() {
        *required = needed;
    }
    if buf.is_null() || len < needed {
        return CuspStatus::BufferTooSmall;
    }
    write_out(&message, buf, len, required)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cusp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
