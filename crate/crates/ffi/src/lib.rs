//! C ABI for `wafom-nets`.
//!
//! Objects cross the boundary as opaque handles created by the `parse`, `read`,
//! `random` and `search` functions and released with the matching `wn_*_free`. Every fallible call returns a
//! [`WnStatus`]; on failure [`wn_last_error_message`] describes the error for the
//! calling thread. Strings returned by the library are released with [`wn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use wafom_nets::merit::{lower_bound_n, search_net, trial_matrices, MeritReport, SearchConfig, Target};
use wafom_nets::nets::{
    min_dual_weight, parse_matrices, read_matrices, write_matrices, DualMode, GeneratingMatrices,
};
use wafom_nets::weights::WeightSequence;
use wafom_nets::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Infeasible = 4,
    Io = 5,
    TargetNotMet = 6,
    Panic = 7,
}

/// Weight sequence handle.
pub struct WnWeights {
    inner: WeightSequence,
}

/// Generating matrices handle.
pub struct WnMatrices {
    inner: GeneratingMatrices,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WnShape {
    pub base: u32,
    pub dim: usize,
    pub precision: usize,
    pub log_size: usize,
}

/// Merit of a net. `delta_truncated` is NaN when no dual element in the box weighs at
/// most `floor`. Bounds are given linearly and as natural logarithms.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WnMeritReport {
    pub truncated_wafom: f64,
    pub delta: f64,
    pub delta_truncated: f64,
    pub floor: f64,
    pub tail_bound: f64,
    pub wce_bound: f64,
    pub ln_tail_bound: f64,
    pub ln_wce_bound: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WnTargetKind {
    MinWafom = 0,
    Delta = 1,
    MaxDelta = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WnStatus {
    match e {
        Error::MatrixFormat { .. } | Error::WeightRule(_) => WnStatus::Parse,
        Error::EnumerationCap { .. } | Error::Infeasible(_) => WnStatus::Infeasible,
        Error::Io(_) => WnStatus::Io,
        _ => WnStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (WnStatus, String)>) -> WnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            WnStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WnStatus::Panic
        }
    }
}

fn lib(e: Error) -> (WnStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (WnStatus, String) {
    (WnStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (WnStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (WnStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (WnStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (WnStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn report_to_c(r: &MeritReport) -> WnMeritReport {
    WnMeritReport {
        truncated_wafom: r.truncated_wafom,
        delta: r.delta,
        delta_truncated: r.delta_truncated.unwrap_or(f64::NAN),
        floor: r.floor,
        tail_bound: r.tail_bound.value(),
        wce_bound: r.wce_bound.value(),
        ln_tail_bound: r.tail_bound.ln(),
        ln_wce_bound: r.wce_bound.ln(),
    }
}

/// Message of the last failed call on this thread; empty after a success. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn wn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a weight rule such as `power:a=1,r=1,c=0` for base `base`.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_weights_parse(spec: *const c_char, base: u32, out: *mut *mut WnWeights) -> WnStatus {
    guard(|| {
        let spec = c_str(spec, "spec")?;
        let inner = WeightSequence::parse(spec, base).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(WnWeights { inner })), "out")
    })
}

/// # Safety
/// `w` must be null or a handle from [`wn_weights_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wn_weights_free(w: *mut WnWeights) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Matrices of trial `trial` under `seed`, with uniform independent entries.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_random(
    base: u32,
    dim: usize,
    precision: usize,
    log_size: usize,
    seed: u64,
    trial: u64,
    out: *mut *mut WnMatrices,
) -> WnStatus {
    guard(|| {
        let inner = trial_matrices(base, dim, precision, log_size, seed, trial).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(WnMatrices { inner })), "out")
    })
}

/// Parses the text matrix format (`b s l d` header, then `s l` rows of `d` digits).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_parse(text: *const c_char, out: *mut *mut WnMatrices) -> WnStatus {
    guard(|| {
        let inner = parse_matrices(c_str(text, "text")?).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(WnMatrices { inner })), "out")
    })
}

/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_read(path: *const c_char, out: *mut *mut WnMatrices) -> WnStatus {
    guard(|| {
        let inner = read_matrices(Path::new(c_str(path, "path")?)).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(WnMatrices { inner })), "out")
    })
}

/// Text form of the matrices; release with [`wn_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_write(m: *const WnMatrices, out: *mut *mut c_char) -> WnStatus {
    guard(|| {
        let m = deref(m, "matrices")?;
        let text = CString::new(write_matrices(&m.inner)).expect("digits only");
        write_out(out, text.into_raw(), "out")
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_shape(m: *const WnMatrices, out: *mut WnShape) -> WnStatus {
    guard(|| {
        let g = &deref(m, "matrices")?.inner;
        let shape = WnShape {
            base: g.base() as u32,
            dim: g.dim(),
            precision: g.precision(),
            log_size: g.log_size(),
        };
        write_out(out, shape, "out")
    })
}

/// # Safety
/// `m` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wn_matrices_free(m: *mut WnMatrices) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Merit report of a net under Walsh-space weights.
///
/// # Safety
/// `m` and `w` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_merit(m: *const WnMatrices, w: *const WnWeights, out: *mut WnMeritReport) -> WnStatus {
    guard(|| {
        let g = &deref(m, "matrices")?.inner;
        let seq = &deref(w, "weights")?.inner;
        let report = MeritReport::compute(g, seq).map_err(lib)?;
        write_out(out, report_to_c(&report), "out")
    })
}

/// Minimal modified Dick weight of the dual net, floor included.
///
/// # Safety
/// `m` and `w` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_min_dual_weight(m: *const WnMatrices, w: *const WnWeights, out: *mut f64) -> WnStatus {
    guard(|| {
        let g = &deref(m, "matrices")?.inner;
        let seq = &deref(w, "weights")?.inner;
        let a = seq.walsh_weights(g.dim()).map_err(lib)?;
        let dw = min_dual_weight(g, &a, DualMode::Auto).map_err(lib)?;
        write_out(out, dw.delta, "out")
    })
}

/// Natural logarithm of the lower bound on the n-th minimal error in dimension `dim`.
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_lower_bound_n_ln(n: u64, dim: usize, w: *const WnWeights, out: *mut f64) -> WnStatus {
    guard(|| {
        let seq = &deref(w, "weights")?.inner;
        let a = seq.walsh_weights(dim).map_err(lib)?;
        let lb = lower_bound_n(n, &a, seq.base() as u32).map_err(lib)?;
        write_out(out, lb.ln(), "out")
    })
}

/// Random search. `target_value` is the threshold `M` for [`WnTargetKind::Delta`] and is
/// ignored otherwise. The best net and its report are written even when the threshold
/// is missed, in which case [`WnStatus::TargetNotMet`] is returned.
///
/// # Safety
/// `w` must be a live handle; `out_matrices` and `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wn_search(
    dim: usize,
    log_size: usize,
    precision: usize,
    w: *const WnWeights,
    target_kind: WnTargetKind,
    target_value: f64,
    trials: u64,
    seed: u64,
    out_matrices: *mut *mut WnMatrices,
    out_report: *mut WnMeritReport,
) -> WnStatus {
    guard(|| {
        let seq = deref(w, "weights")?.inner.clone();
        if out_matrices.is_null() || out_report.is_null() {
            return Err(null("output"));
        }
        let target = match target_kind {
            WnTargetKind::MinWafom => Target::MinWafom,
            WnTargetKind::Delta => Target::Delta(target_value),
            WnTargetKind::MaxDelta => Target::MaxDelta,
        };
        let outcome = search_net(&SearchConfig {
            dim,
            log_size,
            precision,
            weights: seq,
            target,
            trials,
            seed,
        })
        .map_err(lib)?;
        write_out(out_report, report_to_c(&outcome.report), "out_report")?;
        write_out(out_matrices, Box::into_raw(Box::new(WnMatrices { inner: outcome.matrices })), "out_matrices")?;
        if outcome.target_met {
            Ok(())
        } else {
            Err((WnStatus::TargetNotMet, format!("best delta {} below target", outcome.report.delta)))
        }
    })
}
