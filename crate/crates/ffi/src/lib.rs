//! C ABI for the `fockperm` engine.
//!
//! Matrices live behind an opaque [`FockpermMatrix`] handle created by one of
//! the `fockperm_matrix_*` constructors and released with
//! [`fockperm_matrix_free`]. Every fallible call returns a [`FockpermStatus`];
//! on failure a description is available from
//! [`fockperm_last_error_message`] on the same thread. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fockperm::estimator::{estimate_permanent_kan, EstimatorConfig};
use fockperm::fock::{concurrence_sum, k_concurrence, transition_amplitude};
use fockperm::permanent::permanent;
use fockperm::runtime::{runtime_estimate, ExpansionSide};
use fockperm::{
    haar_random_unitary, Algorithm, Complex64, ComplexMatrix, Error, ExactConfig, OccupationVector,
};

/// Opaque matrix handle.
pub struct FockpermMatrix {
    inner: ComplexMatrix,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockpermStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Dimension = 3,
    Guard = 4,
    Invalid = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockpermAlgorithm {
    Naive = 0,
    RyserGray = 1,
    Glynn = 2,
    KanGeneralized = 3,
    KanReduced = 4,
    GlynnGeneralized = 5,
}

impl From<FockpermAlgorithm> for Algorithm {
    fn from(a: FockpermAlgorithm) -> Self {
        match a {
            FockpermAlgorithm::Naive => Algorithm::Naive,
            FockpermAlgorithm::RyserGray => Algorithm::RyserGray,
            FockpermAlgorithm::Glynn => Algorithm::Glynn,
            FockpermAlgorithm::KanGeneralized => Algorithm::KanGeneralized,
            FockpermAlgorithm::KanReduced => Algorithm::KanReduced,
            FockpermAlgorithm::GlynnGeneralized => Algorithm::GlynnGeneralized,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FockpermPermanent {
    pub re: f64,
    pub im: f64,
    pub terms: u64,
    pub wall_ns: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FockpermEstimate {
    pub re: f64,
    pub im: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Term-count model; counts saturate at `UINT64_MAX`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FockpermRuntime {
    pub t_forward: u64,
    pub t_backward: u64,
    pub t_min: u64,
    pub concurrence_form: f64,
    /// 0 when expanding the input vector, 1 for the output vector.
    pub expand_output: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FockpermStatus {
    match e {
        Error::Parse(_) | Error::Io(_) => FockpermStatus::Parse,
        Error::Dimension(_) | Error::TotalMismatch { .. } => FockpermStatus::Dimension,
        Error::Guard { .. } => FockpermStatus::Guard,
        Error::Invalid(_) | Error::InsufficientCutoff { .. } => FockpermStatus::Invalid,
    }
}

struct Fail(FockpermStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FockpermStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FockpermStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FockpermStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FockpermStatus::Panic
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const FockpermMatrix) -> Result<&'a ComplexMatrix, Fail> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("matrix"))
}

unsafe fn occupation(p: *const u32, len: usize, what: &str) -> Result<OccupationVector, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(OccupationVector::new(
        slice::from_raw_parts(p, len).to_vec(),
    ))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

fn need<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(null("output pointer"))
    } else {
        Ok(())
    }
}

unsafe fn store_matrix(out: *mut *mut FockpermMatrix, inner: ComplexMatrix) -> Result<(), Fail> {
    write_out(out, Box::into_raw(Box::new(FockpermMatrix { inner })))
}

/// Builds a `dim x dim` matrix from `2 * dim * dim` interleaved row-major
/// `(re, im)` values.
///
/// # Safety
/// `re_im` must point to `2 * dim * dim` readable doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_new(
    dim: usize,
    re_im: *const f64,
    out: *mut *mut FockpermMatrix,
) -> FockpermStatus {
    guard(|| {
        if re_im.is_null() {
            return Err(null("data"));
        }
        let len = dim
            .checked_mul(dim)
            .and_then(|x| x.checked_mul(2))
            .ok_or_else(|| Fail(FockpermStatus::Dimension, "dimension overflows".into()))?;
        let raw = slice::from_raw_parts(re_im, len);
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Fail(
                FockpermStatus::Invalid,
                "matrix entries must be finite".into(),
            ));
        }
        let data = raw
            .chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        store_matrix(out, ComplexMatrix::from_row_major(dim, data)?)
    })
}

/// Parses the matrix JSON format `{"dim": M, "data": [[re, im], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_from_json(
    json: *const c_char,
    out: *mut *mut FockpermMatrix,
) -> FockpermStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(FockpermStatus::Parse, e.to_string()))?;
        let m: ComplexMatrix = serde_json::from_str(text).map_err(Error::from)?;
        store_matrix(out, m)
    })
}

/// Haar-random unitary, deterministic in `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_haar(
    dim: usize,
    seed: u64,
    out: *mut *mut FockpermMatrix,
) -> FockpermStatus {
    guard(|| store_matrix(out, haar_random_unitary(dim, seed)?))
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `m` must come from a `fockperm_matrix_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_free(m: *mut FockpermMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_dim(m: *const FockpermMatrix) -> usize {
    m.as_ref().map_or(0, |h| h.inner.dim())
}

/// Reads entry `(row, col)`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_matrix_get(
    m: *const FockpermMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> FockpermStatus {
    guard(|| {
        let a = matrix_ref(m)?;
        if row >= a.dim() || col >= a.dim() {
            return Err(Fail(
                FockpermStatus::Dimension,
                format!("entry ({row}, {col}) out of range"),
            ));
        }
        let z = a.get(row, col);
        write_out(re, z.re)?;
        write_out(im, z.im)
    })
}

/// `Per([A]_{n,m})`; `n` and `m` each hold `modes` counts.
///
/// # Safety
/// `a` must be a live handle, `n` and `m` must point to `modes` readable
/// counts and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_permanent(
    a: *const FockpermMatrix,
    n: *const u32,
    m: *const u32,
    modes: usize,
    algorithm: FockpermAlgorithm,
    threads: usize,
    out: *mut FockpermPermanent,
) -> FockpermStatus {
    guard(|| {
        need(out)?;
        let a = matrix_ref(a)?;
        let (n, m) = (occupation(n, modes, "n")?, occupation(m, modes, "m")?);
        let r = permanent(a, &n, &m, algorithm.into(), &ExactConfig::parallel(threads))?;
        write_out(
            out,
            FockpermPermanent {
                re: r.value.re,
                im: r.value.im,
                terms: r.terms_evaluated,
                wall_ns: u64::try_from(r.wall_time.as_nanos()).unwrap_or(u64::MAX),
            },
        )
    })
}

/// `<m|U|n>`.
///
/// # Safety
/// As for [`fockperm_permanent`]; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_amplitude(
    u: *const FockpermMatrix,
    n: *const u32,
    m: *const u32,
    modes: usize,
    algorithm: FockpermAlgorithm,
    re: *mut f64,
    im: *mut f64,
) -> FockpermStatus {
    guard(|| {
        need(re)?;
        need(im)?;
        let u = matrix_ref(u)?;
        let (n, m) = (occupation(n, modes, "n")?, occupation(m, modes, "m")?);
        let z = transition_amplitude(u, &n, &m, algorithm.into(), &ExactConfig::default())?;
        write_out(re, z.re)?;
        write_out(im, z.im)
    })
}

/// Monte-Carlo estimate of `Per([A]_{n,m})` from binomial digit sampling.
///
/// # Safety
/// As for [`fockperm_permanent`].
#[no_mangle]
pub unsafe extern "C" fn fockperm_estimate(
    a: *const FockpermMatrix,
    n: *const u32,
    m: *const u32,
    modes: usize,
    samples: u64,
    seed: u64,
    out: *mut FockpermEstimate,
) -> FockpermStatus {
    guard(|| {
        need(out)?;
        let a = matrix_ref(a)?;
        let (n, m) = (occupation(n, modes, "n")?, occupation(m, modes, "m")?);
        let r = estimate_permanent_kan(a, &n, &m, &EstimatorConfig::new(samples, seed))?;
        write_out(
            out,
            FockpermEstimate {
                re: r.estimate.re,
                im: r.estimate.im,
                std_error: r.std_error,
                samples: r.samples,
            },
        )
    })
}

/// `C_S(n)`.
///
/// # Safety
/// `n` must point to `modes` counts and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_concurrence_sum(
    n: *const u32,
    modes: usize,
    out: *mut f64,
) -> FockpermStatus {
    guard(|| write_out(out, concurrence_sum(&occupation(n, modes, "n")?)))
}

/// `C_k(n)`.
///
/// # Safety
/// `n` must point to `modes` counts and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_k_concurrence(
    n: *const u32,
    modes: usize,
    k: usize,
    out: *mut f64,
) -> FockpermStatus {
    guard(|| write_out(out, k_concurrence(&occupation(n, modes, "n")?, k)?))
}

/// Term-count runtime model for `(n, m)`.
///
/// # Safety
/// `n` and `m` must point to `modes` counts and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fockperm_runtime(
    n: *const u32,
    m: *const u32,
    modes: usize,
    out: *mut FockpermRuntime,
) -> FockpermStatus {
    guard(|| {
        let (n, m) = (occupation(n, modes, "n")?, occupation(m, modes, "m")?);
        let r = runtime_estimate(&n, &m)?;
        let sat = |x: u128| u64::try_from(x).unwrap_or(u64::MAX);
        write_out(
            out,
            FockpermRuntime {
                t_forward: sat(r.t_forward),
                t_backward: sat(r.t_backward),
                t_min: sat(r.t_min),
                concurrence_form: r.concurrence_form,
                expand_output: i32::from(r.side == ExpansionSide::ExpandM),
            },
        )
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fockperm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fockperm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
