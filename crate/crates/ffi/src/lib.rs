//! C ABI over `ogc`.
//!
//! Every fallible call returns an [`OgcStatus`]; on failure the message is
//! available from [`ogc_last_error`] on the same thread. Handles are opaque
//! and owned by the caller, who releases them with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use ogc::caps::{build_cap, CapSpec};
use ogc::codes::{code_from_system, min_distance, mr1_lower_bound, LinearCode};
use ogc::grassmann::{delta_point_count, Delta, GrassCtx, DEFAULT_CAP};
use ogc::hadamard::{a_matrix_formula, a_matrix_from_cap, is_hadamard, SignMatrix};
use ogc::spreads::{max_partial_spread, Method, DEFAULT_VERTEX_CAP};
use ogc::{Error, FieldSpec};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OgcStatus {
    Ok = 0,
    /// A required pointer was null or an index was out of range.
    NullOrRange = 1,
    /// Field order is not a supported prime power.
    BadField = 2,
    InvalidParams = 3,
    BudgetExceeded = 4,
    /// Arithmetic or construction failure inside the library.
    Internal = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OgcStatus {
    match e {
        Error::NotPrime(_) | Error::NotPrimePower(_) | Error::TooLarge { .. } | Error::NoIrreducibleFound { .. } => {
            OgcStatus::BadField
        }
        Error::BudgetExceeded { .. } => OgcStatus::BudgetExceeded,
        Error::InvalidParams(_)
        | Error::InvalidJ(_)
        | Error::TableMismatch { .. }
        | Error::EvenCharacteristic
        | Error::DimMismatch { .. } => OgcStatus::InvalidParams,
        _ => OgcStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (OgcStatus, String)>) -> OgcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OgcStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside ogc".into());
            OgcStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (OgcStatus, String)>;
}

impl<T> Lift<T> for ogc::Result<T> {
    fn lift(self) -> Result<T, (OgcStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (OgcStatus, String) {
    (OgcStatus::NullOrRange, format!("{what} is null"))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ogc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Code of the Plücker image of the Grassmannian `(n, k)` over `GF(q)`.
pub struct OgcCode {
    code: LinearCode,
}

/// Builds the code of the Grassmannian `(n, k)` over `GF(q)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_code_new(n: u32, k: u32, q: u64, out: *mut *mut OgcCode) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ctx = GrassCtx::from_order(n as usize, k as usize, q).lift()?;
        let system = Delta::enumerate(&ctx, DEFAULT_CAP).lift()?.embed().lift()?;
        let code = code_from_system(&system).lift()?;
        *out = Box::into_raw(Box::new(OgcCode { code }));
        Ok(())
    })
}

/// Length `N`, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle from [`ogc_code_new`].
#[no_mangle]
pub unsafe extern "C" fn ogc_code_length(code: *const OgcCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.len())
}

/// Dimension `K`, or 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle from [`ogc_code_new`].
#[no_mangle]
pub unsafe extern "C" fn ogc_code_dimension(code: *const OgcCode) -> usize {
    code.as_ref().map_or(0, |c| c.code.dim())
}

/// Exact minimum distance, enumerating at most `budget` messages.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogc_code_min_distance(code: *const OgcCode, budget: u64, out: *mut u64) -> OgcStatus {
    guard(|| {
        let c = code.as_ref().ok_or_else(|| null("code"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = min_distance(&c.code, budget).lift()?.d;
        Ok(())
    })
}

/// Writes entry `(row, col)` of the generator matrix as a field-element index.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogc_code_generator_entry(
    code: *const OgcCode,
    row: usize,
    col: usize,
    out: *mut u16,
) -> OgcStatus {
    guard(|| {
        let c = code.as_ref().ok_or_else(|| null("code"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = c.code.generator();
        if row >= g.rows() || col >= g.cols() {
            return Err((OgcStatus::NullOrRange, format!("entry ({row}, {col}) outside {}x{}", g.rows(), g.cols())));
        }
        *out = g.get(row, col).0;
        Ok(())
    })
}

/// # Safety
/// `code` must be null or a handle from [`ogc_code_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ogc_code_free(code: *mut OgcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// `±1` matrix of order `2^r`.
pub struct OgcSignMatrix {
    m: SignMatrix,
}

/// `A[S][T] = (-1)^{|S ∩ T|}`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_formula(r: u32, out: *mut *mut OgcSignMatrix) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = a_matrix_formula(r as usize).lift()?;
        *out = Box::into_raw(Box::new(OgcSignMatrix { m }));
        Ok(())
    })
}

/// Sign matrix read off the truncated cap family for the 1-based index set
/// `j[0..j_len]` in dimension `2n+1` over `GF(q)`.
///
/// # Safety
/// `j` must point to `j_len` readable values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_from_cap(
    n: u32,
    q: u64,
    j: *const u32,
    j_len: usize,
    out: *mut *mut OgcSignMatrix,
) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if j.is_null() {
            return Err(null("j"));
        }
        let idx: Vec<usize> = std::slice::from_raw_parts(j, j_len).iter().map(|&x| x as usize).collect();
        let f = Arc::new(FieldSpec::from_order(q).lift()?);
        let spec = CapSpec::new(n as usize, &idx, None).lift()?;
        let fam = build_cap(&f, &spec, None).lift()?.truncate(&f).lift()?;
        let m = a_matrix_from_cap(&fam).lift()?;
        *out = Box::into_raw(Box::new(OgcSignMatrix { m }));
        Ok(())
    })
}

/// Order `2^r`, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_order(m: *const OgcSignMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.m.order())
}

/// Entry `(i, j)`, or 0 for a null handle or an index out of range.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_get(m: *const OgcSignMatrix, i: usize, j: usize) -> i8 {
    match m.as_ref() {
        Some(m) if i < m.m.order() && j < m.m.order() => m.m.get(i, j),
        _ => 0,
    }
}

/// Whether `H Hᵀ = 2^r I`; false for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_is_hadamard(m: *const OgcSignMatrix) -> bool {
    m.as_ref().is_some_and(|m| is_hadamard(&m.m))
}

/// Whether two handles hold equal matrices; false if either is null.
///
/// # Safety
/// Each argument must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_equal(a: *const OgcSignMatrix, b: *const OgcSignMatrix) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.m == b.m,
        _ => false,
    }
}

/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ogc_sign_matrix_free(m: *mut OgcSignMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of totally singular `k`-subspaces of `Q(2n, q)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogc_delta_point_count(n: u32, k: u32, q: u64, out: *mut u64) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if k == 0 || k > n || q < 2 {
            return Err((OgcStatus::InvalidParams, format!("need 1 <= k <= n and q >= 2, got n={n} k={k} q={q}")));
        }
        let c = delta_point_count(n, k, q);
        *out = u64::try_from(c).map_err(|_| (OgcStatus::BudgetExceeded, format!("count {c} exceeds 64 bits")))?;
        Ok(())
    })
}

/// `ψ (q^{k(n-k)} - 1) + 1` for `1 ≤ k < n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogc_mr1_lower_bound(n: u32, k: u32, q: u64, psi: u64, out: *mut u64) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = mr1_lower_bound(n, k, q, psi).lift()?;
        Ok(())
    })
}

/// Size of a largest (`exact`) or maximal partial spread of `Q(2m, q)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ogc_max_partial_spread(m: u32, q: u64, exact: bool, out: *mut u64) -> OgcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f = Arc::new(FieldSpec::from_order(q).lift()?);
        let method = if exact { Method::Exact } else { Method::Greedy };
        *out = max_partial_spread(m as usize, f, method, DEFAULT_VERTEX_CAP).lift()?.size as u64;
        Ok(())
    })
}
