//! C ABI for ffcount.
//!
//! Fields and polynomials are opaque handles created by `ff_field_new` and
//! `ff_poly_parse` and released with the matching `_free`. Every fallible
//! call returns an `FfStatus`; on failure `ff_last_error` describes it.
//! Handles may be shared across threads for reading; the last error is
//! per thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use ffcount::chars::{gauss_sum_numeric, MultChar};
use ffcount::cli::parse_poly;
use ffcount::counting::{
    brute_force, count_full, count_star_diagonal, count_star_gaussvec, Branch, CountError, CountResult, Method,
    SolutionSource,
};
use ffcount::gf::FieldCtx;
use ffcount::poly::SparsePoly;
use ffcount::pure::{check_admissible, Classification, NotAdmissibleReason, ParityCase};
use ffcount::zn_linalg::{star_equivalent, EquivOptions};

/// Opaque field handle.
pub struct FfField {
    ctx: Arc<FieldCtx>,
}

/// Opaque polynomial handle.
pub struct FfPoly {
    poly: SparsePoly,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidField = 3,
    Syntax = 4,
    /// A hypothesis of the requested formula does not hold.
    Precondition = 5,
    BudgetExceeded = 6,
    /// The count does not fit in 64 bits.
    Overflow = 7,
    MismatchedFields = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfMethod {
    ClosedFormB0 = 0,
    ClosedFormBnz = 1,
    FullTheorem = 2,
    BruteForce = 3,
    CharacterSum = 4,
    GaussVector = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfBranch {
    None = 0,
    BZero = 1,
    EtaOne = 2,
    EtaNotOne = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfReason {
    None = 0,
    DoesNotDivideGroupOrder = 1,
    OddExtensionDegree = 2,
    NoAdmissibleLevel = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FfCount {
    pub count: u64,
    pub method: FfMethod,
    pub branch: FfBranch,
    pub star: bool,
    pub approximate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FfClassification {
    pub admissible: bool,
    pub r: u32,
    pub h: u32,
    /// `2 | d` and `(p^r + 1)/d` odd.
    pub even_d_odd_quotient: bool,
    pub c1: i64,
    pub c2: i64,
    pub reason: FfReason,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: FfStatus, message: impl Into<String>) -> FfStatus {
    set_error(message);
    status
}

/// Runs `body`, turning panics into `Internal`.
fn guard(body: impl FnOnce() -> FfStatus) -> FfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|_| fail(FfStatus::Internal, "internal panic"))
}

fn count_status(e: &CountError) -> FfStatus {
    match e {
        CountError::BudgetExceeded { .. } => FfStatus::BudgetExceeded,
        CountError::Overflow => FfStatus::Overflow,
        CountError::Linalg(ffcount::zn_linalg::LinalgError::MismatchedFields) => FfStatus::MismatchedFields,
        _ => FfStatus::Precondition,
    }
}

fn write_count(r: CountResult, out: *mut FfCount) -> FfStatus {
    let Ok(count) = u64::try_from(r.count) else {
        return fail(FfStatus::Overflow, format!("count {} does not fit in 64 bits", r.count));
    };
    let method = match r.method {
        Method::ClosedFormB0 => FfMethod::ClosedFormB0,
        Method::ClosedFormBnz => FfMethod::ClosedFormBnz,
        Method::FullTheorem => FfMethod::FullTheorem,
        Method::BruteForce => FfMethod::BruteForce,
        Method::CharacterSum => FfMethod::CharacterSum,
        Method::GaussVector => FfMethod::GaussVector,
    };
    let branch = match r.branch {
        None => FfBranch::None,
        Some(Branch::BZero) => FfBranch::BZero,
        Some(Branch::EtaOne) => FfBranch::EtaOne,
        Some(Branch::EtaNotOne) => FfBranch::EtaNotOne,
    };
    // SAFETY: callers checked `out` for null.
    unsafe { *out = FfCount { count, method, branch, star: r.star, approximate: r.approximate } };
    FfStatus::Ok
}

fn finish_count(result: Result<CountResult, CountError>, out: *mut FfCount) -> FfStatus {
    match result {
        Ok(r) => write_count(r, out),
        Err(e) => fail(count_status(&e), e.to_string()),
    }
}

/// Creates F_{p^m}. `modulus` holds m + 1 coefficients, low degree first,
/// or is null for the default modulus.
///
/// # Safety
/// `modulus` must be null or point to `modulus_len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_field_new(
    p: u64,
    m: u32,
    modulus: *const u64,
    modulus_len: usize,
    out: *mut *mut FfField,
) -> FfStatus {
    guard(|| {
        if out.is_null() {
            return fail(FfStatus::NullPointer, "out is null");
        }
        let coeffs = (!modulus.is_null()).then(|| std::slice::from_raw_parts(modulus, modulus_len));
        match FieldCtx::new(p, m, coeffs) {
            Ok(ctx) => {
                *out = Box::into_raw(Box::new(FfField { ctx: Arc::new(ctx) }));
                FfStatus::Ok
            }
            Err(e) => fail(FfStatus::InvalidField, e.to_string()),
        }
    })
}

/// # Safety
/// `field` must be null or a handle from `ff_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ff_field_free(field: *mut FfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order q, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ff_field_order(field: *const FfField) -> u64 {
    field.as_ref().map_or(0, |f| f.ctx.q())
}

/// Parses a polynomial such as `"g*x^17 + g^18*y^17 - 1"` over `field`.
///
/// # Safety
/// `field` must be a live handle, `text` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_poly_parse(field: *const FfField, text: *const c_char, out: *mut *mut FfPoly) -> FfStatus {
    guard(|| {
        let (Some(field), false, false) = (field.as_ref(), text.is_null(), out.is_null()) else {
            return fail(FfStatus::NullPointer, "null argument");
        };
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(FfStatus::InvalidArgument, "text is not UTF-8");
        };
        match parse_poly(text, field.ctx.clone()) {
            Ok(poly) => {
                *out = Box::into_raw(Box::new(FfPoly { poly }));
                FfStatus::Ok
            }
            Err(e) => fail(FfStatus::Syntax, e.to_string()),
        }
    })
}

/// # Safety
/// `poly` must be null or a handle from `ff_poly_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ff_poly_free(poly: *mut FfPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ff_poly_n_vars(poly: *const FfPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.poly.n_vars())
}

/// The polynomial in the parser's syntax; free with `ff_string_free`.
///
/// # Safety
/// `poly` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ff_poly_to_string(poly: *const FfPoly) -> *mut c_char {
    poly.as_ref()
        .and_then(|p| CString::new(p.poly.to_string()).ok())
        .map_or(std::ptr::null_mut(), CString::into_raw)
}

/// N*(g) for a diagonal g by the closed form.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_count_star(poly: *const FfPoly, out: *mut FfCount) -> FfStatus {
    guard(|| match (poly.as_ref(), out.is_null()) {
        (Some(p), false) => finish_count(count_star_diagonal(&p.poly), out),
        _ => fail(FfStatus::NullPointer, "null argument"),
    })
}

/// N(f) for a full f from a *-equivalent diagonal witness.
///
/// # Safety
/// `f` and `witness` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_count_full(f: *const FfPoly, witness: *const FfPoly, out: *mut FfCount) -> FfStatus {
    guard(|| match (f.as_ref(), witness.as_ref(), out.is_null()) {
        (Some(f), Some(g), false) => finish_count(count_full(&f.poly, &g.poly), out),
        _ => fail(FfStatus::NullPointer, "null argument"),
    })
}

/// Exhaustive N (or N* when `star`), visiting at most `budget` points.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_brute_force(poly: *const FfPoly, star: bool, budget: u64, out: *mut FfCount) -> FfStatus {
    guard(|| match (poly.as_ref(), out.is_null()) {
        (Some(p), false) => finish_count(brute_force(&p.poly, star, budget as u128), out),
        _ => fail(FfStatus::NullPointer, "null argument"),
    })
}

/// N* from Gauss sums over the solutions of the degree system mod q - 1.
///
/// # Safety
/// `poly` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_count_star_gaussvec(poly: *const FfPoly, budget: u64, out: *mut FfCount) -> FfStatus {
    guard(|| match (poly.as_ref(), out.is_null()) {
        (Some(p), false) => {
            finish_count(count_star_gaussvec(&p.poly, SolutionSource::Nullspace, budget as u128), out)
        }
        _ => fail(FfStatus::NullPointer, "null argument"),
    })
}

/// Admissibility of d over `field`.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_classify(field: *const FfField, d: u64, out: *mut FfClassification) -> FfStatus {
    guard(|| {
        let (Some(field), false) = (field.as_ref(), out.is_null()) else {
            return fail(FfStatus::NullPointer, "null argument");
        };
        let none = FfClassification {
            admissible: false,
            r: 0,
            h: 0,
            even_d_odd_quotient: false,
            c1: 0,
            c2: 0,
            reason: FfReason::None,
        };
        *out = match check_admissible(&field.ctx, d) {
            Ok(Classification::Admissible(adm)) => FfClassification {
                admissible: true,
                r: adm.r,
                h: adm.h,
                even_d_odd_quotient: adm.parity_case == ParityCase::EvenDOddQuotient,
                c1: adm.c1(),
                c2: adm.c2(),
                reason: FfReason::None,
            },
            Ok(Classification::NotAdmissible { reason, .. }) => FfClassification {
                reason: match reason {
                    NotAdmissibleReason::DoesNotDivideGroupOrder => FfReason::DoesNotDivideGroupOrder,
                    NotAdmissibleReason::OddExtensionDegree => FfReason::OddExtensionDegree,
                    NotAdmissibleReason::NoAdmissibleLevel => FfReason::NoAdmissibleLevel,
                },
                ..none
            },
            Err(e) => return fail(FfStatus::InvalidArgument, e.to_string()),
        };
        FfStatus::Ok
    })
}

/// *-equivalence test. `constant_column` is -1 for automatic, 0 off, 1 on.
///
/// # Safety
/// `f` and `g` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_star_equivalent(
    f: *const FfPoly,
    g: *const FfPoly,
    constant_column: i32,
    out: *mut bool,
) -> FfStatus {
    guard(|| {
        let (Some(f), Some(g), false) = (f.as_ref(), g.as_ref(), out.is_null()) else {
            return fail(FfStatus::NullPointer, "null argument");
        };
        let include_constant_column = match constant_column {
            -1 => None,
            0 => Some(false),
            1 => Some(true),
            other => return fail(FfStatus::InvalidArgument, format!("constant_column must be -1, 0 or 1, got {other}")),
        };
        match star_equivalent(&f.poly, &g.poly, EquivOptions { include_constant_column }) {
            Ok(report) => {
                *out = report.equivalent;
                FfStatus::Ok
            }
            Err(ffcount::zn_linalg::LinalgError::MismatchedFields) => {
                fail(FfStatus::MismatchedFields, "polynomials live over different fields")
            }
            Err(e) => fail(FfStatus::Precondition, e.to_string()),
        }
    })
}

/// Numeric Gauss sum of `eta_d^j`.
///
/// # Safety
/// `field` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn ff_gauss_sum(field: *const FfField, d: u64, j: u64, re: *mut f64, im: *mut f64) -> FfStatus {
    guard(|| {
        let (Some(field), false, false) = (field.as_ref(), re.is_null(), im.is_null()) else {
            return fail(FfStatus::NullPointer, "null argument");
        };
        match MultChar::new(&field.ctx, d, j) {
            Ok(chr) => {
                let g = gauss_sum_numeric(&chr);
                *re = g.value.re;
                *im = g.value.im;
                FfStatus::Ok
            }
            Err(e) => fail(FfStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Message for the last failure on this thread, or null. Free with
/// `ff_string_free`.
#[no_mangle]
pub extern "C" fn ff_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().clone()).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ff_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
