//! C ABI over the vislat library: opaque handles, status codes, and plain
//! structs. The header `include/vislat.h` is generated at build time.
//!
//! Conventions: every fallible call returns a [`VislatStatus`] and writes its
//! result through out pointers, which are only written on `VISLAT_STATUS_OK`.
//! Handles are created and released by matching `_new`/`_build` and `_free`
//! calls. Exact counts cross the boundary as decimal strings (they outgrow
//! any fixed-width integer); release them with [`vislat_string_free`].

use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use vislat::counts;
use vislat::error::Error;
use vislat::fields::{make_field, residue_c, FieldSpec};
use vislat::sieve::{build_coefficients, build_moebius, CoefficientTable, MoebiusTable};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VislatStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    InvalidArgument = 2,
    /// `d` is not squarefree, or is 1.
    InvalidField = 3,
    /// Operation undefined for this field (e.g. splitting over the rationals).
    Unsupported = 4,
    OutOfRange = 5,
    CapacityExceeded = 6,
    /// A numeric routine missed its tolerance or node budget.
    NumericFailure = 7,
    /// Main term requires m*s >= 2.
    UndefinedMainTerm = 8,
    IdentityViolation = 9,
    FitRefused = 10,
    /// A panic was caught at the boundary; the handle state is still valid.
    InternalPanic = 11,
}

fn status_of(e: &Error) -> VislatStatus {
    match e {
        Error::InvalidField { .. } => VislatStatus::InvalidField,
        Error::Unsupported(_) => VislatStatus::Unsupported,
        Error::OutOfRange { .. } => VislatStatus::OutOfRange,
        Error::Capacity { .. } => VislatStatus::CapacityExceeded,
        Error::NumericFailure { .. } => VislatStatus::NumericFailure,
        Error::UndefinedMainTerm { .. } => VislatStatus::UndefinedMainTerm,
        Error::IdentityViolation { .. } => VislatStatus::IdentityViolation,
        Error::FitRefused(_) => VislatStatus::FitRefused,
        Error::InvalidArgument(_) => VislatStatus::InvalidArgument,
    }
}

/// Opaque field handle.
pub struct VislatField {
    spec: FieldSpec,
}

/// Opaque pair of coefficient and Moebius tables for one field.
pub struct VislatTables {
    coef: CoefficientTable,
    moeb: MoebiusTable,
}

/// Field invariants (plain data mirror of the internal field description).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VislatFieldInfo {
    pub d: i64,
    pub disc: i64,
    pub degree: u32,
    pub r1: u32,
    pub r2: u32,
    pub w: u32,
    pub residue_c: f64,
}

/// Result of a Perron kernel quadrature or j-reconstruction.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VislatPerronResult {
    pub x: f64,
    pub t_height: f64,
    pub estimate: f64,
    pub estimate_im: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub nodes: u64,
}

/// Log-log exponent fit summary.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VislatExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: u32,
    pub dropped_zeros: u32,
}

fn guarded<F: FnOnce() -> VislatStatus>(f: F) -> VislatStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(VislatStatus::InternalPanic)
}

/// Create a field handle for squarefree `d` (0 selects the rational field).
///
/// # Safety
/// `out` must be a valid pointer; on `OK` it receives a handle that must be
/// released with [`vislat_field_free`].
#[no_mangle]
pub unsafe extern "C" fn vislat_field_new(d: i64, out: *mut *mut VislatField) -> VislatStatus {
    if out.is_null() {
        return VislatStatus::NullPointer;
    }
    guarded(|| match make_field(d) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(VislatField { spec }));
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a field handle. Null is ignored.
///
/// # Safety
/// `field` must be null or a handle from [`vislat_field_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vislat_field_free(field: *mut VislatField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Copy the field invariants into `out`.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_field_info(
    field: *const VislatField,
    out: *mut VislatFieldInfo,
) -> VislatStatus {
    if field.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let spec = (*field).spec;
    *out = VislatFieldInfo {
        d: spec.d,
        disc: spec.disc,
        degree: spec.degree,
        r1: spec.r1,
        r2: spec.r2,
        w: spec.w,
        residue_c: spec.residue_c,
    };
    VislatStatus::Ok
}

/// Residue of the field zeta function at s = 1, to within `tol`.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_residue_c(
    field: *const VislatField,
    tol: f64,
    out: *mut f64,
) -> VislatStatus {
    if field.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let spec = (*field).spec;
    guarded(|| match residue_c(&spec, tol) {
        Ok(v) => {
            *out = v;
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// `zeta_K(m)` for real `m > 1`, with its rigorous tail bound.
///
/// # Safety
/// `field` must be a live handle; `value` and `tail_bound` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_zeta_k(
    field: *const VislatField,
    m: f64,
    tol: f64,
    value: *mut f64,
    tail_bound: *mut f64,
) -> VislatStatus {
    if field.is_null() || value.is_null() || tail_bound.is_null() {
        return VislatStatus::NullPointer;
    }
    let spec = (*field).spec;
    guarded(|| match vislat::zeta::zeta_k_at(&spec, m, tol) {
        Ok(z) => {
            *value = z.value;
            *tail_bound = z.tail_bound;
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Build the coefficient and Moebius tables up to `limit`.
///
/// # Safety
/// `field` must be a live handle; `out` receives a handle to release with
/// [`vislat_tables_free`].
#[no_mangle]
pub unsafe extern "C" fn vislat_tables_build(
    field: *const VislatField,
    limit: u64,
    out: *mut *mut VislatTables,
) -> VislatStatus {
    if field.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let spec = (*field).spec;
    guarded(|| match build_coefficients(&spec, limit) {
        Ok(coef) => {
            let moeb = build_moebius(&coef);
            *out = Box::into_raw(Box::new(VislatTables { coef, moeb }));
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a tables handle. Null is ignored.
///
/// # Safety
/// `tables` must be null or a handle from [`vislat_tables_build`].
#[no_mangle]
pub unsafe extern "C" fn vislat_tables_free(tables: *mut VislatTables) {
    if !tables.is_null() {
        drop(Box::from_raw(tables));
    }
}

/// The table limit X.
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_tables_limit(
    tables: *const VislatTables,
    out: *mut u64,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    *out = (*tables).coef.limit();
    VislatStatus::Ok
}

/// Number of ideals of norm exactly `n`.
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_coefficient_at(
    tables: *const VislatTables,
    n: u64,
    out: *mut u32,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    if n < 1 || n > t.coef.limit() {
        return VislatStatus::OutOfRange;
    }
    *out = t.coef.a(n);
    VislatStatus::Ok
}

/// Norm-aggregated Moebius coefficient `b[n]`.
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_moebius_at(
    tables: *const VislatTables,
    n: u64,
    out: *mut i32,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    if n < 1 || n > t.moeb.limit() {
        return VislatStatus::OutOfRange;
    }
    *out = t.moeb.b(n);
    VislatStatus::Ok
}

/// Number of ideals of norm at most `x` (the step function j_K).
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_ideal_count(
    tables: *const VislatTables,
    x: f64,
    out: *mut u64,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    guarded(|| match t.coef.j(x) {
        Ok(v) => {
            *out = v;
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

unsafe fn count_to_string(
    value: vislat::error::Result<vislat::counts::BigInt>,
    out: *mut *mut c_char,
) -> VislatStatus {
    match value {
        Ok(v) => {
            let s = CString::new(v.to_string()).expect("decimal string");
            *out = s.into_raw();
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Exact count of visible ordered m-tuples with norms at most `x`, as a
/// decimal string (release with [`vislat_string_free`]).
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_visible_count(
    tables: *const VislatTables,
    m: u32,
    x: f64,
    out: *mut *mut c_char,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    guarded(|| count_to_string(counts::visible_count(&t.coef, &t.moeb, m, x), out))
}

/// Exact count of relatively s-prime ordered m-tuples, as a decimal string.
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_sprime_count(
    tables: *const VislatTables,
    m: u32,
    s: u32,
    x: f64,
    out: *mut *mut c_char,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    guarded(|| count_to_string(counts::sprime_count(&t.coef, &t.moeb, m, s, x), out))
}

/// Error term `V_m^s(x) - (cx)^m / zeta_K(ms)`; requires `m*s >= 2`.
///
/// # Safety
/// `tables` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_error_term(
    tables: *const VislatTables,
    m: u32,
    s: u32,
    x: f64,
    out: *mut f64,
) -> VislatStatus {
    if tables.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let t = &*tables;
    guarded(|| {
        let count = match counts::sprime_count(&t.coef, &t.moeb, m, s, x) {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        };
        match counts::error_term(&t.coef.field, m, s, x, &count) {
            Ok(v) => {
                *out = v;
                VislatStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Release a string returned by a counting call. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn vislat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of integer points inside the circle of radius-squared `r`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_circle_count(r: f64, out: *mut u64) -> VislatStatus {
    if out.is_null() {
        return VislatStatus::NullPointer;
    }
    guarded(|| match vislat::circle::circle_count(r) {
        Ok(v) => {
            *out = v;
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Truncated Perron kernel quadrature at `x` with contour height `t_height`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_kernel_quadrature(
    x: f64,
    t_height: f64,
    node_budget: u64,
    out: *mut VislatPerronResult,
) -> VislatStatus {
    if out.is_null() {
        return VislatStatus::NullPointer;
    }
    guarded(
        || match vislat::perron::kernel_quadrature(x, t_height, node_budget) {
            Ok(r) => {
                *out = perron_out(&r);
                VislatStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

/// Reconstruct j_K at the half-integer `x` from term-wise kernel sums.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_perron_reconstruction(
    field: *const VislatField,
    x: f64,
    t_height: f64,
    node_budget: u64,
    out: *mut VislatPerronResult,
) -> VislatStatus {
    if field.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let spec = (*field).spec;
    guarded(
        || match vislat::perron::perron_j_reconstruction(&spec, x, t_height, node_budget) {
            Ok(r) => {
                *out = perron_out(&r);
                VislatStatus::Ok
            }
            Err(e) => status_of(&e),
        },
    )
}

fn perron_out(r: &vislat::perron::PerronResult) -> VislatPerronResult {
    VislatPerronResult {
        x: r.x,
        t_height: r.t_height,
        estimate: r.estimate,
        estimate_im: r.estimate_im,
        reference: r.reference,
        abs_error: r.abs_error,
        nodes: r.nodes,
    }
}

/// Ordinary least squares slope of `log |v|` against `log x` over parallel
/// arrays of length `len`.
///
/// # Safety
/// `xs` and `vs` must point to `len` readable doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn vislat_fit_exponent(
    xs: *const f64,
    vs: *const f64,
    len: usize,
    out: *mut VislatExponentFit,
) -> VislatStatus {
    if xs.is_null() || vs.is_null() || out.is_null() {
        return VislatStatus::NullPointer;
    }
    let xs = std::slice::from_raw_parts(xs, len);
    let vs = std::slice::from_raw_parts(vs, len);
    let series: Vec<(f64, f64)> = xs.iter().copied().zip(vs.iter().copied()).collect();
    guarded(|| match vislat::analysis::fit_exponent(&series) {
        Ok(fit) => {
            *out = VislatExponentFit {
                slope: fit.slope,
                intercept: fit.intercept,
                r_squared: fit.r_squared,
                n_points: fit.n_points,
                dropped_zeros: fit.dropped_zeros,
            };
            VislatStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}
