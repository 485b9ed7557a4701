//! C ABI over `holocert`. Objects are opaque handles created by `hc_*_new`
//! style functions and released with the matching `hc_*_free`. Every
//! fallible call returns an `i32` status; on failure `hc_last_error`
//! describes the problem. Strings returned through out-pointers are owned
//! by the caller and released with `hc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holocert::casebook::{batch_report, parse_cases, CaseOptions};
use holocert::certify::{assemble_theorem1, AssembleOptions, Certificate};
use holocert::cli::{exit_code, operator_report};
use holocert::diffop::{is_mom, operator_from_json, DiffOp};
use holocert::exactfield::{is_prime, BigRat};
use holocert::holoseries::Catalog;
use holocert::Error;

/// Success.
pub const HC_OK: i32 = 0;
/// Invalid input: unknown series, malformed JSON, bad prime, ...
pub const HC_ERR_INPUT: i32 = 1;
/// A computed identity or reconstruction failed.
pub const HC_ERR_VERIFY: i32 = 2;
/// A height bound was exceeded.
pub const HC_ERR_BOUND: i32 = 3;
/// A required pointer argument was null.
pub const HC_ERR_NULL: i32 = -1;
/// A string argument was not valid UTF-8.
pub const HC_ERR_UTF8: i32 = -2;
/// Internal panic caught at the boundary.
pub const HC_ERR_PANIC: i32 = -3;

/// Named series: the builtin entries plus any added from JSON.
pub struct HcCatalog {
    inner: Catalog,
}

/// A differential operator over the rationals.
pub struct HcOperator {
    inner: DiffOp<BigRat>,
}

/// A certificate together with the name of its series.
pub struct HcCertificate {
    series: String,
    inner: Certificate,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), msg: e.to_string() }
    }
}

fn fail(code: i32, msg: &str) -> Failure {
    Failure { code, msg: msg.into() }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HC_OK
        }
        Ok(Err(e)) => {
            set_error(&e.msg);
            e.code
        }
        Err(_) => {
            set_error("internal panic");
            HC_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(fail(HC_ERR_NULL, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(HC_ERR_UTF8, "string argument is not UTF-8"))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(HC_ERR_NULL, "null handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(HC_ERR_NULL, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| fail(HC_ERR_INPUT, "output contains a nul byte"))?;
    put(out, c.into_raw())
}

unsafe fn primes_arg(primes: *const u64, n: usize) -> Result<Vec<u64>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if primes.is_null() {
        return Err(fail(HC_ERR_NULL, "null prime array"));
    }
    let ps = std::slice::from_raw_parts(primes, n).to_vec();
    match ps.iter().find(|&&p| !is_prime(p)) {
        Some(p) => Err(fail(HC_ERR_INPUT, &format!("{p} is not prime"))),
        None => Ok(ps),
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next `hc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A catalog holding the builtin series.
#[no_mangle]
pub extern "C" fn hc_catalog_new() -> *mut HcCatalog {
    Box::into_raw(Box::new(HcCatalog { inner: Catalog::builtin() }))
}

/// # Safety
/// `cat` must be null or a handle from `hc_catalog_new`, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_catalog_free(cat: *mut HcCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Adds entries from catalog JSON (one object or an array).
///
/// # Safety
/// `cat` must be a live catalog handle and `json` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hc_catalog_extend_json(cat: *mut HcCatalog, json: *const c_char) -> i32 {
    guard(|| {
        let cat = cat.as_mut().ok_or_else(|| fail(HC_ERR_NULL, "null handle"))?;
        cat.inner.extend_from_json(str_arg(json)?)?;
        Ok(())
    })
}

/// Writes the first `t` coefficients of `name` reduced mod `p` into `out`,
/// which must hold `t` values.
///
/// # Safety
/// `cat` must be a live catalog handle, `name` a nul-terminated string and
/// `out` valid for `t` writes.
#[no_mangle]
pub unsafe extern "C" fn hc_expand_mod_p(
    cat: *const HcCatalog,
    name: *const c_char,
    t: usize,
    p: u64,
    out: *mut u64,
) -> i32 {
    guard(|| {
        let cat = ref_arg(cat)?;
        if !is_prime(p) {
            return Err(fail(HC_ERR_INPUT, &format!("{p} is not prime")));
        }
        if out.is_null() && t > 0 {
            return Err(fail(HC_ERR_NULL, "null output buffer"));
        }
        let f = cat.inner.get(str_arg(name)?)?.terms_mod_p(t, p)?;
        for (i, c) in f.coeffs().iter().enumerate() {
            out.add(i).write(c.residue());
        }
        Ok(())
    })
}

/// The first `t` exact coefficients of `name` as a JSON array of strings.
///
/// # Safety
/// `cat` must be a live catalog handle, `name` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_expand_json(
    cat: *const HcCatalog,
    name: *const c_char,
    t: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let cat = ref_arg(cat)?;
        let terms = cat.inner.get(str_arg(name)?)?.gen_terms(t)?;
        let v: Vec<String> = terms.iter().map(|c| c.to_string()).collect();
        put_string(out, serde_json::to_string(&v).expect("plain data"))
    })
}

/// Parses operator JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_from_json(json: *const c_char, out: *mut *mut HcOperator) -> i32 {
    guard(|| {
        let op = operator_from_json(str_arg(json)?)?;
        put(out, Box::into_raw(Box::new(HcOperator { inner: op })))
    })
}

/// The annihilating operator of a catalog series, in δ form.
///
/// # Safety
/// `cat` must be a live catalog handle, `name` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_from_series(
    cat: *const HcCatalog,
    name: *const c_char,
    out: *mut *mut HcOperator,
) -> i32 {
    guard(|| {
        let op = ref_arg(cat)?.inner.get(str_arg(name)?)?.operator()?;
        put(out, Box::into_raw(Box::new(HcOperator { inner: op })))
    })
}

/// # Safety
/// `op` must be null or an operator handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_free(op: *mut HcOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `op` must be a live operator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_order(op: *const HcOperator, out: *mut usize) -> i32 {
    guard(|| put(out, ref_arg(op)?.inner.order()))
}

/// # Safety
/// `op` must be a live operator handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_is_mom(op: *const HcOperator, out: *mut bool) -> i32 {
    guard(|| put(out, is_mom(&ref_arg(op)?.inner)))
}

/// Singularities, indicial polynomial, MOM verdict, good primes up to
/// `bound` and p-curvature nilpotency at the `n` given primes, as JSON.
///
/// # Safety
/// `op` must be a live operator handle, `primes` valid for `n` reads and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_operator_report_json(
    op: *const HcOperator,
    primes: *const u64,
    n: usize,
    bound: u64,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let report = operator_report(&ref_arg(op)?.inner, &primes_arg(primes, n)?, bound)?;
        put_string(out, report.to_string())
    })
}

/// Assembles and verifies the certificate of `name` at `p`. `t = 0`
/// selects the default verification order.
///
/// # Safety
/// `cat` must be a live catalog handle, `name` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_certify(
    cat: *const HcCatalog,
    name: *const c_char,
    p: u64,
    t: usize,
    out: *mut *mut HcCertificate,
) -> i32 {
    guard(|| {
        let g = ref_arg(cat)?.inner.get(str_arg(name)?)?;
        let opts = AssembleOptions { t: (t > 0).then_some(t), ..AssembleOptions::default() };
        let th = assemble_theorem1(g, &g.operator()?, p, &opts)?;
        let cert = HcCertificate { series: g.name.clone(), inner: th.primary().clone() };
        put(out, Box::into_raw(Box::new(cert)))
    })
}

/// Parses a certificate emitted by `hc_certificate_to_json` or the CLI.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_certificate_from_json(json: *const c_char, out: *mut *mut HcCertificate) -> i32 {
    guard(|| {
        let v: serde_json::Value =
            serde_json::from_str(str_arg(json)?).map_err(|e| fail(HC_ERR_INPUT, &e.to_string()))?;
        let (series, inner) = Certificate::from_json(&v)?;
        put(out, Box::into_raw(Box::new(HcCertificate { series, inner })))
    })
}

/// # Safety
/// `cert` must be null or a certificate handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_certificate_free(cert: *mut HcCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Level `l`, reduced height of `A` and verification order.
///
/// # Safety
/// `cert` must be a live certificate handle; the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hc_certificate_info(
    cert: *const HcCertificate,
    level: *mut u32,
    height: *mut usize,
    verified_to: *mut usize,
) -> i32 {
    guard(|| {
        let c = &ref_arg(cert)?.inner;
        put(level, c.level)?;
        put(height, c.height)?;
        put(verified_to, c.verified_to)
    })
}

/// # Safety
/// `cert` must be a live certificate handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_certificate_to_json(cert: *const HcCertificate, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let c = ref_arg(cert)?;
        put_string(out, c.inner.to_json(&c.series).to_string())
    })
}

/// Re-checks the certificate identity against a fresh expansion of its
/// series from `cat`.
///
/// # Safety
/// `cat` and `cert` must be live handles and `pass` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_certificate_verify(
    cat: *const HcCatalog,
    cert: *const HcCertificate,
    pass: *mut bool,
) -> i32 {
    guard(|| {
        let c = ref_arg(cert)?;
        let f = ref_arg(cat)?.inner.get(&c.series)?.terms_mod_p(c.inner.verified_to, c.inner.p)?;
        put(pass, c.inner.height as u64 <= c.inner.bound && c.inner.check(&f))
    })
}

/// Runs the comma-separated `cases` (`210`, `26`, `2f1`, `independence`,
/// `apery` or `all`) at the given primes with default options and
/// returns the batch report as JSON. Failing checks do not make the call
/// fail; inspect the report.
///
/// # Safety
/// `cases` must be a nul-terminated string, `primes` valid for `n` reads
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_casebook_json(
    cases: *const c_char,
    primes: *const u64,
    n: usize,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let ids: Vec<&str> = str_arg(cases)?.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let ids = parse_cases(&ids)?;
        let report = batch_report(&primes_arg(primes, n)?, &ids, &CaseOptions::default());
        put_string(out, report.to_json().to_string())
    })
}
