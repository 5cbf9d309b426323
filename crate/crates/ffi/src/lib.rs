//! C ABI for `sepprob`.
//!
//! Every entry point returns a [`SepprobStatus`]. Results come back through
//! out-parameters as opaque handles that the caller releases with the
//! matching `_free` function. Strings returned to the caller are owned by it
//! and released with [`sepprob_string_free`]. After a failure,
//! [`sepprob_last_error_message`] describes it; the message is per thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sepprob::arith::format_rational;
use sepprob::formulas::{self, SepResult};
use sepprob::oracle::{Oracle, OracleBudget};
use sepprob::strong::connection_coefficient;
use sepprob::{Composition, Error, Partition};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SepprobStatus {
    Ok = 0,
    InvalidArgument = 1,
    BudgetExceeded = 2,
    Invariant = 3,
    NullPointer = 4,
    Panic = 5,
}

/// A computed count and/or probability.
pub struct SepprobValue {
    count: Option<CString>,
    probability: Option<CString>,
    method: CString,
}

/// An enumerator with its own budget and thread pool.
pub struct SepprobOracle {
    inner: Oracle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SepprobStatus {
    match e {
        Error::InvalidInput(_) | Error::SizeMismatch { .. } => SepprobStatus::InvalidArgument,
        Error::BudgetExceeded(_) => SepprobStatus::BudgetExceeded,
        Error::Invariant(_) => SepprobStatus::Invariant,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SepprobStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SepprobStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            SepprobStatus::NullPointer
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            SepprobStatus::Panic
        }
    }
}

/// Reads `len` parts; a null pointer is allowed only when `len` is zero.
unsafe fn parts<'a>(ptr: *const usize, len: usize, what: &'static str) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn partition(ptr: *const usize, len: usize) -> Result<Partition, Failure> {
    Ok(Partition::from_unsorted(parts(ptr, len, "lambda")?.to_vec())?)
}

unsafe fn composition(ptr: *const usize, len: usize) -> Result<Composition, Failure> {
    Ok(Composition::new(parts(ptr, len, "alpha")?.to_vec())?)
}

fn c_string(s: String) -> CString {
    CString::new(s).expect("digits and slashes contain no NUL")
}

unsafe fn store(out: *mut *mut SepprobValue, value: SepprobValue) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn from_result(r: &SepResult) -> SepprobValue {
    SepprobValue {
        count: r.count.as_ref().map(|c| c_string(c.to_string())),
        probability: Some(c_string(format_rational(&r.probability))),
        method: c_string(r.method.to_string()),
    }
}

/// Separation probability for cycle type `lambda` and block sizes `alpha`.
///
/// # Safety
/// `lambda` and `alpha` point to `lambda_len` and `alpha_len` readable
/// values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sepprob_sep_prob(
    lambda: *const usize,
    lambda_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| {
        let r = formulas::sep_prob(&partition(lambda, lambda_len)?, &composition(alpha, alpha_len)?)?;
        store(out, from_result(&r))
    })
}

/// The number of separated pairs, with the probability alongside.
///
/// # Safety
/// As for [`sepprob_sep_prob`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_count_s(
    lambda: *const usize,
    lambda_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| {
        let lambda = partition(lambda, lambda_len)?;
        let alpha = composition(alpha, alpha_len)?;
        let count = formulas::count_s(&lambda, &alpha)?;
        let mut value = from_result(&formulas::sep_prob(&lambda, &alpha)?);
        value.count = Some(c_string(count.to_string()));
        store(out, value)
    })
}

/// Two uniform `n`-cycles.
///
/// # Safety
/// `alpha` points to `alpha_len` readable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sepprob_ncycle(
    n: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| store(out, from_result(&formulas::sep_prob_ncycle(n, &composition(alpha, alpha_len)?)?)))
}

/// Uniform permutations of `[n]` with `p` cycles.
///
/// # Safety
/// As for [`sepprob_ncycle`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_pcycles(
    n: usize,
    p: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| store(out, from_result(&formulas::sep_prob_p_cycles(n, p, &composition(alpha, alpha_len)?)?)))
}

/// Fixed-point-free involutions of `[2 * half]`.
///
/// # Safety
/// As for [`sepprob_ncycle`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_involution(
    half: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| {
        let res = formulas::sep_prob_involution(half, &composition(alpha, alpha_len)?)?;
        store(out, from_result(&res.result))
    })
}

/// Number of ways to write a fixed permutation of type `alpha` as a
/// product of one of type `lambda` and an `n`-cycle. Only the count is set.
///
/// # Safety
/// As for [`sepprob_sep_prob`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_connection(
    lambda: *const usize,
    lambda_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| {
        let k = connection_coefficient(&partition(lambda, lambda_len)?, &composition(alpha, alpha_len)?)?;
        let value = SepprobValue { count: Some(c_string(k.to_string())), probability: None, method: c_string("refinement".into()) };
        store(out, value)
    })
}

/// Creates an enumerator accepting `n <= max_n`. `threads == 0` uses all cores.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sepprob_oracle_new(max_n: usize, threads: usize, out: *mut *mut SepprobOracle) -> SepprobStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let budget = OracleBudget { max_n, ..Default::default() };
        let inner = Oracle::new(budget, (threads > 0).then_some(threads))?;
        *out = Box::into_raw(Box::new(SepprobOracle { inner }));
        Ok(())
    })
}

/// Separation probability by exhaustive enumeration.
///
/// # Safety
/// `oracle` came from [`sepprob_oracle_new`]; other pointers as for
/// [`sepprob_sep_prob`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_oracle_sep_prob(
    oracle: *const SepprobOracle,
    lambda: *const usize,
    lambda_len: usize,
    alpha: *const usize,
    alpha_len: usize,
    out: *mut *mut SepprobValue,
) -> SepprobStatus {
    guard(|| {
        let oracle = oracle.as_ref().ok_or(Failure::Null("oracle"))?;
        let r = oracle.inner.sep_prob(&partition(lambda, lambda_len)?, &composition(alpha, alpha_len)?)?;
        store(out, from_result(&r))
    })
}

/// # Safety
/// `oracle` is null or came from [`sepprob_oracle_new`] and is not used again.
#[no_mangle]
pub unsafe extern "C" fn sepprob_oracle_free(oracle: *mut SepprobOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

unsafe fn copy_out(src: Option<&CString>, out: *mut *mut c_char) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = src.map_or(ptr::null_mut(), |s| s.clone().into_raw());
    Ok(())
}

/// The probability as `"p/q"` in lowest terms, or null when the value has
/// none. The caller frees the string.
///
/// # Safety
/// `value` came from this library; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sepprob_value_probability(value: *const SepprobValue, out: *mut *mut c_char) -> SepprobStatus {
    guard(|| copy_out(value.as_ref().ok_or(Failure::Null("value"))?.probability.as_ref(), out))
}

/// The count in decimal, or null when the value has none. The caller frees
/// the string.
///
/// # Safety
/// As for [`sepprob_value_probability`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_value_count(value: *const SepprobValue, out: *mut *mut c_char) -> SepprobStatus {
    guard(|| copy_out(value.as_ref().ok_or(Failure::Null("value"))?.count.as_ref(), out))
}

/// The method tag, e.g. `"generating-function"`. The caller frees the string.
///
/// # Safety
/// As for [`sepprob_value_probability`].
#[no_mangle]
pub unsafe extern "C" fn sepprob_value_method(value: *const SepprobValue, out: *mut *mut c_char) -> SepprobStatus {
    guard(|| copy_out(Some(&value.as_ref().ok_or(Failure::Null("value"))?.method), out))
}

/// # Safety
/// `value` is null or came from this library and is not used again.
#[no_mangle]
pub unsafe extern "C" fn sepprob_value_free(value: *mut SepprobValue) {
    if !value.is_null() {
        drop(Box::from_raw(value));
    }
}

/// # Safety
/// `s` is null or a string returned by this library and is not used again.
#[no_mangle]
pub unsafe extern "C" fn sepprob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sepprob_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Reads a NUL-terminated string returned by this library. For tests and
/// Rust callers.
///
/// # Safety
/// `s` is null or a valid NUL-terminated string.
pub unsafe fn read_c_str(s: *const c_char) -> Option<String> {
    (!s.is_null()).then(|| CStr::from_ptr(s).to_string_lossy().into_owned())
}
