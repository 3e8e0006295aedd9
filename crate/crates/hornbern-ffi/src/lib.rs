//! C ABI over the `hornbern` library.
//!
//! Conventions, mirrored in the generated `include/hornbern.h`:
//!
//! * every fallible entry point returns an [`HbStatus`]; `HB_OK` is zero and
//!   any other value leaves a message readable via [`hb_last_error_message`];
//! * numeric inputs are NUL-terminated strings holding exact rationals in
//!   either fraction (`"23/10"`) or decimal (`"2.188585"`) form, so a C
//!   caller never loses precision to `double` on the way in;
//! * outputs are either `double` conveniences or newly allocated
//!   NUL-terminated strings the caller must release with [`hb_string_free`];
//! * stateful evaluation goes through the opaque [`HbEvaluator`] handle,
//!   created with [`hb_evaluator_new`] and released with
//!   [`hb_evaluator_free`]. Handles are cheap; one per thread is the
//!   intended pattern (they are not internally synchronised);
//! * panics never unwind across the boundary — they are caught and turned
//!   into `HB_ERR_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hornbern::certify::{
    bracket_beta_star, certify_pn_positive, tail_threshold, verify_moment_bound,
};
use hornbern::funcs::{eval_big_g, eval_g, eval_h, eval_rho, eval_tau0, EvalRequest};
use hornbern::moments::t_moments;
use hornbern::rat::{format_ratio, parse_rational, BigRational};
use hornbern::Error;

/// Status code returned by every fallible function in this interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum HbStatus {
    /// Success.
    HB_OK = 0,
    /// A required pointer argument was NULL.
    HB_ERR_NULL_POINTER = 1,
    /// A string argument was not valid UTF-8.
    HB_ERR_UTF8 = 2,
    /// Malformed input: unparseable number, or a parameter outside the
    /// documented limits of this interface.
    HB_ERR_INVALID = 3,
    /// Input outside the mathematical domain of the operation.
    HB_ERR_DOMAIN = 4,
    /// The accuracy target could not be met within internal limits.
    HB_ERR_PRECISION = 5,
    /// A search procedure (bracketing, bisection, scan) failed.
    HB_ERR_SEARCH = 6,
    /// An internal panic was caught at the language boundary.
    HB_ERR_PANIC = 7,
}

/// Opaque evaluator handle fixing the accuracy target (decimal digits of
/// absolute error) for every evaluation made through it.
pub struct HbEvaluator {
    req: EvalRequest,
    digits: u32,
}

/// Largest accepted accuracy target, in decimal digits.
const DIGITS_MAX: u32 = 10_000;
/// Largest moment index served by [`hb_moment_t`]; the exact recursion is
/// quadratic in the index, so this caps a single call at a sane cost.
const MOMENT_INDEX_MAX: u32 = 10_000;
/// Largest truncation order accepted by the certification entry points;
/// exact root counting beyond this is impractically slow.
const ORDER_MAX: u32 = 200;
/// Largest bracket width target, in decimal digits.
const BRACKET_DIGITS_MAX: u32 = 30;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    let c = CString::new(sanitized).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Message describing the most recent failure on the calling thread, or
/// NULL when no failure has occurred yet. The pointer stays valid until the
/// next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn hb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this interface.
///
/// # Safety
/// `s` must be a pointer previously returned by one of the
/// string-producing functions here (and not yet freed), or NULL.
#[no_mangle]
pub unsafe extern "C" fn hb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Internal plumbing
// ---------------------------------------------------------------------------

type FfiResult<T> = Result<T, (HbStatus, String)>;

fn status_of(err: &Error) -> HbStatus {
    match err {
        Error::Domain(_) => HbStatus::HB_ERR_DOMAIN,
        Error::Invalid(_) => HbStatus::HB_ERR_INVALID,
        Error::Precision(_) => HbStatus::HB_ERR_PRECISION,
        Error::Search(_) => HbStatus::HB_ERR_SEARCH,
    }
}

fn lib_err(err: Error) -> (HbStatus, String) {
    (status_of(&err), err.to_string())
}

/// Runs `body` with panics contained; on failure records the message for
/// [`hb_last_error_message`] and returns the status.
fn guarded(body: impl FnOnce() -> FfiResult<()>) -> HbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => HbStatus::HB_OK,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic caught at the language boundary");
            HbStatus::HB_ERR_PANIC
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err((
            HbStatus::HB_ERR_NULL_POINTER,
            format!("{what} must not be NULL"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HbStatus::HB_ERR_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn parse_arg(p: *const c_char, what: &str) -> FfiResult<BigRational> {
    let text = read_str(p, what)?;
    parse_rational(text).map_err(|e| (HbStatus::HB_ERR_INVALID, format!("{what}: {e}")))
}

fn out_slot<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    if p.is_null() {
        Err((
            HbStatus::HB_ERR_NULL_POINTER,
            format!("{what} must not be NULL"),
        ))
    } else {
        // SAFETY: non-null, and the caller contract requires a valid,
        // writable, properly aligned location.
        Ok(unsafe { &mut *p })
    }
}

fn evaluator<'a>(ev: *const HbEvaluator) -> FfiResult<&'a HbEvaluator> {
    if ev.is_null() {
        Err((
            HbStatus::HB_ERR_NULL_POINTER,
            "evaluator handle must not be NULL".into(),
        ))
    } else {
        // SAFETY: non-null, and the caller contract requires a live handle
        // from hb_evaluator_new.
        Ok(unsafe { &*ev })
    }
}

fn alloc_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (HbStatus::HB_ERR_INVALID, "output contained NUL".into()))
}

// ---------------------------------------------------------------------------
// Evaluator lifecycle
// ---------------------------------------------------------------------------

/// Creates an evaluator targeting an absolute error of at most
/// `10^-digits` per evaluation. `digits` must lie in `1..=10000`.
/// Returns NULL (with the error recorded) on a bad argument.
#[no_mangle]
pub extern "C" fn hb_evaluator_new(digits: u32) -> *mut HbEvaluator {
    if digits == 0 || digits > DIGITS_MAX {
        set_last_error(&format!("digits must lie in 1..={DIGITS_MAX}, got {digits}"));
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(HbEvaluator {
        req: EvalRequest::digits(digits as usize),
        digits,
    }))
}

/// Releases an evaluator.
///
/// # Safety
/// `ev` must be a handle from [`hb_evaluator_new`] not yet freed, or NULL.
#[no_mangle]
pub unsafe extern "C" fn hb_evaluator_free(ev: *mut HbEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// Accuracy target of the handle, in decimal digits; 0 if `ev` is NULL.
#[no_mangle]
pub extern "C" fn hb_evaluator_digits(ev: *const HbEvaluator) -> u32 {
    if ev.is_null() {
        0
    } else {
        // SAFETY: non-null, and the caller contract requires a live handle.
        unsafe { (*ev).digits }
    }
}

// ---------------------------------------------------------------------------
// Function evaluation
// ---------------------------------------------------------------------------

/// `h_alpha(x) = (1 + 1/x)^(alpha x)` for `x > 0`, rounded to double.
///
/// # Safety
/// `ev` must be a live handle; `alpha` and `x` must be NUL-terminated
/// strings; `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_h_f64(
    ev: *const HbEvaluator,
    alpha: *const c_char,
    x: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guarded(|| {
        let a = unsafe { parse_arg(alpha, "alpha") }?;
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        *slot = eval_h(&a, &xq, &handle.req).map_err(lib_err)?.approx_f64();
        Ok(())
    })
}

/// `rho(x) = log(1 + 1/x) - 1/(x + 1)` for `x > 0`, rounded to double.
///
/// # Safety
/// As for [`hb_eval_h_f64`], without `alpha`.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_rho_f64(
    ev: *const HbEvaluator,
    x: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guarded(|| {
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        *slot = eval_rho(&xq, &handle.req).map_err(lib_err)?.approx_f64();
        Ok(())
    })
}

/// `g(x) = 1 / (x (x+1) [(x+1) log(1 + 1/x) - 1])` for `x > 0`, rounded
/// to double.
///
/// # Safety
/// As for [`hb_eval_rho_f64`].
#[no_mangle]
pub unsafe extern "C" fn hb_eval_g_f64(
    ev: *const HbEvaluator,
    x: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guarded(|| {
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        *slot = eval_g(&xq, &handle.req).map_err(lib_err)?.approx_f64();
        Ok(())
    })
}

/// Stieltjes density `tau0(t)` on `0 < t < 1`, rounded to double.
///
/// # Safety
/// As for [`hb_eval_rho_f64`] with `t` in place of `x`.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_tau0_f64(
    ev: *const HbEvaluator,
    t: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guarded(|| {
        let tq = unsafe { parse_arg(t, "t") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        *slot = eval_tau0(&tq, &handle.req).map_err(lib_err)?.approx_f64();
        Ok(())
    })
}

/// Series `G_alpha(x) = 2 + sum_{n>=1} x^n/n! (t_n - alpha/(n+1))` for
/// `x >= 0`, rounded to double (may overflow to infinity for large `x`).
///
/// # Safety
/// As for [`hb_eval_h_f64`].
#[no_mangle]
pub unsafe extern "C" fn hb_eval_big_g_f64(
    ev: *const HbEvaluator,
    alpha: *const c_char,
    x: *const c_char,
    out: *mut f64,
) -> HbStatus {
    guarded(|| {
        let a = unsafe { parse_arg(alpha, "alpha") }?;
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        *slot = eval_big_g(&a, &xq, &handle.req)
            .map_err(lib_err)?
            .approx_f64();
        Ok(())
    })
}

/// `h_alpha(x)` as a decimal string at the handle's digit target (the
/// absolute error is below one unit in the last place shown). The caller
/// owns the string; release it with [`hb_string_free`].
///
/// # Safety
/// As for [`hb_eval_h_f64`], with `out` pointing to a writable `char *`.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_h_decimal(
    ev: *const HbEvaluator,
    alpha: *const c_char,
    x: *const c_char,
    out: *mut *mut c_char,
) -> HbStatus {
    guarded(|| {
        let a = unsafe { parse_arg(alpha, "alpha") }?;
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        let value = eval_h(&a, &xq, &handle.req).map_err(lib_err)?;
        let (decimal, _abs_err) = value.to_decimal(handle.digits as usize);
        *slot = alloc_string(decimal)?;
        Ok(())
    })
}

/// `rho(x)` as a decimal string; see [`hb_eval_h_decimal`] for ownership.
///
/// # Safety
/// As for [`hb_eval_rho_f64`], with `out` pointing to a writable `char *`.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_rho_decimal(
    ev: *const HbEvaluator,
    x: *const c_char,
    out: *mut *mut c_char,
) -> HbStatus {
    guarded(|| {
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        let value = eval_rho(&xq, &handle.req).map_err(lib_err)?;
        let (decimal, _abs_err) = value.to_decimal(handle.digits as usize);
        *slot = alloc_string(decimal)?;
        Ok(())
    })
}

/// `g(x)` as a decimal string; see [`hb_eval_h_decimal`] for ownership.
///
/// # Safety
/// As for [`hb_eval_rho_f64`], with `out` pointing to a writable `char *`.
#[no_mangle]
pub unsafe extern "C" fn hb_eval_g_decimal(
    ev: *const HbEvaluator,
    x: *const c_char,
    out: *mut *mut c_char,
) -> HbStatus {
    guarded(|| {
        let xq = unsafe { parse_arg(x, "x") }?;
        let handle = evaluator(ev)?;
        let slot = out_slot(out, "out")?;
        let value = eval_g(&xq, &handle.req).map_err(lib_err)?;
        let (decimal, _abs_err) = value.to_decimal(handle.digits as usize);
        *slot = alloc_string(decimal)?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Exact layer
// ---------------------------------------------------------------------------

/// Exact moment `t_n` as a rational string (for example `"1465/3402"` at
/// `n = 5`). `n` must not exceed 10000. The caller owns the string.
///
/// # Safety
/// `out` must point to a writable `char *`.
#[no_mangle]
pub unsafe extern "C" fn hb_moment_t(n: u32, out: *mut *mut c_char) -> HbStatus {
    guarded(|| {
        if n > MOMENT_INDEX_MAX {
            return Err((
                HbStatus::HB_ERR_INVALID,
                format!("moment index must not exceed {MOMENT_INDEX_MAX}, got {n}"),
            ));
        }
        let slot = out_slot(out, "out")?;
        let table = t_moments(n as usize);
        *slot = alloc_string(format_ratio(&table[n as usize]))?;
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// Exact check of `(n+1) t_n > c` for every `n` in `n_from..=n_to`.
/// `*out_all_pass` becomes 1 when the whole range passes, 0 otherwise.
///
/// # Safety
/// `c` must be a NUL-terminated string; `out_all_pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_verify_moment_bound(
    c: *const c_char,
    n_from: u32,
    n_to: u32,
    out_all_pass: *mut i32,
) -> HbStatus {
    guarded(|| {
        let cq = unsafe { parse_arg(c, "c") }?;
        let slot = out_slot(out_all_pass, "out_all_pass")?;
        let cert = verify_moment_bound(&cq, n_from as usize, n_to as usize).map_err(lib_err)?;
        *slot = i32::from(cert.all_pass);
        Ok(())
    })
}

/// Least cutoff with `(n+1) t_n > c` certified for every `n` at or beyond
/// it, via the `sigma`-tail lower bound (`1/2 < sigma < 1`). On success
/// `*out_valid` is 1 and `*out_threshold` holds the cutoff; when the chosen
/// `sigma` certifies nothing, `*out_valid` is 0.
///
/// # Safety
/// `c` and `sigma` must be NUL-terminated strings; both out pointers must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_tail_threshold(
    c: *const c_char,
    sigma: *const c_char,
    digits: u32,
    out_valid: *mut i32,
    out_threshold: *mut u32,
) -> HbStatus {
    guarded(|| {
        if digits == 0 || digits > DIGITS_MAX {
            return Err((
                HbStatus::HB_ERR_INVALID,
                format!("digits must lie in 1..={DIGITS_MAX}, got {digits}"),
            ));
        }
        let cq = unsafe { parse_arg(c, "c") }?;
        let sq = unsafe { parse_arg(sigma, "sigma") }?;
        let valid_slot = out_slot(out_valid, "out_valid")?;
        let threshold_slot = out_slot(out_threshold, "out_threshold")?;
        let cert =
            tail_threshold(&cq, &sq, &EvalRequest::digits(digits as usize)).map_err(lib_err)?;
        *valid_slot = i32::from(cert.valid);
        *threshold_slot = cert.n_threshold as u32;
        Ok(())
    })
}

/// Exact positivity of the order-`n` truncation on the positive half-line
/// at the given `alpha`; `*out_positive` becomes 1 or 0. `n` must not
/// exceed 200.
///
/// # Safety
/// `alpha` must be a NUL-terminated string; `out_positive` writable.
#[no_mangle]
pub unsafe extern "C" fn hb_certify_pn_positive(
    n: u32,
    alpha: *const c_char,
    out_positive: *mut i32,
) -> HbStatus {
    guarded(|| {
        if n > ORDER_MAX {
            return Err((
                HbStatus::HB_ERR_INVALID,
                format!("truncation order must not exceed {ORDER_MAX}, got {n}"),
            ));
        }
        let a = unsafe { parse_arg(alpha, "alpha") }?;
        let slot = out_slot(out_positive, "out_positive")?;
        let report = certify_pn_positive(n as usize, &a).map_err(lib_err)?;
        *slot = i32::from(report.positive_on_half_line);
        Ok(())
    })
}

/// Certified rational bracket for the Bernstein threshold: on success
/// `*out_lower` and `*out_upper` receive rational strings with
/// `upper - lower <= 10^-target_digits`, the lower endpoint carrying a
/// positivity certificate and the upper a refutation, and `*out_n_used`
/// the truncation order that produced them (auto-escalated from
/// `n_start`). `n_start` must not exceed 200 and `target_digits` must lie
/// in `1..=30`. The caller owns both strings.
///
/// # Safety
/// All out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hb_bracket_beta_star(
    n_start: u32,
    target_digits: u32,
    out_lower: *mut *mut c_char,
    out_upper: *mut *mut c_char,
    out_n_used: *mut u32,
) -> HbStatus {
    guarded(|| {
        if n_start > ORDER_MAX {
            return Err((
                HbStatus::HB_ERR_INVALID,
                format!("truncation order must not exceed {ORDER_MAX}, got {n_start}"),
            ));
        }
        if target_digits == 0 || target_digits > BRACKET_DIGITS_MAX {
            return Err((
                HbStatus::HB_ERR_INVALID,
                format!("target_digits must lie in 1..={BRACKET_DIGITS_MAX}, got {target_digits}"),
            ));
        }
        let lower_slot = out_slot(out_lower, "out_lower")?;
        let upper_slot = out_slot(out_upper, "out_upper")?;
        let n_slot = out_slot(out_n_used, "out_n_used")?;
        let bracket = bracket_beta_star(
            n_start as usize,
            target_digits as usize,
            &EvalRequest::digits(target_digits as usize),
        )
        .map_err(lib_err)?;
        let lower = alloc_string(format_ratio(&bracket.lower))?;
        match alloc_string(format_ratio(&bracket.upper)) {
            Ok(upper) => {
                *lower_slot = lower;
                *upper_slot = upper;
                *n_slot = bracket.n_used as u32;
                Ok(())
            }
            Err(e) => {
                // SAFETY: `lower` came from CString::into_raw two lines up.
                unsafe { hb_string_free(lower) };
                Err(e)
            }
        }
    })
}
