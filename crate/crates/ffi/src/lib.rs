//! C interface to the apolarity toolkit.
//!
//! Forms live behind an opaque `ApForm` handle. Every fallible call returns
//! an `ApStatus`; on failure a message is available from
//! `ap_last_error_message` on the same thread. Strings handed out by the
//! library are released with `ap_string_free`, forms with `ap_form_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apolarity::apolar::hilbert;
use apolarity::bounds::{wild_certificate, Strategy};
use apolarity::families::{build, FamilySpec};
use apolarity::parse::parse_form;
use apolarity::powersum::binary_waring_rank;
use apolarity::{Error, Form, Vars};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Precondition = 5,
    BufferTooSmall = 6,
    Budget = 7,
    Internal = 8,
}

/// Opaque handle to a homogeneous form.
pub struct ApForm {
    form: Form,
    /// Set when the form came from a named family; certificates use it.
    strategy: Option<Strategy>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ApStatus {
    match e {
        Error::Parse { .. } | Error::UnknownVariable(_) => ApStatus::Parse,
        Error::OverSymbolicCap { .. } => ApStatus::Budget,
        Error::Precondition(_) | Error::GenericityExhausted { .. } => ApStatus::Precondition,
        _ => ApStatus::InvalidInput,
    }
}

/// Run `body`, recording errors and turning panics into `Internal`.
fn guard(body: impl FnOnce() -> Result<(), (ApStatus, String)>) -> ApStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ApStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            ApStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (ApStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ApStatus, String)> {
    if p.is_null() {
        return Err((ApStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ApStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn form_ref<'a>(p: *const ApForm) -> Result<&'a ApForm, (ApStatus, String)> {
    p.as_ref().ok_or((ApStatus::NullPointer, "form handle is null".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (ApStatus, String)> {
    if out.is_null() {
        return Err((ApStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Parse `poly` over the comma-separated variable list `vars`.
///
/// # Safety
/// `vars` and `poly` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_form_parse(vars: *const c_char, poly: *const c_char, out: *mut *mut ApForm) -> ApStatus {
    guard(|| {
        let vars = Vars::parse(read_str(vars, "vars")?).map_err(lib_err)?;
        let form = parse_form(read_str(poly, "poly")?, &vars).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(ApForm { form, strategy: None })))
    })
}

/// Build a named family. `params` holds `key=value` pairs separated by
/// commas and may be null.
///
/// # Safety
/// `name` and non-null `params` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_form_from_family(
    name: *const c_char,
    params: *const c_char,
    seed: u64,
    out: *mut *mut ApForm,
) -> ApStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let params: Vec<&str> = if params.is_null() {
            Vec::new()
        } else {
            read_str(params, "params")?.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
        };
        let spec = FamilySpec::parse(name, &params, seed).map_err(lib_err)?;
        let fam = build(&spec).map_err(lib_err)?;
        let form = fam.form().map_err(lib_err)?.clone();
        let strategy = Some(fam.strategy(Default::default()));
        write_out(out, Box::into_raw(Box::new(ApForm { form, strategy })))
    })
}

/// Release a form; null is ignored.
///
/// # Safety
/// `form` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ap_form_free(form: *mut ApForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_form_degree(form: *const ApForm, out: *mut u32) -> ApStatus {
    guard(|| write_out(out, form_ref(form)?.form.degree()))
}

/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_form_nvars(form: *const ApForm, out: *mut usize) -> ApStatus {
    guard(|| write_out(out, form_ref(form)?.form.nvars()))
}

/// Text of the form; free with `ap_string_free`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_form_render(form: *const ApForm, out: *mut *mut c_char) -> ApStatus {
    guard(|| write_out(out, into_c_string(form_ref(form)?.form.render())))
}

/// Hilbert function into `buf` (capacity `cap`). `len` always receives the
/// full length; `BufferTooSmall` is returned if it exceeds `cap`.
///
/// # Safety
/// `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_hilbert(form: *const ApForm, buf: *mut usize, cap: usize, len: *mut usize) -> ApStatus {
    guard(|| {
        let h = hilbert(&form_ref(form)?.form).map_err(lib_err)?;
        let values = h.values();
        write_out(len, values.len())?;
        if values.len() > cap {
            return Err((ApStatus::BufferTooSmall, format!("need room for {} values", values.len())));
        }
        if buf.is_null() {
            return Err((ApStatus::NullPointer, "buffer is null".into()));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// Waring rank of a binary form.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_binary_rank(form: *const ApForm, out: *mut usize) -> ApStatus {
    guard(|| write_out(out, binary_waring_rank(&form_ref(form)?.form).map_err(lib_err)?))
}

/// Wild-form certificate as JSON; free with `ap_string_free`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_wild_certificate_json(form: *const ApForm, out: *mut *mut c_char) -> ApStatus {
    guard(|| {
        let f = form_ref(form)?;
        let strategy = f.strategy.clone().unwrap_or_default();
        let cert = wild_certificate(&f.form, &strategy).map_err(lib_err)?;
        write_out(out, into_c_string(cert.to_json()))
    })
}

/// Full analysis report as JSON (timestamp omitted); free with `ap_string_free`.
///
/// # Safety
/// `form` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_analyze_json(form: *const ApForm, out: *mut *mut c_char) -> ApStatus {
    guard(|| {
        let f = &form_ref(form)?.form;
        let vars = f.vars().names().join(",");
        let poly = f.render();
        let args = ["apolarity", "analyze", "--vars", &vars, "--poly", &poly, "--json", "--deterministic"];
        let (code, text) = apolarity::cli::run(args);
        if code != apolarity::cli::EXIT_OK {
            return Err((ApStatus::InvalidInput, text.trim().to_string()));
        }
        write_out(out, into_c_string(text))
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn ap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
