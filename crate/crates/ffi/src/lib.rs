//! C ABI over the simulator.
//!
//! Objects are handed out as opaque heap pointers and must be released with
//! the matching `*_free`. Every fallible call returns a [`CtError`] code and
//! records a message retrievable with [`ct_last_error_message`] on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cluster_teleport::analysis::{geometric_success, monte_carlo_repeat, success_probability};
use cluster_teleport::protocols::{
    proposed_teleport, ramirez_teleport, ChannelParams, InputState, Status, TeleportResult,
};
use cluster_teleport::qcore::Amplitude;
use cluster_teleport::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtError {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A protocol precondition on the channel does not hold.
    AssumptionViolated = 3,
    /// ρ is below the bound that keeps Λ₃ positive semidefinite.
    PovmNotPsd = 4,
    /// A failed attempt did not leave the input on the sender's qubit.
    SenderLost = 5,
    /// The requested value does not exist for this result.
    NoValue = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Success = 0,
    FailRecoverable = 1,
    FailInconclusive = 2,
}

/// Channel coefficients α, β, γ, η.
pub struct CtChannel(ChannelParams);

/// Input qubit `a|0⟩ + b|1⟩`.
pub struct CtInput(InputState);

/// Outcome of one protocol run.
pub struct CtResult(TeleportResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> CtError {
    match e {
        Error::Assumption(_) => CtError::AssumptionViolated,
        Error::PovmNotPsd { .. } => CtError::PovmNotPsd,
        Error::SenderLost(_) => CtError::SenderLost,
        _ => CtError::InvalidArgument,
    }
}

fn fail(code: CtError, msg: impl Into<String>) -> CtError {
    set_last_error(msg.into());
    code
}

fn from_error(e: Error) -> CtError {
    let code = code_of(&e);
    fail(code, e.to_string())
}

/// Runs `f`, turning a panic into [`CtError::Panic`].
fn guard(f: impl FnOnce() -> CtError) -> CtError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => fail(CtError::Panic, "internal panic"),
    }
}

fn guard_ptr(f: impl FnOnce() -> Result<*mut c_char, CtError>) -> *mut c_char {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(p)) => p,
        Ok(Err(_)) => ptr::null_mut(),
        Err(_) => {
            set_last_error("internal panic".into());
            ptr::null_mut()
        }
    }
}

fn c_string(s: String) -> Result<*mut c_char, CtError> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(CtError::InvalidArgument, "string contains a nul byte"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, CtError> {
    // SAFETY: caller guarantees `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(CtError::NullPointer, format!("`{name}` is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> CtError {
    if out.is_null() {
        return fail(CtError::NullPointer, "output pointer is null");
    }
    // SAFETY: `out` is non-null and the caller guarantees it is writable.
    unsafe { out.write(value) };
    CtError::Ok
}

/// Message for the last failing call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ct_channel_new(
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    gamma_re: f64,
    gamma_im: f64,
    eta_re: f64,
    eta_im: f64,
    out: *mut *mut CtChannel,
) -> CtError {
    guard(|| {
        match ChannelParams::new(
            Amplitude::new(alpha_re, alpha_im),
            Amplitude::new(beta_re, beta_im),
            Amplitude::new(gamma_re, gamma_im),
            Amplitude::new(eta_re, eta_im),
        ) {
            Ok(p) => unsafe { write_out(out, Box::into_raw(Box::new(CtChannel(p)))) },
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `channel` must be NULL or a handle from [`ct_channel_new`], freed once.
#[no_mangle]
pub unsafe extern "C" fn ct_channel_free(channel: *mut CtChannel) {
    if !channel.is_null() {
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_input_new(a_re: f64, a_im: f64, b_re: f64, b_im: f64, out: *mut *mut CtInput) -> CtError {
    guard(|| match InputState::new(Amplitude::new(a_re, a_im), Amplitude::new(b_re, b_im)) {
        Ok(s) => unsafe { write_out(out, Box::into_raw(Box::new(CtInput(s)))) },
        Err(e) => from_error(e),
    })
}

/// Amplitudes of an input handle.
///
/// # Safety
/// `input` must be a live handle; the four outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_input_amplitudes(
    input: *const CtInput,
    a_re: *mut f64,
    a_im: *mut f64,
    b_re: *mut f64,
    b_im: *mut f64,
) -> CtError {
    guard(|| {
        let s = match unsafe { deref(input, "input") } {
            Ok(s) => s.0,
            Err(code) => return code,
        };
        if a_re.is_null() || a_im.is_null() || b_re.is_null() || b_im.is_null() {
            return fail(CtError::NullPointer, "output pointer is null");
        }
        unsafe {
            a_re.write(s.a().re);
            a_im.write(s.a().im);
            b_re.write(s.b().re);
            b_im.write(s.b().im);
        }
        CtError::Ok
    })
}

/// # Safety
/// `input` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ct_input_free(input: *mut CtInput) {
    if !input.is_null() {
        drop(unsafe { Box::from_raw(input) });
    }
}

unsafe fn run_protocol(
    input: *const CtInput,
    channel: *const CtChannel,
    out: *mut *mut CtResult,
    run: impl FnOnce(&InputState, &ChannelParams) -> cluster_teleport::Result<TeleportResult>,
) -> CtError {
    guard(|| {
        let (zeta, p) = match unsafe { (deref(input, "input"), deref(channel, "channel")) } {
            (Ok(z), Ok(p)) => (&z.0, &p.0),
            (Err(code), _) | (_, Err(code)) => return code,
        };
        if out.is_null() {
            return fail(CtError::NullPointer, "output pointer is null");
        }
        match run(zeta, p) {
            Ok(r) => unsafe { write_out(out, Box::into_raw(Box::new(CtResult(r)))) },
            Err(e) => from_error(e),
        }
    })
}

/// One run of the information-preserving protocol.
///
/// # Safety
/// `input` and `channel` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_proposed_teleport(
    input: *const CtInput,
    channel: *const CtChannel,
    seed: u64,
    out: *mut *mut CtResult,
) -> CtError {
    unsafe { run_protocol(input, channel, out, |z, p| proposed_teleport(z, p, seed)) }
}

/// One run of the POVM protocol. A `rho` that is NaN or ≤ 0 selects the
/// default `max(2, ρ_min)`.
///
/// # Safety
/// `input` and `channel` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_ramirez_teleport(
    input: *const CtInput,
    channel: *const CtChannel,
    rho: f64,
    seed: u64,
    out: *mut *mut CtResult,
) -> CtError {
    let rho = (rho > 0.0).then_some(rho);
    unsafe { run_protocol(input, channel, out, |z, p| ramirez_teleport(z, p, rho, seed)) }
}

/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_result_status(result: *const CtResult, out: *mut CtStatus) -> CtError {
    guard(|| match unsafe { deref(result, "result") } {
        Ok(r) => {
            let s = match r.0.status {
                Status::Success => CtStatus::Success,
                Status::FailRecoverable => CtStatus::FailRecoverable,
                Status::FailInconclusive => CtStatus::FailInconclusive,
            };
            unsafe { write_out(out, s) }
        }
        Err(code) => code,
    })
}

/// Fidelity of the receiver's qubit with the input.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_result_target_fidelity(result: *const CtResult, out: *mut f64) -> CtError {
    guard(|| match unsafe { deref(result, "result") } {
        Ok(r) => unsafe { write_out(out, r.0.target_fidelity) },
        Err(code) => code,
    })
}

/// Fidelity of the sender's qubit with the input after a failed run;
/// [`CtError::NoValue`] for successful runs.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_result_sender_fidelity(result: *const CtResult, out: *mut f64) -> CtError {
    guard(|| match unsafe { deref(result, "result") } {
        Ok(r) => match r.0.sender_fidelity_on_fail {
            Some(f) => unsafe { write_out(out, f) },
            None => fail(CtError::NoValue, "run did not fail"),
        },
        Err(code) => code,
    })
}

/// The input state read back from the sender's qubit after a recoverable
/// failure, as a new handle to pass to the next attempt.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_result_recovered_input(result: *const CtResult, out: *mut *mut CtInput) -> CtError {
    guard(|| match unsafe { deref(result, "result") } {
        Ok(r) => match r.0.recovered_sender {
            Some(s) => unsafe { write_out(out, Box::into_raw(Box::new(CtInput(s)))) },
            None => fail(CtError::NoValue, "no recoverable failure in this run"),
        },
        Err(code) => code,
    })
}

/// Transcript as a JSON array of tagged events. Free with [`ct_string_free`].
/// Returns NULL on error.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_result_transcript_json(result: *const CtResult) -> *mut c_char {
    guard_ptr(|| {
        let r = unsafe { deref(result, "result") }?;
        c_string(serde_json::to_string(&r.0.transcript.events).expect("serializable"))
    })
}

/// # Safety
/// `result` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ct_result_free(result: *mut CtResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// `2(|α|² + |β|²)`.
///
/// # Safety
/// `channel` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_success_probability(channel: *const CtChannel, out: *mut f64) -> CtError {
    guard(|| match unsafe { deref(channel, "channel") } {
        Ok(p) => match success_probability(&p.0) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => from_error(e),
        },
        Err(code) => code,
    })
}

/// `1 - (1-p)^n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_geometric_success(p: f64, n: u32, out: *mut f64) -> CtError {
    guard(|| match geometric_success(p, n) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => from_error(e),
    })
}

/// Repeat-until-success statistics as a JSON object. Free with
/// [`ct_string_free`]. Returns NULL on error.
///
/// # Safety
/// `input` and `channel` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn ct_monte_carlo_repeat_json(
    input: *const CtInput,
    channel: *const CtChannel,
    trials: u64,
    max_tries: u32,
    seed: u64,
) -> *mut c_char {
    guard_ptr(|| {
        let zeta = unsafe { deref(input, "input") }?;
        let p = unsafe { deref(channel, "channel") }?;
        let stats = monte_carlo_repeat(&zeta.0, &p.0, trials, max_tries, seed).map_err(from_error)?;
        c_string(serde_json::to_string(&stats).expect("serializable"))
    })
}
