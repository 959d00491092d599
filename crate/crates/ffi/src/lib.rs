//! C ABI for `peakcount`.
//!
//! Every fallible function returns a [`PcStatus`] and writes results through
//! out-pointers. On failure the message is kept per thread and can be fetched
//! with [`pc_last_error`]. Elections and models are opaque handles released
//! with their `_free` function; strings returned by the library are released
//! with [`pc_string_free`].
//!
//! Candidates are numbered `1..=m` and votes are passed as `m` consecutive
//! `uint16_t`, most preferred first. Probabilities that may underflow a
//! `double` are reported as natural logarithms.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use peakcount::counting::{
    iac_bounds, ic_probability_bounds, mallows_lower, polya_lower_certified, sp_count_exact,
    BoundResult, Quantity,
};
use peakcount::decimal::parse_decimal;
use peakcount::estimate::estimate_sp;
use peakcount::io::{parse_elections, write_election};
use peakcount::sampling::{sample, ModelSpec, RngStream};
use peakcount::vote::kendall_tau;
use peakcount::{recognize_exhaustive, recognize_fast, Election, Error, Vote};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    InvalidArgument = 1,
    CapabilityExceeded = 2,
    NullPointer = 3,
    Panic = 4,
}

/// An election: `n` votes over candidates `1..=m`.
pub struct PcElection {
    inner: Election,
}

/// A probability model to sample from or bound.
pub struct PcModel {
    inner: ModelSpec,
}

/// Natural logarithms of the available bounds; `has_*` is 0 when a value is
/// absent.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PcBounds {
    pub has_lower: c_int,
    pub ln_lower: f64,
    pub has_upper: c_int,
    pub ln_upper: f64,
    pub has_exact: c_int,
    pub ln_exact: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PcEstimate {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_capability() {
            PcStatus::CapabilityExceeded
        } else {
            PcStatus::InvalidArgument
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(PcStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            PcStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn vote_arg(p: *const u16, m: usize, what: &str) -> Result<Vote, Fail> {
    if m == 0 {
        return Err(invalid(format!("{what} is empty")));
    }
    Ok(Vote::new(slice(p, m, what)?.to_vec())?)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message of the last failure on this thread, or NULL. Free with
/// [`pc_string_free`].
#[no_mangle]
pub extern "C" fn pc_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Kendall tau distance between two votes over `1..=m`.
///
/// # Safety
/// `a` and `b` must point to `m` readable values; `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_kendall_tau(
    a: *const u16,
    b: *const u16,
    m: usize,
    out_distance: *mut u64,
) -> PcStatus {
    guard(|| {
        let out_distance = out(out_distance, "out_distance")?;
        let (a, b) = (vote_arg(a, m, "a")?, vote_arg(b, m, "b")?);
        *out_distance = kendall_tau(&a, &b)?;
        Ok(())
    })
}

/// Builds an election from `n * m` ranks stored vote after vote.
///
/// # Safety
/// `ranks` must point to `n * m` readable values; `out_election` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn pc_election_new(
    ranks: *const u16,
    n: usize,
    m: usize,
    out_election: *mut *mut PcElection,
) -> PcStatus {
    guard(|| {
        let out_election = out(out_election, "out_election")?;
        if n == 0 || m == 0 {
            return Err(invalid("n and m must be positive"));
        }
        let len = n.checked_mul(m).ok_or_else(|| invalid("n * m overflows"))?;
        let ranks = slice(ranks, len, "ranks")?;
        let votes = ranks
            .chunks(m)
            .map(|r| Vote::new(r.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        *out_election = Box::into_raw(Box::new(PcElection {
            inner: Election::new(votes)?,
        }));
        Ok(())
    })
}

/// Parses the first election of a text in the election file format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out_election` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_election_parse(
    text: *const c_char,
    out_election: *mut *mut PcElection,
) -> PcStatus {
    guard(|| {
        let out_election = out(out_election, "out_election")?;
        let first = parse_elections(str_arg(text, "text")?)?.swap_remove(0);
        *out_election = Box::into_raw(Box::new(PcElection { inner: first }));
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pc_election_free(e: *mut PcElection) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Number of votes, or 0 for NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_election_n(e: *const PcElection) -> usize {
    e.as_ref().map_or(0, |e| e.inner.n())
}

/// Number of candidates, or 0 for NULL.
///
/// # Safety
/// `e` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_election_m(e: *const PcElection) -> usize {
    e.as_ref().map_or(0, |e| e.inner.m())
}

/// Copies vote `index` (0-based) into `out_vote`, which holds `m` values.
///
/// # Safety
/// `e` must be a live handle and `out_vote` must have room for `m` values.
#[no_mangle]
pub unsafe extern "C" fn pc_election_vote(
    e: *const PcElection,
    index: usize,
    out_vote: *mut u16,
) -> PcStatus {
    guard(|| {
        let e = &e.as_ref().ok_or_else(|| null("election"))?.inner;
        let v = e
            .votes()
            .get(index)
            .ok_or_else(|| invalid(format!("vote index {index} out of range for n = {}", e.n())))?;
        if out_vote.is_null() {
            return Err(null("out_vote"));
        }
        ptr::copy_nonoverlapping(v.ranking().as_ptr(), out_vote, v.len());
        Ok(())
    })
}

/// The election in the file format. Free with [`pc_string_free`].
///
/// # Safety
/// `e` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_election_to_string(
    e: *const PcElection,
    out_text: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        let e = &e.as_ref().ok_or_else(|| null("election"))?.inner;
        *out(out_text, "out_text")? = into_c_string(write_election(e));
        Ok(())
    })
}

/// Sets `*out_is_sp` to 1 when the election is single-peaked and then writes
/// an axis of `m` candidates to `out_axis` (which may be NULL). With
/// `exhaustive` nonzero the lexicographically first axis is reported.
///
/// # Safety
/// `e` must be a live handle, `out_is_sp` writable and `out_axis` NULL or
/// room for `m` values.
#[no_mangle]
pub unsafe extern "C" fn pc_recognize(
    e: *const PcElection,
    exhaustive: c_int,
    out_is_sp: *mut c_int,
    out_axis: *mut u16,
) -> PcStatus {
    guard(|| {
        let e = &e.as_ref().ok_or_else(|| null("election"))?.inner;
        let out_is_sp = out(out_is_sp, "out_is_sp")?;
        let axis = if exhaustive != 0 {
            recognize_exhaustive(e)?
        } else {
            recognize_fast(e)
        };
        *out_is_sp = axis.is_some() as c_int;
        if let (Some(a), false) = (axis, out_axis.is_null()) {
            ptr::copy_nonoverlapping(a.order().as_ptr(), out_axis, a.len());
        }
        Ok(())
    })
}

/// Number of single-peaked `(n, m)`-elections as a decimal string, where a
/// closed form exists. Free with [`pc_string_free`].
///
/// # Safety
/// `out_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_sp_count(n: u64, m: u64, out_count: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let out_count = out(out_count, "out_count")?;
        *out_count = into_c_string(sp_count_exact(n, m)?.to_string());
        Ok(())
    })
}

fn boxed_model(spec: ModelSpec) -> *mut PcModel {
    Box::into_raw(Box::new(PcModel { inner: spec }))
}

/// Impartial Culture.
#[no_mangle]
pub extern "C" fn pc_model_ic() -> *mut PcModel {
    boxed_model(ModelSpec::Ic)
}

/// Impartial Anonymous Culture.
#[no_mangle]
pub extern "C" fn pc_model_iac() -> *mut PcModel {
    boxed_model(ModelSpec::Iac)
}

/// Pólya urn with homogeneity `a >= 1`.
///
/// # Safety
/// `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_model_polya(a: u64, out_model: *mut *mut PcModel) -> PcStatus {
    guard(|| {
        let out_model = out(out_model, "out_model")?;
        if a == 0 {
            return Err(invalid("homogeneity a must be at least 1"));
        }
        *out_model = boxed_model(ModelSpec::Polya { a });
        Ok(())
    })
}

/// Mallows model. `phi` is a decimal (`"0.1"`) or fraction (`"1/3"`) in
/// `(0, 1]`; `reference` holds `m` candidates.
///
/// # Safety
/// `phi` must be a nul-terminated string, `reference` must point to `m`
/// values and `out_model` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_model_mallows(
    phi: *const c_char,
    reference: *const u16,
    m: usize,
    out_model: *mut *mut PcModel,
) -> PcStatus {
    guard(|| {
        let out_model = out(out_model, "out_model")?;
        let text = str_arg(phi, "phi")?;
        let phi = match text.split_once('/') {
            Some((p, q)) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| invalid(format!("bad phi {text:?}")))
                };
                let (p, q) = (parse(p)?, parse(q)?);
                if q == 0 {
                    return Err(invalid("zero denominator in phi"));
                }
                BigRational::new(p.into(), q.into())
            }
            None => parse_decimal(text)?,
        };
        let spec = ModelSpec::Mallows {
            phi,
            reference: vote_arg(reference, m, "reference")?,
        };
        spec.validate(m)?;
        *out_model = boxed_model(spec);
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn pc_model_free(model: *mut PcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

fn set(q: &Option<Quantity>, has: &mut c_int, ln: &mut f64) {
    if let Some(q) = q {
        *has = 1;
        *ln = q.ln();
    }
}

fn lower_only(q: Quantity, formula: &'static str) -> BoundResult {
    BoundResult {
        lower: Some(q),
        upper: None,
        exact: None,
        formula,
    }
}

/// Bounds on the probability that an `(n, m)`-election drawn from `model` is
/// single-peaked. The Pólya lower bound is the guaranteed two-vote bound.
///
/// # Safety
/// `model` must be a live handle and `out_bounds` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_bounds(
    model: *const PcModel,
    n: u64,
    m: u64,
    out_bounds: *mut PcBounds,
) -> PcStatus {
    guard(|| {
        let spec = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        let out_bounds = out(out_bounds, "out_bounds")?;
        let b = match spec {
            ModelSpec::Ic => ic_probability_bounds(n, m)?,
            ModelSpec::Iac => iac_bounds(n, m)?,
            ModelSpec::Polya { a } => lower_only(
                Quantity::Exact(polya_lower_certified(n, m, *a)?),
                "polya-lower-certified",
            ),
            ModelSpec::Mallows { phi, reference } => {
                if reference.len() as u64 != m {
                    return Err(invalid(format!(
                        "reference has {} candidates, m = {m}",
                        reference.len()
                    )));
                }
                lower_only(Quantity::Exact(mallows_lower(n, m, phi)?), "mallows-lower")
            }
        };
        let mut r = PcBounds::default();
        set(&b.lower, &mut r.has_lower, &mut r.ln_lower);
        set(&b.upper, &mut r.has_upper, &mut r.ln_upper);
        set(&b.exact, &mut r.has_exact, &mut r.ln_exact);
        *out_bounds = r;
        Ok(())
    })
}

/// Draws one election from stream `stream` of `seed`.
///
/// # Safety
/// `model` must be a live handle and `out_election` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_sample(
    model: *const PcModel,
    n: usize,
    m: usize,
    seed: u64,
    stream: u64,
    out_election: *mut *mut PcElection,
) -> PcStatus {
    guard(|| {
        let spec = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        let out_election = out(out_election, "out_election")?;
        let e = sample(spec, n, m, &mut RngStream::new(seed, stream))?;
        *out_election = Box::into_raw(Box::new(PcElection { inner: e }));
        Ok(())
    })
}

/// Monte Carlo estimate of the single-peaked probability. Results depend on
/// `seed` but not on `workers`.
///
/// # Safety
/// `model` must be a live handle and `out_estimate` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_estimate(
    model: *const PcModel,
    n: usize,
    m: usize,
    trials: u64,
    seed: u64,
    workers: usize,
    out_estimate: *mut PcEstimate,
) -> PcStatus {
    guard(|| {
        let spec = &model.as_ref().ok_or_else(|| null("model"))?.inner;
        let out_estimate = out(out_estimate, "out_estimate")?;
        let est = estimate_sp(spec, n, m, trials, seed, workers)?;
        *out_estimate = PcEstimate {
            successes: est.successes,
            trials: est.trials,
            estimate: est.point.to_f64().unwrap_or(f64::NAN),
            ci_low: est.ci_low,
            ci_high: est.ci_high,
        };
        Ok(())
    })
}
