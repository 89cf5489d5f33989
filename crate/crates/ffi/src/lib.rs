//! C ABI for mgideal.
//!
//! Objects are opaque handles created by `mg_*_new` style functions and released
//! with the matching `mg_*_free`. Every fallible call returns an [`MgStatus`];
//! on failure, [`mg_last_error_message`] describes the error for the calling thread.
//! Strings handed out by the library must be released with [`mg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mgideal::determinantal::GradedMatrix;
use mgideal::script::{self, RunConfig};
use mgideal::theory::{self, CheckOptions, Verdict};
use mgideal::{BlockRing, Error, Ideal, TermOrder};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    NotHomogeneous = 5,
    RequiresMonomial = 6,
    RequiresSquarefree = 7,
    ResourceLimit = 8,
    HypothesisNotSatisfied = 9,
    Precondition = 10,
    InternalConsistency = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgOrder {
    Degrevlex = 0,
    Lex = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgVerdict {
    No = 0,
    Yes = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgGrading {
    Column = 0,
    Row = 1,
}

/// A multigraded polynomial ring over a prime field.
pub struct MgRing(BlockRing);

/// An ideal of an [`MgRing`]; it keeps its own copy of the ring.
pub struct MgIdeal(Ideal);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MgStatus {
    match e {
        Error::Structural(_) | Error::InvalidRing(_) | Error::InvalidOrder(_) => MgStatus::InvalidArgument,
        Error::RingTooSmallToPolarize { .. } | Error::NotStronglyStable => MgStatus::InvalidArgument,
        Error::NotHomogeneous(_) => MgStatus::NotHomogeneous,
        Error::RequiresSquarefree => MgStatus::RequiresSquarefree,
        Error::RequiresMonomial => MgStatus::RequiresMonomial,
        Error::ResourceLimit(_) => MgStatus::ResourceLimit,
        Error::HypothesisNotSatisfied(_) => MgStatus::HypothesisNotSatisfied,
        Error::Precondition(_) => MgStatus::Precondition,
        Error::InternalConsistency(_) => MgStatus::InternalConsistency,
        Error::Parse { .. } | Error::Semantic { .. } => MgStatus::Parse,
    }
}

struct Failure(MgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any error and converts panics into [`MgStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            MgStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(MgStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(MgStatus::NullPointer, format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn order_for(ring: &BlockRing, order: MgOrder) -> TermOrder {
    match order {
        MgOrder::Degrevlex => TermOrder::degrevlex(ring),
        MgOrder::Lex => TermOrder::lex(ring),
    }
}

fn verdict(v: Verdict) -> MgVerdict {
    match v {
        Verdict::Yes => MgVerdict::Yes,
        Verdict::No => MgVerdict::No,
        Verdict::Inconclusive => MgVerdict::Inconclusive,
    }
}

/// Message for the last failed call on this thread, or null. Owned by the library
/// and valid until the next call into it from the same thread.
#[no_mangle]
pub extern "C" fn mg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn mg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the ring with `num_blocks` blocks of the given sizes over F_p.
/// Pass `characteristic = 0` for the default prime.
///
/// # Safety
/// `block_sizes` must point to `num_blocks` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_ring_new(
    block_sizes: *const usize,
    num_blocks: usize,
    characteristic: u32,
    out: *mut *mut MgRing,
) -> MgStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        if block_sizes.is_null() {
            return Err(Failure(MgStatus::NullPointer, "block_sizes is null".into()));
        }
        let sizes = std::slice::from_raw_parts(block_sizes, num_blocks).to_vec();
        let ring = if characteristic == 0 {
            BlockRing::with_blocks(&sizes)?
        } else {
            BlockRing::new(sizes, characteristic)?
        };
        *out = Box::into_raw(Box::new(MgRing(ring)));
        Ok(())
    })
}

/// # Safety
/// `ring` must be null or a live handle from [`mg_ring_new`].
#[no_mangle]
pub unsafe extern "C" fn mg_ring_free(ring: *mut MgRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `ring` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_ring_num_vars(ring: *const MgRing) -> usize {
    ring.as_ref().map_or(0, |r| r.0.num_vars())
}

/// Builds the ideal generated by `num_generators` multihomogeneous polynomials
/// written like `x[1,1]*x[2,2] - x[1,2]*x[2,1]`.
///
/// # Safety
/// `generators` must point to `num_generators` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_new(
    ring: *const MgRing,
    generators: *const *const c_char,
    num_generators: usize,
    out: *mut *mut MgIdeal,
) -> MgStatus {
    guard(|| {
        let ring = &borrow(ring, "ring")?.0;
        let out = out_ptr(out, "out")?;
        if generators.is_null() && num_generators > 0 {
            return Err(Failure(MgStatus::NullPointer, "generators is null".into()));
        }
        let mut polys = Vec::with_capacity(num_generators);
        for k in 0..num_generators {
            let text = read_str(*generators.add(k), "generator")?;
            polys.push(script::parse_polynomial(ring, text)?);
        }
        let ideal = Ideal::new(ring, polys)?;
        ideal.require_graded()?;
        *out = Box::into_raw(Box::new(MgIdeal(ideal)));
        Ok(())
    })
}

/// Ideal of `t`-minors of a random matrix with full-rank coefficients. A
/// column-graded matrix has `size` rows and one column per block; a row-graded
/// one has one row per block and `size` columns.
///
/// # Safety
/// `ring` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_random_minors(
    ring: *const MgRing,
    grading: MgGrading,
    size: usize,
    t: usize,
    seed: u64,
    out: *mut *mut MgIdeal,
) -> MgStatus {
    guard(|| {
        let ring = &borrow(ring, "ring")?.0;
        let out = out_ptr(out, "out")?;
        let matrix = match grading {
            MgGrading::Column => GradedMatrix::random_column_graded(ring, size, seed)?,
            MgGrading::Row => GradedMatrix::random_row_graded(ring, size, seed)?,
        };
        *out = Box::into_raw(Box::new(MgIdeal(matrix.minors_ideal(t)?)));
        Ok(())
    })
}

/// # Safety
/// `ideal` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_free(ideal: *mut MgIdeal) {
    if !ideal.is_null() {
        drop(Box::from_raw(ideal));
    }
}

/// Generators as text, separated by `", "`.
///
/// # Safety
/// `ideal` must be a live handle; the result must be freed with [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_to_string(ideal: *const MgIdeal, out: *mut *mut c_char) -> MgStatus {
    guard(|| {
        let ideal = &borrow(ideal, "ideal")?.0;
        *out_ptr(out, "out")? = to_c_string(ideal.generator_strings().join(", "));
        Ok(())
    })
}

/// Reduced Gröbner basis as text, one element per line.
///
/// # Safety
/// `ideal` must be a live handle; the result must be freed with [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_groebner_basis(
    ideal: *const MgIdeal,
    order: MgOrder,
    out: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let ideal = &borrow(ideal, "ideal")?.0;
        let out = out_ptr(out, "out")?;
        let ring = ideal.ring();
        let gb = ideal.groebner_basis(&order_for(ring, order))?;
        let lines: Vec<String> = gb.elements().iter().map(|f| f.format(ring)).collect();
        *out = to_c_string(lines.join("\n"));
        Ok(())
    })
}

/// Initial ideal as a new handle.
///
/// # Safety
/// `ideal` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_initial(ideal: *const MgIdeal, order: MgOrder, out: *mut *mut MgIdeal) -> MgStatus {
    guard(|| {
        let ideal = &borrow(ideal, "ideal")?.0;
        let out = out_ptr(out, "out")?;
        let init = ideal.initial_ideal(&order_for(ideal.ring(), order))?;
        *out = Box::into_raw(Box::new(MgIdeal(init.to_ideal())));
        Ok(())
    })
}

/// Generic initial ideal under degrevlex. `conclusive` (optional) reports whether
/// the trials agreed and the result is Borel fixed.
///
/// # Safety
/// `ideal` must be a live handle; `out` must be writable; `conclusive` may be null.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_gin(
    ideal: *const MgIdeal,
    trials: usize,
    seed: u64,
    out: *mut *mut MgIdeal,
    conclusive: *mut bool,
) -> MgStatus {
    guard(|| {
        let ideal = &borrow(ideal, "ideal")?.0;
        let out = out_ptr(out, "out")?;
        let report = mgideal::gin::gin(ideal, &TermOrder::degrevlex(ideal.ring()), trials.max(1), seed)?;
        if let Some(c) = conclusive.as_mut() {
            *c = report.is_conclusive();
        }
        *out = Box::into_raw(Box::new(MgIdeal(report.result.to_ideal())));
        Ok(())
    })
}

unsafe fn membership(
    ideal: *const MgIdeal,
    trials: usize,
    seed: u64,
    out: *mut MgVerdict,
    check: fn(&Ideal, &CheckOptions) -> mgideal::Result<theory::MembershipReport>,
) -> MgStatus {
    guard(|| {
        let ideal = &borrow(ideal, "ideal")?.0;
        let out = out_ptr(out, "out")?;
        let opts = CheckOptions {
            trials: trials.max(1),
            seed,
            order: None,
        };
        *out = verdict(check(ideal, &opts)?.verdict);
        Ok(())
    })
}

/// Whether the ideal is Cartwright–Sturmfels (its generic initial ideal is radical).
///
/// # Safety
/// `ideal` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_is_cs(ideal: *const MgIdeal, trials: usize, seed: u64, out: *mut MgVerdict) -> MgStatus {
    membership(ideal, trials, seed, out, theory::is_cs)
}

/// Whether the ideal is Cartwright–Sturmfels* (its generic initial ideal is
/// generated by products of first variables of blocks).
///
/// # Safety
/// `ideal` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mg_ideal_is_csstar(
    ideal: *const MgIdeal,
    trials: usize,
    seed: u64,
    out: *mut MgVerdict,
) -> MgStatus {
    membership(ideal, trials, seed, out, theory::is_csstar)
}

/// Runs a session script. `exit_code` receives the CLI exit code; `output` and
/// `errors` (both optional) receive stdout and stderr text.
///
/// # Safety
/// `text` must be a NUL-terminated string; returned strings must be freed with
/// [`mg_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mg_run_script(
    text: *const c_char,
    seed: u64,
    json: bool,
    exit_code: *mut i32,
    output: *mut *mut c_char,
    errors: *mut *mut c_char,
) -> MgStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let code = out_ptr(exit_code, "exit_code")?;
        let config = RunConfig {
            seed,
            json,
            ..RunConfig::default()
        };
        let mut out = Vec::new();
        let mut err = Vec::new();
        let outcome = script::run_script(text, &config, &mut out, &mut err);
        *code = outcome.exit_code;
        if let Some(o) = output.as_mut() {
            *o = to_c_string(String::from_utf8_lossy(&out).into_owned());
        }
        if let Some(e) = errors.as_mut() {
            *e = to_c_string(String::from_utf8_lossy(&err).into_owned());
        }
        Ok(())
    })
}
