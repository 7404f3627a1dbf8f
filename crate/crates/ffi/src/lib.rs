//! C ABI over `clusterpic`.
//!
//! Pictures are opaque `CpPicture` handles. Every fallible call returns a
//! `CpStatus`; the message for the last failure on the calling thread is
//! available from `cp_last_error`. Strings handed out must be released with
//! `cp_string_free` and pictures with `cp_picture_free`. Results are JSON
//! documents whose numbers are exact decimal strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clusterpic::input::{load_picture, Overrides};
use clusterpic::report::{basis_json, cluster_json, disc_json, lambda_json, transform_json};
use clusterpic::transforms::transform;
use clusterpic::{
    basis_sequence_with, parse_picture, print_picture, run_check, ClusterPicture, EnumSpec, Error,
    Rational, TieBreak, TransformSpec,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed picture text or root expression.
    Parse = 3,
    /// Unusable input: bad prime, bad JSON, unknown transform, ...
    Input = 4,
    /// Well-formed input outside an operation's domain (genus < 2, ...).
    Validation = 5,
    /// The operation needs root values and the picture is abstract.
    MissingRoots = 6,
    /// A consistency check ran and failed; the result is still written.
    IdentityFailure = 7,
    Panic = 8,
}

/// An immutable cluster picture.
pub struct CpPicture(ClusterPicture);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (CpStatus, String);

fn set_last_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::Syntax { .. } => CpStatus::Parse,
        Error::MissingRoots => CpStatus::MissingRoots,
        e if e.is_validation() => CpStatus::Validation,
        _ => CpStatus::Input,
    }
}

fn fail(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

/// Runs `f`, recording any failure (including a panic) for `cp_last_error`.
fn guard(f: impl FnOnce() -> Result<CpStatus, Failure>) -> CpStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => (status, None),
        Ok(Err((status, msg))) => (status, Some(msg)),
        Err(_) => (CpStatus::Panic, Some("internal error".to_string())),
    };
    set_last_error(msg);
    status
}

fn null(what: &str) -> Failure {
    (CpStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `s` is NULL or a valid NUL-terminated string.
unsafe fn opt_str<'a>(s: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if s.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Some)
        .map_err(|_| (CpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// As [`opt_str`].
unsafe fn req_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    opt_str(s, what)?.ok_or_else(|| null(what))
}

/// # Safety
/// `p` is NULL or a live handle from this library.
unsafe fn picture<'a>(p: *const CpPicture) -> Result<&'a ClusterPicture, Failure> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("picture"))
}

/// # Safety
/// `out` is NULL or valid for writes.
unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn new_picture(p: ClusterPicture) -> *mut CpPicture {
    Box::into_raw(Box::new(CpPicture(p)))
}

/// Parses picture notation such as `((* * *)_2 * * *)_0`. `vcf` is the
/// valuation of the leading coefficient as `"a"` or `"a/b"`; NULL means 0.
///
/// # Safety
/// `text` and `vcf` are NULL or NUL-terminated; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_parse(
    text: *const c_char,
    vcf: *const c_char,
    out: *mut *mut CpPicture,
) -> CpStatus {
    guard(|| {
        let text = req_str(text, "text")?;
        let vcf = match opt_str(vcf, "vcf")? {
            Some(v) => v.parse::<Rational>().map_err(fail)?,
            None => Rational::zero(),
        };
        let p = parse_picture(text, vcf).map_err(fail)?;
        put(out, new_picture(p))?;
        Ok(CpStatus::Ok)
    })
}

/// Loads any accepted input: roots JSON, abstract-picture JSON or notation.
/// A nonzero `p` overrides the prime of a roots input.
///
/// # Safety
/// `input` is NULL or NUL-terminated; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_load(
    input: *const c_char,
    p: u64,
    out: *mut *mut CpPicture,
) -> CpStatus {
    guard(|| {
        let input = req_str(input, "input")?;
        let ov = Overrides {
            p: (p != 0).then_some(p),
            vcf: None,
        };
        let pic = load_picture(input, &ov).map_err(fail)?;
        put(out, new_picture(pic))?;
        Ok(CpStatus::Ok)
    })
}

/// # Safety
/// `picture` is NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_free(picture: *mut CpPicture) {
    if !picture.is_null() {
        drop(Box::from_raw(picture));
    }
}

/// Canonical notation of the picture.
///
/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_text(
    picture: *const CpPicture,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let p = self::picture(picture)?;
        put(out, c_string(print_picture(p)))?;
        Ok(CpStatus::Ok)
    })
}

/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_genus(picture: *const CpPicture, out: *mut usize) -> CpStatus {
    guard(|| {
        put(out, self::picture(picture)?.genus())?;
        Ok(CpStatus::Ok)
    })
}

/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_picture_num_roots(
    picture: *const CpPicture,
    out: *mut usize,
) -> CpStatus {
    guard(|| {
        put(out, self::picture(picture)?.num_roots())?;
        Ok(CpStatus::Ok)
    })
}

/// Clusters with depths, relative depths, `nu` and integrality flags.
///
/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_cluster_json(
    picture: *const CpPicture,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let v = cluster_json(self::picture(picture)?).map_err(fail)?;
        put(out, c_string(v.to_string()))?;
        Ok(CpStatus::Ok)
    })
}

/// Greedy sequence, exponents and differentials. A non-NULL `tie_seed`
/// breaks incomparable ties at random with that seed.
///
/// # Safety
/// `picture` is a live handle; `tie_seed` is NULL or readable; `out` is valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_basis_json(
    picture: *const CpPicture,
    tie_seed: *const u64,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let p = self::picture(picture)?;
        let tie = tie_seed
            .as_ref()
            .map_or(TieBreak::Canonical, |&s| TieBreak::Seeded(s));
        let b = basis_sequence_with(p, tie).map_err(fail)?;
        put(out, c_string(basis_json(p, &b, true).to_string()))?;
        Ok(CpStatus::Ok)
    })
}

/// `eight_v_lambda`, `v_lambda`, `integral`, `v_disc`, `hyperdisc_order`.
///
/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_lambda_json(
    picture: *const CpPicture,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let v = lambda_json(self::picture(picture)?).map_err(fail)?;
        put(out, c_string(v.to_string()))?;
        Ok(CpStatus::Ok)
    })
}

/// Discriminant valuation from the tree and from the roots. Needs a picture
/// built from roots; returns `IdentityFailure` if the two disagree.
///
/// # Safety
/// `picture` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_disc_json(
    picture: *const CpPicture,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let v = disc_json(self::picture(picture)?).map_err(fail)?;
        let agree = v["v_disc"] == v["v_disc_from_roots"];
        put(out, c_string(v.to_string()))?;
        if agree {
            Ok(CpStatus::Ok)
        } else {
            Err((
                CpStatus::IdentityFailure,
                "discriminant valuations disagree".into(),
            ))
        }
    })
}

/// Applies `op` (`deepen:t`, `add-root`, `redistribute:<path>:t`,
/// `scale-leading:m`, `rescale:t,s`, `shift:z`). Either output may be NULL.
/// Returns `IdentityFailure`, with outputs written, when the predicted and
/// actual changes of `8 v(lambda)` differ.
///
/// # Safety
/// `picture` is a live handle; `op` is NUL-terminated; the outputs are NULL
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_transform(
    picture: *const CpPicture,
    op: *const c_char,
    out_picture: *mut *mut CpPicture,
    out_report: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let p = self::picture(picture)?;
        let spec: TransformSpec = req_str(op, "op")?.parse().map_err(fail)?;
        let t = transform(p, &spec).map_err(fail)?;
        let consistent = t.consistent();
        if !out_report.is_null() {
            out_report.write(c_string(transform_json(p, &spec, &t).to_string()));
        }
        if !out_picture.is_null() {
            out_picture.write(new_picture(t.picture));
        }
        if consistent {
            Ok(CpStatus::Ok)
        } else {
            Err((
                CpStatus::IdentityFailure,
                format!("{spec}: predicted and actual change differ"),
            ))
        }
    })
}

fn int_list(s: Option<&str>, default: &[i64], what: &str) -> Result<Vec<i64>, Failure> {
    match s {
        None => Ok(default.to_vec()),
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                (
                    CpStatus::Input,
                    format!("{what}: expected comma-separated integers"),
                )
            }),
    }
}

/// Enumerates pictures with up to `max_roots` roots over the grids given as
/// comma-separated lists (NULL for the defaults `1,2,3` / `0,1` / `0,2`)
/// and cross-validates each. `sample` > 0 checks a seeded uniform sample.
/// Returns `IdentityFailure`, with the report written, on any failure.
///
/// # Safety
/// The list arguments are NULL or NUL-terminated; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cp_check_json(
    max_roots: usize,
    depths: *const c_char,
    top_depths: *const c_char,
    vcfs: *const c_char,
    sample: usize,
    seed: u64,
    jobs: usize,
    out: *mut *mut c_char,
) -> CpStatus {
    guard(|| {
        let defaults = EnumSpec::default();
        let spec = EnumSpec {
            max_roots,
            rel_depths: int_list(opt_str(depths, "depths")?, &defaults.rel_depths, "depths")?,
            top_depths: int_list(
                opt_str(top_depths, "top_depths")?,
                &defaults.top_depths,
                "top_depths",
            )?,
            vcfs: int_list(opt_str(vcfs, "vcfs")?, &defaults.vcfs, "vcfs")?,
            sample: (sample > 0).then_some(sample),
            seed,
            ..defaults
        };
        let report = run_check(&spec, jobs).map_err(fail)?;
        let text = serde_json::to_string(&report).expect("serializable");
        put(out, c_string(text))?;
        if report.passed() {
            Ok(CpStatus::Ok)
        } else {
            Err((
                CpStatus::IdentityFailure,
                format!("{} identity failures", report.failures.len()),
            ))
        }
    })
}

/// # Safety
/// `s` is NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or NULL after a
/// success. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
