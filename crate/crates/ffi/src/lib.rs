//! C ABI over the classification pipeline.
//!
//! Conventions:
//!
//! * Every fallible function returns a [`CrStatus`]; outputs go through
//!   pointer arguments.  On failure a message is kept per thread and can be
//!   fetched with [`cr_last_error_message`].
//! * Handles (`CrFrameShape`, `CrClassResult`, `CrTable`) are opaque and
//!   owned by the caller once returned; release them with the matching
//!   `*_free`.  Freeing `NULL` is a no-op.
//! * Strings are copied into caller buffers.  `needed` always receives the
//!   required size including the terminating NUL; passing a `NULL` buffer is
//!   a size query.
//! * Panics never cross the boundary; they surface as `CR_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conway_ramond::classify::{Classification, ClassifyError};
use conway_ramond::dataset::{self, ClassRecord, FrameRow};
use conway_ramond::frame::{FrameShape, LiftTag, RANK};
use conway_ramond::qseries::Exp;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    NoMatch = 5,
    AmbiguousMatch = 6,
    PipelineError = 7,
    BufferTooSmall = 8,
    IndexOutOfRange = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrClassification {
    Conspiratorial = 0,
    Nonconspiratorial = 1,
    SusyBreaking = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrLiftTag {
    Base = 0,
    FlipLast = 1,
    ShiftLast = 2,
    FlipShiftLast = 3,
}

/// A validated Frame shape.
pub struct CrFrameShape {
    shape: FrameShape,
}

/// One classified class.
pub struct CrClassResult {
    record: ClassRecord,
}

/// Results for a whole class table.
pub struct CrTable {
    results: Vec<CrClassResult>,
    summary: dataset::Summary,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: CrStatus, msg: impl Into<String>) -> CrStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> CrStatus) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(CrStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CrStatus> {
    if s.is_null() {
        return Err(fail(CrStatus::NullPointer, "string argument is NULL"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CrStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> CrStatus {
    let n = s.len() + 1;
    if !needed.is_null() {
        *needed = n;
    }
    if buf.is_null() {
        return CrStatus::Ok;
    }
    if len < n {
        return fail(
            CrStatus::BufferTooSmall,
            format!("buffer of {len} bytes, {n} needed"),
        );
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    CrStatus::Ok
}

fn truncation(num: i64, den: i64) -> Result<Exp, CrStatus> {
    if den <= 0 {
        return Err(fail(
            CrStatus::InvalidArgument,
            "truncation denominator must be positive",
        ));
    }
    let t = Exp::new(num, den);
    if t < Exp::from_integer(1) {
        return Err(fail(
            CrStatus::InvalidArgument,
            "truncation must be at least 1",
        ));
    }
    Ok(t)
}

fn classify_status(e: &ClassifyError) -> CrStatus {
    match e {
        ClassifyError::NoMatch { .. } => CrStatus::NoMatch,
        ClassifyError::AmbiguousMatch { .. } => CrStatus::AmbiguousMatch,
        ClassifyError::Frame(_) => CrStatus::ParseError,
        _ => CrStatus::PipelineError,
    }
}

macro_rules! deref {
    ($p:expr) => {{
        if $p.is_null() {
            return fail(CrStatus::NullPointer, concat!(stringify!($p), " is NULL"));
        }
        &*$p
    }};
}

macro_rules! out {
    ($p:expr, $v:expr) => {{
        if $p.is_null() {
            return fail(CrStatus::NullPointer, concat!(stringify!($p), " is NULL"));
        }
        *$p = $v;
    }};
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the calling thread's last error message.
///
/// # Safety
/// `buf` must be NULL or valid for `len` bytes; `needed` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn cr_last_error_message(
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CrStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, len, needed)
}

/// Parse and validate a Frame shape such as `"1^8 2^8"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_parse(
    text: *const c_char,
    out: *mut *mut CrFrameShape,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match FrameShape::parse(text) {
            Ok(shape) => {
                *out = Box::into_raw(Box::new(CrFrameShape { shape }));
                CrStatus::Ok
            }
            Err(e) => fail(CrStatus::ParseError, format!("{text:?}: {e}")),
        }
    })
}

/// # Safety
/// `f` must be NULL or a handle from [`cr_frame_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_free(f: *mut CrFrameShape) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_trace(f: *const CrFrameShape, out: *mut i64) -> CrStatus {
    let f = deref!(f);
    out!(out, f.shape.trace_k1());
    CrStatus::Ok
}

/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_order(f: *const CrFrameShape, out: *mut u64) -> CrStatus {
    let f = deref!(f);
    out!(out, f.shape.order());
    CrStatus::Ok
}

/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_is_balanced(f: *const CrFrameShape, out: *mut bool) -> CrStatus {
    let f = deref!(f);
    out!(out, f.shape.is_balanced());
    CrStatus::Ok
}

/// Twelve log-eigenvalues in `[0, 1/2]`, ascending, as reduced fractions.
///
/// # Safety
/// `f` must be a live handle; `num` and `den` must each hold 12 values.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_log_eigenvalues(
    f: *const CrFrameShape,
    num: *mut i64,
    den: *mut i64,
) -> CrStatus {
    guard(|| {
        let f = deref!(f);
        if num.is_null() || den.is_null() {
            return fail(CrStatus::NullPointer, "output array is NULL");
        }
        match f.shape.log_eigenvalues() {
            Ok(l) => {
                for (i, x) in l.entries().iter().enumerate() {
                    *num.add(i) = *x.numer();
                    *den.add(i) = *x.denom();
                }
                CrStatus::Ok
            }
            Err(e) => fail(CrStatus::ParseError, e.to_string()),
        }
    })
}

/// Canonical text of the shape.
///
/// # Safety
/// `f` must be a live handle; buffer rules as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn cr_frame_to_string(
    f: *const CrFrameShape,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CrStatus {
    let f = deref!(f);
    write_str(&f.shape.to_string(), buf, len, needed)
}

/// Run the pipeline on one shape at truncation `t_num/t_den`.
///
/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_classify(
    f: *const CrFrameShape,
    t_num: i64,
    t_den: i64,
    out: *mut *mut CrClassResult,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let f = deref!(f);
        let t = match truncation(t_num, t_den) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let row = FrameRow {
            co0_name: String::new(),
            co1_name: String::new(),
            shape: f.shape.clone(),
        };
        match dataset::run_row(&row, t) {
            Ok(record) => {
                *out = Box::into_raw(Box::new(CrClassResult { record }));
                CrStatus::Ok
            }
            Err(e) => fail(classify_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must be NULL or a handle from [`cr_classify`] not yet freed.  Results
/// borrowed from a table must not be freed this way.
#[no_mangle]
pub unsafe extern "C" fn cr_result_free(r: *mut CrClassResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_result_counts(
    r: *const CrClassResult,
    bosons: *mut u64,
    fermions: *mut u64,
) -> CrStatus {
    let r = deref!(r);
    out!(bosons, r.record.counts.bosons);
    out!(fermions, r.record.counts.fermions);
    CrStatus::Ok
}

/// # Safety
/// `r` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_result_classification(
    r: *const CrClassResult,
    out: *mut CrClassification,
) -> CrStatus {
    let r = deref!(r);
    out!(
        out,
        match r.record.classification {
            Classification::Conspiratorial => CrClassification::Conspiratorial,
            Classification::Nonconspiratorial => CrClassification::Nonconspiratorial,
            Classification::SusyBreaking => CrClassification::SusyBreaking,
        }
    );
    CrStatus::Ok
}

/// # Safety
/// `r` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_result_lift(r: *const CrClassResult, out: *mut CrLiftTag) -> CrStatus {
    let r = deref!(r);
    out!(
        out,
        match r.record.lift_tag {
            LiftTag::Base => CrLiftTag::Base,
            LiftTag::FlipLast => CrLiftTag::FlipLast,
            LiftTag::ShiftLast => CrLiftTag::ShiftLast,
            LiftTag::FlipShiftLast => CrLiftTag::FlipShiftLast,
        }
    );
    CrStatus::Ok
}

/// The (constant) Witten index `Z^R`.
///
/// # Safety
/// `r` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_result_z_r(r: *const CrClassResult, out: *mut i64) -> CrStatus {
    let r = deref!(r);
    out!(out, r.record.z_r_const);
    CrStatus::Ok
}

/// `Z^NS` below the truncation as lines `"exponent coefficient\n"`.
///
/// # Safety
/// `r` must be a live handle; buffer rules as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn cr_result_z_ns(
    r: *const CrClassResult,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CrStatus {
    let r = deref!(r);
    let mut s = String::new();
    for (e, c) in &r.record.z_ns_prefix {
        s.push_str(&format!(
            "{} {}\n",
            conway_ramond::qseries::fmt_rational64(*e),
            c
        ));
    }
    write_str(&s, buf, len, needed)
}

/// Co₀ class name (empty for results from [`cr_classify`]).
///
/// # Safety
/// `r` must be a live handle; buffer rules as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn cr_result_co0_name(
    r: *const CrClassResult,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CrStatus {
    let r = deref!(r);
    write_str(&r.record.co0_name, buf, len, needed)
}

/// Co₁ class name (empty for results from [`cr_classify`]).
///
/// # Safety
/// `r` must be a live handle; buffer rules as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn cr_result_co1_name(
    r: *const CrClassResult,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> CrStatus {
    let r = deref!(r);
    write_str(&r.record.co1_name, buf, len, needed)
}

/// Classify every row of the bundled Co₀ table.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_table_run_bundled(
    t_num: i64,
    t_den: i64,
    out: *mut *mut CrTable,
) -> CrStatus {
    guard(|| {
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is NULL");
        }
        *out = ptr::null_mut();
        let t = match truncation(t_num, t_den) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let rows = dataset::bundled_frames();
        let records = match dataset::run_all(&rows, t) {
            Ok(r) => r,
            Err(e) => return fail(CrStatus::PipelineError, e.to_string()),
        };
        let summary = match dataset::summarize(&records) {
            Ok(s) => s,
            Err(e) => return fail(CrStatus::PipelineError, e.to_string()),
        };
        let results = records
            .into_iter()
            .map(|record| CrClassResult { record })
            .collect();
        *out = Box::into_raw(Box::new(CrTable { results, summary }));
        CrStatus::Ok
    })
}

/// # Safety
/// `t` must be NULL or a handle from [`cr_table_run_bundled`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cr_table_free(t: *mut CrTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_table_len(t: *const CrTable, out: *mut usize) -> CrStatus {
    let t = deref!(t);
    out!(out, t.results.len());
    CrStatus::Ok
}

/// Borrow row `i`; the pointer stays valid until the table is freed.
///
/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_table_get(
    t: *const CrTable,
    i: usize,
    out: *mut *const CrClassResult,
) -> CrStatus {
    let t = deref!(t);
    match t.results.get(i) {
        Some(r) => {
            out!(out, r as *const CrClassResult);
            CrStatus::Ok
        }
        None => fail(
            CrStatus::IndexOutOfRange,
            format!("row {i} of {}", t.results.len()),
        ),
    }
}

/// Per-Co₁-class totals.
///
/// # Safety
/// `t` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cr_table_summary(
    t: *const CrTable,
    conspiratorial: *mut usize,
    susy_breaking: *mut usize,
    nonconspiratorial: *mut usize,
) -> CrStatus {
    let t = deref!(t);
    out!(conspiratorial, t.summary.conspiratorial);
    out!(susy_breaking, t.summary.susy_breaking);
    out!(nonconspiratorial, t.summary.nonconspiratorial);
    CrStatus::Ok
}

/// Number of log-eigenvalues written by [`cr_frame_log_eigenvalues`].
pub const CR_RANK: usize = 12;

const _: () = assert!(CR_RANK == RANK);
