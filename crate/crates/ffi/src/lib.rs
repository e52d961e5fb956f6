//! C ABI over the `ordeval` library.
//!
//! Datasets live behind an opaque [`OrdevalDataset`] handle. Every fallible
//! function returns an [`OrdevalStatus`]; on failure a message is kept per
//! thread and can be read with [`ordeval_last_error_message`]. Strings handed
//! out by the library must be released with [`ordeval_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ordeval::dataset::{parse_dataset, OrdinalDataset, Scale, Schema};
use ordeval::kano::DEFAULT_TAU;
use ordeval::ordeval::{OrdEvalParams, DEFAULT_K};
use ordeval::pipeline::{evaluate, predict, EvaluateOptions, PredictOptions};
use ordeval::predict::DEFAULT_FOLDS;
use ordeval::report::{render_attribute_plot, render_summary_plot, to_canonical_json, EvaluationReport, Palette};
use ordeval::significance::{DEFAULT_ALPHA, DEFAULT_RESAMPLES};
use ordeval::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdevalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed CSV, schema violation, unknown column or attribute.
    InvalidInput = 3,
    /// Valid data but not enough labeled rows.
    TooFewRows = 4,
    InvalidParams = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// Opaque parsed dataset.
pub struct OrdevalDataset {
    inner: OrdinalDataset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> OrdevalStatus {
    match err {
        Error::TooFewRows { .. } | Error::EmptyTrainingSet => OrdevalStatus::TooFewRows,
        Error::InvalidParams(_) | Error::InvalidScale { .. } => OrdevalStatus::InvalidParams,
        _ => OrdevalStatus::InvalidInput,
    }
}

struct Fail(OrdevalStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn null_fail(what: &str) -> Fail {
    set_error(format!("`{what}` is null"));
    Fail(OrdevalStatus::NullPointer)
}

/// Runs `f` with panics contained and the error slot managed.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OrdevalStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrdevalStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_error(format!("panic: {msg}"));
            OrdevalStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null_fail(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("`{what}` is not valid UTF-8"));
        Fail(OrdevalStatus::InvalidUtf8)
    })
}

unsafe fn read_opt_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        read_str(p, what).map(Some)
    }
}

fn to_c_string(s: String) -> *mut c_char {
    // JSON and SVG output never contains NUL.
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn check_out<T>(out: *mut *mut T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null_fail(what));
    }
    *out = ptr::null_mut();
    Ok(())
}

fn palette(colorblind: c_int) -> Palette {
    if colorblind != 0 {
        Palette::ColorBlind
    } else {
        Palette::Standard
    }
}

/// Parses CSV text into a dataset.
///
/// `id_column` may be null. Every column other than the response and the id
/// column is an attribute on the `scale_min..scale_max` scale, which also
/// applies to the response. Pass `0, 0` for the 1..5 default.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordeval_dataset_from_csv(
    csv_text: *const c_char,
    response: *const c_char,
    id_column: *const c_char,
    scale_min: i32,
    scale_max: i32,
    out: *mut *mut OrdevalDataset,
) -> OrdevalStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = read_str(csv_text, "csv_text")?;
        let response = read_str(response, "response")?;
        let id = read_opt_str(id_column, "id_column")?;
        let scale = if scale_min == 0 && scale_max == 0 { Scale::likert5() } else { Scale::new(scale_min, scale_max)? };
        let mut schema = Schema::new(response).with_default_scale(scale);
        if let Some(id) = id {
            schema = schema.with_id_column(id);
        }
        let inner = parse_dataset(text, &schema)?;
        *out = Box::into_raw(Box::new(OrdevalDataset { inner }));
        Ok(())
    })
}

/// # Safety
/// `ds` must be null or a handle from [`ordeval_dataset_from_csv`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ordeval_dataset_free(ds: *mut OrdevalDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Number of rows, labeled or not. 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ordeval_dataset_rows(ds: *const OrdevalDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.n())
}

/// Number of attribute columns. 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ordeval_dataset_attributes(ds: *const OrdevalDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.inner.n_attributes())
}

/// Full evaluation; writes the canonical report JSON to `out_json`.
///
/// Zero for `k`, `resamples`, `alpha` or `tau` selects the default
/// (10, 200, 0.05 and 0.6).
///
/// # Safety
/// `ds` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn ordeval_evaluate(
    ds: *const OrdevalDataset,
    k: u32,
    resamples: u32,
    alpha: f64,
    tau: f64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> OrdevalStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        let ds = ds.as_ref().ok_or_else(|| null_fail("ds"))?;
        let mut opts = EvaluateOptions::new(seed);
        opts.ordeval = OrdEvalParams { k: if k == 0 { DEFAULT_K } else { k as usize } };
        opts.significance.resamples = if resamples == 0 { DEFAULT_RESAMPLES } else { resamples as usize };
        opts.significance.alpha = if alpha == 0.0 { DEFAULT_ALPHA } else { alpha };
        opts.tau = if tau == 0.0 { DEFAULT_TAU } else { tau };
        let report = evaluate(&ds.inner, &opts)?;
        *out_json = to_c_string(report.to_json());
        Ok(())
    })
}

/// Cross-validates both learners and ranks the unlabeled rows.
///
/// `folds == 0` selects 10. Writes `cv_report.json` and `ranking.json`
/// contents to the two out parameters.
///
/// # Safety
/// `ds` must be a live handle and both out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ordeval_predict(
    ds: *const OrdevalDataset,
    folds: u32,
    seed: u64,
    out_cv_json: *mut *mut c_char,
    out_ranking_json: *mut *mut c_char,
) -> OrdevalStatus {
    guard(|| {
        check_out(out_cv_json, "out_cv_json")?;
        check_out(out_ranking_json, "out_ranking_json")?;
        let ds = ds.as_ref().ok_or_else(|| null_fail("ds"))?;
        let mut opts = PredictOptions::new(seed);
        opts.folds = if folds == 0 { DEFAULT_FOLDS } else { folds as usize };
        let outcome = predict(&ds.inner, &opts)?;
        *out_cv_json = to_c_string(to_canonical_json(&outcome.summary));
        *out_ranking_json = to_c_string(to_canonical_json(&outcome.ranking));
        Ok(())
    })
}

/// Renders the attribute-level plot from report JSON.
///
/// # Safety
/// `report_json` must be NUL-terminated and `out_svg` writable.
#[no_mangle]
pub unsafe extern "C" fn ordeval_render_summary_svg(
    report_json: *const c_char,
    colorblind: c_int,
    out_svg: *mut *mut c_char,
) -> OrdevalStatus {
    guard(|| {
        check_out(out_svg, "out_svg")?;
        let report = EvaluationReport::from_json(read_str(report_json, "report_json")?)?;
        *out_svg = to_c_string(render_summary_plot(&report, palette(colorblind)));
        Ok(())
    })
}

/// Renders the value-level plot of one attribute from report JSON.
///
/// # Safety
/// String arguments must be NUL-terminated and `out_svg` writable.
#[no_mangle]
pub unsafe extern "C" fn ordeval_render_attribute_svg(
    report_json: *const c_char,
    attribute: *const c_char,
    colorblind: c_int,
    out_svg: *mut *mut c_char,
) -> OrdevalStatus {
    guard(|| {
        check_out(out_svg, "out_svg")?;
        let report = EvaluationReport::from_json(read_str(report_json, "report_json")?)?;
        let name = read_str(attribute, "attribute")?;
        *out_svg = to_c_string(render_attribute_plot(&report, name, palette(colorblind))?);
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ordeval_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ordeval_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
