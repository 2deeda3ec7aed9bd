//! C ABI over the batch driver: parse a JSON run config, execute it,
//! and inspect the result through an opaque report handle.
//!
//! The generated header is `include/cklab.h` (written by the build
//! script). The JSON config and report schemas are exactly those of the
//! command-line driver.
//!
//! # Contract
//!
//! - Pointer arguments must be non-null unless a function documents
//!   otherwise; violations return [`CklabStatus::NullArgument`] (or a
//!   harmless default for read-only accessors).
//! - Strings are NUL-terminated UTF-8. Strings returned as `*mut c_char`
//!   are owned by the caller and must be released with
//!   [`cklab_string_free`]; the pointer from [`cklab_version`] is static
//!   and must not be freed.
//! - Report handles are released with [`cklab_report_free`]. Handles are
//!   not synchronized: use each handle from one thread at a time.
//! - A run whose verification entries fail still returns
//!   [`CklabStatus::Success`] — the verdict lives in
//!   [`cklab_report_overall`]. Statuses describe whether the run could
//!   be performed at all.
//! - Panics never unwind across the boundary; they surface as
//!   [`CklabStatus::RunFailed`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cklab::config::{execute, render_report, ReportFormat, RunConfig, RunReport};

/// Outcome of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CklabStatus {
    /// The call completed; any verification verdict is in the report.
    Success = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The config document failed to parse or validate.
    InvalidConfig = 3,
    /// The run aborted internally (a defect, not a failed check).
    RunFailed = 4,
}

/// Opaque handle to a finished run's report.
pub struct CklabReport {
    inner: RunReport,
}

/// Runs the batch described by a JSON config document.
///
/// On success, `*out_report` receives a fresh handle the caller must
/// release with [`cklab_report_free`]. On any other status,
/// `*out_report` is set to null.
///
/// # Safety
///
/// `config_json` must point to a NUL-terminated string and `out_report`
/// to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cklab_run_json(
    config_json: *const c_char,
    out_report: *mut *mut CklabReport,
) -> CklabStatus {
    if out_report.is_null() {
        return CklabStatus::NullArgument;
    }
    unsafe { *out_report = std::ptr::null_mut() };
    if config_json.is_null() {
        return CklabStatus::NullArgument;
    }
    let text = match unsafe { CStr::from_ptr(config_json) }.to_str() {
        Ok(text) => text,
        Err(_) => return CklabStatus::InvalidUtf8,
    };
    let config = match RunConfig::from_json(text) {
        Ok(config) => config,
        Err(_) => return CklabStatus::InvalidConfig,
    };
    match catch_unwind(AssertUnwindSafe(|| execute(&config))) {
        Ok(Ok(report)) => {
            let handle = Box::new(CklabReport { inner: report });
            unsafe { *out_report = Box::into_raw(handle) };
            CklabStatus::Success
        }
        Ok(Err(_)) => CklabStatus::InvalidConfig,
        Err(_) => CklabStatus::RunFailed,
    }
}

/// Whether every entry of the report passed. Null reports read as
/// false.
#[no_mangle]
pub extern "C" fn cklab_report_overall(report: *const CklabReport) -> bool {
    if report.is_null() {
        return false;
    }
    unsafe { &*report }.inner.overall
}

/// Number of entries in the report. Null reports read as 0.
#[no_mangle]
pub extern "C" fn cklab_report_entry_count(report: *const CklabReport) -> usize {
    if report.is_null() {
        return 0;
    }
    unsafe { &*report }.inner.entries.len()
}

/// Renders the report as a JSON document. Returns null for a null
/// report. The caller frees the string with [`cklab_string_free`].
#[no_mangle]
pub extern "C" fn cklab_report_json(report: *const CklabReport) -> *mut c_char {
    if report.is_null() {
        return std::ptr::null_mut();
    }
    let text = render_report(&unsafe { &*report }.inner, ReportFormat::Json);
    match CString::new(text) {
        Ok(text) => text.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Renders the report as CSV (header row plus one row per entry).
/// Returns null for a null report. The caller frees the string with
/// [`cklab_string_free`].
#[no_mangle]
pub extern "C" fn cklab_report_csv(report: *const CklabReport) -> *mut c_char {
    if report.is_null() {
        return std::ptr::null_mut();
    }
    let text = render_report(&unsafe { &*report }.inner, ReportFormat::Csv);
    match CString::new(text) {
        Ok(text) => text.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
///
/// `s` must be a pointer previously returned by [`cklab_report_json`] or
/// [`cklab_report_csv`], unreleased, or null.
#[no_mangle]
pub unsafe extern "C" fn cklab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Releases a report handle. Null is a no-op.
///
/// # Safety
///
/// `report` must be a handle previously returned by [`cklab_run_json`],
/// unreleased, or null.
#[no_mangle]
pub unsafe extern "C" fn cklab_report_free(report: *mut CklabReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// The library version as a static NUL-terminated string (never freed).
#[no_mangle]
pub extern "C" fn cklab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(config: &str) -> (CklabStatus, *mut CklabReport) {
        let config = CString::new(config).unwrap();
        let mut handle: *mut CklabReport = std::ptr::null_mut();
        let status = unsafe { cklab_run_json(config.as_ptr(), &mut handle) };
        (status, handle)
    }

    #[test]
    fn identities_run_through_the_c_surface() {
        let (status, handle) =
            run(r#"{"command": "identities", "m_range": [1, 2]}"#);
        assert_eq!(status, CklabStatus::Success);
        assert!(cklab_report_overall(handle));
        assert!(cklab_report_entry_count(handle) > 0);

        let json = cklab_report_json(handle);
        assert!(!json.is_null());
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        let parsed = RunReport::from_json(&text).unwrap();
        assert_eq!(parsed.entries.len(), cklab_report_entry_count(handle));
        unsafe { cklab_string_free(json) };

        let csv = cklab_report_csv(handle);
        assert!(!csv.is_null());
        let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
        assert!(text.starts_with("tag,equation,residual,tolerance,pass"));
        unsafe { cklab_string_free(csv) };

        unsafe { cklab_report_free(handle) };
    }

    #[test]
    fn bad_inputs_map_to_statuses() {
        let mut handle: *mut CklabReport = std::ptr::null_mut();
        assert_eq!(
            unsafe { cklab_run_json(std::ptr::null(), &mut handle) },
            CklabStatus::NullArgument
        );
        assert!(handle.is_null());

        let (status, handle) = run("this is not json");
        assert_eq!(status, CklabStatus::InvalidConfig);
        assert!(handle.is_null());

        let (status, handle) = run(r#"{"command": "identities", "m_range": [0, 99]}"#);
        assert_eq!(status, CklabStatus::InvalidConfig);
        assert!(handle.is_null());

        let config = CString::new(r#"{"command": "identities"}"#).unwrap();
        assert_eq!(
            unsafe { cklab_run_json(config.as_ptr(), std::ptr::null_mut()) },
            CklabStatus::NullArgument
        );
    }

    #[test]
    fn null_handles_read_as_empty() {
        assert!(!cklab_report_overall(std::ptr::null()));
        assert_eq!(cklab_report_entry_count(std::ptr::null()), 0);
        assert!(cklab_report_json(std::ptr::null()).is_null());
        assert!(cklab_report_csv(std::ptr::null()).is_null());
        unsafe {
            cklab_string_free(std::ptr::null_mut());
            cklab_report_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn version_is_a_static_nul_terminated_string() {
        let version = cklab_version();
        assert!(!version.is_null());
        let text = unsafe { CStr::from_ptr(version) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }
}
