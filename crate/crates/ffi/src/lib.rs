//! C ABI over the uavsgsim evaluator.
//!
//! Configurations are opaque handles created by `uavsgsim_config_new` or
//! `uavsgsim_config_load` and released with `uavsgsim_config_free`. Every
//! fallible call returns a `UavsgsimStatus`; on failure the message is
//! available from `uavsgsim_last_error_message` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use uavsgsim::analytic::Regime;
use uavsgsim::config::{apply_key, load_config, serialize, Pending};
use uavsgsim::montecarlo::{estimate, AntennaMode, MetricEstimate, Scenario};
use uavsgsim::sweep::analytic_for;
use uavsgsim::{AssociationRule, Error, NetworkConfig, QuadratureSpec};

/// Association rule selector: nearest instantaneous position.
pub const UAVSGSIM_RULE_RTNA: u32 = 0;
/// Association rule selector: nearest hover center.
pub const UAVSGSIM_RULE_SEMI: u32 = 1;
pub const UAVSGSIM_ANTENNA_OMNI: u32 = 0;
pub const UAVSGSIM_ANTENNA_DIRECTIONAL: u32 = 1;

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UavsgsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    NonConvergence = 5,
    QuadratureFailure = 6,
    DegenerateGeometry = 7,
    BeamDomain = 8,
    DegenerateRealization = 9,
    Io = 10,
    Panic = 11,
}

impl From<&Error> for UavsgsimStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonConvergence { .. } => UavsgsimStatus::NonConvergence,
            Error::QuadratureFailure { .. } => UavsgsimStatus::QuadratureFailure,
            Error::DegenerateGeometry(_) => UavsgsimStatus::DegenerateGeometry,
            Error::BeamDomain { .. } => UavsgsimStatus::BeamDomain,
            Error::DegenerateRealization(_) => UavsgsimStatus::DegenerateRealization,
            Error::InvalidArgument(_) => UavsgsimStatus::InvalidArgument,
            Error::Parse { .. } => UavsgsimStatus::Parse,
            Error::Validation(_) => UavsgsimStatus::Validation,
            Error::Io(_) => UavsgsimStatus::Io,
        }
    }
}

/// Opaque network configuration.
pub struct UavsgsimConfig {
    inner: NetworkConfig,
}

/// Analytic coverage and throughput. Throughput is per km^2.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UavsgsimAnalytic {
    pub cp: f64,
    pub st_per_km2: f64,
    pub c_b: f64,
    /// 1 when the backhaul caps the per-link rate.
    pub backhaul_limited: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UavsgsimEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Monte Carlo estimates. Throughput is per km^2.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UavsgsimSimulation {
    pub cp: UavsgsimEstimate,
    pub st_per_km2: UavsgsimEstimate,
    pub q_a: UavsgsimEstimate,
    pub in_projection: UavsgsimEstimate,
    pub c_b: f64,
    pub trials: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> UavsgsimStatus {
    set_error(format!("{}: {e}", e.kind()));
    e.into()
}

/// Run `f`, turning panics into `Panic`.
fn guard(f: impl FnOnce() -> UavsgsimStatus) -> UavsgsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            UavsgsimStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, UavsgsimStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(UavsgsimStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8".into());
        UavsgsimStatus::InvalidArgument
    })
}

fn scenario(rule: u32, antenna: u32, pae: f64) -> Result<Scenario, UavsgsimStatus> {
    let rule = match rule {
        UAVSGSIM_RULE_RTNA => AssociationRule::Rtna,
        UAVSGSIM_RULE_SEMI => AssociationRule::SemiRtna,
        other => {
            set_error(format!("unknown rule selector {other}"));
            return Err(UavsgsimStatus::InvalidArgument);
        }
    };
    let antenna = match antenna {
        UAVSGSIM_ANTENNA_OMNI => AntennaMode::Omni,
        UAVSGSIM_ANTENNA_DIRECTIONAL => AntennaMode::Directional,
        other => {
            set_error(format!("unknown antenna selector {other}"));
            return Err(UavsgsimStatus::InvalidArgument);
        }
    };
    // pae <= 0 or NaN means no PAE policy
    let pae = (pae > 0.0).then_some(pae);
    Ok(Scenario { rule, antenna, pae })
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn uavsgsim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uavsgsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New configuration holding the defaults.
#[no_mangle]
pub extern "C" fn uavsgsim_config_new() -> *mut UavsgsimConfig {
    Box::into_raw(Box::new(UavsgsimConfig {
        inner: NetworkConfig::default(),
    }))
}

/// Load a `key = value` configuration file into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_config_load(
    path: *const c_char,
    out: *mut *mut UavsgsimConfig,
) -> UavsgsimStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return UavsgsimStatus::NullPointer;
        }
        let path = match c_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_config(Path::new(path)) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(UavsgsimConfig { inner: cfg }));
                UavsgsimStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a handle; NULL is ignored.
///
/// # Safety
/// `cfg` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_config_free(cfg: *mut UavsgsimConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Set one parameter using any key accepted in configuration files.
/// The handle is left unchanged if the result would be invalid.
///
/// # Safety
/// `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_config_set(
    cfg: *mut UavsgsimConfig,
    key: *const c_char,
    value: *const c_char,
) -> UavsgsimStatus {
    guard(|| {
        let Some(handle) = cfg.as_mut() else {
            set_error("null configuration handle".into());
            return UavsgsimStatus::NullPointer;
        };
        let (key, value) = match (c_str(key), c_str(value)) {
            (Ok(k), Ok(v)) => (k, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let mut next = handle.inner;
        let mut pending = Pending::default();
        if let Err(e) = apply_key(&mut next, &mut pending, key.trim(), value) {
            return fail(&e);
        }
        pending.finish(&mut next);
        if let Err(e) = next.validate() {
            return fail(&e);
        }
        handle.inner = next;
        UavsgsimStatus::Ok
    })
}

/// Canonical `key = value` rendering of a configuration. Free the result
/// with `uavsgsim_string_free`. Returns NULL for a NULL handle.
///
/// # Safety
/// `cfg` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_config_serialize(cfg: *const UavsgsimConfig) -> *mut c_char {
    match cfg.as_ref() {
        Some(h) => CString::new(serialize(&h.inner)).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Release a string returned by this library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Analytic coverage probability and spatial throughput.
/// `pae` > 0 selects the PAE beam policy with that scaling parameter.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_analytic(
    cfg: *const UavsgsimConfig,
    rule: u32,
    antenna: u32,
    pae: f64,
    out: *mut UavsgsimAnalytic,
) -> UavsgsimStatus {
    guard(|| {
        let (Some(h), false) = (cfg.as_ref(), out.is_null()) else {
            set_error("null configuration or output pointer".into());
            return UavsgsimStatus::NullPointer;
        };
        let s = match scenario(rule, antenna, pae) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match analytic_for(&h.inner, &s, &QuadratureSpec::default()) {
            Ok(r) => {
                *out = UavsgsimAnalytic {
                    cp: r.cp,
                    st_per_km2: r.st * 1e6,
                    c_b: r.c_b_used,
                    backhaul_limited: (r.regime == Regime::BackhaulLimited) as i32,
                };
                UavsgsimStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

fn estimate_out(m: &MetricEstimate, scale: f64) -> UavsgsimEstimate {
    UavsgsimEstimate {
        value: m.value * scale,
        std_error: m.std_error * scale,
    }
}

/// Monte Carlo estimates from `n_trials` (at least 100) simulated slots,
/// seeded by the configuration's seed.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uavsgsim_simulate(
    cfg: *const UavsgsimConfig,
    rule: u32,
    antenna: u32,
    pae: f64,
    n_trials: u64,
    out: *mut UavsgsimSimulation,
) -> UavsgsimStatus {
    guard(|| {
        let (Some(h), false) = (cfg.as_ref(), out.is_null()) else {
            set_error("null configuration or output pointer".into());
            return UavsgsimStatus::NullPointer;
        };
        let s = match scenario(rule, antenna, pae) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match estimate(&h.inner, &s, n_trials) {
            Ok(e) => {
                *out = UavsgsimSimulation {
                    cp: estimate_out(&e.cp, 1.0),
                    st_per_km2: estimate_out(&e.st, 1e6),
                    q_a: estimate_out(&e.q_a_hat, 1.0),
                    in_projection: estimate_out(&e.projection, 1.0),
                    c_b: e.c_b,
                    trials: e.cp.trials,
                };
                UavsgsimStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
