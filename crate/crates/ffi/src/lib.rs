//! C ABI over `pmcorr`.
//!
//! Every fallible call returns a [`PmStatus`] and writes its result through an
//! out-pointer. After a non-OK status, [`pm_last_error_message`] describes the
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pmcorr::fisher::{cfi_closed, qfi_analytic, qfi_numeric, EstimationTarget, StepPolicy};
use pmcorr::model::{purity_exact, Coherence, EnvironmentSpec, ProbeSpec};
use pmcorr::thermometry::{
    build_table1, lambda_from_temperature, tau_max_exact, temperature_from_lambda, tgi, tgi_approx, ScatteringGas,
};
use pmcorr::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Numerical = 3,
    NonInformative = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmTarget {
    Gamma = 0,
    Lambda = 1,
}

impl From<PmTarget> for EstimationTarget {
    fn from(t: PmTarget) -> Self {
        match t {
            PmTarget::Gamma => EstimationTarget::Gamma,
            PmTarget::Lambda => EstimationTarget::Lambda,
        }
    }
}

/// Opaque probe handle.
pub struct PmProbe(ProbeSpec);

/// Opaque environment handle.
pub struct PmEnvironment(EnvironmentSpec);

/// One row of the temporal-gain table.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PmTgiRow {
    pub gamma: f64,
    /// s
    pub tau_max: f64,
    pub purity_at_tau_max: f64,
    /// s^-1
    pub relative_purity_rate: f64,
    pub lambda_sq_qfi: f64,
    pub tgi_db: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(error: &Error) -> PmStatus {
    match error {
        Error::NonInformative => PmStatus::NonInformative,
        e if e.is_numerical() => PmStatus::Numerical,
        _ => PmStatus::InvalidParameter,
    }
}

fn guard<F>(body: F) -> PmStatus
where
    F: FnOnce() -> Result<(), PmStatus>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside pmcorr".into());
            PmStatus::Panic
        }
    }
}

fn check<T>(r: pmcorr::Result<T>) -> Result<T, PmStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, PmStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(format!("`{name}` is NULL"));
        PmStatus::NullPointer
    })
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), PmStatus> {
    if out.is_null() {
        set_error("output pointer is NULL".into());
        return Err(PmStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next pmcorr call on the same thread.
#[no_mangle]
pub extern "C" fn pm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn pm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New probe. Pass `ell0 = INFINITY` for a fully coherent source.
///
/// # Safety
/// `out` must be valid for writes. The handle must be released with
/// [`pm_probe_free`].
#[no_mangle]
pub unsafe extern "C" fn pm_probe_new(
    mass: f64,
    sigma0: f64,
    ell0: f64,
    gamma: f64,
    out: *mut *mut PmProbe,
) -> PmStatus {
    guard(|| {
        let coherence = check(Coherence::from_length(ell0))?;
        let probe = check(ProbeSpec::new(mass, sigma0, coherence, gamma))?;
        write(out, Box::into_raw(Box::new(PmProbe(probe))))
    })
}

/// Fullerene reference probe with the given γ.
///
/// # Safety
/// As [`pm_probe_new`].
#[no_mangle]
pub unsafe extern "C" fn pm_probe_fullerene(gamma: f64, out: *mut *mut PmProbe) -> PmStatus {
    guard(|| {
        let probe = check(ProbeSpec::fullerene().with_gamma(gamma))?;
        write(out, Box::into_raw(Box::new(PmProbe(probe))))
    })
}

/// # Safety
/// `probe` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pm_probe_set_gamma(probe: *mut PmProbe, gamma: f64) -> PmStatus {
    guard(|| {
        let p = probe.as_mut().ok_or_else(|| {
            set_error("`probe` is NULL".into());
            PmStatus::NullPointer
        })?;
        p.0 = check(p.0.with_gamma(gamma))?;
        Ok(())
    })
}

/// # Safety
/// `probe` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pm_probe_free(probe: *mut PmProbe) {
    if !probe.is_null() {
        drop(Box::from_raw(probe));
    }
}

/// # Safety
/// `out` must be valid for writes; release with [`pm_environment_free`].
#[no_mangle]
pub unsafe extern "C" fn pm_environment_new(lambda: f64, out: *mut *mut PmEnvironment) -> PmStatus {
    guard(|| {
        let env = check(EnvironmentSpec::from_lambda(lambda))?;
        write(out, Box::into_raw(Box::new(PmEnvironment(env))))
    })
}

/// Environment from a gas temperature (K), gas particle mass (kg), number
/// density (m^-3) and probe size (m).
///
/// # Safety
/// As [`pm_environment_new`].
#[no_mangle]
pub unsafe extern "C" fn pm_environment_from_temperature(
    temperature: f64,
    m_air: f64,
    number_density: f64,
    molecule_size: f64,
    out: *mut *mut PmEnvironment,
) -> PmStatus {
    guard(|| {
        let gas = check(ScatteringGas::new(m_air, number_density, molecule_size))?;
        let env = check(EnvironmentSpec::from_temperature(temperature, gas))?;
        write(out, Box::into_raw(Box::new(PmEnvironment(env))))
    })
}

/// # Safety
/// `env` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pm_environment_lambda(env: *const PmEnvironment, out: *mut f64) -> PmStatus {
    guard(|| write(out, borrow(env, "env")?.0.lambda()))
}

/// # Safety
/// `env` must be NULL or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn pm_environment_free(env: *mut PmEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Tr ρ² at time `t` (s).
///
/// # Safety
/// Handles must be live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pm_purity(
    probe: *const PmProbe,
    env: *const PmEnvironment,
    t: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(purity_exact(&p.0, &e.0, t))?)
    })
}

/// Closed-form quantum Fisher information.
///
/// # Safety
/// As [`pm_purity`].
#[no_mangle]
pub unsafe extern "C" fn pm_qfi(
    target: PmTarget,
    probe: *const PmProbe,
    env: *const PmEnvironment,
    t: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(qfi_analytic(target.into(), &p.0, &e.0, t))?)
    })
}

/// Finite-difference quantum Fisher information with the default step policy.
///
/// # Safety
/// As [`pm_purity`].
#[no_mangle]
pub unsafe extern "C" fn pm_qfi_numeric(
    target: PmTarget,
    probe: *const PmProbe,
    env: *const PmEnvironment,
    t: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(qfi_numeric(target.into(), &p.0, &e.0, t, &StepPolicy::default()))?)
    })
}

/// Classical Fisher information of a position measurement.
///
/// # Safety
/// As [`pm_purity`].
#[no_mangle]
pub unsafe extern "C" fn pm_cfi(
    target: PmTarget,
    probe: *const PmProbe,
    env: *const PmEnvironment,
    t: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(cfi_closed(target.into(), &p.0, &e.0, t))?)
    })
}

/// Time (s) maximizing the relative purity rate.
///
/// # Safety
/// Handles must be live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pm_tau_max(probe: *const PmProbe, env: *const PmEnvironment, out: *mut f64) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(tau_max_exact(&p.0, &e.0))?)
    })
}

/// Temporal gain of information relative to γ = 0, dB.
///
/// # Safety
/// As [`pm_tau_max`].
#[no_mangle]
pub unsafe extern "C" fn pm_tgi(probe: *const PmProbe, env: *const PmEnvironment, out: *mut f64) -> PmStatus {
    guard(|| {
        let (p, e) = (borrow(probe, "probe")?, borrow(env, "env")?);
        write(out, check(tgi(&p.0, &e.0))?)
    })
}

/// (10/3)·log10(1 + γ²), dB.
#[no_mangle]
pub extern "C" fn pm_tgi_approx(gamma: f64) -> f64 {
    tgi_approx(gamma)
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pm_lambda_from_temperature(
    temperature: f64,
    m_air: f64,
    number_density: f64,
    molecule_size: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let gas = check(ScatteringGas::new(m_air, number_density, molecule_size))?;
        write(out, check(lambda_from_temperature(temperature, &gas))?)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pm_temperature_from_lambda(
    lambda: f64,
    m_air: f64,
    number_density: f64,
    molecule_size: f64,
    out: *mut f64,
) -> PmStatus {
    guard(|| {
        let gas = check(ScatteringGas::new(m_air, number_density, molecule_size))?;
        write(out, check(temperature_from_lambda(lambda, &gas))?)
    })
}

/// Fills `rows[0..n]` with one table row per entry of `gammas[0..n]`. The
/// probe's own γ is ignored. `rows` is left untouched on failure.
///
/// # Safety
/// `gammas` must point to `n` readable values and `rows` to `n` writable rows.
#[no_mangle]
pub unsafe extern "C" fn pm_table1(
    probe: *const PmProbe,
    lambda: f64,
    gammas: *const f64,
    n: usize,
    rows: *mut PmTgiRow,
) -> PmStatus {
    guard(|| {
        let p = borrow(probe, "probe")?;
        if n == 0 {
            return Ok(());
        }
        if gammas.is_null() || rows.is_null() {
            set_error("`gammas` or `rows` is NULL".into());
            return Err(PmStatus::NullPointer);
        }
        let gammas = std::slice::from_raw_parts(gammas, n);
        let table = check(build_table1(&p.0, lambda, gammas))?;
        let out = std::slice::from_raw_parts_mut(rows, n);
        for (slot, r) in out.iter_mut().zip(table) {
            *slot = PmTgiRow {
                gamma: r.gamma,
                tau_max: r.tau_max,
                purity_at_tau_max: r.purity_at_tau_max,
                relative_purity_rate: r.relative_purity_rate,
                lambda_sq_qfi: r.lambda_sq_qfi,
                tgi_db: r.tgi_db,
            };
        }
        Ok(())
    })
}
