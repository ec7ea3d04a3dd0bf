//! C ABI over `vortexkit`.
//!
//! Objects are opaque handles released with their `*_free` function. Every
//! call returns a [`VkStatus`]; on failure the message is available from
//! [`vk_last_error`] on the same thread. Strings returned through out
//! parameters are owned by the caller and released with [`vk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use vortexkit::defects::detect_singularities;
use vortexkit::harness::{render_report, run_sweep, ReportFormat, SweepConfig};
use vortexkit::merging::{grow_and_merge, GrowthOptions, Seed};
use vortexkit::mesh::{build_disk_mesh, TriMesh};
use vortexkit::scalar::{vortex_energy, LambdaEvaluator, DEFAULT_TOL};
use vortexkit::solver::{discrete_energy, initialize_vortex_ansatz, minimize, CircleField, SolverConfig};
use vortexkit::{Error, FamilySchedule, Integrand, IntegrandSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Divergent = 3,
    NumericalFailure = 4,
    Io = 5,
    Panic = 6,
}

pub struct VkIntegrand(Integrand);
pub struct VkMesh(Arc<TriMesh>);
pub struct VkField(CircleField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VkStatus {
    match e {
        Error::Divergent => VkStatus::Divergent,
        Error::QuadratureFailure(..) | Error::LineSearchStall { .. } | Error::AmbiguousEdge { .. } => {
            VkStatus::NumericalFailure
        }
        Error::Io(_) => VkStatus::Io,
        _ => VkStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), VkStatus>) -> VkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VkStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            VkStatus::Panic
        }
    }
}

trait Check<T> {
    fn check(self) -> Result<T, VkStatus>;
}

impl<T> Check<T> for vortexkit::Result<T> {
    fn check(self) -> Result<T, VkStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, VkStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(VkStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        VkStatus::InvalidArgument
    })
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, VkStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null output pointer".into());
        VkStatus::NullPointer
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, VkStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        VkStatus::NullPointer
    })
}

fn give_string(s: String) -> Result<*mut c_char, VkStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        set_error("output contains a NUL byte".into());
        VkStatus::InvalidArgument
    })
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn vk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Integrand from a JSON descriptor or a short form such as `trunc:100`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vk_integrand_new(text: *const c_char, out: *mut *mut VkIntegrand) -> VkStatus {
    guard(|| {
        let out = out_arg(out)?;
        let s = str_arg(text)?.trim();
        let f = if s.starts_with('{') {
            Integrand::from_json(s).check()?
        } else {
            Integrand::from_spec(&IntegrandSpec::parse_short(s).check()?).check()?
        };
        *out = Box::into_raw(Box::new(VkIntegrand(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from `vk_integrand_new` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn vk_integrand_free(f: *mut VkIntegrand) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// Valid handle and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_integrand_value(f: *const VkIntegrand, t: f64, out: *mut f64) -> VkStatus {
    guard(|| {
        let f = handle(f)?;
        *out_arg(out)? = f.0.value(t);
        Ok(())
    })
}

/// # Safety
/// Valid handle and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_vortex_energy(f: *const VkIntegrand, out: *mut f64) -> VkStatus {
    guard(|| {
        let f = handle(f)?;
        *out_arg(out)? = vortex_energy(&f.0, DEFAULT_TOL).check()?.value;
        Ok(())
    })
}

/// `Λ_f(t)` with systole `sys`.
///
/// # Safety
/// Valid handle and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_lambda(f: *const VkIntegrand, sys: f64, t: f64, out: *mut f64) -> VkStatus {
    guard(|| {
        let f = handle(f)?;
        let ev = LambdaEvaluator::new(f.0.clone(), sys, DEFAULT_TOL).check()?;
        *out_arg(out)? = ev.value(t).check()?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vk_mesh_disk(h: f64, out: *mut *mut VkMesh) -> VkStatus {
    guard(|| {
        let out = out_arg(out)?;
        let m = build_disk_mesh(h).check()?;
        *out = Box::into_raw(Box::new(VkMesh(Arc::new(m))));
        Ok(())
    })
}

/// # Safety
/// `m` must come from `vk_mesh_disk` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn vk_mesh_free(m: *mut VkMesh) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// Valid handle and writable outputs.
#[no_mangle]
pub unsafe extern "C" fn vk_mesh_counts(m: *const VkMesh, vertices: *mut usize, triangles: *mut usize) -> VkStatus {
    guard(|| {
        let m = handle(m)?;
        *out_arg(vertices)? = m.0.n_vertices();
        *out_arg(triangles)? = m.0.n_triangles();
        Ok(())
    })
}

/// Vortex ansatz: `n` centers as interleaved `x, y` pairs with their degrees.
///
/// # Safety
/// `centers` holds `2n` reals, `degrees` holds `n` integers.
#[no_mangle]
pub unsafe extern "C" fn vk_field_vortex(
    m: *const VkMesh,
    centers: *const f64,
    degrees: *const i64,
    n: usize,
    phase_offset: f64,
    out: *mut *mut VkField,
) -> VkStatus {
    guard(|| {
        let m = handle(m)?;
        let out = out_arg(out)?;
        let field = if n == 0 {
            CircleField::constant(m.0.clone(), phase_offset)
        } else {
            if centers.is_null() || degrees.is_null() {
                set_error("null centers or degrees".into());
                return Err(VkStatus::NullPointer);
            }
            let c = std::slice::from_raw_parts(centers, 2 * n);
            let d = std::slice::from_raw_parts(degrees, n);
            let pts: Vec<[f64; 2]> = c.chunks(2).map(|p| [p[0], p[1]]).collect();
            initialize_vortex_ansatz(m.0.clone(), &pts, d, phase_offset).check()?
        };
        *out = Box::into_raw(Box::new(VkField(field)));
        Ok(())
    })
}

/// # Safety
/// `u` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn vk_field_free(u: *mut VkField) {
    if !u.is_null() {
        drop(Box::from_raw(u));
    }
}

/// # Safety
/// Valid handles and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_field_energy(u: *const VkField, f: *const VkIntegrand, out: *mut f64) -> VkStatus {
    guard(|| {
        let (u, f) = (handle(u)?, handle(f)?);
        *out_arg(out)? = discrete_energy(&u.0, &f.0);
        Ok(())
    })
}

/// Minimizes from `u` with default settings, capped at `max_iters` when it
/// is nonzero; writes a new field handle.
///
/// # Safety
/// Valid handles and writable outputs.
#[no_mangle]
pub unsafe extern "C" fn vk_field_minimize(
    u: *const VkField,
    f: *const VkIntegrand,
    max_iters: usize,
    out: *mut *mut VkField,
    energy: *mut f64,
) -> VkStatus {
    guard(|| {
        let (u, f) = (handle(u)?, handle(f)?);
        let (out, energy) = (out_arg(out)?, out_arg(energy)?);
        let mut cfg = SolverConfig::default();
        if max_iters > 0 {
            cfg.max_iters = max_iters;
        }
        let r = minimize(&u.0, &f.0, &cfg).check()?;
        *energy = r.energy();
        *out = Box::into_raw(Box::new(VkField(r.field)));
        Ok(())
    })
}

/// Detected defects as JSON.
///
/// # Safety
/// Valid handle and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_field_defects_json(u: *const VkField, out: *mut *mut c_char) -> VkStatus {
    guard(|| {
        let u = handle(u)?;
        let out = out_arg(out)?;
        let s = detect_singularities(&u.0).check()?;
        *out = give_string(serde_json::to_string(&s).map_err(Error::from).check()?)?;
        Ok(())
    })
}

/// Ball growth from a JSON seed list `[{"center":[x,y],"degree":d}, ...]`;
/// writes the final state as JSON.
///
/// # Safety
/// NUL-terminated `seeds_json`; writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_merge_sim(seeds_json: *const c_char, eta: f64, sys: f64, out: *mut *mut c_char) -> VkStatus {
    guard(|| {
        let text = str_arg(seeds_json)?;
        let out = out_arg(out)?;
        let seeds: Vec<Seed> = serde_json::from_str(text).map_err(Error::from).check()?;
        let opts = GrowthOptions { sys, ..GrowthOptions::default() };
        let state = grow_and_merge(&seeds, eta, &opts).check()?;
        *out = give_string(serde_json::to_string(&state).map_err(Error::from).check()?)?;
        Ok(())
    })
}

/// Sweep over `n` parameters of a family on the disk; writes CSV.
///
/// # Safety
/// NUL-terminated `family`; `params` holds `n` reals; writable `out`.
#[no_mangle]
pub unsafe extern "C" fn vk_sweep_csv(
    family: *const c_char,
    params: *const f64,
    n: usize,
    degree: i64,
    h: f64,
    out: *mut *mut c_char,
) -> VkStatus {
    guard(|| {
        let family = str_arg(family)?;
        let out = out_arg(out)?;
        if params.is_null() {
            set_error("null params".into());
            return Err(VkStatus::NullPointer);
        }
        let p = std::slice::from_raw_parts(params, n).to_vec();
        let schedule = FamilySchedule::new(family, p).check()?;
        let cfg = SweepConfig { h, ..SweepConfig::default() };
        let records = run_sweep(&schedule, degree, &cfg).check()?;
        *out = give_string(render_report(&records, ReportFormat::Csv).check()?)?;
        Ok(())
    })
}
