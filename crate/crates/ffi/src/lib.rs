//! C ABI over `green-core`.
//!
//! Every function returns a [`GreenStatus`]. On failure the message is kept
//! per thread and can be copied out with [`green_last_error_message`].
//! Domains and fitted solutions are opaque handles released with their
//! `*_free` function. Points are passed as [`GreenPoint`]; `z` is ignored for
//! planar domains.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use green_core::experiments::{green_eval, run_reproduction, EvalOptions, ReproductionName, ReproductionSpec};
use green_core::{
    estimate_green_2d, estimate_green_3d, solve_green, DomainSpec, GeometryError, GreenError, GreenSolution, Method,
    MfsParams, Point, Point2, Point3, WosParams,
};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Infeasible = 4,
    IllConditioned = 5,
    Pole = 6,
    Io = 7,
    Internal = 8,
}

/// Which solver [`green_evaluate`] should use.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreenMethod {
    ClosedForm = 0,
    Mfs = 1,
    Wos = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreenPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Solver settings. Zero fields (and a non-positive `eps_shell`) select the
/// library defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreenOptions {
    pub charges: usize,
    pub walks: usize,
    pub eps_shell: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    /// Boundary residual for deterministic solvers, standard error for walks.
    pub error_bound: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GreenWosResult {
    pub estimate: f64,
    pub std_error: f64,
    pub walks_used: usize,
    pub truncated_walks: usize,
    pub warning: bool,
}

/// Opaque domain handle.
pub struct GreenDomain {
    spec: DomainSpec,
}

/// Opaque fitted fundamental-solution expansion.
pub struct GreenMfsSolution {
    inner: GreenSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(GreenStatus, String);

impl From<GreenError> for Failure {
    fn from(e: GreenError) -> Self {
        let status = match &e {
            GreenError::Geometry(GeometryError::Json(_)) => GreenStatus::Parse,
            GreenError::Geometry(_) | GreenError::Precondition(_) => GreenStatus::InvalidArgument,
            GreenError::Pole => GreenStatus::Pole,
            GreenError::Infeasible { .. } | GreenError::Infeasibility(_) => GreenStatus::Infeasible,
            GreenError::IllConditioned { .. } => GreenStatus::IllConditioned,
            GreenError::Numerical(_) => GreenStatus::Internal,
            GreenError::Io(_) => GreenStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        GreenError::from(e).into()
    }
}

fn null(what: &str) -> Failure {
    Failure(GreenStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GreenStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure(GreenStatus::Internal, msg))
    });
    match outcome {
        Ok(()) => {
            LAST_ERROR.with(|e| e.borrow_mut().clear());
            GreenStatus::Ok
        }
        Err(Failure(status, msg)) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = msg);
            status
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GreenStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn point_for(d: &DomainSpec, p: GreenPoint) -> Point {
    if d.is_planar() {
        Point::Planar(Point2::new(p.x, p.y))
    } else {
        Point::Spatial(Point3::new(p.x, p.y, p.z))
    }
}

fn planar(d: &DomainSpec, p: GreenPoint) -> Result<Point2, Failure> {
    if !d.is_planar() {
        return Err(GeometryError::Dimension { expected: "planar" }.into());
    }
    Ok(Point2::new(p.x, p.y))
}

fn mfs_params(opts: &GreenOptions) -> MfsParams {
    let p = MfsParams::default();
    if opts.charges > 0 {
        p.with_charges(opts.charges)
    } else {
        p
    }
}

fn wos_params(opts: &GreenOptions) -> WosParams {
    let mut p = WosParams::default().with_seed(opts.seed);
    if opts.walks > 0 {
        p = p.with_walks(opts.walks);
    }
    if opts.eps_shell > 0.0 {
        p = p.with_eps_shell(opts.eps_shell);
    }
    p
}

/// Default options (all zero).
#[no_mangle]
pub extern "C" fn green_options_default() -> GreenOptions {
    GreenOptions::default()
}

/// Copy the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn green_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parse and validate a domain from its JSON description.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_domain_from_json(json: *const c_char, out: *mut *mut GreenDomain) -> GreenStatus {
    guard(|| {
        let text = string(json, "json")?;
        let spec = DomainSpec::from_json(text)?;
        spec.validate()?;
        store(out, Box::into_raw(Box::new(GreenDomain { spec })), "out")
    })
}

/// Release a domain. Null is accepted.
///
/// # Safety
/// `domain` must come from [`green_domain_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn green_domain_free(domain: *mut GreenDomain) {
    if !domain.is_null() {
        drop(Box::from_raw(domain));
    }
}

/// 2 for planar domains, 3 for spatial ones.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_domain_dimension(domain: *const GreenDomain, out: *mut usize) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        store(out, d.spec.dimension(), "out")
    })
}

/// Number of boundary components.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_domain_component_count(domain: *const GreenDomain, out: *mut usize) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        store(out, d.spec.component_count()?, "out")
    })
}

/// Distance from `p` to the boundary and whether `p` lies in the domain.
///
/// # Safety
/// `domain` must be a live handle; `dist` and `inside` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_domain_distance(
    domain: *const GreenDomain,
    p: GreenPoint,
    dist: *mut f64,
    inside: *mut bool,
) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        let q = d.spec.distance_to_boundary(point_for(&d.spec, p))?;
        store(dist, q.dist, "dist")?;
        store(inside, q.inside, "inside")
    })
}

/// `g_Ω(z, w)` by the chosen method. `options` may be null.
///
/// # Safety
/// `domain` must be a live handle; `options` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn green_evaluate(
    domain: *const GreenDomain,
    method: GreenMethod,
    z: GreenPoint,
    w: GreenPoint,
    options: *const GreenOptions,
    out: *mut GreenValue,
) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        let opts = options.as_ref().copied().unwrap_or_default();
        let method = match method {
            GreenMethod::ClosedForm => Method::ClosedForm,
            GreenMethod::Mfs => Method::Mfs,
            GreenMethod::Wos => Method::Wos,
        };
        let eval = EvalOptions { mfs: mfs_params(&opts), wos: wos_params(&opts) };
        let est = green_eval(&d.spec, point_for(&d.spec, z), point_for(&d.spec, w), method, &eval)?;
        store(out, GreenValue { value: est.value, error_bound: est.error_bound }, "out")
    })
}

/// Walk-on-spheres estimate with full statistics. `options` may be null.
///
/// # Safety
/// `domain` must be a live handle; `options` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn green_wos_estimate(
    domain: *const GreenDomain,
    z: GreenPoint,
    w: GreenPoint,
    options: *const GreenOptions,
    out: *mut GreenWosResult,
) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        let opts = options.as_ref().copied().unwrap_or_default();
        let p = wos_params(&opts);
        let r = match (point_for(&d.spec, z), point_for(&d.spec, w)) {
            (Point::Planar(z), Point::Planar(w)) => estimate_green_2d(&d.spec, z, w, &p)?,
            (Point::Spatial(x), Point::Spatial(w)) => estimate_green_3d(&d.spec, x, w, &p)?,
            _ => unreachable!(),
        };
        let result = GreenWosResult {
            estimate: r.estimate,
            std_error: r.std_error,
            walks_used: r.walks_used,
            truncated_walks: r.truncated_walks,
            warning: r.warning,
        };
        store(out, result, "out")
    })
}

/// Fit a fundamental-solution expansion for pole `w`. `charges == 0` uses
/// the default starting count.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_mfs_solve(
    domain: *const GreenDomain,
    w: GreenPoint,
    charges: usize,
    out: *mut *mut GreenMfsSolution,
) -> GreenStatus {
    guard(|| {
        let d = borrow(domain, "domain")?;
        let w = planar(&d.spec, w)?;
        let opts = GreenOptions { charges, ..Default::default() };
        let inner = solve_green(&d.spec, w, &mfs_params(&opts))?;
        store(out, Box::into_raw(Box::new(GreenMfsSolution { inner })), "out")
    })
}

/// Zero-extended value of a fitted solution at `z`.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_mfs_evaluate(
    solution: *const GreenMfsSolution,
    z: GreenPoint,
    out: *mut f64,
) -> GreenStatus {
    guard(|| {
        let s = borrow(solution, "solution")?;
        store(out, s.inner.evaluate(Point2::new(z.x, z.y))?, "out")
    })
}

/// Largest boundary residual of a fitted solution.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_mfs_residual(solution: *const GreenMfsSolution, out: *mut f64) -> GreenStatus {
    guard(|| {
        let s = borrow(solution, "solution")?;
        store(out, s.inner.boundary_residual, "out")
    })
}

/// Number of charges in a fitted solution.
///
/// # Safety
/// `solution` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn green_mfs_charge_count(solution: *const GreenMfsSolution, out: *mut usize) -> GreenStatus {
    guard(|| {
        let s = borrow(solution, "solution")?;
        store(out, s.inner.charges.len(), "out")
    })
}

/// Release a fitted solution. Null is accepted.
///
/// # Safety
/// `solution` must come from [`green_mfs_solve`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn green_mfs_free(solution: *mut GreenMfsSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Run a named reproduction with default `n` values. Results are written to
/// `out_dir` when it is non-null. `options` may be null.
///
/// # Safety
/// `name` must be NUL-terminated; `out_dir` null or NUL-terminated;
/// `options` null or readable; `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn green_reproduce(
    name: *const c_char,
    out_dir: *const c_char,
    options: *const GreenOptions,
    passed: *mut bool,
) -> GreenStatus {
    guard(|| {
        let name: ReproductionName = string(name, "name")?.parse()?;
        let opts = options.as_ref().copied().unwrap_or_default();
        let mut spec = ReproductionSpec::new(name).with_seed(opts.seed);
        if opts.walks > 0 {
            spec = spec.with_walks(opts.walks);
        }
        if opts.eps_shell > 0.0 {
            spec.eps_shell = Some(opts.eps_shell);
        }
        if opts.charges > 0 {
            spec.charges = Some(opts.charges);
        }
        let outcome = run_reproduction(&spec)?;
        if !out_dir.is_null() {
            outcome.write(Path::new(string(out_dir, "out_dir")?))?;
        }
        store(passed, outcome.passed, "passed")
    })
}
