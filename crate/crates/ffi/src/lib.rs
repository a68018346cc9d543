//! C interface to `geohamilton`.
//!
//! Every function returns a [`GhStatus`]. On failure a message is kept per
//! thread and can be read with [`gh_last_error_message`]. Handles are opaque
//! and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use geohamilton::builder::{build_hamilton_cycle, verify_cycle, BuilderConstants};
use geohamilton::experiments::limit_probability;
use geohamilton::graph::EdgeProcess;
use geohamilton::hitting::{hitting_report, rho_min_degree_points, with_process};
use geohamilton::{Error, Exponent, NormSpec, PointSet};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    Unsatisfiable = 4,
    NotReached = 5,
    Infeasible = 6,
    Io = 7,
    Parse = 8,
    /// The builder stopped; the message names the stage.
    BuildFailed = 9,
    Panic = 10,
}

/// Points in the unit cube with their norm.
pub struct GhPointSet {
    points: PointSet,
    norm: NormSpec,
}

/// A vertex sequence produced by the builder.
pub struct GhCycle {
    vertices: Vec<usize>,
}

/// Hitting radii; absent values are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GhHittingRadii {
    pub min_degree_1: f64,
    pub min_degree_2: f64,
    pub connected: f64,
    pub two_connected: f64,
    pub hamiltonian: f64,
    /// Centred min-degree-2 radius; Euclidean plane only.
    pub x_statistic: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> GhStatus {
    match e {
        Error::Contract(_) | Error::EmptyInput(_) => GhStatus::InvalidArgument,
        Error::Capacity { .. } => GhStatus::Capacity,
        Error::Unsatisfiable(_) => GhStatus::Unsatisfiable,
        Error::NotReached { .. } => GhStatus::NotReached,
        Error::Infeasible(_) => GhStatus::Infeasible,
        Error::Io(_) => GhStatus::Io,
        Error::Parse(_) => GhStatus::Parse,
    }
}

struct Fail(GhStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GhStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GhStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GhStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal panic: {m}"));
            GhStatus::Panic
        }
    }
}

fn norm_from(d: usize, p: f64) -> Result<NormSpec, Fail> {
    let e = if p.is_infinite() && p > 0.0 { Exponent::Infinity } else { Exponent::Finite(p) };
    Ok(NormSpec::new(d, e)?)
}

/// # Safety
/// `h` must be null or a live handle from this library.
unsafe fn points_ref<'a>(h: *const GhPointSet) -> Result<&'a GhPointSet, Fail> {
    h.as_ref().ok_or_else(|| null("point set"))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn gh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `count` points of dimension `d` from `coords` (row-major).
/// `p` is the norm exponent; pass `INFINITY` for the max norm.
///
/// # Safety
/// `coords` must point to `count * d` doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gh_points_new(
    coords: *const f64,
    count: usize,
    d: usize,
    p: f64,
    out: *mut *mut GhPointSet,
) -> GhStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let norm = norm_from(d, p)?;
        let len = count.checked_mul(d).ok_or_else(|| Fail(GhStatus::InvalidArgument, "size overflow".into()))?;
        let flat = if len == 0 {
            Vec::new()
        } else {
            if coords.is_null() {
                return Err(null("coords"));
            }
            std::slice::from_raw_parts(coords, len).to_vec()
        };
        let points = PointSet::from_flat(d, flat)?;
        *out = Box::into_raw(Box::new(GhPointSet { points, norm }));
        Ok(())
    })
}

/// `count` uniform points in `[0,1]^d` from `seed`.
///
/// # Safety
/// `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gh_points_sample(count: usize, d: usize, p: f64, seed: u64, out: *mut *mut GhPointSet) -> GhStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let norm = norm_from(d, p)?;
        let points = geohamilton::sample_uniform_points(count, &norm, seed)?;
        *out = Box::into_raw(Box::new(GhPointSet { points, norm }));
        Ok(())
    })
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gh_points_len(h: *const GhPointSet) -> usize {
    h.as_ref().map_or(0, |s| s.points.len())
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gh_points_free(h: *mut GhPointSet) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Hitting radii of degree, connectivity and, for up to 22 points when
/// `with_hamiltonian` is nonzero, Hamiltonicity.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gh_hitting_radii(h: *const GhPointSet, with_hamiltonian: i32, out: *mut GhHittingRadii) -> GhStatus {
    guard(|| {
        let s = points_ref(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let rep = if with_hamiltonian != 0 {
            hitting_report(&EdgeProcess::build(&s.points, &s.norm)?, 2, true)?
        } else {
            let top = rho_min_degree_points(&s.points, &s.norm, 2)?;
            with_process(&s.points, &s.norm, 1.25 * top, |proc| hitting_report(proc, 2, false))?
        };
        *out = GhHittingRadii {
            min_degree_1: rep.rho_min_degree[0],
            min_degree_2: rep.rho_min_degree[1],
            connected: rep.rho_connected,
            two_connected: rep.rho_k_connected[1],
            hamiltonian: rep.rho_hamiltonian.unwrap_or(f64::NAN),
            x_statistic: rep.x_statistic.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Hamilton cycle of `G(points, rho)` with the desk constants and lattice
/// factor `eta` (pass 0 for the default). A structural failure returns
/// `BUILD_FAILED` and leaves `*out` null.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gh_build_cycle(h: *const GhPointSet, rho: f64, eta: f64, out: *mut *mut GhCycle) -> GhStatus {
    guard(|| {
        let s = points_ref(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let desk = BuilderConstants::desk();
        let consts = BuilderConstants { eta: if eta > 0.0 { eta } else { desk.eta }, ..desk };
        match build_hamilton_cycle(&s.points, &s.norm, rho, &consts, false)? {
            Ok(b) => {
                *out = Box::into_raw(Box::new(GhCycle { vertices: b.cycle }));
                Ok(())
            }
            Err(f) => Err(Fail(GhStatus::BuildFailed, f.to_string())),
        }
    })
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gh_cycle_len(c: *const GhCycle) -> usize {
    c.as_ref().map_or(0, |c| c.vertices.len())
}

/// Copies up to `cap` vertex indices into `buf` and stores the full length
/// in `*written`.
///
/// # Safety
/// `c` must be a live handle, `buf` must hold `cap` entries, `written` writable.
#[no_mangle]
pub unsafe extern "C" fn gh_cycle_vertices(c: *const GhCycle, buf: *mut usize, cap: usize, written: *mut usize) -> GhStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("cycle"))?;
        let written = written.as_mut().ok_or_else(|| null("written"))?;
        *written = c.vertices.len();
        let k = cap.min(c.vertices.len());
        if k > 0 {
            if buf.is_null() {
                return Err(null("buf"));
            }
            std::slice::from_raw_parts_mut(buf, k).copy_from_slice(&c.vertices[..k]);
        }
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gh_cycle_free(c: *mut GhCycle) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Sets `*valid` to 1 when `vertices` is a Hamilton cycle of `G(points, rho)`
/// and 0 otherwise; the reason is left as the last error message.
///
/// # Safety
/// `h` must be a live handle, `vertices` must hold `len` entries, `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn gh_verify_cycle(
    h: *const GhPointSet,
    rho: f64,
    vertices: *const usize,
    len: usize,
    valid: *mut i32,
) -> GhStatus {
    let mut reason = None;
    let status = guard(|| {
        let s = points_ref(h)?;
        let valid = valid.as_mut().ok_or_else(|| null("valid"))?;
        let seq = if len == 0 {
            &[][..]
        } else {
            if vertices.is_null() {
                return Err(null("vertices"));
            }
            std::slice::from_raw_parts(vertices, len)
        };
        let check = verify_cycle(&s.points, &s.norm, rho, seq);
        *valid = i32::from(check.is_valid());
        reason = check.failure.map(|f| f.to_string());
        Ok(())
    });
    if let Some(r) = reason {
        set_error(r);
    }
    status
}

/// Limit law of the centred min-degree-2 radius at `x`.
#[no_mangle]
pub extern "C" fn gh_limit_probability(x: f64) -> f64 {
    limit_probability(x)
}
