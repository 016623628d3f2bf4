//! C interface to `zhl`.
//!
//! Kernels live behind an opaque `ZhlKernel` pointer created by one of the
//! `zhl_kernel_*` constructors and released with `zhl_kernel_free`. Every
//! call returns a `ZhlStatus`; on failure `zhl_last_error` holds a message
//! for the calling thread until its next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use zhl::engine::{continued_l, oracle_l};
use zhl::hamiltonian::{eigen_residual, make_eigenstate, Branch};
use zhl::kernels::{make_dirichlet_kernel, DirichletCharacter, Kernel};
use zhl::numerics::GridSpec;
use zhl::zeros::{find_zeros, ScanWindow};
use zhl::ZhlError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZhlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Pole = 4,
    NonConvergence = 5,
    Validation = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ZhlComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ZhlComplex> for Complex64 {
    fn from(z: ZhlComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for ZhlComplex {
    fn from(z: Complex64) -> Self {
        ZhlComplex { re: z.re, im: z.im }
    }
}

/// Opaque kernel handle.
pub struct ZhlKernel(Kernel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &ZhlError) -> ZhlStatus {
    match e {
        ZhlError::NonFinite(_)
        | ZhlError::InvalidParameter(_)
        | ZhlError::InvalidCharacter(_)
        | ZhlError::Parse(_)
        | ZhlError::Io(_) => ZhlStatus::InvalidArgument,
        ZhlError::GammaPole(_) | ZhlError::PoleAtOne | ZhlError::ZeroBase => ZhlStatus::Pole,
        ZhlError::NonConvergence { .. } | ZhlError::NewtonFailed { .. } | ZhlError::StepUnderflow(_) => {
            ZhlStatus::NonConvergence
        }
        ZhlError::RadiusExceeded(_)
        | ZhlError::NonValidatedForm(..)
        | ZhlError::BoundaryTooClose(_)
        | ZhlError::InsufficientCoefficients { .. } => ZhlStatus::Validation,
        _ => ZhlStatus::Domain,
    }
}

fn guard<F>(f: F) -> ZhlStatus
where
    F: FnOnce() -> Result<(), (ZhlStatus, String)>,
{
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZhlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZhlStatus::Internal
        }
    }
}

fn lift<T>(r: zhl::Result<T>) -> Result<T, (ZhlStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ZhlStatus, String) {
    (ZhlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn kernel_ref<'a>(k: *const ZhlKernel) -> Result<&'a Kernel, (ZhlStatus, String)> {
    k.as_ref().map(|k| &k.0).ok_or_else(|| null("kernel"))
}

unsafe fn store<T>(out: *mut T, v: T, what: &str) -> Result<(), (ZhlStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn emit_kernel(k: zhl::Result<Kernel>, out: *mut *mut ZhlKernel) -> Result<(), (ZhlStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let k = lift(k)?;
    out.write(Box::into_raw(Box::new(ZhlKernel(k))));
    Ok(())
}

/// Message for the last failed call on this thread, empty after success.
/// Valid until the next `zhl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn zhl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Built-in kernel by name: `riemann`, `lambda`, `chi4`, `chi3` or `hecke`
/// (the latter with `tau_count` cusp-form coefficients).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zhl_kernel_new(name: *const c_char, tau_count: usize, out: *mut *mut ZhlKernel) -> ZhlStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (ZhlStatus::InvalidArgument, "kernel name is not UTF-8".to_string()))?;
        if name.eq_ignore_ascii_case("dirichlet") {
            return Err((ZhlStatus::InvalidArgument, "use zhl_kernel_dirichlet for custom characters".into()));
        }
        emit_kernel(zhl::cli::resolve_kernel(name, None, tau_count), out)
    })
}

/// Dirichlet kernel from the table `chi(0), ..., chi(modulus - 1)`.
///
/// # Safety
/// `values` must point at `modulus` readable entries and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn zhl_kernel_dirichlet(
    modulus: u32,
    values: *const ZhlComplex,
    out: *mut *mut ZhlKernel,
) -> ZhlStatus {
    guard(|| {
        if values.is_null() {
            return Err(null("values"));
        }
        let table: Vec<Complex64> =
            std::slice::from_raw_parts(values, modulus as usize).iter().map(|&v| v.into()).collect();
        let chi = lift(DirichletCharacter::new(modulus, table))?;
        emit_kernel(make_dirichlet_kernel(chi), out)
    })
}

/// Releases a kernel; null is ignored.
///
/// # Safety
/// `kernel` must come from a `zhl_kernel_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn zhl_kernel_free(kernel: *mut ZhlKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// Writes the kernel name, NUL-terminated, into `buf` of `cap` bytes.
/// `needed` receives the full length including the terminator.
///
/// # Safety
/// `buf` must have `cap` writable bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn zhl_kernel_name(
    kernel: *const ZhlKernel,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> ZhlStatus {
    guard(|| {
        let name = kernel_ref(kernel)?.name().as_bytes();
        if !needed.is_null() {
            needed.write(name.len() + 1);
        }
        if buf.is_null() || cap < name.len() + 1 {
            return Err((ZhlStatus::BufferTooSmall, format!("name needs {} bytes", name.len() + 1)));
        }
        ptr::copy_nonoverlapping(name.as_ptr() as *const c_char, buf, name.len());
        buf.add(name.len()).write(0);
        Ok(())
    })
}

/// Continued value `L(f, z, x)` with its error estimate.
///
/// # Safety
/// `kernel` must be live; `value` must be valid; `est_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn zhl_continued_l(
    kernel: *const ZhlKernel,
    z: ZhlComplex,
    x: f64,
    value: *mut ZhlComplex,
    est_error: *mut f64,
) -> ZhlStatus {
    guard(|| {
        let r = lift(continued_l(kernel_ref(kernel)?, z.into(), x))?;
        store(value, r.value.into(), "value")?;
        if !est_error.is_null() {
            est_error.write(r.est_error);
        }
        Ok(())
    })
}

/// Reference value through Hurwitz zeta sums (built-in kernels only).
///
/// # Safety
/// `kernel` must be live and `value` valid.
#[no_mangle]
pub unsafe extern "C" fn zhl_oracle_l(kernel: *const ZhlKernel, z: ZhlComplex, x: f64, value: *mut ZhlComplex) -> ZhlStatus {
    guard(|| {
        let v = lift(oracle_l(kernel_ref(kernel)?, z.into(), x))?;
        store(value, v.into(), "value")
    })
}

/// `sup |(H - E) Delta_f Psi| / sup |Delta_f Psi|` for the principal
/// eigenstate at `z`, sampled on `count` points of `[x_min, x_max]`.
///
/// # Safety
/// `kernel` must be live and `relative_residual` valid.
#[no_mangle]
pub unsafe extern "C" fn zhl_eigen_residual(
    kernel: *const ZhlKernel,
    z: ZhlComplex,
    x_min: f64,
    x_max: f64,
    count: usize,
    relative_residual: *mut f64,
) -> ZhlStatus {
    guard(|| {
        let k = kernel_ref(kernel)?;
        let grid = lift(GridSpec::new(x_min, x_max, count))?;
        let state = lift(make_eigenstate(k, z.into(), Branch::Principal))?;
        let rep = lift(eigen_residual(k, &state, &grid))?;
        let r = rep
            .relative_residual()
            .ok_or_else(|| (ZhlStatus::Domain, "residual undefined for this kernel".to_string()))?;
        store(relative_residual, r, "relative_residual")
    })
}

/// Certified zeros on `1/2 + it`, `t_min <= t <= t_max`, scanned with
/// `step`. Up to `cap` zeros go to `zeros`; `count` always receives the
/// number found, and `BufferTooSmall` signals truncation.
///
/// # Safety
/// `zeros` must have `cap` writable entries (may be null when `cap` is 0);
/// `count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn zhl_find_zeros(
    kernel: *const ZhlKernel,
    t_min: f64,
    t_max: f64,
    step: f64,
    zeros: *mut ZhlComplex,
    cap: usize,
    count: *mut usize,
) -> ZhlStatus {
    guard(|| {
        let k = kernel_ref(kernel)?;
        let window = lift(ScanWindow::critical(t_min, t_max, step))?;
        let found = lift(find_zeros(k, &window))?.records;
        store(count, found.len(), "count")?;
        if found.len() > cap {
            return Err((ZhlStatus::BufferTooSmall, format!("{} zeros found, room for {cap}", found.len())));
        }
        if !found.is_empty() && zeros.is_null() {
            return Err(null("zeros"));
        }
        for (i, rec) in found.iter().enumerate() {
            zeros.add(i).write(rec.z.into());
        }
        Ok(())
    })
}
