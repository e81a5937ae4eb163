//! C interface to `entpow`.
//!
//! Operators live behind an opaque `EpOperator` handle created by one of the
//! `ep_operator_*` constructors and released with `ep_operator_free`. Every
//! function returns an `EpStatus`; results are written through out
//! pointers. After a failure, `ep_last_error_message` describes it. The
//! message is per thread.
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access described in each
//! function's documentation. Handles must come from this library and must
//! not be used after `ep_operator_free`. Panics never cross the boundary;
//! they are reported as `EP_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use entpow::heisenberg::{heisenberg_ep_time_average, heisenberg_qubit_qudit_ep_analytic, su2_evolution, HeisenbergSpectrum};
use entpow::ising::{ising_ep_analytic, ising_ep_time_average, ising_evolution, IsingParams};
use entpow::opfile::load_operator;
use entpow::power::entangling_power_with_tol;
use entpow::{
    entangling_power_permutation_oracle, monte_carlo_ep, BipartiteOperator, Complex64,
    ComplexMatrix, Error, SpinSystem,
};

/// Status code returned by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpStatus {
    Ok = 0,
    NullPointer = 1,
    Shape = 2,
    Domain = 3,
    Numeric = 4,
    Capacity = 5,
    Parse = 6,
    Io = 7,
    Panic = 8,
}

/// A bipartite unitary on `d1 × d2`.
pub struct EpOperator {
    inner: BipartiteOperator,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EpMonteCarlo {
    pub mean: f64,
    pub std_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> EpStatus {
    match e {
        Error::Shape(_) => EpStatus::Shape,
        Error::Domain(_) => EpStatus::Domain,
        Error::Numeric(_) => EpStatus::Numeric,
        Error::Capacity(_) => EpStatus::Capacity,
        Error::Io(_) => EpStatus::Io,
        Error::Parse { .. } => EpStatus::Parse,
    }
}

struct Failure(EpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            EpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            EpStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn operator<'a>(op: *const EpOperator) -> Result<&'a BipartiteOperator, Failure> {
    op.as_ref().map(|o| &o.inner).ok_or_else(|| null("operator"))
}

unsafe fn emit(out: *mut *mut EpOperator, op: BipartiteOperator) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(EpOperator { inner: op })), "out")
}

fn spins(d1: usize, d2: usize) -> Result<(SpinSystem, SpinSystem), Failure> {
    Ok((SpinSystem::from_dim(d1)?, SpinSystem::from_dim(d2)?))
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to `len` bytes. Returns the buffer
/// size needed for the whole message. `buf` may be null to query the size.
#[no_mangle]
pub unsafe extern "C" fn ep_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Builds an operator from row-major real and imaginary parts, each of
/// length `(d1·d2)²`. `im` may be null for a real matrix. Fails with
/// `EP_STATUS_DOMAIN` unless `max|U†U − I| ≤ tol`.
#[no_mangle]
pub unsafe extern "C" fn ep_operator_new(
    d1: usize,
    d2: usize,
    re: *const f64,
    im: *const f64,
    tol: f64,
    out: *mut *mut EpOperator,
) -> EpStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let n = d1
            .checked_mul(d2)
            .filter(|n| n.checked_mul(*n).is_some())
            .ok_or_else(|| Failure(EpStatus::Capacity, format!("dimension {d1}x{d2} is too large")))?;
        let len = n * n;
        let re = std::slice::from_raw_parts(re, len);
        let data: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let m = ComplexMatrix::from_vec(n, n, data)?;
        emit(out, BipartiteOperator::unitary(d1, d2, m, tol)?)
    })
}

/// Reads an operator file (header `d1 d2`, then one row per line of
/// `re±imj` entries).
#[no_mangle]
pub unsafe extern "C" fn ep_operator_from_file(path: *const c_char, tol: f64, out: *mut *mut EpOperator) -> EpStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(EpStatus::Io, "path is not valid UTF-8".into()))?;
        emit(out, load_operator(Path::new(path), tol)?)
    })
}

/// `exp(iθ Sz⊗Sz)` for spins of dimension `d1` and `d2`.
#[no_mangle]
pub unsafe extern "C" fn ep_operator_ising(d1: usize, d2: usize, theta: f64, out: *mut *mut EpOperator) -> EpStatus {
    guard(|| {
        let (s1, s2) = spins(d1, d2)?;
        emit(out, ising_evolution(&IsingParams::new(s1, s2, theta)))
    })
}

/// `exp(−it S1·S2)` for spins of dimension `d1` and `d2`.
#[no_mangle]
pub unsafe extern "C" fn ep_operator_heisenberg(d1: usize, d2: usize, t: f64, out: *mut *mut EpOperator) -> EpStatus {
    guard(|| {
        let (s1, s2) = spins(d1, d2)?;
        emit(out, su2_evolution(&HeisenbergSpectrum::isotropic(s1, s2, t)?)?)
    })
}

/// Releases an operator. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ep_operator_free(op: *mut EpOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ep_operator_dims(op: *const EpOperator, d1: *mut usize, d2: *mut usize) -> EpStatus {
    guard(|| {
        let u = operator(op)?;
        write(d1, u.d1(), "d1")?;
        write(d2, u.d2(), "d2")
    })
}

/// Copies the matrix into `re` and `im`, row-major. Both must hold `len`
/// values, where `len` is `(d1·d2)²`.
#[no_mangle]
pub unsafe extern "C" fn ep_operator_entries(op: *const EpOperator, re: *mut f64, im: *mut f64, len: usize) -> EpStatus {
    guard(|| {
        let u = operator(op)?;
        let data = u.matrix().as_slice();
        if len != data.len() {
            return Err(Failure(EpStatus::Shape, format!("buffer holds {len} values, operator has {}", data.len())));
        }
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        for (k, z) in data.iter().enumerate() {
            re.add(k).write(z.re);
            im.add(k).write(z.im);
        }
        Ok(())
    })
}

/// Entangling power from the realigned and partially transposed operator.
/// `tol` is the unitarity tolerance.
#[no_mangle]
pub unsafe extern "C" fn ep_entangling_power(op: *const EpOperator, tol: f64, out: *mut f64) -> EpStatus {
    guard(|| write(out, entangling_power_with_tol(operator(op)?, tol)?, "out"))
}

/// Entangling power from explicit permutation operators on two copies.
/// Limited to `d1·d2 ≤ 16`; larger operators give `EP_STATUS_CAPACITY`.
#[no_mangle]
pub unsafe extern "C" fn ep_permutation_oracle(op: *const EpOperator, out: *mut f64) -> EpStatus {
    guard(|| write(out, entangling_power_permutation_oracle(operator(op)?)?, "out"))
}

/// Monte Carlo estimate over `samples` Haar-random product states.
/// Results depend only on `seed`, not on the thread count.
#[no_mangle]
pub unsafe extern "C" fn ep_monte_carlo(op: *const EpOperator, samples: usize, seed: u64, out: *mut EpMonteCarlo) -> EpStatus {
    guard(|| {
        let est = monte_carlo_ep(operator(op)?, samples, seed)?;
        write(out, EpMonteCarlo { mean: est.mean, std_error: est.std_error }, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ep_ising_analytic(d1: usize, d2: usize, theta: f64, out: *mut f64) -> EpStatus {
    guard(|| {
        let (s1, s2) = spins(d1, d2)?;
        write(out, ising_ep_analytic(&IsingParams::new(s1, s2, theta)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn ep_ising_time_average(d1: usize, d2: usize, out: *mut f64) -> EpStatus {
    guard(|| {
        let (s1, s2) = spins(d1, d2)?;
        write(out, ising_ep_time_average(s1, s2), "out")
    })
}

/// Closed form for a spin-1/2 coupled to a spin of dimension `d2 ≥ 2`.
#[no_mangle]
pub unsafe extern "C" fn ep_heisenberg_analytic(d2: usize, t: f64, out: *mut f64) -> EpStatus {
    guard(|| write(out, heisenberg_qubit_qudit_ep_analytic(SpinSystem::from_dim(d2)?, t)?, "out"))
}

#[no_mangle]
pub unsafe extern "C" fn ep_heisenberg_time_average(d2: usize, out: *mut f64) -> EpStatus {
    guard(|| write(out, heisenberg_ep_time_average(SpinSystem::from_dim(d2)?)?, "out"))
}
