//! C ABI over `qeuclid`.
//!
//! Objects are opaque heap handles created by `qe_*_new`/`qe_quantize` and
//! released by the matching `qe_*_free`. Every fallible call returns a
//! `QeStatus`; on failure the message is kept per thread and can be read
//! with [`qe_last_error`]. Panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qeuclid::matrix_rep::{quantize, schatten_norm, TruncatedOperator};
use qeuclid::restriction::{c_exponent, dsigma_check, tomas_stein_endpoint, KnappCap};
use qeuclid::symbols::{lp_norm, Gaussian, Grid, PointSymbol, SampledSymbol};
use qeuclid::weyl::{twisted_convolve, Theta};
use qeuclid::{Complex64, Error};

/// Status codes. `QE_STATUS_OK` is zero; everything else is an error.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidExponent = 3,
    Mismatch = 4,
    Unsupported = 5,
    Budget = 6,
    Io = 7,
    Panic = 8,
}

/// Sampling grid.
pub struct QeGrid(Grid);
/// Sampled symbol on a grid.
pub struct QeSymbol(SampledSymbol);
/// Truncated number-basis operator.
pub struct QeOperator(TruncatedOperator);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> QeStatus {
    match e {
        Error::InvalidExponent(_) => QeStatus::InvalidExponent,
        Error::GridMismatch(_) | Error::LengthMismatch { .. } => QeStatus::Mismatch,
        Error::Unsupported(_) | Error::UnsupportedDimension(_) => QeStatus::Unsupported,
        Error::Budget(_) => QeStatus::Budget,
        Error::Io(_) => QeStatus::Io,
        _ => QeStatus::InvalidArgument,
    }
}

fn fail(code: QeStatus, msg: String) -> QeStatus {
    LAST_ERROR.with(|m| *m.borrow_mut() = msg);
    code
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard(f: impl FnOnce() -> Result<(), QeStatus>) -> QeStatus {
    LAST_ERROR.with(|m| m.borrow_mut().clear());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QeStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QeStatus::Panic, "panic inside qeuclid".into()),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, QeStatus>;
}

impl<T> OrStatus<T> for qeuclid::Result<T> {
    fn or_status(self) -> Result<T, QeStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, QeStatus> {
    p.as_ref()
        .ok_or_else(|| fail(QeStatus::NullPointer, "null handle".into()))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), QeStatus> {
    if out.is_null() {
        return Err(fail(QeStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], QeStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(QeStatus::NullPointer, "null array".into()));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn c_path<'a>(p: *const c_char) -> Result<&'a Path, QeStatus> {
    if p.is_null() {
        return Err(fail(QeStatus::NullPointer, "null path".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(QeStatus::InvalidArgument, "path is not UTF-8".into()))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be writable for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn qe_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|m| {
        let m = m.borrow();
        if !buf.is_null() && len > 0 {
            let n = m.len().min(len - 1);
            ptr::copy_nonoverlapping(m.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        m.len()
    })
}

/// Uniform grid `(-L, L]^d` with `n` points per axis.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qe_grid_new(
    d: usize,
    half_width: f64,
    n: usize,
    out: *mut *mut QeGrid,
) -> QeStatus {
    guard(|| {
        let g = Grid::new(d, half_width, n).or_status()?;
        write(out, Box::into_raw(Box::new(QeGrid(g))))
    })
}

/// Number of nodes.
///
/// # Safety
/// `grid` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qe_grid_len(grid: *const QeGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// # Safety
/// `grid` must come from `qe_grid_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qe_grid_free(grid: *mut QeGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Symbol from `len = qe_grid_len(grid)` complex samples, split into real
/// and imaginary arrays in row-major node order.
///
/// # Safety
/// `re`, `im` must hold `len` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_symbol_from_values(
    grid: *const QeGrid,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QeSymbol,
) -> QeStatus {
    guard(|| {
        let g = deref(grid)?.0;
        let (re, im) = (slice(re, len)?, slice(im, len)?);
        let vals = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let s = SampledSymbol::new(g, vals).or_status()?;
        write(out, Box::into_raw(Box::new(QeSymbol(s))))
    })
}

/// Samples `amp · e^{-π|t - c|²/σ²} e^{2πi⟨ω, t⟩}`; `center` and `freq`
/// have the grid dimension.
///
/// # Safety
/// `center`, `freq` must hold `d` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_symbol_gaussian(
    grid: *const QeGrid,
    center: *const f64,
    width: f64,
    freq: *const f64,
    amp_re: f64,
    amp_im: f64,
    out: *mut *mut QeSymbol,
) -> QeStatus {
    guard(|| {
        let g = deref(grid)?.0;
        let d = g.dim();
        if width.is_nan() || width <= 0.0 {
            return Err(fail(
                QeStatus::InvalidArgument,
                format!("width {width} must be positive"),
            ));
        }
        let gauss = Gaussian {
            center: slice(center, d)?.to_vec(),
            width,
            freq: slice(freq, d)?.to_vec(),
            amp: Complex64::new(amp_re, amp_im),
        };
        let s = gauss.sample(g).or_status()?;
        write(out, Box::into_raw(Box::new(QeSymbol(s))))
    })
}

/// Copies the samples out; `len` must equal the grid length.
///
/// # Safety
/// `re`, `im` must be writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn qe_symbol_values(
    sym: *const QeSymbol,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QeStatus {
    guard(|| {
        let s = &deref(sym)?.0;
        let v = s.values();
        if v.len() != len {
            return Err(fail(
                QeStatus::Mismatch,
                format!("expected {} values, buffer holds {len}", v.len()),
            ));
        }
        if re.is_null() || im.is_null() {
            return Err(fail(QeStatus::NullPointer, "null output array".into()));
        }
        for (i, z) in v.iter().enumerate() {
            *re.add(i) = z.re;
            *im.add(i) = z.im;
        }
        Ok(())
    })
}

/// Classical `L_p` norm of the samples; `p = INFINITY` is the sup.
///
/// # Safety
/// `sym` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_symbol_lp_norm(
    sym: *const QeSymbol,
    p: f64,
    out: *mut f64,
) -> QeStatus {
    guard(|| {
        let v = lp_norm(&deref(sym)?.0, p).or_status()?;
        write(out, v)
    })
}

/// # Safety
/// `sym` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qe_symbol_free(sym: *mut QeSymbol) {
    if !sym.is_null() {
        drop(Box::from_raw(sym));
    }
}

/// Twisted convolution `f *_θ g` in the plane with `θ = [[0, ϑ], [-ϑ, 0]]`.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_twisted_convolve(
    f: *const QeSymbol,
    g: *const QeSymbol,
    vartheta: f64,
    out: *mut *mut QeSymbol,
) -> QeStatus {
    guard(|| {
        let r =
            twisted_convolve(&deref(f)?.0, &deref(g)?.0, &Theta::planar(vartheta)).or_status()?;
        write(out, Box::into_raw(Box::new(QeSymbol(r))))
    })
}

/// Weyl quantization of a planar symbol into the `n × n` number basis.
///
/// # Safety
/// `sym` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_quantize(
    sym: *const QeSymbol,
    vartheta: f64,
    n: usize,
    out: *mut *mut QeOperator,
) -> QeStatus {
    guard(|| {
        let op = quantize(&deref(sym)?.0, vartheta, n).or_status()?;
        write(out, Box::into_raw(Box::new(QeOperator(op))))
    })
}

/// Truncation size `N`.
///
/// # Safety
/// `op` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_size(op: *const QeOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.size())
}

/// Scaled Schatten norm `(c_τ Tr|A|^p)^{1/p}`; `p = INFINITY` is the
/// operator norm.
///
/// # Safety
/// `op` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_schatten_norm(
    op: *const QeOperator,
    p: f64,
    out: *mut f64,
) -> QeStatus {
    guard(|| {
        let v = schatten_norm(&deref(op)?.0, p).or_status()?;
        write(out, v)
    })
}

/// Scaled trace `c_τ Tr A`.
///
/// # Safety
/// `op` must be live; `re`, `im` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_trace(
    op: *const QeOperator,
    re: *mut f64,
    im: *mut f64,
) -> QeStatus {
    guard(|| {
        let t = deref(op)?.0.trace();
        write(re, t.re)?;
        write(im, t.im)
    })
}

/// Writes the operator in the textual matrix format.
///
/// # Safety
/// `op` must be live; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_save(op: *const QeOperator, path: *const c_char) -> QeStatus {
    guard(|| deref(op)?.0.save(c_path(path)?).or_status())
}

/// Reads an operator written by [`qe_operator_save`].
///
/// # Safety
/// `path` a NUL-terminated UTF-8 string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_load(
    path: *const c_char,
    out: *mut *mut QeOperator,
) -> QeStatus {
    guard(|| {
        let op = TruncatedOperator::load(c_path(path)?).or_status()?;
        write(out, Box::into_raw(Box::new(QeOperator(op))))
    })
}

/// # Safety
/// `op` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qe_operator_free(op: *mut QeOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `c(p, d) = (d + 1)(1/2 - 1/p) + 1`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_c_exponent(p: f64, d: usize, out: *mut f64) -> QeStatus {
    guard(|| {
        let v = c_exponent(p, d).or_status()?;
        write(out, v)
    })
}

/// `2(d + 1)/(d + 3)`.
#[no_mangle]
pub extern "C" fn qe_tomas_stein_endpoint(d: usize) -> f64 {
    tomas_stein_endpoint(d)
}

/// Inverse Fourier transform of the unit sphere measure in `R^d`,
/// `d ∈ {2, 3}`, at the point `s`.
///
/// # Safety
/// `s` must hold `d` values; `re`, `im` valid.
#[no_mangle]
pub unsafe extern "C" fn qe_dsigma_check(
    s: *const f64,
    d: usize,
    re: *mut f64,
    im: *mut f64,
) -> QeStatus {
    guard(|| {
        let z = dsigma_check(slice(s, d)?, d).or_status()?;
        write(re, z.re)?;
        write(im, z.im)
    })
}

/// Noncommutative `L_p` norm of the Knapp cap at scale `delta`, direction
/// angle `orientation`. `mode_budget = 0` uses the library default.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qe_knapp_nc_norm(
    delta: f64,
    orientation: f64,
    vartheta: f64,
    p: f64,
    mode_budget: usize,
    out: *mut f64,
) -> QeStatus {
    guard(|| {
        let cap = KnappCap::new(delta, orientation).or_status()?;
        let budget = if mode_budget == 0 {
            qeuclid::matrix_rep::DEFAULT_MODE_BUDGET
        } else {
            mode_budget
        };
        let v = cap.nc_norm(vartheta, p, budget).or_status()?;
        write(out, v)
    })
}
