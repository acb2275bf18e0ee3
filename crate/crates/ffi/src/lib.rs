//! C ABI for `hpdns`.
//!
//! Every entry point returns an [`HpdnsStatus`]. Results come back through
//! out-pointers and are written only on success. On failure the message is
//! kept per thread and can be read with [`hpdns_last_error`].
//!
//! Handles are heap objects owned by the caller. Release them with the
//! matching `_free` function; passing NULL to a `_free` is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hpdns::coefficients::{distribution_su11, distribution_su2, PhotonDistribution};
use hpdns::hamiltonians::eigencheck;
use hpdns::oracle::{oracle_state, Truncation};
use hpdns::squeezing::quadrature;
use hpdns::stats::{mandel_q, q_prime, Classification};
use hpdns::{AlgebraKind, DnsParams, Error};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpdnsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    DimensionMismatch = 3,
    TruncationInsufficient = 4,
    PrecisionLoss = 5,
    SingularCoupling = 6,
    UndefinedQ = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpdnsAlgebra {
    Su2 = 0,
    Su11 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpdnsClass {
    Sub = -1,
    Poissonian = 0,
    Super = 1,
}

/// Validated state parameters.
pub struct HpdnsParams(DnsParams);

/// Photon-number distribution of one state.
pub struct HpdnsDistribution(PhotonDistribution);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HpdnsQStats {
    pub mean_n: f64,
    pub mean_n2: f64,
    /// NaN when the mean vanishes; `classification` then follows `q_prime`.
    pub q: f64,
    pub q_prime: f64,
    pub classification: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HpdnsQuadrature {
    pub var_x: f64,
    pub var_p: f64,
    pub mean_a_re: f64,
    pub mean_a_im: f64,
    pub mean_n: f64,
    pub squeezed_x: bool,
    pub squeezed_p: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HpdnsEigencheck {
    pub energy: f64,
    pub residual_norm: f64,
    pub hermiticity_defect: f64,
    pub energy_non_negative: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HpdnsStatus {
    match e {
        Error::Domain(_) => HpdnsStatus::Domain,
        Error::DimensionMismatch { .. } => HpdnsStatus::DimensionMismatch,
        Error::TruncationInsufficient { .. } => HpdnsStatus::TruncationInsufficient,
        Error::PrecisionLoss { .. } => HpdnsStatus::PrecisionLoss,
        Error::SingularCoupling { .. } => HpdnsStatus::SingularCoupling,
        Error::UndefinedQ => HpdnsStatus::UndefinedQ,
    }
}

struct Fail(HpdnsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HpdnsStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HpdnsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HpdnsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HpdnsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hpdns_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Validates and allocates a parameter handle.
///
/// # Safety
/// `out` must be NULL or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hpdns_params_new(
    algebra: HpdnsAlgebra,
    label: u32,
    n: u32,
    magnitude: f64,
    phase: f64,
    out: *mut *mut HpdnsParams,
) -> HpdnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let kind = match algebra {
            HpdnsAlgebra::Su2 => AlgebraKind::Su2,
            HpdnsAlgebra::Su11 => AlgebraKind::Su11,
        };
        let p = DnsParams::new(kind, label, n, magnitude, phase)?;
        write(out, Box::into_raw(Box::new(HpdnsParams(p))))
    })
}

/// # Safety
/// `p` must be NULL or a handle from [`hpdns_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hpdns_params_free(p: *mut HpdnsParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Closed-form photon distribution, with the oracle as fallback where the
/// closed form loses precision. su(1,1) windows grow until the tail is negligible.
///
/// # Safety
/// `p` must be a live params handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_distribution_new(
    p: *const HpdnsParams,
    out: *mut *mut HpdnsDistribution,
) -> HpdnsStatus {
    guard(|| {
        let p = deref(p, "params")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let d = match &p.0 {
            DnsParams::Su2(p) => distribution_su2(p)?,
            DnsParams::Su11(p) => distribution_su11(p, Truncation::Auto)?,
        };
        write(out, Box::into_raw(Box::new(HpdnsDistribution(d))))
    })
}

/// # Safety
/// `d` must be NULL or a handle from [`hpdns_distribution_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hpdns_distribution_free(d: *mut HpdnsDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of probabilities held (`M + 1` for su(2), the window for su(1,1)).
/// Returns 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn hpdns_distribution_len(d: *const HpdnsDistribution) -> usize {
    d.as_ref().map_or(0, |d| d.0.probs.len())
}

/// `|1 - sum P(m)|`. NaN for NULL.
///
/// # Safety
/// `d` must be NULL or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn hpdns_distribution_norm_defect(d: *const HpdnsDistribution) -> f64 {
    d.as_ref().map_or(f64::NAN, |d| d.0.norm_defect)
}

/// Copies the probabilities into `buf`. On `BUFFER_TOO_SMALL`, `*written`
/// still receives the required length.
///
/// # Safety
/// `d` must be a live handle, `buf` must hold `capacity` doubles and
/// `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_distribution_copy(
    d: *const HpdnsDistribution,
    buf: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> HpdnsStatus {
    guard(|| {
        let probs = &deref(d, "distribution")?.0.probs;
        write(written, probs.len())?;
        if capacity < probs.len() {
            return Err(Fail(
                HpdnsStatus::BufferTooSmall,
                format!("need {} doubles, got {capacity}", probs.len()),
            ));
        }
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(probs.as_ptr(), buf, probs.len());
        Ok(())
    })
}

/// Mean, second moment and Mandel Q. A vanishing mean is not an error here:
/// `q` is NaN and the class comes from the sign of `q_prime`.
///
/// # Safety
/// `p` must be a live params handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_mandel_q(
    p: *const HpdnsParams,
    out: *mut HpdnsQStats,
) -> HpdnsStatus {
    guard(|| {
        let p = &deref(p, "params")?.0;
        let class = |c: Classification| match c {
            Classification::Sub => HpdnsClass::Sub as i32,
            Classification::Poissonian => HpdnsClass::Poissonian as i32,
            Classification::Super => HpdnsClass::Super as i32,
        };
        let stats = match mandel_q(p) {
            Ok(s) => HpdnsQStats {
                mean_n: s.mean_n,
                mean_n2: s.mean_n2,
                q: s.q,
                q_prime: s.q_prime,
                classification: class(s.classification),
            },
            Err(Error::UndefinedQ) => {
                let qp = q_prime(p);
                HpdnsQStats {
                    mean_n: 0.0,
                    mean_n2: qp,
                    q: f64::NAN,
                    q_prime: qp,
                    classification: class(Classification::of(qp)),
                }
            }
            Err(e) => return Err(e.into()),
        };
        write(out, stats)
    })
}

/// Quadrature variances with `x = (a + a^dagger)/sqrt 2`, `p = i(a^dagger - a)/sqrt 2`.
///
/// # Safety
/// `p` must be a live params handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_quadrature(
    p: *const HpdnsParams,
    out: *mut HpdnsQuadrature,
) -> HpdnsStatus {
    guard(|| {
        let q = quadrature(&deref(p, "params")?.0)?;
        write(
            out,
            HpdnsQuadrature {
                var_x: q.var_x,
                var_p: q.var_p,
                mean_a_re: q.exp_a.re,
                mean_a_im: q.exp_a.im,
                mean_n: q.mean_n,
                squeezed_x: q.squeezed_x,
                squeezed_p: q.squeezed_p,
            },
        )
    })
}

/// Builds the Hamiltonian that has this state as an eigenvector and reports
/// the eigenvalue and `||H psi - E psi||`.
///
/// # Safety
/// `p` must be a live params handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_eigencheck(
    p: *const HpdnsParams,
    omega: f64,
    out: *mut HpdnsEigencheck,
) -> HpdnsStatus {
    guard(|| {
        let c = eigencheck(&deref(p, "params")?.0, omega)?;
        write(
            out,
            HpdnsEigencheck {
                energy: c.energy,
                residual_norm: c.residual_norm,
                hermiticity_defect: c.hermiticity_defect,
                energy_non_negative: c.energy_non_negative,
            },
        )
    })
}

/// Largest `|P_closed(m) - P_oracle(m)|` against the matrix-exponential oracle.
///
/// # Safety
/// `p` must be a live params handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hpdns_oracle_max_delta(
    p: *const HpdnsParams,
    out: *mut f64,
) -> HpdnsStatus {
    guard(|| {
        let p = &deref(p, "params")?.0;
        let closed = match p {
            DnsParams::Su2(q) => distribution_su2(q)?.probs,
            DnsParams::Su11(q) => distribution_su11(q, Truncation::Auto)?.probs,
        };
        let oracle = oracle_state(
            p.kind(),
            p.label(),
            p.n(),
            p.magnitude(),
            p.phase(),
            Truncation::Auto,
        )?
        .probabilities();
        let len = closed.len().max(oracle.len());
        let at = |v: &[f64], m: usize| v.get(m).copied().unwrap_or(0.0);
        let delta = (0..len)
            .map(|m| (at(&closed, m) - at(&oracle, m)).abs())
            .fold(0.0, f64::max);
        write(out, delta)
    })
}
