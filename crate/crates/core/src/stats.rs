//! Photon-number moments, Mandel Q and the Q' parabola.
//!
//! The numerator `Q' = <(dN)^2> - <N>` is a quadratic in `s = sin^2 r`
//! (su(2)) or `s = sinh^2 R` (su(1,1)); its roots split the parameter
//! range into sub- and super-Poissonian regions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{AlgebraKind, DnsParams, Su11Params, Su2Params};

/// `|Q|` at or below this counts as Poissonian.
pub const POISSONIAN_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Sub,
    Poissonian,
    Super,
}

impl Classification {
    pub fn of(q: f64) -> Self {
        if q.abs() <= POISSONIAN_BAND {
            Classification::Poissonian
        } else if q < 0.0 {
            Classification::Sub
        } else {
            Classification::Super
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Sub => "sub",
            Classification::Poissonian => "poissonian",
            Classification::Super => "super",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QStats {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub q: f64,
    /// Numerator of Q: `<(dN)^2> - <N>`.
    pub q_prime: f64,
    pub classification: Classification,
    /// Leading coefficient of the Q' parabola (up to sign for su(2)).
    pub a_coeff: f64,
}

/// Coefficients of `Q'(s) = lead s^2 + linear s + constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    pub lead: f64,
    pub linear: f64,
    pub constant: f64,
}

impl Parabola {
    pub fn eval(&self, s: f64) -> f64 {
        (self.lead * s + self.linear) * s + self.constant
    }

    pub fn vertex(&self) -> f64 {
        -self.linear / (2.0 * self.lead)
    }
}

/// `A = 2n(M - n) + M`.
pub fn a_su2(label: u32, n: u32) -> f64 {
    let (big_m, n) = (f64::from(label), f64::from(n));
    2.0 * n * (big_m - n) + big_m
}

/// `A = 4kn + 2n^2 + 2k` with `k = M/2`.
pub fn a_su11(label: u32, n: u32) -> f64 {
    let (big_m, n) = (f64::from(label), f64::from(n));
    2.0 * big_m * n + 2.0 * n * n + big_m
}

/// `Q'(s) = -A s^2 + (A - M + 2n) s - n`, `s = sin^2 r`.
pub fn parabola_su2(label: u32, n: u32) -> Parabola {
    let a = a_su2(label, n);
    let (big_m, nf) = (f64::from(label), f64::from(n));
    Parabola {
        lead: -a,
        linear: a - big_m + 2.0 * nf,
        constant: -nf,
    }
}

/// `Q'(s) = A s^2 + 2n(2k + n - 1) s - n`, `s = sinh^2 R`.
pub fn parabola_su11(label: u32, n: u32) -> Parabola {
    let (big_m, nf) = (f64::from(label), f64::from(n));
    Parabola {
        lead: a_su11(label, n),
        linear: 2.0 * nf * (big_m + nf - 1.0),
        constant: -nf,
    }
}

/// `<N> = M sin^2 r + n cos 2r`.
pub fn mean_n_su2(p: &Su2Params) -> f64 {
    f64::from(p.label) * p.sin2() + f64::from(p.n) * (2.0 * p.r).cos()
}

/// `<N^2>` from the rotated Cartan generator.
pub fn mean_n2_su2(p: &Su2Params) -> f64 {
    let (big_m, n) = (f64::from(p.label), f64::from(p.n));
    let s2 = p.sin2();
    let c2r = (2.0 * p.r).cos();
    let sin_2r = (2.0 * p.r).sin();
    big_m * big_m * s2 * s2
        + 2.0 * big_m * n * s2 * c2r
        + n * n * c2r * c2r
        + 0.25 * sin_2r * sin_2r * ((big_m - n + 1.0) * n + (big_m - n) * (n + 1.0))
}

/// `<N> = (n + M/2) cosh 2R - M/2 = 2(k + n) sinh^2 R + n`.
pub fn mean_n_su11(p: &Su11Params) -> f64 {
    2.0 * (p.bargmann() + f64::from(p.n)) * p.sinh2() + f64::from(p.n)
}

/// `<N^2> = Q' + <N> + <N>^2`.
pub fn mean_n2_su11(p: &Su11Params) -> f64 {
    let mean = mean_n_su11(p);
    parabola_su11(p.label, p.n).eval(p.sinh2()) + mean + mean * mean
}

fn assemble(
    mean_n: f64,
    mean_n2: f64,
    q_prime: f64,
    denominator: f64,
    a_coeff: f64,
) -> Result<QStats> {
    if denominator <= 0.0 {
        return Err(Error::UndefinedQ);
    }
    let q = q_prime / denominator;
    Ok(QStats {
        mean_n,
        mean_n2,
        q,
        q_prime,
        classification: Classification::of(q),
        a_coeff,
    })
}

pub fn mandel_q_su2(p: &Su2Params) -> Result<QStats> {
    let s = p.sin2();
    let (big_m, n) = (f64::from(p.label), f64::from(p.n));
    let denominator = (big_m - n) * s + n * (1.0 - s);
    assemble(
        mean_n_su2(p),
        mean_n2_su2(p),
        parabola_su2(p.label, p.n).eval(s),
        denominator,
        a_su2(p.label, p.n),
    )
}

pub fn mandel_q_su11(p: &Su11Params) -> Result<QStats> {
    let s = p.sinh2();
    let denominator = 2.0 * (p.bargmann() + f64::from(p.n)) * s + f64::from(p.n);
    assemble(
        mean_n_su11(p),
        mean_n2_su11(p),
        parabola_su11(p.label, p.n).eval(s),
        denominator,
        a_su11(p.label, p.n),
    )
}

pub fn mandel_q(p: &DnsParams) -> Result<QStats> {
    match p {
        DnsParams::Su2(p) => mandel_q_su2(p),
        DnsParams::Su11(p) => mandel_q_su11(p),
    }
}

/// `Q'` alone; defined even where Q itself is not.
pub fn q_prime(p: &DnsParams) -> f64 {
    match p {
        DnsParams::Su2(p) => parabola_su2(p.label, p.n).eval(p.sin2()),
        DnsParams::Su11(p) => parabola_su11(p.label, p.n).eval(p.sinh2()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QBoundary {
    pub kind: AlgebraKind,
    /// Values of `s` where `Q' = 0`, ascending. A single entry for su(2)
    /// means the parabola only touches zero at its maximum.
    pub roots: Vec<f64>,
    pub extremum_location: f64,
    pub extremum_value: f64,
}

impl QBoundary {
    pub fn is_tangent(&self) -> bool {
        self.kind == AlgebraKind::Su2 && self.roots.len() == 1
    }
}

pub fn q_boundary_su2(label: u32, n: u32) -> Result<QBoundary> {
    if label < 1 || n > label {
        return Err(Error::Domain(format!(
            "Q boundary needs M >= 1 and n <= M, got M = {label}, n = {n}"
        )));
    }
    let a = a_su2(label, n);
    let (nu, du) = (u64::from(n), u64::from(label - n));
    let half_linear = f64::from(n) * f64::from(label - n + 1);
    let extremum_location = half_linear / a;
    // n^2 (M-n)^2 - n (M-n) in integers: zero exactly in the tangent cases.
    let disc_int = (nu * du) * (nu * du) - nu * du;
    let extremum_value = disc_int as f64 / a;
    let roots = if disc_int == 0 {
        vec![extremum_location]
    } else {
        let upper = (half_linear + (disc_int as f64).sqrt()) / a;
        // s_- s_+ = n / A
        let lower = f64::from(n) / a / upper;
        vec![lower, upper]
    };
    Ok(QBoundary {
        kind: AlgebraKind::Su2,
        roots,
        extremum_location,
        extremum_value,
    })
}

pub fn q_boundary_su11(label: u32, n: u32) -> Result<QBoundary> {
    if label < 1 {
        return Err(Error::Domain("su(1,1) Q boundary needs M >= 1".into()));
    }
    let parabola = parabola_su11(label, n);
    let (a, b, nf) = (parabola.lead, parabola.linear, f64::from(n));
    // Positive root of A s^2 + B s - n, in the cancellation-free form.
    let root = 2.0 * nf / (b + (b * b + 4.0 * a * nf).sqrt());
    let extremum_location = parabola.vertex();
    Ok(QBoundary {
        kind: AlgebraKind::Su11,
        roots: vec![root.max(0.0)],
        extremum_location,
        extremum_value: parabola.eval(extremum_location),
    })
}

pub fn q_boundary(kind: AlgebraKind, label: u32, n: u32) -> Result<QBoundary> {
    match kind {
        AlgebraKind::Su2 => q_boundary_su2(label, n),
        AlgebraKind::Su11 => q_boundary_su11(label, n),
    }
}

/// Magnitude `r` (or `R`) at which the parabola abscissa equals `s`.
pub fn magnitude_for_abscissa(kind: AlgebraKind, s: f64) -> f64 {
    match kind {
        AlgebraKind::Su2 => s.clamp(0.0, 1.0).sqrt().asin(),
        AlgebraKind::Su11 => s.max(0.0).sqrt().asinh(),
    }
}
