//! Parameterizations of the two displaced-number-state families.
//!
//! Displacements are always passed as `(magnitude, phase)` pairs:
//! `xi = r e^{i theta}` for su(2) and `zeta = R e^{i vartheta}` for su(1,1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Su2,
    Su11,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Su2 => f.write_str("su2"),
            AlgebraKind::Su11 => f.write_str("su11"),
        }
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su2" | "su(2)" => Ok(AlgebraKind::Su2),
            "su11" | "su(1,1)" => Ok(AlgebraKind::Su11),
            other => Err(Error::Domain(format!("unknown algebra `{other}`"))),
        }
    }
}

/// su(2) displaced number state `D_2(M, xi)|n>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Params {
    /// Representation label `M` (maximum photon number).
    pub label: u32,
    /// Seed number state, `0 <= n <= M`.
    pub n: u32,
    /// Displacement magnitude `r`.
    pub r: f64,
    /// Displacement phase `theta`.
    pub theta: f64,
}

impl Su2Params {
    pub fn new(label: u32, n: u32, r: f64, theta: f64) -> Result<Self> {
        if n > label {
            return Err(Error::Domain(format!(
                "su(2) needs n <= M, got n = {n}, M = {label}"
            )));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!(
                "su(2) magnitude r must be finite and >= 0, got {r}"
            )));
        }
        if !theta.is_finite() {
            return Err(Error::Domain(format!(
                "su(2) phase must be finite, got {theta}"
            )));
        }
        Ok(Self { label, n, r, theta })
    }

    /// `|varsigma| = tan r`; infinite at `r = pi/2 + k pi`.
    pub fn varsigma_abs(&self) -> f64 {
        self.r.tan().abs()
    }

    /// `sin^2 r`, the natural abscissa of the Q' parabola.
    pub fn sin2(&self) -> f64 {
        let s = self.r.sin();
        s * s
    }
}

/// su(1,1) displaced number state `D_11(M, zeta)|n>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su11Params {
    /// Representation label `M = 2k`, twice the Bargmann index.
    pub label: u32,
    /// Seed number state.
    pub n: u32,
    /// Displacement magnitude `R`.
    pub r: f64,
    /// Displacement phase `vartheta`.
    pub vartheta: f64,
}

impl Su11Params {
    pub fn new(label: u32, n: u32, r: f64, vartheta: f64) -> Result<Self> {
        if label < 1 {
            return Err(Error::Domain("su(1,1) needs M >= 1".into()));
        }
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!(
                "su(1,1) magnitude R must be finite and >= 0, got {r}"
            )));
        }
        if !vartheta.is_finite() {
            return Err(Error::Domain(format!(
                "su(1,1) phase must be finite, got {vartheta}"
            )));
        }
        Ok(Self {
            label,
            n,
            r,
            vartheta,
        })
    }

    /// `|lambda| = tanh R`, always in `[0, 1)`.
    pub fn lambda_abs(&self) -> f64 {
        self.r.tanh()
    }

    /// Bargmann index `k = M/2`.
    pub fn bargmann(&self) -> f64 {
        0.5 * f64::from(self.label)
    }

    pub fn sinh2(&self) -> f64 {
        let s = self.r.sinh();
        s * s
    }
}

/// Either family, for code paths that dispatch on the algebra at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algebra", rename_all = "lowercase")]
pub enum DnsParams {
    Su2(Su2Params),
    Su11(Su11Params),
}

impl DnsParams {
    pub fn new(kind: AlgebraKind, label: u32, n: u32, magnitude: f64, phase: f64) -> Result<Self> {
        Ok(match kind {
            AlgebraKind::Su2 => DnsParams::Su2(Su2Params::new(label, n, magnitude, phase)?),
            AlgebraKind::Su11 => DnsParams::Su11(Su11Params::new(label, n, magnitude, phase)?),
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        match self {
            DnsParams::Su2(_) => AlgebraKind::Su2,
            DnsParams::Su11(_) => AlgebraKind::Su11,
        }
    }

    pub fn label(&self) -> u32 {
        match self {
            DnsParams::Su2(p) => p.label,
            DnsParams::Su11(p) => p.label,
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            DnsParams::Su2(p) => p.n,
            DnsParams::Su11(p) => p.n,
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            DnsParams::Su2(p) => p.r,
            DnsParams::Su11(p) => p.r,
        }
    }

    pub fn phase(&self) -> f64 {
        match self {
            DnsParams::Su2(p) => p.theta,
            DnsParams::Su11(p) => p.vartheta,
        }
    }

    /// `sin^2 r` or `sinh^2 R`.
    pub fn parabola_abscissa(&self) -> f64 {
        match self {
            DnsParams::Su2(p) => p.sin2(),
            DnsParams::Su11(p) => p.sinh2(),
        }
    }

    pub fn with_phase(self, phase: f64) -> Self {
        match self {
            DnsParams::Su2(p) => DnsParams::Su2(Su2Params { theta: phase, ..p }),
            DnsParams::Su11(p) => DnsParams::Su11(Su11Params {
                vartheta: phase,
                ..p
            }),
        }
    }
}
