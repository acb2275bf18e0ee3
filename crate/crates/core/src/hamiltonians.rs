//! Hamiltonians whose eigenstates are the displaced number states.
//!
//! ```text
//! H_2  = w N - (w/2) tan 2r  (e^{i theta} J+ + e^{-i theta} J-)
//! H_11 = w N - (w/2) tanh 2R (e^{i vartheta} K+ + e^{-i vartheta} K-)
//! ```
//!
//! with eigenvalues `w (M/2 + (2n - M) / (2 cos 2r))` and
//! `w ((M + 2n) / (2 cosh 2R) - M/2)`.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::coefficients::{expansion_su11, expansion_su2};
use crate::error::{Error, Result};
use crate::expm::{max_abs, CMatrix};
use crate::oracle::{build_generators, Truncation};
use crate::params::{AlgebraKind, DnsParams, Su11Params, Su2Params};

/// `|cos 2r|` below this makes `tan 2r` unusable.
pub const SINGULAR_COS_2R: f64 = 1e-8;
/// Energies at or above `-ENERGY_SLACK` count as non-negative.
pub const ENERGY_SLACK: f64 = 1e-12;
/// Rows next to the su(1,1) cut-off are left out of residuals.
const EDGE_ROWS: usize = 2;

fn hamiltonian(
    kind: AlgebraKind,
    label: u32,
    dim: usize,
    coupling: f64,
    phase: f64,
    omega: f64,
) -> Result<CMatrix> {
    let g = build_generators(kind, label, dim)?;
    let e = Complex64::from_polar(1.0, phase);
    let number = CMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(if i == j { i as f64 } else { 0.0 }, 0.0)
    });
    let hop = &g.raise * e + &g.lower * e.conj();
    Ok(number * Complex64::new(omega, 0.0) - hop * Complex64::new(0.5 * omega * coupling, 0.0))
}

pub fn build_h2(label: u32, r: f64, theta: f64, omega: f64) -> Result<CMatrix> {
    let cos_2r = (2.0 * r).cos();
    if cos_2r.abs() < SINGULAR_COS_2R {
        return Err(Error::SingularCoupling {
            cos_2r: cos_2r.abs(),
        });
    }
    hamiltonian(
        AlgebraKind::Su2,
        label,
        label as usize + 1,
        (2.0 * r).tan(),
        theta,
        omega,
    )
}

/// `H_11` truncated to `dim` number states.
pub fn build_h11(label: u32, big_r: f64, vartheta: f64, omega: f64, dim: usize) -> Result<CMatrix> {
    hamiltonian(
        AlgebraKind::Su11,
        label,
        dim,
        (2.0 * big_r).tanh(),
        vartheta,
        omega,
    )
}

pub fn energy_su2(label: u32, n: u32, r: f64, omega: f64) -> f64 {
    let half = 0.5 * f64::from(label);
    let offset = f64::from(n) - half;
    if offset == 0.0 {
        return omega * half;
    }
    omega * (half + offset / (2.0 * r).cos())
}

pub fn energy_su11(label: u32, n: u32, big_r: f64, omega: f64) -> f64 {
    let big_m = f64::from(label);
    omega * ((big_m + 2.0 * f64::from(n)) / (2.0 * (2.0 * big_r).cosh()) - 0.5 * big_m)
}

pub fn energy(p: &DnsParams, omega: f64) -> f64 {
    match p {
        DnsParams::Su2(p) => energy_su2(p.label, p.n, p.r, omega),
        DnsParams::Su11(p) => energy_su11(p.label, p.n, p.r, omega),
    }
}

/// Eigenvalues of `H_2`, ascending.
pub fn spectrum_su2(label: u32, r: f64, theta: f64, omega: f64) -> Result<Vec<f64>> {
    let h = build_h2(label, r, theta, omega)?;
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralCheck {
    pub energy: f64,
    /// `||H psi - E psi|| / ||psi||`.
    pub residual_norm: f64,
    pub hermiticity_defect: f64,
    pub energy_non_negative: bool,
}

fn residual(h: &CMatrix, psi: &[Complex64], energy: f64, rows: usize) -> f64 {
    let v = DVector::from_column_slice(psi);
    let hv = h * &v;
    let num: f64 = (0..rows).map(|m| (hv[m] - v[m] * energy).norm_sqr()).sum();
    (num / v.norm_squared()).sqrt()
}

/// Applies the Hamiltonian to the closed-form expansion of the state.
pub fn eigencheck(p: &DnsParams, omega: f64) -> Result<SpectralCheck> {
    let e = energy(p, omega);
    let (h, psi, rows) = match p {
        DnsParams::Su2(p) => {
            let h = build_h2(p.label, p.r, p.theta, omega)?;
            let psi = expansion_su2(p)?.amplitudes();
            let rows = psi.len();
            (h, psi, rows)
        }
        DnsParams::Su11(p) => {
            let psi = expansion_su11(p, Truncation::Auto)?.amplitudes();
            let h = build_h11(p.label, p.r, p.vartheta, omega, psi.len())?;
            let rows = psi.len().saturating_sub(EDGE_ROWS);
            (h, psi, rows)
        }
    };
    Ok(SpectralCheck {
        energy: e,
        residual_norm: residual(&h, &psi, e, rows),
        hermiticity_defect: max_abs(&(&h - h.adjoint())),
        energy_non_negative: e >= -ENERGY_SLACK,
    })
}

/// The inequality that decides the sign of the eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainRule {
    /// `cos 2r >= 1 - 2n/M` when `cos 2r > 0`, `cos 2r <= 1 - 2n/M` when `cos 2r < 0`.
    Su2 { cos_2r: f64, threshold: f64 },
    /// `cosh 2R <= 1 + 2n/M`.
    Su11 { cosh_2r: f64, threshold: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDomain {
    pub kind: AlgebraKind,
    pub energy: f64,
    /// `E >= -1e-12`, evaluated numerically.
    pub admissible: bool,
    pub rule: DomainRule,
    /// Whether the closed-form inequality holds; reported next to
    /// `admissible` as a cross-check.
    pub printed_rule_holds: bool,
}

/// Non-negativity of the eigenvalue at unit frequency.
pub fn energy_domain(p: &DnsParams) -> Result<EnergyDomain> {
    if p.label() < 1 {
        return Err(Error::Domain("energy domain needs M >= 1".into()));
    }
    let energy = energy(p, 1.0);
    let ratio = 2.0 * f64::from(p.n()) / f64::from(p.label());
    let (rule, printed_rule_holds) = match p {
        DnsParams::Su2(Su2Params { r, .. }) => {
            let cos_2r = (2.0 * r).cos();
            let threshold = 1.0 - ratio;
            let holds = if cos_2r > 0.0 {
                cos_2r >= threshold
            } else {
                cos_2r <= threshold
            };
            (DomainRule::Su2 { cos_2r, threshold }, holds)
        }
        DnsParams::Su11(Su11Params { r, .. }) => {
            let cosh_2r = (2.0 * r).cosh();
            let threshold = 1.0 + ratio;
            (
                DomainRule::Su11 { cosh_2r, threshold },
                cosh_2r <= threshold,
            )
        }
    };
    Ok(EnergyDomain {
        kind: p.kind(),
        energy,
        admissible: energy >= -ENERGY_SLACK,
        rule,
        printed_rule_holds,
    })
}
