//! Quadrature variances of displaced number states.
//!
//! With `x = (a + a^dagger)/sqrt 2` and `p = i(a^dagger - a)/sqrt 2`:
//!
//! ```text
//! Var x = 1/2 + <N> + Re<a^2> - 2 (Re<a>)^2
//! Var p = 1/2 + <N> - Re<a^2> - 2 (Im<a>)^2
//! ```
//!
//! For a real expansion `D_m` carrying phase `e^{i phase (m - n)}` the
//! moments reduce to neighbour sums of `D_m D_{m+1}` and `D_m D_{m+2}`.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{
    coeff_su11, expansion_su11, expansion_su2, DistributionSource, Expansion,
};
use crate::error::Result;
use crate::expm::CMatrix;
use crate::oracle::Truncation;
use crate::params::{AlgebraKind, DnsParams, Su11Params, Su2Params};
use crate::sum::NeumaierSum;

/// Variances below `1/2 - SQUEEZE_MARGIN` count as squeezed.
pub const SQUEEZE_MARGIN: f64 = 1e-12;
pub const VACUUM_VARIANCE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureReport {
    pub var_x: f64,
    pub var_p: f64,
    #[serde(serialize_with = "complex_pair")]
    pub exp_a: Complex64,
    pub re_a2: f64,
    pub mean_n: f64,
    pub squeezed_x: bool,
    pub squeezed_p: bool,
}

fn complex_pair<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl QuadratureReport {
    fn from_moments(mean_n: f64, exp_a: Complex64, exp_a2: Complex64) -> Self {
        let var_x = VACUUM_VARIANCE + mean_n + exp_a2.re - 2.0 * exp_a.re * exp_a.re;
        let var_p = VACUUM_VARIANCE + mean_n - exp_a2.re - 2.0 * exp_a.im * exp_a.im;
        Self {
            var_x,
            var_p,
            exp_a,
            re_a2: exp_a2.re,
            mean_n,
            squeezed_x: var_x < VACUUM_VARIANCE - SQUEEZE_MARGIN,
            squeezed_p: var_p < VACUUM_VARIANCE - SQUEEZE_MARGIN,
        }
    }
}

/// `<N>`, `<a>`, `<a^2>` from a real expansion and its phase.
fn moments(reduced: &[f64], phase: f64) -> (f64, Complex64, Complex64) {
    let mean_n: NeumaierSum = reduced
        .iter()
        .enumerate()
        .map(|(m, d)| m as f64 * d * d)
        .collect();
    let first: NeumaierSum = reduced
        .windows(2)
        .enumerate()
        .map(|(m, w)| ((m + 1) as f64).sqrt() * w[0] * w[1])
        .collect();
    let second: NeumaierSum = reduced
        .windows(3)
        .enumerate()
        .map(|(m, w)| (((m + 1) * (m + 2)) as f64).sqrt() * w[0] * w[2])
        .collect();
    (
        mean_n.value(),
        Complex64::from_polar(first.value(), phase),
        Complex64::from_polar(second.value(), 2.0 * phase),
    )
}

fn report(e: &Expansion, guard: &[f64]) -> QuadratureReport {
    let mut reduced = e.reduced.clone();
    reduced.extend_from_slice(guard);
    let (mean_n, a, a2) = moments(&reduced, e.phase);
    QuadratureReport::from_moments(mean_n, a, a2)
}

pub fn quadrature_su2(p: &Su2Params) -> Result<QuadratureReport> {
    Ok(report(&expansion_su2(p)?, &[]))
}

/// Uses the coefficient window plus two guard coefficients past its edge.
pub fn quadrature_su11(p: &Su11Params, truncation: Truncation) -> Result<QuadratureReport> {
    let e = expansion_su11(p, truncation)?;
    let guard = if e.source == DistributionSource::ClosedForm {
        let w = e.reduced.len() as u32;
        (w..w + 2)
            .map(|m| coeff_su11(p, m).map(|c| c.reduced()))
            .collect::<Result<Vec<_>>>()
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    Ok(report(&e, &guard))
}

pub fn quadrature(p: &DnsParams) -> Result<QuadratureReport> {
    match p {
        DnsParams::Su2(p) => quadrature_su2(p),
        DnsParams::Su11(p) => quadrature_su11(p, Truncation::Auto),
    }
}

/// Variances from explicit `x` and `p` matrices on a space two levels
/// larger than the state, so `x^2` acts exactly on the support.
pub fn quadrature_from_state(amplitudes: &[Complex64]) -> QuadratureReport {
    let dim = amplitudes.len() + 2;
    let mut psi = DVector::<Complex64>::zeros(dim);
    psi.rows_mut(0, amplitudes.len())
        .copy_from_slice(amplitudes);

    let mut a = CMatrix::zeros(dim, dim);
    for m in 0..dim - 1 {
        a[(m, m + 1)] = Complex64::new(((m + 1) as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &ad) * Complex64::new(s, 0.0);
    let p = (&ad - &a) * Complex64::new(0.0, s);
    let number = &ad * &a;

    let expect = |op: &CMatrix| psi.dotc(&(op * &psi));
    let variance = |op: &CMatrix| (expect(&(op * op)) - expect(op).powi(2)).re;

    let var_x = variance(&x);
    let var_p = variance(&p);
    let exp_a = expect(&a);
    let exp_a2 = expect(&(&a * &a));
    QuadratureReport {
        var_x,
        var_p,
        exp_a,
        re_a2: exp_a2.re,
        mean_n: expect(&number).re,
        squeezed_x: var_x < VACUUM_VARIANCE - SQUEEZE_MARGIN,
        squeezed_p: var_p < VACUUM_VARIANCE - SQUEEZE_MARGIN,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanCell {
    pub magnitude: f64,
    pub phase: f64,
    pub report: Result<QuadratureReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeScan {
    pub kind: AlgebraKind,
    pub label: u32,
    pub n: u32,
    /// Magnitude-major, phase-minor.
    pub cells: Vec<ScanCell>,
    /// Index into `cells` of the smallest `Var x`.
    pub min_var_x: Option<usize>,
}

impl SqueezeScan {
    pub fn any_squeezed_x(&self) -> bool {
        self.cells
            .iter()
            .any(|c| c.report.as_ref().is_ok_and(|r| r.squeezed_x))
    }
}

/// Evaluates every `(magnitude, phase)` pair; failures stay in their cell.
pub fn squeezing_scan(
    kind: AlgebraKind,
    label: u32,
    n: u32,
    magnitudes: &[f64],
    phases: &[f64],
) -> SqueezeScan {
    let grid: Vec<(f64, f64)> = magnitudes
        .iter()
        .flat_map(|&r| phases.iter().map(move |&t| (r, t)))
        .collect();
    let cells: Vec<ScanCell> = grid
        .par_iter()
        .map(|&(magnitude, phase)| ScanCell {
            magnitude,
            phase,
            report: DnsParams::new(kind, label, n, magnitude, phase).and_then(|p| quadrature(&p)),
        })
        .collect();
    let min_var_x = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.report.as_ref().ok().map(|r| (i, r.var_x)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i);
    SqueezeScan {
        kind,
        label,
        n,
        cells,
        min_var_x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{displaced_number_oracle, oracle_state};

    #[test]
    fn vacuum_is_minimum_uncertainty() {
        let q = quadrature_su2(&Su2Params::new(6, 0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(q.var_x, 0.5);
        assert_eq!(q.var_p, 0.5);
        assert!(!q.squeezed_x && !q.squeezed_p);
    }

    #[test]
    fn number_state_variance() {
        let q = quadrature_su2(&Su2Params::new(6, 3, 0.0, 0.0).unwrap()).unwrap();
        assert!((q.var_x - 3.5).abs() < 1e-15);
    }

    #[test]
    fn sums_match_explicit_operators() {
        for (label, n, r, theta) in [(5, 0, 0.7, 0.0), (8, 3, 1.1, 0.9), (20, 0, 0.3, 2.0)] {
            let p = Su2Params::new(label, n, r, theta).unwrap();
            let fast = quadrature_su2(&p).unwrap();
            let state =
                oracle_state(AlgebraKind::Su2, label, n, r, theta, Truncation::Auto).unwrap();
            let slow = quadrature_from_state(&state.amplitudes);
            assert!((fast.var_x - slow.var_x).abs() < 1e-10);
            assert!((fast.var_p - slow.var_p).abs() < 1e-10);
            assert!((fast.exp_a - slow.exp_a).norm() < 1e-10);
        }
    }

    #[test]
    fn su11_sums_match_explicit_operators() {
        let p = Su11Params::new(1, 0, 0.8, std::f64::consts::FRAC_PI_2).unwrap();
        let fast = quadrature_su11(&p, Truncation::Auto).unwrap();
        let state =
            oracle_state(AlgebraKind::Su11, 1, 0, 0.8, p.vartheta, Truncation::Auto).unwrap();
        let slow = quadrature_from_state(&state.amplitudes);
        assert!((fast.var_x - slow.var_x).abs() < 1e-9);
        assert!((fast.var_p - slow.var_p).abs() < 1e-9);
    }

    #[test]
    fn coherent_state_is_unsqueezed() {
        let s = displaced_number_oracle(1.7, 0.4, 0, Truncation::Auto).unwrap();
        let q = quadrature_from_state(&s.amplitudes);
        assert!((q.var_x - 0.5).abs() < 1e-10);
        assert!((q.var_p - 0.5).abs() < 1e-10);
    }

    #[test]
    fn scan_is_row_major_and_tracks_minimum() {
        let scan = squeezing_scan(AlgebraKind::Su2, 20, 0, &[0.0, 0.5, 1.0], &[0.0, 1.0]);
        assert_eq!(scan.cells.len(), 6);
        assert_eq!(scan.cells[1].magnitude, 0.0);
        assert_eq!(scan.cells[1].phase, 1.0);
        let i = scan.min_var_x.unwrap();
        let min = scan.cells[i].report.as_ref().unwrap().var_x;
        assert!(scan
            .cells
            .iter()
            .all(|c| c.report.as_ref().unwrap().var_x >= min));
        assert!(scan.any_squeezed_x());
    }

    #[test]
    fn scan_keeps_cell_errors() {
        let scan = squeezing_scan(AlgebraKind::Su2, 3, 5, &[0.1], &[0.0]);
        assert!(scan.cells[0].report.is_err());
        assert_eq!(scan.min_var_x, None);
    }
}
