//! Closed-form Fock expansion coefficients and photon-number distributions.
//!
//! Both families disentangle into `exp(c X+) f(X0) exp(-c* X-)`, which
//! turns `<m|D|n>` into a phase `e^{i phase (m-n)}` times a real,
//! alternating hypergeometric-type sum over `k = 0 ..= min(m, n)`.
//!
//! Each term is built from one log-gamma anchor at `k = min(m, n)` and
//! exact term ratios below it, so that rounding in the large factorial
//! logarithms only ever rescales the whole sum. The terms are then
//! accumulated largest-first with compensation. For su(2) the
//! rotation-group symmetries of `<m|D|n>` (transposition, index
//! reflection `m -> M - m`, and `r -> pi/2 - r`) give up to eight
//! equivalent sums; the one with the least cancellation is evaluated.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{
    displaced_number_oracle, extrapolated_tail, oracle_state, su11_start_window, FockVector,
    Truncation, MAX_WORKING_DIM, TAIL_TARGET,
};
use crate::params::{AlgebraKind, Su11Params, Su2Params};
use crate::sum::{ln_factorial, sum_largest_first, SignedSum};

/// `sum |terms|` above which a coefficient is refused. Matrix elements of
/// a unitary are at most 1 in modulus, so this is the cancellation ratio
/// against the natural scale of the result.
pub const CANCELLATION_LIMIT: f64 = 1e6;

/// `sign * exp(log_mag) * exp(i * phase * phase_winding)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffValue {
    pub log_mag: f64,
    pub sign: i8,
    pub phase_winding: i64,
}

impl CoeffValue {
    fn from_real(value: f64, winding: i64) -> Self {
        Self {
            log_mag: value.abs().ln(),
            sign: if value < 0.0 { -1 } else { 1 },
            phase_winding: winding,
        }
    }

    /// The phase-free real part `D_m` / `G_m`.
    pub fn reduced(&self) -> f64 {
        f64::from(self.sign) * self.log_mag.exp()
    }

    pub fn value(&self, phase: f64) -> Complex64 {
        Complex64::from_polar(self.reduced(), phase * self.phase_winding as f64)
    }

    pub fn probability(&self) -> f64 {
        (2.0 * self.log_mag).exp()
    }
}

fn parity(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn delta(m: u32, n: u32) -> SignedSum {
    let value = if m == n { 1.0 } else { 0.0 };
    SignedSum {
        value,
        abs_sum: value,
    }
}

/// Evaluates `sign_k * T_k` for `k = 0 ..= kmax` from the log of `T_kmax`
/// and the downward ratio `T_{k-1} / T_k`.
fn alternating_sum(
    n: u32,
    kmax: u32,
    ln_top: f64,
    down_ratio: impl Fn(u32) -> f64,
) -> Option<SignedSum> {
    if ln_top > 700.0 || ln_top.is_nan() {
        return None;
    }
    let mut terms = Vec::with_capacity(kmax as usize + 1);
    let mut t = ln_top.exp();
    terms.push(parity(n + kmax) * t);
    for k in (1..=kmax).rev() {
        t *= down_ratio(k);
        terms.push(parity(n + k - 1) * t);
    }
    let sum = sum_largest_first(&mut terms);
    (sum.value.is_finite() && sum.abs_sum.is_finite()).then_some(sum)
}

/// `D_m(M, n, |varsigma|)` with `|varsigma| = tan(angle)`, straight from
/// the disentangled sum. `None` if the sum is not finite at this angle.
fn su2_direct(label: u32, m: u32, n: u32, angle: f64) -> Option<SignedSum> {
    let (s, c) = angle.sin_cos();
    if s == 0.0 {
        return Some(delta(m, n));
    }
    let big_m = i64::from(label);
    let kmax = m.min(n);
    let cos_power = big_m - i64::from(m) - i64::from(n);
    let ln_cos_part = match cos_power {
        0 => 0.0,
        p if c <= 0.0 => {
            if p > 0 {
                return Some(SignedSum {
                    value: 0.0,
                    abs_sum: 0.0,
                });
            }
            return None;
        }
        p => p as f64 * c.ln(),
    };

    let lf = |x: i64| ln_factorial(x as u64);
    let (mi, ni, ki) = (i64::from(m), i64::from(n), i64::from(kmax));
    let ln_top = 0.5 * (lf(mi) + lf(ni) - lf(big_m - mi) - lf(big_m - ni)) + lf(big_m - ki)
        - lf(ki)
        - lf(ni - ki)
        - lf(mi - ki)
        + (mi + ni - 2 * ki) as f64 * s.ln()
        + ln_cos_part;

    let s2 = s * s;
    alternating_sum(n, kmax, ln_top, |k| {
        let k = f64::from(k);
        k * (label as f64 - k + 1.0) * s2 / ((f64::from(n) - k + 1.0) * (f64::from(m) - k + 1.0))
    })
}

/// Real su(2) matrix element `<m|exp(r (J+ - J-))|n>` for any real `r`.
fn su2_reduced(label: u32, m: u32, n: u32, r: f64) -> Option<SignedSum> {
    // exp(pi (J+ - J-)) = (-1)^M and exp(-r (J+ - J-)) is the transpose.
    let half_turns = (r / PI).floor();
    let mut angle = r - half_turns * PI;
    let mut sign = if label % 2 == 1 && half_turns.rem_euclid(2.0) == 1.0 {
        -1.0
    } else {
        1.0
    };
    let (mut m, mut n) = (m, n);
    if angle > FRAC_PI_2 {
        sign *= parity(label);
        std::mem::swap(&mut m, &mut n);
        angle = PI - angle;
    }

    // Orbit of (m, n, reflected) under transposition, index reflection and r -> pi/2 - r.
    let mut orbit: Vec<(u32, u32, bool, f64)> = vec![(m, n, false, sign)];
    let mut i = 0;
    while i < orbit.len() {
        let (a, b, refl, sg) = orbit[i];
        let images = [
            (b, a, refl, sg * parity(a + b)),
            (label - b, label - a, refl, sg),
            (label - a, b, !refl, sg * parity(b)),
        ];
        for img in images {
            if !orbit
                .iter()
                .any(|o| o.0 == img.0 && o.1 == img.1 && o.2 == img.2)
            {
                orbit.push(img);
            }
        }
        i += 1;
    }

    orbit
        .into_iter()
        .filter_map(|(a, b, refl, sg)| {
            let theta = if refl { FRAC_PI_2 - angle } else { angle };
            su2_direct(label, a, b, theta).map(|s| SignedSum {
                value: sg * s.value,
                abs_sum: s.abs_sum,
            })
        })
        .min_by(|x, y| x.abs_sum.total_cmp(&y.abs_sum))
}

/// `G_m(M, n, |lambda|)` with `|lambda| = tanh R`.
fn su11_reduced(label: u32, m: u32, n: u32, big_r: f64) -> Option<SignedSum> {
    let sh = big_r.sinh();
    if sh == 0.0 {
        return Some(delta(m, n));
    }
    let ch = big_r.cosh();
    let kmax = m.min(n);
    let lf = |x: u64| ln_factorial(x);
    let (mi, ni, ki, bm) = (
        u64::from(m),
        u64::from(n),
        u64::from(kmax),
        u64::from(label),
    );
    let ln_top = 0.5 * (lf(mi) + lf(ni) + lf(bm + mi - 1) + lf(bm + ni - 1))
        - lf(ki)
        - lf(bm + ki - 1)
        - lf(ni - ki)
        - lf(mi - ki)
        + (mi + ni - 2 * ki) as f64 * sh.abs().ln()
        - (mi + ni + bm) as f64 * ch.ln();

    let sh2 = sh * sh;
    let sum = alternating_sum(n, kmax, ln_top, |k| {
        let k = f64::from(k);
        k * (label as f64 + k - 1.0) * sh2 / ((f64::from(n) - k + 1.0) * (f64::from(m) - k + 1.0))
    })?;
    Some(sum)
}

fn checked(sum: Option<SignedSum>, winding: i64) -> Result<CoeffValue> {
    let sum = sum.ok_or(Error::PrecisionLoss {
        indicator: f64::INFINITY,
        limit: CANCELLATION_LIMIT,
    })?;
    if sum.abs_sum > CANCELLATION_LIMIT {
        return Err(Error::PrecisionLoss {
            indicator: sum.abs_sum,
            limit: CANCELLATION_LIMIT,
        });
    }
    Ok(CoeffValue::from_real(sum.value, winding))
}

/// `<m|D_2(M, xi)|n>`.
pub fn coeff_su2(p: &Su2Params, m: u32) -> Result<CoeffValue> {
    if m > p.label {
        return Err(Error::Domain(format!(
            "su(2) index m = {m} outside [0, {}]",
            p.label
        )));
    }
    checked(
        su2_reduced(p.label, m, p.n, p.r),
        i64::from(m) - i64::from(p.n),
    )
}

/// `<m|D_11(M, zeta)|n>`.
pub fn coeff_su11(p: &Su11Params, m: u32) -> Result<CoeffValue> {
    checked(
        su11_reduced(p.label, m, p.n, p.r),
        i64::from(m) - i64::from(p.n),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionSource {
    ClosedForm,
    Oracle,
}

/// Real expansion `|psi> = sum_m e^{i phase (m-n)} reduced[m] |m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub kind: AlgebraKind,
    pub n: u32,
    pub phase: f64,
    pub reduced: Vec<f64>,
    pub tail_bound: f64,
    pub source: DistributionSource,
}

impl Expansion {
    pub fn amplitudes(&self) -> Vec<Complex64> {
        let n = i64::from(self.n);
        self.reduced
            .iter()
            .enumerate()
            .map(|(m, &d)| Complex64::from_polar(d, self.phase * (m as i64 - n) as f64))
            .collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.reduced.iter().map(|d| d * d).collect()
    }

    fn from_oracle(kind: AlgebraKind, n: u32, phase: f64, state: FockVector) -> Self {
        let reduced = state
            .amplitudes
            .iter()
            .enumerate()
            .map(|(m, a)| (a * Complex64::from_polar(1.0, -phase * (m as f64 - f64::from(n)))).re)
            .collect();
        Self {
            kind,
            n,
            phase,
            reduced,
            tail_bound: state.tail_bound,
            source: DistributionSource::Oracle,
        }
    }
}

/// All `M + 1` su(2) coefficients; falls back to the oracle when a
/// coefficient sum cancels beyond [`CANCELLATION_LIMIT`].
pub fn expansion_su2(p: &Su2Params) -> Result<Expansion> {
    let closed: Result<Vec<f64>> = (0..=p.label)
        .map(|m| coeff_su2(p, m).map(|c| c.reduced()))
        .collect();
    match closed {
        Ok(reduced) => Ok(Expansion {
            kind: AlgebraKind::Su2,
            n: p.n,
            phase: p.theta,
            reduced,
            tail_bound: 0.0,
            source: DistributionSource::ClosedForm,
        }),
        Err(Error::PrecisionLoss { .. }) => {
            let state = oracle_state(
                AlgebraKind::Su2,
                p.label,
                p.n,
                p.r,
                p.theta,
                Truncation::Auto,
            )?;
            Ok(Expansion::from_oracle(
                AlgebraKind::Su2,
                p.n,
                p.theta,
                state,
            ))
        }
        Err(e) => Err(e),
    }
}

/// Coefficients `0 .. window` and the tail measured on `window .. 2 window`.
///
/// Tail coefficients skip the cancellation guard: what matters there is
/// their absolute error, which stays near `abs_sum * eps` and is far
/// below the tail target for any sum the window itself accepts.
fn su11_window(p: &Su11Params, window: usize) -> Result<(Vec<f64>, f64)> {
    let reduced = (0..window as u32)
        .map(|m| coeff_su11(p, m).map(|c| c.reduced()))
        .collect::<Result<Vec<f64>>>()?;
    let beyond = (window as u32..2 * window as u32)
        .map(|m| {
            su11_reduced(p.label, m, p.n, p.r)
                .map(|s| s.value * s.value)
                .ok_or(Error::PrecisionLoss {
                    indicator: f64::INFINITY,
                    limit: CANCELLATION_LIMIT,
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((reduced, extrapolated_tail(&beyond)))
}

fn su11_grown_window(p: &Su11Params) -> Result<(Vec<f64>, f64)> {
    let mut window = su11_start_window(p.label, p.n, p.r).max(p.n as usize + 1);
    loop {
        let (reduced, tail) = su11_window(p, window)?;
        if tail < TAIL_TARGET {
            return Ok((reduced, tail));
        }
        if 2 * window > MAX_WORKING_DIM {
            return Err(Error::TruncationInsufficient {
                dim: window,
                tail,
                target: TAIL_TARGET,
            });
        }
        window *= 2;
    }
}

/// su(1,1) coefficients over a truncated window; `Auto` grows it until the
/// missing mass is below [`TAIL_TARGET`].
pub fn expansion_su11(p: &Su11Params, truncation: Truncation) -> Result<Expansion> {
    let closed = match truncation {
        Truncation::Fixed(window) => su11_window(p, window),
        Truncation::Auto => su11_grown_window(p),
    };
    match closed {
        Ok((reduced, tail_bound)) => Ok(Expansion {
            kind: AlgebraKind::Su11,
            n: p.n,
            phase: p.vartheta,
            reduced,
            tail_bound,
            source: DistributionSource::ClosedForm,
        }),
        Err(Error::PrecisionLoss { .. }) => {
            let state = oracle_state(AlgebraKind::Su11, p.label, p.n, p.r, p.vartheta, truncation)?;
            Ok(Expansion::from_oracle(
                AlgebraKind::Su11,
                p.n,
                p.vartheta,
                state,
            ))
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution {
    pub probs: Vec<f64>,
    /// `|1 - sum probs|`; for a truncated window this is the missing tail.
    pub norm_defect: f64,
    pub source: DistributionSource,
}

impl PhotonDistribution {
    fn from_probs(probs: Vec<f64>, source: DistributionSource) -> Self {
        let total: f64 = probs.iter().sum();
        Self {
            norm_defect: (1.0 - total).abs(),
            probs,
            source,
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `sum m^k P(m)`.
    pub fn moment(&self, k: i32) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| (m as f64).powi(k) * p)
            .sum()
    }
}

/// Magnitude exponent in the photon distribution `|c|^{2(. + n)} F^2`.
///
/// `Corrected` uses `2(m + n)`, which is `|D_m|^2`. `Printed` uses
/// `2(M + n)`, kept only so tests and `oracle-verify --exponent printed`
/// can show that form disagreeing with the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentForm {
    #[default]
    Corrected,
    Printed,
}

impl ExponentForm {
    /// Rescales a corrected coefficient `<m|D|n>` to this form, given
    /// `ln |c|` with `c` the disentangled parameter (`varsigma` or `lambda`).
    pub fn rescale(self, c: CoeffValue, label: u32, m: u32, ln_ratio: f64) -> CoeffValue {
        let shift = i64::from(label) - i64::from(m);
        match self {
            ExponentForm::Printed if shift != 0 => CoeffValue {
                log_mag: c.log_mag + shift as f64 * ln_ratio,
                ..c
            },
            _ => c,
        }
    }
}

fn reweight_printed(probs: &mut [f64], label: u32, ln_ratio: f64) {
    // |c|^{2(M+n)} / |c|^{2(m+n)} = |c|^{2(M-m)}
    for (m, p) in probs.iter_mut().enumerate() {
        if *p > 0.0 {
            *p = (p.ln() + 2.0 * (f64::from(label) - m as f64) * ln_ratio).exp();
        }
    }
}

pub fn distribution_su2(p: &Su2Params) -> Result<PhotonDistribution> {
    distribution_su2_with(p, ExponentForm::Corrected)
}

pub fn distribution_su2_with(p: &Su2Params, form: ExponentForm) -> Result<PhotonDistribution> {
    let expansion = expansion_su2(p)?;
    let mut probs = expansion.probabilities();
    if form == ExponentForm::Printed {
        reweight_printed(&mut probs, p.label, p.varsigma_abs().ln());
    }
    Ok(PhotonDistribution::from_probs(probs, expansion.source))
}

pub fn distribution_su11(p: &Su11Params, truncation: Truncation) -> Result<PhotonDistribution> {
    distribution_su11_with(p, truncation, ExponentForm::Corrected)
}

pub fn distribution_su11_with(
    p: &Su11Params,
    truncation: Truncation,
    form: ExponentForm,
) -> Result<PhotonDistribution> {
    let expansion = expansion_su11(p, truncation)?;
    let mut probs = expansion.probabilities();
    if form == ExponentForm::Printed {
        reweight_printed(&mut probs, p.label, p.lambda_abs().ln());
    }
    Ok(PhotonDistribution::from_probs(probs, expansion.source))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitMetric {
    #[default]
    TotalVariation,
}

/// Half the l1 distance, with unobserved tail mass counted against the result.
fn total_variation(p: &[f64], p_tail: f64, q: &[f64], q_tail: f64) -> f64 {
    let len = p.len().max(q.len());
    let l1: f64 = (0..len)
        .map(|m| (p.get(m).copied().unwrap_or(0.0) - q.get(m).copied().unwrap_or(0.0)).abs())
        .sum();
    0.5 * (l1 + p_tail + q_tail)
}

fn contraction_magnitude(label: u32, alpha: f64) -> Result<f64> {
    if label == 0 {
        return Err(Error::Domain("contraction limit needs M >= 1".into()));
    }
    Ok(alpha.abs() / f64::from(label).sqrt())
}

/// Distance between the su(2) state at `|xi| = alpha / sqrt(M)` and `D(alpha e^{i theta})|n>`.
pub fn limit_comparison_su2(
    label: u32,
    alpha: f64,
    theta: f64,
    n: u32,
    metric: LimitMetric,
) -> Result<f64> {
    let LimitMetric::TotalVariation = metric;
    let r = contraction_magnitude(label, alpha)?;
    let phase = if alpha < 0.0 { theta + PI } else { theta };
    let dist = distribution_su2(&Su2Params::new(label, n, r, phase)?)?;
    let target = displaced_number_oracle(alpha.abs(), phase, n, Truncation::Auto)?;
    Ok(total_variation(
        &dist.probs,
        0.0,
        &target.probabilities(),
        target.tail_bound,
    ))
}

/// Distance between the su(1,1) state at `|zeta| = alpha / sqrt(M)` and `D(alpha e^{i vartheta})|n>`.
pub fn limit_comparison_su11(
    label: u32,
    alpha: f64,
    vartheta: f64,
    n: u32,
    metric: LimitMetric,
) -> Result<f64> {
    let LimitMetric::TotalVariation = metric;
    let big_r = contraction_magnitude(label, alpha)?;
    let phase = if alpha < 0.0 { vartheta + PI } else { vartheta };
    let expansion = expansion_su11(&Su11Params::new(label, n, big_r, phase)?, Truncation::Auto)?;
    let target = displaced_number_oracle(alpha.abs(), phase, n, Truncation::Auto)?;
    Ok(total_variation(
        &expansion.probabilities(),
        expansion.tail_bound,
        &target.probabilities(),
        target.tail_bound,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_generators, displacement_oracle};
    use std::f64::consts::FRAC_PI_4;

    fn su2(label: u32, n: u32, r: f64, theta: f64) -> Su2Params {
        Su2Params::new(label, n, r, theta).unwrap()
    }

    fn su11(label: u32, n: u32, r: f64, vartheta: f64) -> Su11Params {
        Su11Params::new(label, n, r, vartheta).unwrap()
    }

    #[test]
    fn zero_displacement_is_kronecker_delta() {
        for n in 0..=4 {
            let p = su2(4, n, 0.0, 0.7);
            for m in 0..=4 {
                let c = coeff_su2(&p, m).unwrap().value(p.theta);
                let want = if m == n { 1.0 } else { 0.0 };
                assert_eq!(c, Complex64::new(want, 0.0));
            }
            let q = su11(3, n, 0.0, 0.7);
            for m in 0..8 {
                let want = if m == n { 1.0 } else { 0.0 };
                assert_eq!(coeff_su11(&q, m).unwrap().reduced(), want);
            }
        }
    }

    #[test]
    fn spin_half_coefficients() {
        for &r in &[0.1, 0.6, 1.2, 2.0, 3.0, 4.5] {
            let p = su2(1, 0, r, 0.0);
            assert!(
                (coeff_su2(&p, 0).unwrap().reduced() - r.cos()).abs() < 1e-15,
                "r = {r}"
            );
            assert!(
                (coeff_su2(&p, 1).unwrap().reduced() - r.sin()).abs() < 1e-15,
                "r = {r}"
            );
            let p = su2(1, 1, r, 0.0);
            assert!(
                (coeff_su2(&p, 0).unwrap().reduced() + r.sin()).abs() < 1e-15,
                "r = {r}"
            );
            assert!(
                (coeff_su2(&p, 1).unwrap().reduced() - r.cos()).abs() < 1e-15,
                "r = {r}"
            );
        }
    }

    #[test]
    fn spin_one_centre_entry_matches_oracle() {
        let p = su2(2, 1, FRAC_PI_4, 0.0);
        let u = displacement_oracle(
            &build_generators(AlgebraKind::Su2, 2, 3).unwrap(),
            FRAC_PI_4,
            0.0,
        )
        .unwrap()
        .matrix;
        let c = coeff_su2(&p, 1).unwrap().value(0.0);
        assert!((c - u[(1, 1)]).norm() < 1e-9);
        // d^1_{00}(pi/2) = cos(pi/2) = 0
        assert!(c.norm() < 1e-15);
    }

    #[test]
    fn coefficients_follow_phase_winding() {
        let p = su2(3, 1, 0.4, 0.9);
        let c = coeff_su2(&p, 3).unwrap();
        assert_eq!(c.phase_winding, 2);
        let z = c.value(p.theta);
        assert!((z.arg() - 1.8).abs() < 1e-14 || (z.arg() - 1.8 + PI).abs() < 1e-14);
    }

    #[test]
    fn m_out_of_range_is_domain_error() {
        assert!(matches!(
            coeff_su2(&su2(3, 1, 0.4, 0.0), 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pole_of_tan_r_is_handled() {
        // |varsigma| is infinite here but the state is |M - n> up to sign.
        let p = su2(6, 2, FRAC_PI_2, 0.0);
        let dist = distribution_su2(&p).unwrap();
        assert_eq!(dist.source, DistributionSource::ClosedForm);
        assert!((dist.probs[4] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spin_half_distribution_even_split() {
        let d = distribution_su2(&su2(1, 0, FRAC_PI_4, 0.0)).unwrap();
        assert!((d.probs[0] - 0.5).abs() < 1e-15);
        assert!((d.probs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn su11_vacuum_geometric() {
        let t: f64 = 0.5f64.tanh();
        let d = distribution_su11(&su11(1, 0, 0.5, 0.0), Truncation::Auto).unwrap();
        assert!(d.norm_defect < 1e-10);
        for (m, p) in d.probs.iter().enumerate() {
            let want = (1.0 - t * t) * t.powi(2 * m as i32);
            assert!((p - want).abs() < 1e-15, "m = {m}");
        }
    }

    #[test]
    fn su11_matches_oracle_small_case() {
        let p = su11(2, 1, 0.5, 0.0);
        let oracle =
            oracle_state(AlgebraKind::Su11, 2, 1, 0.5, 0.0, Truncation::Fixed(64)).unwrap();
        let c = coeff_su11(&p, 0).unwrap().value(0.0);
        assert!((c - oracle.amplitudes[0]).norm() < 1e-8);
    }

    #[test]
    fn precision_loss_triggers_oracle_fallback() {
        // Central elements at M = 80 cancel by many orders of magnitude.
        let p = su2(80, 40, FRAC_PI_4, 0.3);
        assert!(matches!(
            coeff_su2(&p, 40),
            Err(Error::PrecisionLoss { .. })
        ));
        let dist = distribution_su2(&p).unwrap();
        assert_eq!(dist.source, DistributionSource::Oracle);
        assert!(dist.norm_defect < 1e-9);
    }

    #[test]
    fn printed_exponent_only_agrees_at_top_index() {
        let p = su2(5, 1, 0.6, 0.0);
        let good = distribution_su2(&p).unwrap();
        let bad = distribution_su2_with(&p, ExponentForm::Printed).unwrap();
        assert!((good.probs[5] - bad.probs[5]).abs() < 1e-15);
        assert!((good.probs[2] - bad.probs[2]).abs() > 1e-3);
    }

    #[test]
    fn limit_at_zero_alpha_is_exact() {
        assert_eq!(
            limit_comparison_su2(50, 0.0, 0.3, 2, LimitMetric::TotalVariation).unwrap(),
            0.0
        );
        assert!(
            limit_comparison_su11(50, 0.0, 0.3, 2, LimitMetric::TotalVariation).unwrap() < 1e-14
        );
    }
}
