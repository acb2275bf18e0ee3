//! Brute-force ground truth: Holstein–Primakoff generators as explicit
//! matrices and their displacement exponentials.
//!
//! Nothing here uses the disentangled closed forms, so every closed-form
//! quantity in the crate can be checked against it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::{expm, ladder_exp_action, max_abs, CMatrix, Ladder};
use crate::params::AlgebraKind;

/// Target for the probability mass outside a truncated window.
pub const TAIL_TARGET: f64 = 1e-12;
/// Largest working dimension the truncated su(1,1) and oscillator oracles may grow to.
pub const MAX_WORKING_DIM: usize = 4096;
const MIN_WINDOW: usize = 32;

/// `<m+1|X+|m>` for `m = 0 .. dim-2`.
pub fn ladder_weights(kind: AlgebraKind, label: u32, dim: usize) -> Vec<f64> {
    let big_m = f64::from(label);
    (0..dim.saturating_sub(1))
        .map(|m| {
            let m = m as f64;
            match kind {
                AlgebraKind::Su2 => ((m + 1.0) * (big_m - m)).sqrt(),
                AlgebraKind::Su11 => ((m + 1.0) * (big_m + m)).sqrt(),
            }
        })
        .collect()
}

/// Dense matrices of the raising, lowering and Cartan generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub kind: AlgebraKind,
    pub label: u32,
    pub dim: usize,
    pub raise: CMatrix,
    pub lower: CMatrix,
    pub cartan: CMatrix,
    /// Only su(1,1) representations are cut off.
    pub truncated: bool,
}

pub fn build_generators(kind: AlgebraKind, label: u32, dim: usize) -> Result<GeneratorSet> {
    match kind {
        AlgebraKind::Su2 => {
            let expected = label as usize + 1;
            if dim != expected {
                return Err(Error::DimensionMismatch {
                    label,
                    expected,
                    got: dim,
                });
            }
        }
        AlgebraKind::Su11 => {
            if label < 1 {
                return Err(Error::Domain("su(1,1) generators need M >= 1".into()));
            }
            if dim < 1 {
                return Err(Error::Domain("dimension must be positive".into()));
            }
        }
    }

    let mut raise = CMatrix::zeros(dim, dim);
    for (m, w) in ladder_weights(kind, label, dim).into_iter().enumerate() {
        raise[(m + 1, m)] = Complex64::new(w, 0.0);
    }
    let lower = raise.adjoint();
    let half = 0.5 * f64::from(label);
    let cartan = CMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            return Complex64::new(0.0, 0.0);
        }
        let m = i as f64;
        match kind {
            AlgebraKind::Su2 => Complex64::new(m - half, 0.0),
            AlgebraKind::Su11 => Complex64::new(m + half, 0.0),
        }
    });

    Ok(GeneratorSet {
        kind,
        label,
        dim,
        raise,
        lower,
        cartan,
        truncated: kind == AlgebraKind::Su11,
    })
}

/// Entrywise residuals of the defining commutation relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    /// `[X0, X+] - X+`
    pub cartan_raise: f64,
    /// `[X0, X-] + X-`
    pub cartan_lower: f64,
    /// su(2): `[J+, J-] - 2 J0`; su(1,1): `[K-, K+] - 2 K0`.
    pub raise_lower: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.cartan_raise
            .max(self.cartan_lower)
            .max(self.raise_lower)
    }
}

impl GeneratorSet {
    pub fn ladder(&self) -> Ladder {
        Ladder::new(ladder_weights(self.kind, self.label, self.dim))
    }

    /// Residuals over rows and columns with index `< dim - 2`, which the
    /// truncation edge cannot reach.
    pub fn commutator_residuals(&self) -> CommutatorResiduals {
        let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
        let interior = self.dim.saturating_sub(2);
        let block_max = |m: CMatrix| {
            let mut worst = 0.0f64;
            for i in 0..interior {
                for j in 0..interior {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
            worst
        };
        let two = Complex64::new(2.0, 0.0);
        let raise_lower = match self.kind {
            AlgebraKind::Su2 => comm(&self.raise, &self.lower) - &self.cartan * two,
            AlgebraKind::Su11 => comm(&self.lower, &self.raise) - &self.cartan * two,
        };
        CommutatorResiduals {
            cartan_raise: block_max(comm(&self.cartan, &self.raise) - &self.raise),
            cartan_lower: block_max(comm(&self.cartan, &self.lower) + &self.lower),
            raise_lower: block_max(raise_lower),
        }
    }
}

/// Dense displacement operator and its unitarity record.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMatrix {
    pub matrix: CMatrix,
    /// `max |U^dagger U - I|`. For su(1,1) taken over the lower half of the
    /// window, the part a seed state near the bottom actually excites.
    pub unitarity_defect: f64,
}

impl OracleMatrix {
    /// Probability weight of column `col` in the upper half of the window.
    pub fn edge_weight(&self, col: usize) -> f64 {
        let dim = self.matrix.nrows();
        (dim / 2..dim)
            .map(|m| self.matrix[(m, col)].norm_sqr())
            .sum()
    }
}

/// `exp(xi X+ - conj(xi) X-)` with `xi = magnitude e^{i phase}`.
pub fn displacement_oracle(
    gens: &GeneratorSet,
    magnitude: f64,
    phase: f64,
) -> Result<OracleMatrix> {
    if !(magnitude.is_finite() && magnitude >= 0.0) {
        return Err(Error::Domain(format!(
            "magnitude must be finite and >= 0, got {magnitude}"
        )));
    }
    let xi = Complex64::from_polar(magnitude, phase);
    let generator = &gens.raise * xi - &gens.lower * xi.conj();
    let matrix = expm(&generator);

    let gram = matrix.adjoint() * &matrix - CMatrix::identity(gens.dim, gens.dim);
    let unitarity_defect = match gens.kind {
        AlgebraKind::Su2 => max_abs(&gram),
        AlgebraKind::Su11 => {
            let half = (gens.dim / 2).max(1);
            max_abs(&gram.view((0, 0), (half, half)).into_owned())
        }
    };
    Ok(OracleMatrix {
        matrix,
        unitarity_defect,
    })
}

/// Complex amplitudes over number states `0 .. dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<Complex64>,
    /// Probability mass estimated to lie at or beyond `dim`.
    pub tail_bound: f64,
}

impl FockVector {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// How to size the Fock window of an infinite-dimensional computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Start from the mean-occupation heuristic and double until the tail is below [`TAIL_TARGET`].
    Auto,
    /// Report exactly this many amplitudes, no growth.
    Fixed(usize),
}

fn unit_vector(dim: usize, n: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// Tail mass from probabilities just past a window: their sum plus a
/// geometric continuation at the last observed decay ratio. A segment
/// that is not decaying yields 1, meaning the tail is unknown.
pub fn extrapolated_tail(beyond: &[f64]) -> f64 {
    let direct: f64 = beyond.iter().sum();
    match beyond {
        [.., prev, last] if *last > 0.0 => {
            let ratio = last / prev;
            if ratio < 1.0 {
                direct + last * ratio / (1.0 - ratio)
            } else {
                1.0
            }
        }
        _ => direct,
    }
}

/// Evolves `|n>` in a working space twice the window size and keeps the
/// lower half; whatever the truncation edge reflects never reaches the
/// reported window before the tail itself is visible.
fn windowed_state(
    weights: &dyn Fn(usize) -> Vec<f64>,
    xi: Complex64,
    n: usize,
    window: usize,
) -> FockVector {
    let working = 2 * window;
    let ladder = Ladder::new(weights(working));
    let full = ladder_exp_action(&ladder, xi, &unit_vector(working, n));
    // Mass pushed past the window, summed directly: `1 - sum(kept)` would
    // bottom out at the accumulated round-off of the evolution.
    let tail_bound = full[window..].iter().map(|a| a.norm_sqr()).sum();
    FockVector {
        amplitudes: full[..window].to_vec(),
        tail_bound,
    }
}

fn grown_state(
    weights: &dyn Fn(usize) -> Vec<f64>,
    xi: Complex64,
    n: usize,
    start: usize,
) -> Result<FockVector> {
    let mut window = start.max(MIN_WINDOW).max(n + 1);
    if 2 * window > MAX_WORKING_DIM {
        // The occupation heuristic alone already overflows the cap; the tail is unknown.
        return Err(Error::TruncationInsufficient {
            dim: window,
            tail: 1.0,
            target: TAIL_TARGET,
        });
    }
    loop {
        let state = windowed_state(weights, xi, n, window);
        if state.tail_bound < TAIL_TARGET {
            return Ok(state);
        }
        if 4 * window > MAX_WORKING_DIM {
            return Err(Error::TruncationInsufficient {
                dim: window,
                tail: state.tail_bound,
                target: TAIL_TARGET,
            });
        }
        window *= 2;
    }
}

/// Starting window for the su(1,1) growth loop: `max(4(n + M sinh^2 R + 1), 32)`.
pub fn su11_start_window(label: u32, n: u32, magnitude: f64) -> usize {
    let sh = magnitude.sinh();
    let mean_scale = f64::from(n) + f64::from(label) * sh * sh + 1.0;
    ((4.0 * mean_scale).ceil() as usize).max(MIN_WINDOW)
}

/// `D(M, xi)|n>` (su(2)) or `D_11(M, zeta)|n>` (su(1,1)) from the ladder exponential.
pub fn oracle_state(
    kind: AlgebraKind,
    label: u32,
    n: u32,
    magnitude: f64,
    phase: f64,
    truncation: Truncation,
) -> Result<FockVector> {
    if !(magnitude.is_finite() && magnitude >= 0.0) {
        return Err(Error::Domain(format!(
            "magnitude must be finite and >= 0, got {magnitude}"
        )));
    }
    let xi = Complex64::from_polar(magnitude, phase);
    let n_idx = n as usize;
    match kind {
        AlgebraKind::Su2 => {
            let dim = label as usize + 1;
            if let Truncation::Fixed(d) = truncation {
                if d != dim {
                    return Err(Error::DimensionMismatch {
                        label,
                        expected: dim,
                        got: d,
                    });
                }
            }
            if n > label {
                return Err(Error::Domain(format!(
                    "su(2) needs n <= M, got n = {n}, M = {label}"
                )));
            }
            let ladder = Ladder::new(ladder_weights(kind, label, dim));
            let amplitudes = ladder_exp_action(&ladder, xi, &unit_vector(dim, n_idx));
            let kept: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
            Ok(FockVector {
                amplitudes,
                tail_bound: (1.0 - kept).max(0.0),
            })
        }
        AlgebraKind::Su11 => {
            if label < 1 {
                return Err(Error::Domain("su(1,1) needs M >= 1".into()));
            }
            let weights = move |d: usize| ladder_weights(AlgebraKind::Su11, label, d);
            match truncation {
                Truncation::Fixed(window) => {
                    if n_idx >= window {
                        return Err(Error::Domain(format!(
                            "seed n = {n} outside window of {window}"
                        )));
                    }
                    Ok(windowed_state(&weights, xi, n_idx, window))
                }
                Truncation::Auto => {
                    grown_state(&weights, xi, n_idx, su11_start_window(label, n, magnitude))
                }
            }
        }
    }
}

/// Ordinary displaced number state `exp(alpha e^{i phase} a^dagger - h.c.)|n>`.
pub fn displaced_number_oracle(
    alpha: f64,
    phase: f64,
    n: u32,
    truncation: Truncation,
) -> Result<FockVector> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    let xi = Complex64::from_polar(alpha, phase);
    let weights = |d: usize| {
        (0..d.saturating_sub(1))
            .map(|m| ((m + 1) as f64).sqrt())
            .collect()
    };
    let n_idx = n as usize;
    match truncation {
        Truncation::Fixed(window) => {
            if n_idx >= window {
                return Err(Error::Domain(format!(
                    "seed n = {n} outside window of {window}"
                )));
            }
            Ok(windowed_state(&weights, xi, n_idx, window))
        }
        Truncation::Auto => {
            let start = (4.0 * (f64::from(n) + alpha * alpha + 1.0)).ceil() as usize;
            grown_state(&weights, xi, n_idx, start)
        }
    }
}
