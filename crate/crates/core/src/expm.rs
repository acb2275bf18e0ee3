//! Operator exponentials by scaling and squaring with a Taylor kernel.
//!
//! Two entry points share the same scaling rule (scaled 1-norm below
//! [`SCALED_NORM_BOUND`]): [`expm`] exponentiates a dense matrix, and
//! [`ladder_exp_action`] applies the exponential of a ladder generator
//! `xi X+ - conj(xi) X-` to a vector without forming the matrix.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const SCALED_NORM_BOUND: f64 = 0.5;

const MAX_TAYLOR_TERMS: usize = 40;
const TAYLOR_CUTOFF: f64 = 1e-18;

/// Maximum absolute column sum.
pub fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Number of halvings needed to bring `norm` below the kernel bound.
fn squarings_for(norm: f64) -> u32 {
    if norm <= SCALED_NORM_BOUND {
        0
    } else {
        (norm / SCALED_NORM_BOUND).log2().ceil() as u32
    }
}

/// Dense `exp(a)`.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm requires a square matrix");
    let dim = a.nrows();
    if dim == 0 {
        return CMatrix::zeros(0, 0);
    }

    let s = squarings_for(one_norm(a));
    let scaled = a * Complex64::new(0.5f64.powi(s as i32), 0.0);

    let mut result = CMatrix::identity(dim, dim);
    let mut term = CMatrix::identity(dim, dim);
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        result += &term;
        if one_norm(&term) < TAYLOR_CUTOFF {
            break;
        }
    }

    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// A raising operator `X+` with `<m+1|X+|m> = weights[m]`, lowering `X- = (X+)^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    weights: Vec<f64>,
}

impl Ladder {
    pub fn new(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len() + 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// 1-norm of `xi X+ - conj(xi) X-` for `|xi| = 1`.
    pub fn unit_norm(&self) -> f64 {
        let w = &self.weights;
        (0..self.dim())
            .map(|m| {
                let below = if m > 0 { w[m - 1] } else { 0.0 };
                let above = w.get(m).copied().unwrap_or(0.0);
                below + above
            })
            .fold(0.0, f64::max)
    }

    /// `out = (xi X+ - conj(xi) X-) v`.
    fn apply(&self, xi: Complex64, v: &[Complex64], out: &mut [Complex64]) {
        let w = &self.weights;
        let dim = self.dim();
        let xi_conj = xi.conj();
        for m in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            if m > 0 {
                acc += xi * w[m - 1] * v[m - 1];
            }
            if m + 1 < dim {
                acc -= xi_conj * w[m] * v[m + 1];
            }
            out[m] = acc;
        }
    }

    /// Dense `xi X+ - conj(xi) X-`.
    pub fn generator_matrix(&self, xi: Complex64) -> CMatrix {
        let dim = self.dim();
        let mut g = CMatrix::zeros(dim, dim);
        for (m, &w) in self.weights.iter().enumerate() {
            g[(m + 1, m)] = xi * w;
            g[(m, m + 1)] = -xi.conj() * w;
        }
        g
    }
}

/// `exp(xi X+ - conj(xi) X-) v`, computed as `s` Taylor sub-steps with
/// the same scaling rule as [`expm`].
pub fn ladder_exp_action(ladder: &Ladder, xi: Complex64, v: &[Complex64]) -> Vec<Complex64> {
    let dim = ladder.dim();
    assert_eq!(
        v.len(),
        dim,
        "vector length must match the ladder dimension"
    );

    let norm = ladder.unit_norm() * xi.norm();
    let steps = if norm <= SCALED_NORM_BOUND {
        1
    } else {
        (norm / SCALED_NORM_BOUND).ceil() as usize
    };
    let h = xi / steps as f64;

    let mut state = v.to_vec();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&state);
        for k in 1..=MAX_TAYLOR_TERMS {
            ladder.apply(h, &term, &mut next);
            let inv_k = 1.0 / k as f64;
            let mut term_norm = 0.0;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * inv_k;
                term_norm += t.norm_sqr();
            }
            for (s, t) in state.iter_mut().zip(&term) {
                *s += t;
            }
            if term_norm.sqrt() < TAYLOR_CUTOFF {
                break;
            }
        }
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let z = CMatrix::zeros(4, 4);
        assert_eq!(expm(&z), CMatrix::identity(4, 4));
    }

    #[test]
    fn rotation_generator_exponentiates_to_rotation() {
        for &t in &[0.3, 1.0, std::f64::consts::FRAC_PI_2, 4.0] {
            let a = CMatrix::from_row_slice(2, 2, &[c(0.0), c(-t), c(t), c(0.0)]);
            let e = expm(&a);
            let want = [t.cos(), -t.sin(), t.sin(), t.cos()];
            for (i, w) in want.iter().enumerate() {
                let got = e[(i / 2, i % 2)];
                assert!((got - c(*w)).norm() < 1e-14, "t = {t}: {got} vs {w}");
            }
        }
    }

    #[test]
    fn diagonal_exponentiates_entrywise() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(-3.0, 0.5),
            Complex64::new(2.5, -1.0),
        ]));
        let e = expm(&a);
        assert!((e[(0, 0)] - a[(0, 0)].exp()).norm() < 1e-12);
        assert!((e[(1, 1)] - a[(1, 1)].exp()).norm() < 1e-12);
        assert_eq!(e[(0, 1)], c(0.0));
    }

    #[test]
    fn action_agrees_with_dense_exponential() {
        let ladder = Ladder::new(
            (0..15)
                .map(|m| ((m + 1) as f64 * (7 + m) as f64).sqrt())
                .collect(),
        );
        let xi = Complex64::from_polar(0.4, 0.9);
        let dense = expm(&ladder.generator_matrix(xi));
        for n in [0, 3, 9] {
            let mut e = vec![c(0.0); ladder.dim()];
            e[n] = c(1.0);
            let v = ladder_exp_action(&ladder, xi, &e);
            for m in 0..ladder.dim() {
                assert!((v[m] - dense[(m, n)]).norm() < 1e-13);
            }
        }
    }
}
