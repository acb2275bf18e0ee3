//! Compensated accumulation of signed terms with a cancellation record.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Result of summing an alternating series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedSum {
    pub value: f64,
    /// `sum |t_k|`.
    pub abs_sum: f64,
}

/// Sums terms largest-magnitude-first with compensation.
pub fn sum_largest_first(terms: &mut [f64]) -> SignedSum {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let abs_sum: NeumaierSum = terms.iter().map(|t| t.abs()).collect();
    let value: NeumaierSum = terms.iter().copied().collect();
    SignedSum {
        value: value.value(),
        abs_sum: abs_sum.value(),
    }
}

/// `ln(k!)`.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        0.0
    } else {
        libm::lgamma(k as f64 + 1.0)
    }
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}
