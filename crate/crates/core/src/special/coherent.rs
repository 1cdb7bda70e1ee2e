use num_complex::Complex64;

use super::gamma::ln_gamma;

/// `P(N >= dim)` for `N ~ Poisson(mean)`, summed directly over the tail.
pub fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean <= 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    let ln_mean = mean.ln();
    let mut sum = 0.0;
    let mut n = dim;
    loop {
        let ln_p = -mean + n as f64 * ln_mean - ln_gamma(n as f64 + 1.0).unwrap_or(0.0);
        let p = ln_p.exp();
        sum += p;
        if n as f64 > mean && p <= 1e-20 * sum.max(1e-300) {
            return sum;
        }
        n += 1;
    }
}

/// Number-basis amplitudes `c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)` of a
/// coherent state, truncated to `n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentAmplitudes {
    alpha: Complex64,
    amplitudes: Vec<Complex64>,
    tail: f64,
}

impl CoherentAmplitudes {
    /// Smallest truncation whose discarded Poisson weight is at most `target_tail`.
    pub fn with_tail(alpha: Complex64, target_tail: f64) -> Self {
        let mean = alpha.norm_sqr();
        let mut dim = 1;
        while poisson_tail(mean, dim) > target_tail {
            dim += 1;
        }
        Self::with_dim(alpha, dim)
    }

    pub fn with_dim(alpha: Complex64, dim: usize) -> Self {
        assert!(dim >= 1, "truncation dimension must be positive");
        let mean = alpha.norm_sqr();
        let mut amplitudes = Vec::with_capacity(dim);
        if mean == 0.0 {
            amplitudes.push(Complex64::new(1.0, 0.0));
            amplitudes.resize(dim, Complex64::new(0.0, 0.0));
        } else {
            let ln_r = alpha.norm().ln();
            let phase = alpha.arg();
            let mut ln_abs = -0.5 * mean;
            for n in 0..dim {
                if n > 0 {
                    ln_abs += ln_r - 0.5 * (n as f64).ln();
                }
                amplitudes.push(Complex64::from_polar(ln_abs.exp(), n as f64 * phase));
            }
        }
        Self {
            alpha,
            amplitudes,
            tail: poisson_tail(mean, dim),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Probability weight lost to truncation.
    pub fn tail(&self) -> f64 {
        self.tail
    }
}
