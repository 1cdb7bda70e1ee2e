use num_complex::Complex64;

use super::density::{Matrix2c, QubitDensityMatrix};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-9;

/// Pure initial dimer state `a |up> + b |down>`.
///
/// Stored normalized; `p = |a|^2` is the upper-level population and
/// `c0 = a * conj(b)` the initial coherence `[rho_S(0)]_12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerInitialState {
    a: Complex64,
    b: Complex64,
}

impl DimerInitialState {
    /// Accepts amplitudes whose squared norm is within 1e-9 of one and
    /// rescales them to unit norm exactly.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() || norm_sqr < 1e-12 {
            return Err(Error::ZeroVector { norm_sqr });
        }
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = norm_sqr.sqrt();
        Ok(Self {
            a: a / scale,
            b: b / scale,
        })
    }

    /// Real amplitudes `(sqrt(p), sqrt(1 - p))`.
    pub fn from_population(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("population {p} outside [0, 1]")));
        }
        Self::new(
            Complex64::new(p.sqrt(), 0.0),
            Complex64::new((1.0 - p).sqrt(), 0.0),
        )
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    pub fn population(&self) -> f64 {
        self.a.norm_sqr()
    }

    pub fn coherence(&self) -> Complex64 {
        self.a * self.b.conj()
    }

    pub fn density_matrix(&self) -> QubitDensityMatrix {
        let p = self.population();
        let c = self.coherence();
        QubitDensityMatrix::from_trusted(Matrix2c::new(
            Complex64::new(p, 0.0),
            c,
            c.conj(),
            Complex64::new(1.0 - p, 0.0),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn upper_level() {
        let s = DimerInitialState::new(c(1.0), c(0.0)).unwrap();
        assert_eq!(s.population(), 1.0);
        assert_eq!(s.coherence(), c(0.0));
    }

    #[test]
    fn symmetric_superposition() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = DimerInitialState::new(c(h), c(h)).unwrap();
        assert_abs_diff_eq!(s.population(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.coherence().re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn asymmetric_superposition() {
        let s = DimerInitialState::new(c(0.3f64.sqrt()), c(0.7f64.sqrt())).unwrap();
        assert_abs_diff_eq!(s.population(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(s.coherence().re, 0.458257569495584, epsilon = 1e-14);
    }

    #[test]
    fn normalizes_small_defects_and_rejects_large_ones() {
        let s = DimerInitialState::new(c(1.0 + 4e-10), c(0.0)).unwrap();
        assert_eq!(s.amplitudes().0.norm(), 1.0);
        assert!(matches!(
            DimerInitialState::new(c(1.1), c(0.0)),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            DimerInitialState::new(c(0.0), c(1e-7)),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn coherence_bounded_by_populations() {
        let (a, b) = (Complex64::new(0.6, 0.2), Complex64::new(0.3, -0.5));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let s = DimerInitialState::new(a / n, b / n).unwrap();
        let p = s.population();
        assert!(s.coherence().norm() <= (p * (1.0 - p)).sqrt() + 1e-12);
    }
}
