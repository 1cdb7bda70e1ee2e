use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Matrix2c = Matrix2<Complex64>;

/// Eigenvalues in `[-NEGATIVE_EIGENVALUE_TOL, 0)` are rounding noise and are
/// clamped to zero; anything more negative is an error.
pub const NEGATIVE_EIGENVALUE_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues of a Hermitian 2x2 matrix, descending.
pub fn hermitian_eigenvalues_2x2(m: &Matrix2c) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
    [mean + half_gap, mean - half_gap]
}

/// `-sum x ln x` in nats with `0 ln 0 = 0`.
pub fn von_neumann_entropy(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum::<f64>()
        + 0.0 // turns -0 from 1 ln 1 into +0
}

/// Validated 2x2 reduced state of the dimer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix(Matrix2c);

impl QubitDensityMatrix {
    /// Checks Hermiticity (1e-12), unit trace (1e-10) and positivity.
    pub fn new(m: Matrix2c) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NotADensityMatrix("non-finite entry".into()));
        }
        let skew = (m[(0, 1)] - m[(1, 0)].conj())
            .norm()
            .max(m[(0, 0)].im.abs())
            .max(m[(1, 1)].im.abs());
        if skew > HERMITIAN_TOL {
            return Err(Error::NotADensityMatrix(format!(
                "not Hermitian (defect {skew:e})"
            )));
        }
        let trace = m[(0, 0)].re + m[(1, 1)].re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotADensityMatrix(format!("trace {trace}")));
        }
        let [_, low] = hermitian_eigenvalues_2x2(&m);
        if low < -NEGATIVE_EIGENVALUE_TOL {
            return Err(Error::NotADensityMatrix(format!(
                "negative eigenvalue {low:e}"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_trusted(m: Matrix2c) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix2c {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Upper-level population `[rho]_11`.
    pub fn population(&self) -> f64 {
        self.0[(0, 0)].re
    }

    /// Coherence `[rho]_12`.
    pub fn coherence(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn spectrum(&self) -> Result<EntanglementSpectrum> {
        EntanglementSpectrum::from_eigenvalues(hermitian_eigenvalues_2x2(&self.0))
    }
}

/// Which orthonormal basis a reservoir reduced state is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReservoirBasis {
    /// `{Psi+, eta-hat}`, spanning the two conditional window states.
    PlusMinus,
    /// `{Psi+, eta-hat, e3}` where `e3` is the part of the window vacuum
    /// orthogonal to the first two.
    PlusMinusVacuum,
}

/// Reduced state of a reservoir window in a small analytic basis. For first
/// order corrections the matrix is traceless rather than unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirReducedState {
    entries: DMatrix<Complex64>,
    basis: ReservoirBasis,
}

impl ReservoirReducedState {
    pub fn new(entries: DMatrix<Complex64>, basis: ReservoirBasis) -> Result<Self> {
        let dim = match basis {
            ReservoirBasis::PlusMinus => 2,
            ReservoirBasis::PlusMinusVacuum => 3,
        };
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch(dim, entries.nrows()));
        }
        Ok(Self { entries, basis })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn basis(&self) -> ReservoirBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn spectrum(&self) -> Result<EntanglementSpectrum> {
        let eig = nalgebra::linalg::SymmetricEigen::try_new(self.entries.clone(), 1e-15, 10_000)
            .ok_or(Error::EigenFailure(self.dim()))?;
        EntanglementSpectrum::from_eigenvalues(eig.eigenvalues.iter().copied())
    }
}

/// Eigenvalues of a reduced density matrix (descending) and their von
/// Neumann entropy in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSpectrum {
    eigenvalues: Vec<f64>,
    entropy: f64,
}

impl EntanglementSpectrum {
    pub fn from_eigenvalues(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut eigenvalues = Vec::new();
        for x in values {
            if !x.is_finite() || x < -NEGATIVE_EIGENVALUE_TOL {
                return Err(Error::NotADensityMatrix(format!("eigenvalue {x:e}")));
            }
            eigenvalues.push(x.max(0.0));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let entropy = von_neumann_entropy(&eigenvalues);
        Ok(Self {
            eigenvalues,
            entropy,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    /// Eigenvalues above `threshold`.
    pub fn nonzero(&self, threshold: f64) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .filter(move |&x| x > threshold)
    }
}
