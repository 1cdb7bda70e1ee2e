use nalgebra::DMatrix;
use num_complex::Complex64;

use super::space::TruncatedSpace;
use crate::error::{Error, Result};
use crate::model::{DiscreteModeSet, Interaction};

/// Hermitian operator on a truncated space stored as `(row, col, value)`
/// triplets covering both triangles; repeated positions add up.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseHamiltonian {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn add(&mut self, row: usize, col: usize, value: Complex64) {
        if value != Complex64::new(0.0, 0.0) {
            self.entries.push((row, col, value));
        }
    }

    /// Adds `value` at `(row, col)` and its conjugate at `(col, row)`.
    pub fn add_pair(&mut self, row: usize, col: usize, value: Complex64) {
        self.add(row, col, value);
        self.add(col, row, value.conj());
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// `max |H - H^dag|` relative to `max |H|`, on the dense form.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.to_dense();
        let scale = m
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            / scale
    }
}

fn sigma_z(level: usize) -> f64 {
    if level == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_space(modes: &DiscreteModeSet, space: &TruncatedSpace) -> Result<()> {
    if modes.len() != space.modes() {
        return Err(Error::DimensionMismatch(space.modes(), modes.len()));
    }
    Ok(())
}

fn free_part(modes: &DiscreteModeSet, space: &TruncatedSpace, level: usize, r: usize) -> f64 {
    0.5 * modes.dimer_frequency() * sigma_z(level)
        + modes
            .modes()
            .iter()
            .enumerate()
            .map(|(j, m)| m.omega * space.occupation(r, j) as f64)
            .sum::<f64>()
}

/// `Omega/2 sigma_z + sum omega_j a_j^dag a_j
///  + lambda sigma_z sum (g_j a_j^dag + conj(g_j) a_j)` with truncated ladders.
pub fn build_hamiltonian_x(
    modes: &DiscreteModeSet,
    space: &TruncatedSpace,
) -> Result<SparseHamiltonian> {
    check_space(modes, space)?;
    if modes.interaction() != Interaction::X {
        return Err(Error::InvalidModes(
            "X-model Hamiltonian needs an X-model mode set".into(),
        ));
    }
    let m_dim = space.reservoir_dim();
    let mut h = SparseHamiltonian::new(space.dim());
    for level in 0..2 {
        let sz = sigma_z(level);
        for r in 0..m_dim {
            let i = level * m_dim + r;
            h.add(i, i, Complex64::new(free_part(modes, space, level, r), 0.0));
            for (j, m) in modes.modes().iter().enumerate() {
                let n = space.occupation(r, j);
                if n + 1 < space.dims()[j] {
                    let up = i + space.stride(j);
                    // <n+1| lambda sz g a^dag |n>
                    h.add_pair(up, i, modes.lambda() * sz * m.g * ((n + 1) as f64).sqrt());
                }
            }
        }
    }
    Ok(h)
}

/// `Omega/2 sigma_z + V/2 sigma_x + sum omega_j a_j^dag a_j
///  + lambda sigma_z sum g_j a_j^dag a_j + mu sigma_x sum f_j a_j^dag a_j`.
pub fn build_hamiltonian_d(
    modes: &DiscreteModeSet,
    space: &TruncatedSpace,
) -> Result<SparseHamiltonian> {
    check_space(modes, space)?;
    if modes.interaction() != Interaction::D {
        return Err(Error::InvalidModes(
            "D-model Hamiltonian needs a D-model mode set".into(),
        ));
    }
    let m_dim = space.reservoir_dim();
    let mut h = SparseHamiltonian::new(space.dim());
    for r in 0..m_dim {
        let (mut shift, mut exchange) = (0.0, 0.0);
        for (j, m) in modes.modes().iter().enumerate() {
            let n = space.occupation(r, j) as f64;
            shift += m.g.re * n;
            exchange += m.f * n;
        }
        for level in 0..2 {
            let i = level * m_dim + r;
            let diag = free_part(modes, space, level, r) + modes.lambda() * sigma_z(level) * shift;
            h.add(i, i, Complex64::new(diag, 0.0));
        }
        let coupling = 0.5 * modes.tunneling() + modes.mu() * exchange;
        h.add_pair(r, m_dim + r, Complex64::new(coupling, 0.0));
    }
    Ok(h)
}
