use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::SparseHamiltonian;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Eigenvectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

#[derive(Debug, Clone)]
struct Block {
    indices: Vec<usize>,
    energies: Vec<f64>,
    vectors: Eigenvectors,
}

/// Exact propagator `exp(-i H t)` of a sparse Hermitian operator, built
/// from one dense eigendecomposition per connected component.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    blocks: Vec<Block>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn components(h: &SparseHamiltonian) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..h.dim()).collect();
    for &(i, j, _) in h.entries() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); h.dim()];
    for i in 0..h.dim() {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

impl Propagator {
    pub fn new(h: &SparseHamiltonian) -> Result<Self> {
        let dim = h.dim();
        let groups = components(h);
        let mut local = vec![0usize; dim];
        let mut owner = vec![0usize; dim];
        for (b, g) in groups.iter().enumerate() {
            for (k, &i) in g.iter().enumerate() {
                local[i] = k;
                owner[i] = b;
            }
        }
        let mut per_block: Vec<Vec<(usize, usize, Complex64)>> = vec![Vec::new(); groups.len()];
        for &(i, j, v) in h.entries() {
            per_block[owner[i]].push((local[i], local[j], v));
        }
        let blocks = groups
            .into_par_iter()
            .zip(per_block.into_par_iter())
            .map(|(indices, entries)| diagonalize(indices, &entries))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sizes of the independent blocks.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.indices.len()).collect()
    }

    /// `exp(-i H t) psi`.
    pub fn evolve(&self, psi: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if psi.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, psi.len()));
        }
        let pieces: Vec<Vec<Complex64>> = self
            .blocks
            .par_iter()
            .map(|b| {
                let local =
                    DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi[i]));
                let phase = |k: usize| Complex64::from_polar(1.0, -b.energies[k] * t);
                match &b.vectors {
                    Eigenvectors::Real(v) => {
                        let re = v.tr_mul(&local.map(|z| z.re));
                        let im = v.tr_mul(&local.map(|z| z.im));
                        let mut c = DVector::from_fn(re.len(), |k, _| {
                            Complex64::new(re[k], im[k]) * phase(k)
                        });
                        let out_re = v * c.map(|z| z.re);
                        let out_im = v * c.map(|z| z.im);
                        c = DVector::from_fn(out_re.len(), |k, _| {
                            Complex64::new(out_re[k], out_im[k])
                        });
                        c.iter().copied().collect()
                    }
                    Eigenvectors::Complex(v) => {
                        let mut c = v.ad_mul(&local);
                        for (k, z) in c.iter_mut().enumerate() {
                            *z *= phase(k);
                        }
                        (v * c).iter().copied().collect()
                    }
                }
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (b, piece) in self.blocks.iter().zip(pieces) {
            for (&i, z) in b.indices.iter().zip(piece) {
                out[i] = z;
            }
        }
        Ok(out)
    }
}

fn diagonalize(indices: Vec<usize>, entries: &[(usize, usize, Complex64)]) -> Result<Block> {
    let n = indices.len();
    let real = entries.iter().all(|e| e.2.im == 0.0);
    if n == 1 {
        let e: f64 = entries.iter().map(|e| e.2.re).sum();
        return Ok(Block {
            indices,
            energies: vec![e],
            vectors: Eigenvectors::Real(DMatrix::identity(1, 1)),
        });
    }
    if real {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for &(i, j, v) in entries {
            m[(i, j)] += v.re;
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenFailure(n))?;
        Ok(Block {
            indices,
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: Eigenvectors::Real(eig.eigenvectors),
        })
    } else {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for &(i, j, v) in entries {
            m[(i, j)] += v;
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenFailure(n))?;
        Ok(Block {
            indices,
            energies: eig.eigenvalues.iter().copied().collect(),
            vectors: Eigenvectors::Complex(eig.eigenvectors),
        })
    }
}
