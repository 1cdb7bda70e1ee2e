use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DimerInitialState, DiscreteModeSet};
use crate::special::{poisson_tail, CoherentAmplitudes};

/// Default cap on the total dimension `2 * prod d_j`.
pub const DEFAULT_CAP: usize = 1 << 16;

/// Product basis `|level> (x) |n_1> (x) ... (x) |n_N>` with `n_j < d_j`.
///
/// Flat index `level * M + sum_j n_j * stride_j` with `M = prod d_j` and
/// the last mode varying fastest. Level 0 is the upper dimer level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
    reservoir_dim: usize,
}

impl TruncatedSpace {
    pub fn new(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Domain(format!("bad truncation dimensions {dims:?}")));
        }
        let mut reservoir_dim: usize = 1;
        for &d in &dims {
            reservoir_dim = reservoir_dim
                .checked_mul(d)
                .filter(|&m| m.saturating_mul(2) <= cap)
                .ok_or(Error::CapExceeded {
                    dim: usize::MAX,
                    cap,
                })?;
        }
        let mut strides = vec![1; dims.len()];
        for j in (0..dims.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        Ok(Self {
            dims,
            strides,
            reservoir_dim,
        })
    }

    /// Truncation for X-model dynamics: the coherent amplitude drifts by up
    /// to `2 lambda |g| / omega`, so each mode gets
    /// `|a|^2 + 10|a| + 20 + 4 (lambda |g| / omega)^2` levels, and at least
    /// enough for a Poisson tail below `tail`.
    pub fn for_x_model(modes: &DiscreteModeSet, tail: f64, cap: usize) -> Result<Self> {
        let lambda = modes.lambda();
        let dims = modes
            .modes()
            .iter()
            .map(|m| {
                let a = m.alpha.norm();
                let shift = lambda * m.g.norm() / m.omega;
                let heuristic = (a * a + 10.0 * a + 20.0 + 4.0 * shift * shift).ceil() as usize;
                heuristic.max(poisson_dim(a * a, tail))
            })
            .collect();
        Self::new(dims, cap)
    }

    /// Truncation for D-model dynamics, which conserves every occupation
    /// number when `mu = 0`: the Poisson tail alone sets the size.
    pub fn for_d_model(modes: &DiscreteModeSet, tail: f64, cap: usize) -> Result<Self> {
        let dims = modes
            .modes()
            .iter()
            .map(|m| poisson_dim(m.alpha.norm_sqr(), tail))
            .collect();
        Self::new(dims, cap)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    /// `prod d_j`.
    pub fn reservoir_dim(&self) -> usize {
        self.reservoir_dim
    }

    /// `2 prod d_j`.
    pub fn dim(&self) -> usize {
        2 * self.reservoir_dim
    }

    pub fn stride(&self, mode: usize) -> usize {
        self.strides[mode]
    }

    pub fn index(&self, level: usize, occupations: &[usize]) -> usize {
        debug_assert!(level < 2 && occupations.len() == self.dims.len());
        level * self.reservoir_dim
            + occupations
                .iter()
                .zip(&self.strides)
                .map(|(n, s)| n * s)
                .sum::<usize>()
    }

    pub fn decode(&self, index: usize) -> (usize, Vec<usize>) {
        let level = index / self.reservoir_dim;
        let mut rest = index % self.reservoir_dim;
        let occ = self
            .strides
            .iter()
            .map(|&s| {
                let n = rest / s;
                rest %= s;
                n
            })
            .collect();
        (level, occ)
    }

    /// Occupation of `mode` in a reservoir index (`index < reservoir_dim`).
    pub fn occupation(&self, reservoir_index: usize, mode: usize) -> usize {
        (reservoir_index / self.strides[mode]) % self.dims[mode]
    }
}

fn poisson_dim(mean: f64, tail: f64) -> usize {
    let mut d = 1;
    while poisson_tail(mean, d) > tail {
        d += 1;
    }
    d
}

/// A state vector on a truncated space, with the probability weight lost to
/// truncating the initial coherent states.
#[derive(Debug, Clone, PartialEq)]
pub struct FullStateVector {
    pub amplitudes: Vec<Complex64>,
    pub space: TruncatedSpace,
    pub tail_budget: f64,
}

impl FullStateVector {
    /// `(a |up> + b |down>) (x) |alpha_1> (x) ... (x) |alpha_N>`.
    pub fn product(
        state: &DimerInitialState,
        modes: &DiscreteModeSet,
        space: &TruncatedSpace,
    ) -> Result<Self> {
        if modes.len() != space.modes() {
            return Err(Error::DimensionMismatch(space.modes(), modes.len()));
        }
        let factors: Vec<CoherentAmplitudes> = modes
            .modes()
            .iter()
            .zip(space.dims())
            .map(|(m, &d)| CoherentAmplitudes::with_dim(m.alpha, d))
            .collect();
        let mut reservoir = vec![Complex64::new(1.0, 0.0)];
        for f in &factors {
            reservoir = reservoir
                .iter()
                .flat_map(|&r| f.amplitudes().iter().map(move |&c| r * c))
                .collect();
        }
        let (a, b) = state.amplitudes();
        let mut amplitudes: Vec<Complex64> = reservoir.iter().map(|&r| a * r).collect();
        amplitudes.extend(reservoir.iter().map(|&r| b * r));
        let kept: f64 = factors.iter().map(|f| 1.0 - f.tail()).product();
        Ok(Self {
            amplitudes,
            space: space.clone(),
            tail_budget: 1.0 - kept,
        })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Mode;

    #[test]
    fn codec_is_bijective() {
        let s = TruncatedSpace::new(vec![3, 4, 2], DEFAULT_CAP).unwrap();
        assert_eq!(s.dim(), 48);
        for i in 0..s.dim() {
            let (level, occ) = s.decode(i);
            assert_eq!(s.index(level, &occ), i);
            for (j, &n) in occ.iter().enumerate() {
                assert_eq!(s.occupation(i % s.reservoir_dim(), j), n);
            }
        }
        assert_eq!(s.index(0, &[0, 0, 1]), 1);
        assert_eq!(s.index(1, &[0, 0, 0]), 24);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            TruncatedSpace::new(vec![300, 300], DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
        assert!(TruncatedSpace::new(vec![256, 128], DEFAULT_CAP).is_ok());
    }

    #[test]
    fn product_state_norm_tracks_tail() {
        let modes = DiscreteModeSet::x_model(
            vec![
                Mode::new(1.0, 1.0, 0.0, Complex64::new(0.8, 0.0)),
                Mode::new(1.7, 0.6, 0.0, Complex64::new(0.0, 0.5)),
            ],
            0.3,
            1.0,
        )
        .unwrap();
        let space = TruncatedSpace::new(vec![6, 5], DEFAULT_CAP).unwrap();
        let psi = FullStateVector::product(
            &DimerInitialState::from_population(0.3).unwrap(),
            &modes,
            &space,
        )
        .unwrap();
        assert!((1.0 - psi.norm_sqr() - psi.tail_budget).abs() < 1e-14);
        assert!(psi.tail_budget > 1e-6);
        let big = TruncatedSpace::for_x_model(&modes, 1e-14, DEFAULT_CAP).unwrap();
        assert!(big.dims()[0] >= 29 && big.dims()[1] >= 26);
    }
}
