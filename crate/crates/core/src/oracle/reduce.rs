use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::space::{FullStateVector, TruncatedSpace};
use crate::error::{Error, Result};
use crate::model::{DiscreteModeSet, EntanglementSpectrum, Matrix2c, QubitDensityMatrix};
use crate::special::CoherentAmplitudes;

/// Dimer state `Tr_R |psi><psi|`, renormalized by its trace.
pub fn reduce_dimer(psi: &FullStateVector) -> Result<QubitDensityMatrix> {
    let m = psi.space.reservoir_dim();
    let (up, down) = psi.amplitudes.split_at(m);
    let dot = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
    };
    let r00 = dot(up, up).re;
    let r11 = dot(down, down).re;
    let r01 = dot(up, down);
    let tr = r00 + r11;
    if !(tr > 0.0) {
        return Err(Error::ZeroVector { norm_sqr: tr });
    }
    let r00 = Complex64::new(r00 / tr, 0.0);
    let r11 = Complex64::new(r11 / tr, 0.0);
    let r01 = r01 / tr;
    QubitDensityMatrix::new(Matrix2c::new(r00, r01, r01.conj(), r11))
}

/// `psi` reshaped as `kept x (level, traced)`: rows run over the
/// configurations of the modes in `window` (last listed mode fastest).
fn bipartition(psi: &FullStateVector, window: &[usize]) -> Result<DMatrix<Complex64>> {
    let space = &psi.space;
    let n = space.modes();
    if window.iter().any(|&j| j >= n) {
        return Err(Error::InvalidWindow(format!(
            "mode index out of range in {window:?}"
        )));
    }
    let mut inside = vec![false; n];
    for &j in window {
        inside[j] = true;
    }
    let mut kept_stride = vec![0usize; n];
    let mut traced_stride = vec![0usize; n];
    let (mut k, mut r) = (1usize, 1usize);
    for j in (0..n).rev() {
        if inside[j] {
            kept_stride[j] = k;
            k *= space.dims()[j];
        } else {
            traced_stride[j] = r;
            r *= space.dims()[j];
        }
    }
    let mut out = DMatrix::zeros(k, 2 * r);
    let m = space.reservoir_dim();
    for (idx, &z) in psi.amplitudes.iter().enumerate() {
        let (level, res) = (idx / m, idx % m);
        let (mut row, mut col) = (0, level * r);
        for j in 0..n {
            let occ = space.occupation(res, j);
            row += occ * kept_stride[j];
            col += occ * traced_stride[j];
        }
        out[(row, col)] = z;
    }
    Ok(out)
}

/// Reduced state of the modes listed in `window`, normalized by its trace.
/// An empty window gives the 1x1 matrix `[1]`.
pub fn reduce_window(psi: &FullStateVector, window: &[usize]) -> Result<DMatrix<Complex64>> {
    let b = bipartition(psi, window)?;
    let rho = &b * b.adjoint();
    let tr = rho.trace().re;
    if !(tr > 0.0) {
        return Err(Error::ZeroVector { norm_sqr: tr });
    }
    Ok(rho.map(|z| z / tr))
}

/// Entanglement spectrum of the window, from the Gram matrix on whichever
/// side of the bipartition is smaller. Eigenvalues at or below `threshold`
/// are dropped.
pub fn window_spectrum(
    psi: &FullStateVector,
    window: &[usize],
    threshold: f64,
) -> Result<EntanglementSpectrum> {
    let b = bipartition(psi, window)?;
    let gram = if b.nrows() <= b.ncols() {
        &b * b.adjoint()
    } else {
        b.adjoint() * &b
    };
    oracle_entanglement_spectrum(&gram, threshold)
}

/// Spectrum of a Hermitian matrix after normalizing its trace to one,
/// keeping eigenvalues above `threshold`.
pub fn oracle_entanglement_spectrum(
    rho: &DMatrix<Complex64>,
    threshold: f64,
) -> Result<EntanglementSpectrum> {
    let tr = rho.trace().re;
    if !(tr > 0.0) {
        return Err(Error::ZeroVector { norm_sqr: tr });
    }
    let values = hermitian_eigenvalues(rho.map(|z| z / tr))?;
    EntanglementSpectrum::from_eigenvalues(values.into_iter().filter(|&x| x > threshold))
}

fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.iter().all(|z| z.im == 0.0) {
        let eig = SymmetricEigen::try_new(m.map(|z| z.re), f64::EPSILON, 0)
            .ok_or(Error::EigenFailure(n))?;
        return Ok(eig.eigenvalues.iter().copied().collect());
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::EigenFailure(n))?;
    Ok(eig.eigenvalues.iter().copied().collect())
}

/// Residuals between two Hermitian matrices of equal size: the trace
/// distance `1/2 sum |eig(A - B)|` and the largest gap between the
/// descending eigenvalue lists.
pub fn residual_report(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Result<(f64, f64)> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(a.nrows(), b.nrows()));
    }
    let trace_distance = 0.5
        * hermitian_eigenvalues(a - b)?
            .iter()
            .map(|x| x.abs())
            .sum::<f64>();
    Ok((
        trace_distance,
        spectrum_gap(
            &hermitian_eigenvalues(a.clone())?,
            &hermitian_eigenvalues(b.clone())?,
        ),
    ))
}

/// Largest difference between two eigenvalue lists after sorting both
/// descending and padding the shorter one with zeros.
pub fn spectrum_gap(a: &[f64], b: &[f64]) -> f64 {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    (0..a.len().max(b.len()))
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Orthonormal columns `[Psi+, eta-hat, e3]` in the truncated Fock space of
/// the window modes, where `Psi+-` are the window coherent states
/// `(x)_j |e^{-it(omega_j +- lambda g_j)} alpha_j>` of the D-model, `eta-hat`
/// the normalized part of `Psi-` orthogonal to `Psi+` and `e3` the
/// normalized part of the vacuum orthogonal to both. Degenerate directions
/// are returned as zero columns.
pub fn window_frame(
    modes: &DiscreteModeSet,
    window: &[usize],
    t: f64,
    space: &TruncatedSpace,
) -> DMatrix<Complex64> {
    let product = |sign: f64| {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for &j in window {
            let m = &modes.modes()[j];
            let rot = Complex64::from_polar(1.0, -t * (m.omega + sign * modes.lambda() * m.g.re));
            let c = CoherentAmplitudes::with_dim(m.alpha * rot, space.dims()[j]);
            v = v
                .iter()
                .flat_map(|&x| c.amplitudes().iter().map(move |&y| x * y))
                .collect::<Vec<_>>();
        }
        nalgebra::DVector::from_vec(v)
    };
    let plus = product(1.0);
    let minus = product(-1.0);
    let k = plus.len();
    let mut vacuum = nalgebra::DVector::zeros(k);
    vacuum[0] = Complex64::new(1.0, 0.0);
    let mut frame = DMatrix::zeros(k, 3);
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for (col, v) in [plus, minus, vacuum].into_iter().enumerate() {
        let mut w = v.clone();
        for e in &basis {
            let overlap = e.dotc(&w);
            w -= e * overlap;
        }
        let norm = w.norm();
        if norm > 1e-7 * v.norm() {
            let e = w / Complex64::new(norm, 0.0);
            frame.set_column(col, &e);
            basis.push(e);
        }
    }
    frame
}

/// `E rho E^dag` for a frame `E` with as many columns as `rho` has rows.
pub fn embed(frame: &DMatrix<Complex64>, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let e = frame.columns(0, rho.nrows());
    e * rho * e.adjoint()
}
