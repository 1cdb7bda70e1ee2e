//! Exact dynamics for a finite set of modes in the energy-conserving
//! regimes: decoherence factors, reduced dimer and window states, and
//! entanglement spectra. First-order tunneling corrections live in
//! [`perturbation`].

pub mod perturbation;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    DimerInitialState, DiscreteModeSet, EntanglementSpectrum, FrequencyWindow, Matrix2c,
    QubitDensityMatrix, ReservoirBasis, ReservoirReducedState,
};

const RANGE_TOL: f64 = 1e-12;

/// `(1 - cos(omega t)) / omega^2`, using its Taylor series when
/// `omega t < 1e-4` to avoid cancellation.
pub fn one_minus_cos_over_sq(omega: f64, t: f64) -> f64 {
    let x = omega * t;
    if x.abs() < 1e-4 {
        0.5 * t * t * (1.0 - x * x / 12.0)
    } else {
        let s = (0.5 * x).sin() / omega;
        2.0 * s * s
    }
}

/// `-ln |s_J(t)|` of the X-model.
pub fn x_decoherence_exponent(modes: &DiscreteModeSet, window: &FrequencyWindow, t: f64) -> f64 {
    let lambda = modes.lambda();
    4.0 * lambda
        * lambda
        * modes
            .modes()
            .iter()
            .filter(|m| window.contains(m.omega))
            .map(|m| m.g.norm_sqr() * one_minus_cos_over_sq(m.omega, t))
            .sum::<f64>()
}

/// `|s_J(t)|` of the X-model; independent of the coherent amplitudes.
pub fn s_discrete_x(modes: &DiscreteModeSet, window: &FrequencyWindow, t: f64) -> f64 {
    (-x_decoherence_exponent(modes, window, t)).exp()
}

/// `s_J(t) = exp(-sum_{omega_j in J} |alpha_j|^2 (1 - e^{2 i lambda g_j t}))`
/// of the D-model.
pub fn s_discrete_d(modes: &DiscreteModeSet, window: &FrequencyWindow, t: f64) -> Complex64 {
    let lambda = modes.lambda();
    let exponent: Complex64 = modes
        .modes()
        .iter()
        .filter(|m| window.contains(m.omega))
        .map(|m| m.alpha.norm_sqr() * (1.0 - Complex64::from_polar(1.0, 2.0 * lambda * m.g.re * t)))
        .sum();
    (-exponent).exp()
}

/// Phase `4 lambda Im sum_j conj(alpha_j) g_j (1 - e^{i omega_j t}) / omega_j`
/// picked up by the X-model coherence from displaced reservoir states.
pub fn x_coherent_phase(modes: &DiscreteModeSet, t: f64) -> f64 {
    let sum: Complex64 = modes
        .modes()
        .iter()
        .map(|m| m.alpha.conj() * m.g * (1.0 - Complex64::from_polar(1.0, m.omega * t)) / m.omega)
        .sum();
    4.0 * modes.lambda() * sum.im
}

fn with_coherence(state: &DimerInitialState, coherence: Complex64) -> QubitDensityMatrix {
    let p = state.population();
    let m = Matrix2c::new(
        Complex64::new(p, 0.0),
        coherence,
        coherence.conj(),
        Complex64::new(1.0 - p, 0.0),
    );
    QubitDensityMatrix::new(m).expect("constant populations with a contracted coherence")
}

/// Reduced dimer state of the X-model. Populations are conserved; the
/// coherence is `e^{-i Omega t} |s(t)| e^{i phase(t)} c0`.
pub fn dimer_state_x(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    t: f64,
) -> QubitDensityMatrix {
    let s = s_discrete_x(modes, &FrequencyWindow::full(), t);
    let factor = Complex64::from_polar(s, x_coherent_phase(modes, t) - modes.dimer_frequency() * t);
    with_coherence(state, factor * state.coherence())
}

/// Reduced dimer state of the D-model with `V = mu = 0`; the coherence is
/// `e^{-i Omega t} conj(s(t)) c0`.
pub fn dimer_state_d0(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    t: f64,
) -> QubitDensityMatrix {
    let s = s_discrete_d(modes, &FrequencyWindow::full(), t);
    let factor = Complex64::from_polar(1.0, -modes.dimer_frequency() * t) * s.conj();
    with_coherence(state, factor * state.coherence())
}

/// Reduced state of a reservoir window in the basis `{Psi+, eta-hat}`,
/// where `Psi+-` are the window states conditioned on the dimer level and
/// `eta-hat` is the normalized part of `Psi-` orthogonal to `Psi+`.
///
/// For `|s| = 1` the basis degenerates and the rank-one limit `diag(1, 0)`
/// is returned.
pub fn reservoir_state_rank2(
    state: &DimerInitialState,
    s: Complex64,
) -> Result<ReservoirReducedState> {
    let s_abs2 = s.norm_sqr();
    if s_abs2 > 1.0 + RANGE_TOL {
        return Err(Error::Domain(format!("|s| = {} exceeds 1", s.norm())));
    }
    let p = state.population();
    let q = 1.0 - p;
    let gap = (1.0 - s_abs2).max(0.0);
    let off = q * s * gap.sqrt();
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(p + q * s_abs2.min(1.0), 0.0),
            off,
            off.conj(),
            Complex64::new(q * gap, 0.0),
        ],
    );
    ReservoirReducedState::new(m, ReservoirBasis::PlusMinus)
}

/// `r = sqrt(1 - 4 p (1 - p) (1 - |s|^2))`, the eigenvalue gap of the rank-two
/// reduced states.
pub fn r_parameter(p: f64, s_abs: f64) -> f64 {
    (1.0 - 4.0 * p * (1.0 - p) * (1.0 - s_abs * s_abs))
        .max(0.0)
        .sqrt()
}

fn clamp_unit(name: &str, x: f64) -> Result<f64> {
    if !(x >= -RANGE_TOL && x <= 1.0 + RANGE_TOL) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Spectrum `{1/2 +- r/2}` shared by the dimer and any reservoir window, and
/// its entropy.
pub fn entanglement_spectrum(p: f64, s_abs: f64) -> Result<EntanglementSpectrum> {
    let p = clamp_unit("p", p)?;
    let s_abs = clamp_unit("|s|", s_abs)?;
    let r = r_parameter(p, s_abs);
    EntanglementSpectrum::from_eigenvalues([0.5 + 0.5 * r, 0.5 - 0.5 * r])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CouplingParams, Mode};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{LN_2, PI};

    fn single_x(lambda: f64, alpha: Complex64) -> DiscreteModeSet {
        DiscreteModeSet::x_model(vec![Mode::new(1.0, 1.0, 0.0, alpha)], lambda, 1.0).unwrap()
    }

    fn single_d(lambda: f64, omega_dimer: f64) -> DiscreteModeSet {
        let p = CouplingParams {
            lambda,
            mu: 0.0,
            dimer_frequency: omega_dimer,
            tunneling: 0.0,
        };
        DiscreteModeSet::d_model(vec![Mode::new(1.0, 1.0, 0.0, Complex64::new(1.0, 0.0))], p)
            .unwrap()
    }

    fn half() -> DimerInitialState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DimerInitialState::new(Complex64::new(h, 0.0), Complex64::new(h, 0.0)).unwrap()
    }

    #[test]
    fn x_factor_examples() {
        let full = FrequencyWindow::full();
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(s_discrete_x(&single_x(0.0, zero), &full, 3.0), 1.0);
        assert_eq!(s_discrete_x(&single_x(0.5, zero), &full, 0.0), 1.0);
        assert_abs_diff_eq!(
            s_discrete_x(&single_x(0.5, zero), &full, PI),
            (-2.0f64).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn small_argument_branch_is_continuous() {
        let t = 1.0;
        let below = one_minus_cos_over_sq(0.999_999e-4, t);
        let above = one_minus_cos_over_sq(1.000_001e-4, t);
        assert!((below - above).abs() < 1e-12);
        assert_abs_diff_eq!(one_minus_cos_over_sq(0.0, 2.0), 2.0);
    }

    #[test]
    fn d_factor_examples() {
        let full = FrequencyWindow::full();
        assert_eq!(
            s_discrete_d(&single_d(0.5, 1.0), &full, 0.0),
            Complex64::new(1.0, 0.0)
        );
        let s = s_discrete_d(&single_d(0.5, 1.0), &full, PI);
        assert_abs_diff_eq!(s.re, (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dimer_x_example() {
        let rho = dimer_state_x(&half(), &single_x(0.5, Complex64::new(0.0, 0.0)), PI);
        assert_abs_diff_eq!(
            rho.coherence().re,
            -0.067_667_641_618_306_3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(rho.coherence().im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.population(), 0.5, epsilon = 1e-15);

        let free = dimer_state_x(&half(), &single_x(0.0, Complex64::new(0.3, 0.1)), 0.7);
        let expected = Complex64::from_polar(0.5, -0.7);
        assert!((free.coherence() - expected).norm() < 1e-15);
    }

    #[test]
    fn dimer_d0_example() {
        let rho = dimer_state_d0(&half(), &single_d(0.5, 0.0), PI);
        assert_abs_diff_eq!(rho.coherence().re, 0.067_667_641_618_306_3, epsilon = 1e-15);
        let rho0 = dimer_state_d0(&half(), &single_d(0.5, 1.0), 0.0);
        assert_eq!(rho0.matrix(), half().density_matrix().matrix());
    }

    #[test]
    fn rank2_examples() {
        let one = Complex64::new(1.0, 0.0);
        let r =
            reservoir_state_rank2(&DimerInitialState::from_population(0.3).unwrap(), one).unwrap();
        assert_eq!(r.entries()[(0, 0)], one);
        assert_eq!(r.entries()[(1, 1)].re, 0.0);
        let upper = DimerInitialState::from_population(1.0).unwrap();
        let r = reservoir_state_rank2(&upper, Complex64::new(0.2, 0.4)).unwrap();
        assert_eq!(r.entries()[(0, 0)], one);
        assert_eq!(r.entries()[(0, 1)].norm(), 0.0);
        let r = reservoir_state_rank2(&half(), Complex64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(r.entries()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.entries()[(1, 1)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rank2_spectrum_matches_closed_form() {
        let state = DimerInitialState::from_population(0.3).unwrap();
        let r = reservoir_state_rank2(&state, Complex64::from_polar(0.5, 1.1)).unwrap();
        let spec = r.spectrum().unwrap();
        let gap = r_parameter(0.3, 0.5);
        assert_abs_diff_eq!(gap, 0.608_276_253_029_822, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.eigenvalues()[0], 0.5 + 0.5 * gap, epsilon = 1e-14);
        assert_abs_diff_eq!(spec.eigenvalues()[1], 0.5 - 0.5 * gap, epsilon = 1e-14);
    }

    #[test]
    fn spectrum_examples() {
        let s = entanglement_spectrum(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(s.entropy(), LN_2, epsilon = 1e-15);
        assert_eq!(entanglement_spectrum(0.37, 1.0).unwrap().entropy(), 0.0);
        let s = entanglement_spectrum(0.5, (-0.2f64).exp()).unwrap();
        assert_abs_diff_eq!(
            s.eigenvalues()[0] - s.eigenvalues()[1],
            (-0.2f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.entropy(), 0.304_003_656_520, epsilon = 1e-11);
        assert!(entanglement_spectrum(1.1, 0.5).is_err());
        assert!(entanglement_spectrum(0.5, -0.01).is_err());
    }
}
