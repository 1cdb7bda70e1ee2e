//! First-order corrections in `V / Omega` for the D-model with small
//! tunneling, and the error budget of the expansion.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{reservoir_state_rank2, s_discrete_d};
use crate::error::{Error, Result};
use crate::model::{
    DimerInitialState, DiscreteModeSet, FrequencyWindow, Matrix2c, QubitDensityMatrix,
    ReservoirBasis, ReservoirReducedState, SpectralModel,
};
use crate::quadrature::{integrate_panels, panel_points, QuadOptions};

/// Ratios above this count as violating a "much smaller than" condition.
pub const DEFAULT_REGIME_THRESHOLD: f64 = 0.1;

const DEGENERACY_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Traceless Hermitian first-order dimer correction `rho^1_S(t)`.
pub fn dimer_first_order(state: &DimerInitialState, omega: f64, t: f64) -> Matrix2c {
    let c0 = state.coherence();
    let w = 1.0 - Complex64::from_polar(1.0, -omega * t);
    let diag = (w * c0).re;
    let off = (state.population() - 0.5) * w;
    Matrix2c::new(c(diag), off, off.conj(), c(-diag))
}

/// Refined correction in which the precession frequency is
/// `sqrt(Omega^2 + V^2)`; equals [`dimer_first_order`] at `V = 0`.
pub fn dimer_first_order_refined(
    state: &DimerInitialState,
    omega: f64,
    v: f64,
    t: f64,
) -> Matrix2c {
    let c0 = state.coherence();
    let shifted = Complex64::from_polar(1.0, -t * omega.hypot(v));
    let bare = Complex64::from_polar(1.0, -omega * t);
    let diag = (c0 * (1.0 - shifted)).re;
    let off = (shifted - bare) * c0 + (state.population() - 0.5) * (1.0 - shifted);
    Matrix2c::new(c(diag), off, off.conj(), c(-diag))
}

/// `rho0 + (V/Omega) e^{-sum |alpha_j|^2} rho1`.
///
/// Hermitian with unit trace, but a truncated expansion need not be
/// positive, so the result is a plain matrix.
pub fn assemble_perturbed_dimer(
    rho0: &QubitDensityMatrix,
    rho1: &Matrix2c,
    v: f64,
    omega: f64,
    modes: &DiscreteModeSet,
) -> Result<Matrix2c> {
    if !(omega > 0.0) || !(v >= 0.0) {
        return Err(Error::Domain(format!(
            "need Omega > 0 and V >= 0, got {omega}, {v}"
        )));
    }
    let weight = v / omega * (-modes.total_occupation()).exp();
    Ok(rho0.matrix() + rho1 * c(weight))
}

/// Parameters of the window correction: `(delta_J, v_J, s_J)`.
fn window_parameters(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    window: &FrequencyWindow,
    t: f64,
) -> (f64, Complex64, Complex64) {
    let inside = modes.window_mode_indices(window);
    let occ_in = modes.occupation(&inside);
    let occ_out = modes.total_occupation() - occ_in;
    let delta = (-occ_in).exp();
    let v = 0.5
        * (1.0 - Complex64::from_polar(1.0, -modes.dimer_frequency() * t))
        * state.coherence()
        * (-occ_out).exp();
    (delta, v, s_discrete_d(modes, window, t))
}

/// Traceless Hermitian 3x3 first-order correction `rho^1_J(t)` for the
/// window state, in the basis `{Psi+, eta-hat, e3}` with `e3` the part of
/// the window vacuum orthogonal to the other two.
///
/// Returns the zero matrix when the correction vanishes identically
/// (`v_J = 0`, e.g. at `t = 0` or without initial coherence) and
/// [`Error::DegenerateBasis`] when `|s_J| = 1` otherwise.
pub fn reservoir_first_order(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    window: &FrequencyWindow,
    t: f64,
) -> Result<ReservoirReducedState> {
    let (delta, v, s) = window_parameters(state, modes, window, t);
    if v.norm() == 0.0 {
        return ReservoirReducedState::new(DMatrix::zeros(3, 3), ReservoirBasis::PlusMinusVacuum);
    }
    let gap = 1.0 - s.norm_sqr();
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateBasis { s_abs: s.norm() });
    }
    let root = gap.sqrt();
    let norm = (1.0 - 2.0 * delta * (1.0 - s.re) / gap).max(0.0).sqrt();
    let vb = v.conj();
    let d11 = 2.0 * (vb * (1.0 - s)).re;
    let e12 = (v - vb * s) * (1.0 - s) / root - v * root;
    let scale = norm / delta.sqrt();
    let e13 = scale * (v - s * vb);
    let e23 = -root * vb * scale;
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            c(d11),
            e12,
            e13,
            e12.conj(),
            c(-d11),
            e23,
            e13.conj(),
            e23.conj(),
            c(0.0),
        ],
    );
    ReservoirReducedState::new(m, ReservoirBasis::PlusMinusVacuum)
}

/// The rank-two window state padded with a zero third row and column, plus
/// `(V/Omega) delta_J rho^1_J`.
pub fn assemble_perturbed_reservoir(
    state: &DimerInitialState,
    modes: &DiscreteModeSet,
    window: &FrequencyWindow,
    t: f64,
) -> Result<DMatrix<Complex64>> {
    let omega = modes.dimer_frequency();
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("need Omega > 0, got {omega}")));
    }
    let (delta, _, s) = window_parameters(state, modes, window, t);
    let rank2 = reservoir_state_rank2(state, s)?;
    let mut m = DMatrix::zeros(3, 3);
    m.view_mut((0, 0), (2, 2)).copy_from(rank2.entries());
    let rho1 = reservoir_first_order(state, modes, window, t)?;
    Ok(m + rho1.entries() * c(modes.tunneling() / omega * delta))
}

/// Energy-exchange smallness parameter from the extreme couplings:
/// `mu sup f / (lambda inf g)` if `mu Omega sup f >= lambda V inf g`,
/// otherwise `(V + 2 mu sup f) / (Omega + 2 lambda inf g)`.
pub fn eta_from_extremes(v: f64, omega: f64, lambda: f64, mu: f64, sup_f: f64, inf_g: f64) -> f64 {
    if mu * omega * sup_f >= lambda * v * inf_g {
        if mu * sup_f == 0.0 {
            0.0
        } else {
            mu * sup_f / (lambda * inf_g)
        }
    } else {
        (v + 2.0 * mu * sup_f) / (omega + 2.0 * lambda * inf_g)
    }
}

/// [`eta_from_extremes`] with `max_j f_j` and `min_j g_j` of the mode set.
pub fn eta_parameter(modes: &DiscreteModeSet) -> f64 {
    let sup_f = modes.modes().iter().map(|m| m.f).fold(0.0, f64::max);
    let inf_g = modes
        .modes()
        .iter()
        .map(|m| m.g.re)
        .fold(f64::INFINITY, f64::min);
    let p = modes.params();
    eta_from_extremes(p.tunneling, p.dimer_frequency, p.lambda, p.mu, sup_f, inf_g)
}

/// `C_alpha = int_0^inf h_D(omega) f(omega) d omega`.
pub fn c_alpha(model: &SpectralModel) -> Result<f64> {
    let f = model.f;
    if f.offset == 0.0 && (f.scale == 0.0 || f.exponent == 0.0) && f.eval(1.0) == 0.0 {
        return Ok(0.0);
    }
    let top = model.density.effective_upper_limit(1e-16);
    let width = top / 64.0;
    let pts = panel_points(0.0, top, width, &model.density.breakpoints());
    let r = integrate_panels(|w| model.h(w) * f.eval(w), &pts, QuadOptions::default())?;
    Ok(r.value)
}

/// Inputs of the error budget of the first-order expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetInputs {
    pub v: f64,
    pub omega: f64,
    pub lambda: f64,
    pub mu: f64,
    pub eta: f64,
    pub xi: f64,
    pub c_alpha: f64,
    /// `sup_omega f(omega)`, needed only for the regime check.
    pub sup_f: f64,
    /// `inf_omega g(omega)`, needed only for the regime check.
    pub inf_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// `V^2/Omega^2 + eta + sqrt|xi| eta V / lambda + sqrt|xi| eta mu C_alpha / lambda`.
    pub b1: f64,
    /// `V / Omega`, `sqrt|xi| V^2 / (lambda Omega)` and
    /// `mu Omega sup f / (lambda V inf g)`.
    pub ratios: [f64; 3],
    /// All three ratios below the threshold.
    pub valid: bool,
}

pub fn b1_budget(inputs: &BudgetInputs, threshold: f64) -> Result<Budget> {
    let BudgetInputs {
        v,
        omega,
        lambda,
        mu,
        eta,
        xi,
        c_alpha,
        sup_f,
        inf_g,
    } = *inputs;
    if !(lambda > 0.0) || !(omega > 0.0) {
        return Err(Error::Domain(format!(
            "need lambda > 0 and Omega > 0, got {lambda}, {omega}"
        )));
    }
    let root = xi.abs().sqrt();
    let b1 = v * v / (omega * omega)
        + eta
        + root * eta * v / lambda
        + root * eta * mu * c_alpha / lambda;
    let exchange = mu * omega * sup_f;
    let third = if exchange == 0.0 {
        0.0
    } else {
        exchange / (lambda * v * inf_g)
    };
    let ratios = [v / omega, root * v * v / (lambda * omega), third];
    let valid = ratios.iter().all(|&r| r < threshold);
    Ok(Budget { b1, ratios, valid })
}
