use num_complex::Complex64;

use super::spectral::SpectralModel;
use super::window::FrequencyWindow;
use crate::error::{Error, Result};

/// One reservoir oscillator: frequency, couplings and coherent amplitude.
///
/// `g` is complex so the X-model can carry complex couplings; the D-model
/// requires it to be real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub omega: f64,
    pub g: Complex64,
    pub f: f64,
    pub alpha: Complex64,
}

impl Mode {
    pub fn new(omega: f64, g: f64, f: f64, alpha: Complex64) -> Self {
        Self {
            omega,
            g: Complex64::new(g, 0.0),
            f,
            alpha,
        }
    }

    pub fn with_complex_coupling(omega: f64, g: Complex64, alpha: Complex64) -> Self {
        Self {
            omega,
            g,
            f: 0.0,
            alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interaction {
    /// `lambda sigma_z (g a^dag + conj(g) a)`: dephasing by displacement.
    X,
    /// `lambda sigma_z g a^dag a + mu sigma_x f a^dag a`: density coupling.
    D,
}

/// Coupling constants of the D-model Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub lambda: f64,
    pub mu: f64,
    /// Dimer splitting `Omega`.
    pub dimer_frequency: f64,
    /// Tunneling `V`.
    pub tunneling: f64,
}

/// A finite reservoir together with the Hamiltonian's coupling constants.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteModeSet {
    modes: Vec<Mode>,
    interaction: Interaction,
    params: CouplingParams,
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModes(format!("{name} = {x} is not finite")))
    }
}

impl DiscreteModeSet {
    /// X-model reservoir. `mu` and `V` are zero by construction.
    pub fn x_model(modes: Vec<Mode>, lambda: f64, dimer_frequency: f64) -> Result<Self> {
        let params = CouplingParams {
            lambda,
            mu: 0.0,
            dimer_frequency,
            tunneling: 0.0,
        };
        Self::validated(modes, Interaction::X, params)
    }

    pub fn d_model(modes: Vec<Mode>, params: CouplingParams) -> Result<Self> {
        Self::validated(modes, Interaction::D, params)
    }

    fn validated(
        modes: Vec<Mode>,
        interaction: Interaction,
        params: CouplingParams,
    ) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidModes("need at least one mode".into()));
        }
        check_finite("lambda", params.lambda)?;
        if !(params.dimer_frequency >= 0.0 && params.dimer_frequency.is_finite()) {
            return Err(Error::InvalidModes(format!(
                "dimer frequency {} must be finite and nonnegative",
                params.dimer_frequency
            )));
        }
        if !(params.mu >= 0.0 && params.mu.is_finite()) {
            return Err(Error::InvalidModes(format!(
                "mu = {} must be >= 0",
                params.mu
            )));
        }
        if !(params.tunneling >= 0.0 && params.tunneling.is_finite()) {
            return Err(Error::InvalidModes(format!(
                "V = {} must be >= 0",
                params.tunneling
            )));
        }
        for (j, m) in modes.iter().enumerate() {
            if !(m.omega > 0.0 && m.omega.is_finite()) {
                return Err(Error::InvalidModes(format!(
                    "mode {j}: omega = {} must be > 0",
                    m.omega
                )));
            }
            check_finite("g", m.g.norm())?;
            check_finite("alpha", m.alpha.norm())?;
            if interaction == Interaction::D {
                if m.g.im != 0.0 || !(m.g.re > 0.0) {
                    return Err(Error::InvalidModes(format!(
                        "mode {j}: D-model coupling g = {} must be real and positive",
                        m.g
                    )));
                }
                if !(m.f >= 0.0 && m.f.is_finite()) {
                    return Err(Error::InvalidModes(format!(
                        "mode {j}: f = {} must be >= 0",
                        m.f
                    )));
                }
            }
        }
        Ok(Self {
            modes,
            interaction,
            params,
        })
    }

    /// X-model modes at the midpoints of `n` equal cells of `[lo, hi]`, with
    /// `|g_j|^2 = h_X(omega_j) * d_omega` and vacuum initial state, so that
    /// mode sums approach the frequency integrals.
    pub fn sample_x(
        model: &SpectralModel,
        lo: f64,
        hi: f64,
        n: usize,
        lambda: f64,
        dimer_frequency: f64,
    ) -> Result<Self> {
        let modes = midpoints(lo, hi, n)?
            .map(|(w, dw)| Mode::new(w, (model.h(w) * dw).sqrt(), 0.0, Complex64::new(0.0, 0.0)))
            .collect();
        Self::x_model(modes, lambda, dimer_frequency)
    }

    /// D-model modes at cell midpoints with `|alpha_j|^2 = h_D(omega_j) d_omega`,
    /// `g_j = g(omega_j)` and `f_j = f(omega_j)`.
    pub fn sample_d(
        model: &SpectralModel,
        lo: f64,
        hi: f64,
        n: usize,
        params: CouplingParams,
    ) -> Result<Self> {
        let modes = midpoints(lo, hi, n)?
            .map(|(w, dw)| {
                let a = (model.h(w) * dw).sqrt();
                Mode::new(w, model.g.eval(w), model.f.eval(w), Complex64::new(a, 0.0))
            })
            .collect();
        Self::d_model(modes, params)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn interaction(&self) -> Interaction {
        self.interaction
    }

    pub fn params(&self) -> CouplingParams {
        self.params
    }

    pub fn lambda(&self) -> f64 {
        self.params.lambda
    }

    pub fn mu(&self) -> f64 {
        self.params.mu
    }

    pub fn dimer_frequency(&self) -> f64 {
        self.params.dimer_frequency
    }

    pub fn tunneling(&self) -> f64 {
        self.params.tunneling
    }

    /// Same reservoir with different coupling constants (validated again).
    pub fn with_params(&self, params: CouplingParams) -> Result<Self> {
        Self::validated(self.modes.clone(), self.interaction, params)
    }

    /// Indices of the modes whose frequency lies in `window`, in input order.
    pub fn window_mode_indices(&self, window: &FrequencyWindow) -> Vec<usize> {
        self.modes
            .iter()
            .enumerate()
            .filter(|(_, m)| window.contains(m.omega))
            .map(|(j, _)| j)
            .collect()
    }

    /// `sum_j |alpha_j|^2` over the given indices.
    pub fn occupation(&self, indices: &[usize]) -> f64 {
        indices
            .iter()
            .map(|&j| self.modes[j].alpha.norm_sqr())
            .sum()
    }

    pub fn total_occupation(&self) -> f64 {
        self.modes.iter().map(|m| m.alpha.norm_sqr()).sum()
    }
}

fn midpoints(lo: f64, hi: f64, n: usize) -> Result<impl Iterator<Item = (f64, f64)>> {
    if n == 0 || !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidModes(format!(
            "cannot sample {n} modes on [{lo}, {hi}]"
        )));
    }
    let dw = (hi - lo) / n as f64;
    Ok((0..n).map(move |j| (lo + (j as f64 + 0.5) * dw, dw)))
}
