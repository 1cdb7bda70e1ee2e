//! Continuous-mode limit: decoherence factors as frequency integrals over a
//! spectral density, decay rates, plateaus, window bounds, the partial
//! decoherence time and first-order spectra.

pub mod closed_form;

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::discrete::{one_minus_cos_over_sq, perturbation::eta_from_extremes};
use crate::error::{Error, Result};
use crate::model::{
    CouplingFn, DimerInitialState, EntanglementSpectrum, FrequencyWindow, Interaction,
    SpectralModel,
};
use crate::quadrature::{integrate_panels, panel_points, QuadOptions};

pub use closed_form::{
    q2_closed_form, q2_quadrature, q2_split, q2_window, q2_window_asymptote, sd_asymptotic,
    sd_closed_form,
};

/// Relative envelope level at which semi-infinite tails are cut.
const TAIL_CUT: f64 = 1e-16;
/// Panels are at most this fraction of the support wide, so that smooth
/// densities are resolved even without oscillation.
const SUPPORT_PANELS: f64 = 64.0;
/// More panels than this means the requested time is out of reach.
const MAX_PANELS: usize = 20_000_000;

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-12,
        max_subdivisions: 200_000,
    }
}

/// Pieces of `window` where the density can be nonzero, cut at the
/// effective support.
fn window_pieces(model: &SpectralModel, window: &FrequencyWindow) -> (Vec<(f64, f64)>, f64) {
    let top = model.density.effective_upper_limit(TAIL_CUT);
    (window.clip(0.0, top), top)
}

fn check_panels(n: f64, lo: f64, hi: f64) -> Result<usize> {
    if !(n <= MAX_PANELS as f64) {
        return Err(Error::QuadratureFailure {
            lo,
            hi,
            error: f64::INFINITY,
        });
    }
    Ok(n as usize)
}

/// `4 lambda^2 int_J h(omega) (1 - cos(omega t)) / omega^2 d omega`, i.e.
/// `-ln |s_J(t)|` of the X-model.
pub fn x_decoherence_exponent(
    model: &SpectralModel,
    window: &FrequencyWindow,
    lambda: f64,
    t: f64,
) -> Result<f64> {
    if lambda == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    let (pieces, top) = window_pieces(model, window);
    let breaks = model.density.breakpoints();
    let mut total = 0.0;
    for (lo, hi) in pieces {
        let width = (FRAC_PI_4 / t.abs()).min(top / SUPPORT_PANELS);
        check_panels((hi - lo) / width, lo, hi)?;
        let pts = panel_points(lo, hi, width, &breaks);
        let r = integrate_panels(
            |w| model.h(w) * one_minus_cos_over_sq(w, t),
            &pts,
            quad_opts(),
        )?;
        total += r.value;
    }
    Ok(4.0 * lambda * lambda * total)
}

/// `|s_J(t)| = exp(-4 lambda^2 int_J h_X (1 - cos(omega t)) / omega^2)`.
pub fn s_continuum_x(
    model: &SpectralModel,
    window: &FrequencyWindow,
    lambda: f64,
    t: f64,
) -> Result<f64> {
    Ok((-x_decoherence_exponent(model, window, lambda, t)?).exp())
}

/// Panel boundaries on `[lo, hi]` at which the phase `rate * g(omega)`
/// advances by at most `pi/4`, merged with a uniform grid of width `width`.
fn phase_points(
    g: &CouplingFn,
    rate: f64,
    lo: f64,
    hi: f64,
    width: f64,
    breaks: &[f64],
) -> Result<Vec<f64>> {
    let mut pts = panel_points(lo, hi, width, breaks);
    if rate != 0.0 && g.is_invertible() {
        let (y0, y1) = (g.eval(lo), g.eval(hi));
        let n = check_panels(((y1 - y0) * rate).abs() / FRAC_PI_4, lo, hi)?.max(1);
        let step = (y1 - y0) / n as f64;
        pts.extend((1..n).filter_map(|i| g.inverse(y0 + i as f64 * step)));
        pts.retain(|&w| w >= lo && w <= hi);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
    } else if rate != 0.0 {
        // non-monotone g: bound the local phase rate on a grid
        let probe = panel_points(lo, hi, width / 16.0, &[]);
        let max_slope = probe
            .iter()
            .map(|&w| g.derivative(w).abs())
            .fold(0.0, f64::max);
        if max_slope > 0.0 {
            let fine = FRAC_PI_4 / (rate.abs() * max_slope);
            check_panels((hi - lo) / fine, lo, hi)?;
            pts = panel_points(lo, hi, fine.min(width), breaks);
        }
    }
    Ok(pts)
}

/// `int_J h_D(omega) e^{i rate g(omega)} d omega` with phase-adapted panels.
fn oscillatory_integral(
    model: &SpectralModel,
    window: &FrequencyWindow,
    rate: f64,
) -> Result<Complex64> {
    let (pieces, top) = window_pieces(model, window);
    let breaks = model.density.breakpoints();
    let g = model.g;
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in pieces {
        let pts = phase_points(&g, rate, lo, hi, top / SUPPORT_PANELS, &breaks)?;
        let r = integrate_panels(
            |w| model.h(w) * Complex64::from_polar(1.0, rate * g.eval(w)),
            &pts,
            quad_opts(),
        )?;
        total += r.value;
    }
    Ok(total)
}

/// `int_J h_D(omega) d omega`.
pub fn window_weight(model: &SpectralModel, window: &FrequencyWindow) -> Result<f64> {
    let (pieces, top) = window_pieces(model, window);
    let breaks = model.density.breakpoints();
    let mut total = 0.0;
    for (lo, hi) in pieces {
        let pts = panel_points(lo, hi, top / SUPPORT_PANELS, &breaks);
        total += integrate_panels(|w| model.h(w), &pts, quad_opts())?.value;
    }
    Ok(total)
}

/// `s_J(t) = exp(-int_J h_D(omega) [1 - e^{2 i lambda g(omega) t}] d omega)`.
pub fn s_continuum_d(
    model: &SpectralModel,
    window: &FrequencyWindow,
    lambda: f64,
    t: f64,
) -> Result<Complex64> {
    if t == 0.0 || window.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let weight = window_weight(model, window)?;
    let osc = oscillatory_integral(model, window, 2.0 * lambda * t)?;
    Ok((osc - weight).exp())
}

/// Large-`t` limit `exp(-int_J h_D)` of `|s_J(t)|` in the D-model.
pub fn d_plateau(model: &SpectralModel, window: &FrequencyWindow) -> Result<f64> {
    Ok((-window_weight(model, window)?).exp())
}

/// Full-decoherence rate `2 pi lambda^2 h_X(0)` of the X-model.
pub fn x_decay_rate(model: &SpectralModel, lambda: f64) -> Result<f64> {
    let h0 = model.density.value_at_zero();
    if !h0.is_finite() {
        return Err(Error::Domain(
            "density is not continuous at zero frequency".into(),
        ));
    }
    Ok(2.0 * PI * lambda * lambda * h0)
}

/// Minimum and maximum of `f` on `[lo, hi]`: a 4096-cell midpoint grid,
/// points just inside both ends, and a golden-section polish around the
/// best grid points. Approximate for adversarial functions.
pub fn extremes(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const CELLS: usize = 4096;
    let step = (hi - lo) / CELLS as f64;
    let inset = (hi - lo) * 1e-12;
    let mut xs: Vec<f64> = (0..CELLS).map(|i| lo + (i as f64 + 0.5) * step).collect();
    xs.push(lo + inset);
    xs.push(hi - inset);
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let pick = |better: &dyn Fn(f64, f64) -> bool| {
        let mut k = 0;
        for i in 1..vals.len() {
            if better(vals[i], vals[k]) {
                k = i;
            }
        }
        let (mut a, mut b) = (
            (xs[k] - step).max(lo + inset),
            (xs[k] + step).min(hi - inset),
        );
        let mut best = vals[k];
        let r = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            let (fc, fd) = (f(c), f(d));
            if better(fc, best) {
                best = fc;
            }
            if better(fd, best) {
                best = fd;
            }
            if better(fc, fd) {
                b = d;
            } else {
                a = c;
            }
        }
        best
    };
    (pick(&|x, y| x < y), pick(&|x, y| x > y))
}

/// Bounds `(lower, upper)` on `|s_J(t)|` for `J = [omega0, omega1]` from the
/// extreme values `m_J`, `M_J` of `h_X` on the window:
/// `exp(-4 lambda^2 M_J (omega1 - omega0 + 2/t) / omega0^2) <= |s_J| <=
/// exp(-4 lambda^2 m_J (omega1 - omega0 - 2/t) / omega1^2)`, clamped to `[0, 1]`.
pub fn window_bounds_x(
    model: &SpectralModel,
    omega0: f64,
    omega1: f64,
    lambda: f64,
    t: f64,
) -> Result<(f64, f64)> {
    if !(omega0 > 0.0 && omega1 > omega0 && omega1.is_finite()) {
        return Err(Error::InvalidWindow(format!(
            "need 0 < omega0 < omega1 < inf, got {omega0}, {omega1}"
        )));
    }
    if lambda == 0.0 {
        return Ok((1.0, 1.0));
    }
    if !(t > 0.0) {
        return Ok((0.0, 1.0));
    }
    let (m, big_m) = extremes(|w| model.h(w), omega0, omega1);
    let l2 = 4.0 * lambda * lambda;
    let width = omega1 - omega0;
    let lower = (-l2 * big_m * (width + 2.0 / t) / (omega0 * omega0)).exp();
    let upper = (-l2 * m * (width - 2.0 / t) / (omega1 * omega1)).exp();
    Ok((lower.clamp(0.0, 1.0), upper.clamp(0.0, 1.0)))
}

fn check_coupling(g: &CouplingFn) -> Result<()> {
    if !g.is_invertible() {
        return Err(Error::NonInvertibleCoupling(format!("{g:?} is constant")));
    }
    if g.exponent > 1.0 {
        return Err(Error::NonInvertibleCoupling(format!("{g:?} has g'(0) = 0")));
    }
    Ok(())
}

/// `xi = d/dy [h(g^{-1}(y)) / g'(g^{-1}(y))]` at `y = g(0)`.
///
/// The derivative sits at the edge of the range of `g`, so it is taken by
/// a one-sided second-order difference with one Richardson step.
pub fn xi_coefficient(model: &SpectralModel) -> Result<f64> {
    let g = model.g;
    check_coupling(&g)?;
    let y0 = g.eval(0.0);
    let direction = g.scale.signum();
    let transported = |y: f64| -> f64 {
        let w = g.inverse(y).unwrap_or(0.0);
        let slope = g.derivative(w);
        if slope.is_infinite() {
            0.0
        } else {
            model.h(w) / slope
        }
    };
    let f0 = if g.exponent < 1.0 {
        0.0
    } else {
        model.density.value_at_zero() / g.derivative(0.0)
    };
    let diff = |step: f64| {
        let h = direction * step;
        (-3.0 * f0 + 4.0 * transported(y0 + h) - transported(y0 + 2.0 * h)) / (2.0 * h)
    };
    let step = 1e-5 * y0.abs().max(1.0);
    Ok((4.0 * diff(0.5 * step) - diff(step)) / 3.0)
}

/// `t_pd = sqrt|xi| / lambda`.
pub fn partial_decoherence_time(xi: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("need lambda > 0, got {lambda}")));
    }
    Ok(xi.abs().sqrt() / lambda)
}

/// Two leading terms of `int_0^inf h(omega) e^{-2 i t lambda g(omega)} d omega`
/// for large `t lambda`:
/// `e^{-2 i t lambda g(0)} [-i h(0) / (2 t lambda g'(0)) - xi / (4 t^2 lambda^2)]`.
pub fn d_asymptotic_expansion(model: &SpectralModel, lambda: f64, t: f64) -> Result<Complex64> {
    let xi = xi_coefficient(model)?;
    let t_pd = partial_decoherence_time(xi, lambda)?;
    if !(t > 3.0 * t_pd) {
        return Err(Error::Regime(format!(
            "t = {t} must exceed 3 t_pd = {}",
            3.0 * t_pd
        )));
    }
    let g = model.g;
    let kappa = 2.0 * t * lambda;
    let slope = g.derivative(0.0);
    let leading = if slope.is_infinite() {
        0.0
    } else {
        model.density.value_at_zero() / (kappa * slope)
    };
    let phase = Complex64::from_polar(1.0, -kappa * g.eval(0.0));
    Ok(phase * Complex64::new(-xi / (kappa * kappa), -leading))
}

/// Magnitude `h(0) / (2 t lambda g'(0))` of the leading oscillatory term.
pub fn d_leading_envelope(model: &SpectralModel, lambda: f64, t: f64) -> f64 {
    let slope = model.g.derivative(0.0);
    model.density.value_at_zero() / (2.0 * t * lambda * slope)
}

/// First-order shift of the eigenvalue gap of a window state,
/// `2 (1 - 2p) e^{-int_0^inf h_D} / r_J Re[c0 (1 - e^{-i t Omega}) (1 - conj(s_J))]`.
pub fn r1_continuum(
    state: &DimerInitialState,
    model: &SpectralModel,
    s_j: Complex64,
    r_j: f64,
    omega: f64,
    t: f64,
) -> Result<f64> {
    if r_j < 1e-12 {
        return Err(Error::SingularDenominator(format!("r_J = {r_j}")));
    }
    let p = state.population();
    let plateau = d_plateau(model, &FrequencyWindow::full())?;
    let z = state.coherence() * (1.0 - Complex64::from_polar(1.0, -t * omega)) * (1.0 - s_j.conj());
    Ok(2.0 * (1.0 - 2.0 * p) * plateau / r_j * z.re)
}

/// Spectrum `{1/2 +- [r_J - (V/Omega) r1] / 2}`, with an extra zero
/// eigenvalue when `with_zero` is set (the window case).
pub fn perturbed_spectrum(
    r_j: f64,
    r1: f64,
    v: f64,
    omega: f64,
    with_zero: bool,
) -> Result<EntanglementSpectrum> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("need Omega > 0, got {omega}")));
    }
    let r = r_j - v / omega * r1;
    if !(-1e-9..=1.0 + 1e-9).contains(&r) {
        return Err(Error::Domain(format!("corrected gap {r} outside [0, 1]")));
    }
    let r = r.clamp(0.0, 1.0);
    let mut eig = vec![0.5 + 0.5 * r, 0.5 - 0.5 * r];
    if with_zero {
        eig.push(0.0);
    }
    EntanglementSpectrum::from_eigenvalues(eig)
}

/// Energy-exchange parameter from `sup f` and `inf g` over the support of
/// the density.
pub fn eta_continuum(model: &SpectralModel, v: f64, omega: f64, lambda: f64, mu: f64) -> f64 {
    let top = model.density.effective_upper_limit(TAIL_CUT);
    let (_, sup_f) = extremes(|w| model.f.eval(w), 0.0, top);
    let (inf_g, _) = extremes(|w| model.g.eval(w), 0.0, top);
    let inf_g = inf_g.min(model.g.eval(0.0)).min(model.g.eval(top));
    let sup_f = sup_f.max(model.f.eval(0.0)).max(model.f.eval(top));
    eta_from_extremes(v, omega, lambda, mu, sup_f, inf_g)
}

/// Summary of a decoherence factor and its long-time characteristics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    pub s_abs: f64,
    /// X-model full-decoherence rate, when `h_X(0)` is finite.
    pub asymptotic_rate: Option<f64>,
    /// D-model plateau of `|s_J|`.
    pub plateau: Option<f64>,
    pub xi: Option<f64>,
    pub t_pd: Option<f64>,
}

pub fn decay_report(
    model: &SpectralModel,
    interaction: Interaction,
    window: &FrequencyWindow,
    lambda: f64,
    t: f64,
) -> Result<DecayReport> {
    match interaction {
        Interaction::X => Ok(DecayReport {
            s_abs: s_continuum_x(model, window, lambda, t)?,
            asymptotic_rate: x_decay_rate(model, lambda).ok(),
            plateau: None,
            xi: None,
            t_pd: None,
        }),
        Interaction::D => {
            let xi = xi_coefficient(model).ok();
            let t_pd = match xi {
                Some(x) if lambda > 0.0 => Some(partial_decoherence_time(x, lambda)?),
                _ => None,
            };
            Ok(DecayReport {
                s_abs: s_continuum_d(model, window, lambda, t)?.norm(),
                asymptotic_rate: None,
                plateau: Some(d_plateau(model, window)?),
                xi,
                t_pd,
            })
        }
    }
}
