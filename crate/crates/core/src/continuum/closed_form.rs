//! Closed forms for the power-law X-model exponent, the sine-integral form
//! of a frequency window, and the incomplete-gamma form of the D-model
//! factor with a flat density.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::discrete::one_minus_cos_over_sq;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_panels, panel_points, QuadOptions};
use crate::special::{gamma, lower_incomplete_gamma, sine_integral};

/// `Q2(tau) = int_0^inf z^{2q} e^{-z} (1 - cos(tau z)) dz` in closed form:
/// `Gamma(2q+1) Re[1 - (1 + i tau)^{-(2q+1)}]` for `q > -1/2` and
/// `tau atan(tau) - ln(1 + tau^2) / 2` for `q = -1`.
pub fn q2_closed_form(q: f64, tau: f64) -> Result<f64> {
    if q == -1.0 {
        return Ok(tau * tau.atan() - 0.5 * (tau * tau).ln_1p());
    }
    if !(q > -0.5) {
        return Err(Error::UnsupportedExponent(q));
    }
    let a = 2.0 * q + 1.0;
    // (1 + i tau)^{-a} = e^{x + i y}; Re(1 - e^{x+iy}) without cancellation
    let x = -0.5 * a * (tau * tau).ln_1p();
    let y = -a * tau.atan();
    let half = (0.5 * y).sin();
    let re = -(x.exp_m1() * y.cos() - 2.0 * half * half);
    Ok(gamma(a)? * re)
}

fn q2_integrand(q: f64, tau: f64) -> impl Fn(f64) -> f64 {
    let m = 2.0 * q + 2.0;
    move |z: f64| {
        if z <= 0.0 {
            return if m == 0.0 { 0.5 * tau * tau } else { 0.0 };
        }
        (m * z.ln() - z).exp() * one_minus_cos_over_sq(z, tau)
    }
}

/// `int_lo^hi z^{2q} e^{-z} (1 - cos(tau z)) dz` by quadrature; `hi` may be
/// infinite, in which case the tail is cut where `z^{2q+2} e^{-z}` drops
/// below 1e-17 of its peak.
pub fn q2_quadrature(q: f64, tau: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(q > -1.5) {
        return Err(Error::UnsupportedExponent(q));
    }
    if !(lo >= 0.0) || hi < lo {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    let m = 2.0 * q + 2.0;
    let peak = m.max(1.0);
    let log_env = |z: f64| m * z.ln() - z;
    let mut cut = 2.0 * peak + 10.0;
    while log_env(cut) > log_env(peak) + (1e-17f64).ln() {
        cut *= 1.5;
    }
    let hi = hi.min(cut);
    if hi <= lo {
        return Ok(0.0);
    }
    let width = (std::f64::consts::FRAC_PI_4 / tau.max(1e-300)).min(2.0);
    let pts = panel_points(lo, hi, width, &[peak]);
    Ok(integrate_panels(q2_integrand(q, tau), &pts, QuadOptions::default())?.value)
}

/// Low- and high-frequency parts `(int_0^z0, int_z0^inf)` of `Q2(tau)`.
pub fn q2_split(q: f64, tau: f64, z0: f64) -> Result<(f64, f64)> {
    if !(z0 > 0.0) {
        return Err(Error::Domain(format!("split point {z0} must be positive")));
    }
    Ok((
        q2_quadrature(q, tau, 0.0, z0)?,
        q2_quadrature(q, tau, z0, f64::INFINITY)?,
    ))
}

/// `(2/pi) int_nu0^nu1 (1 - cos(tau z)) / z^2 dz` through the sine integral.
pub fn q2_window(nu0: f64, nu1: f64, tau: f64) -> Result<f64> {
    if !(nu0 > 0.0 && nu1 > nu0) {
        return Err(Error::Domain(format!(
            "need 0 < nu0 < nu1, got {nu0}, {nu1}"
        )));
    }
    let s0 = (0.5 * nu0 * tau).sin();
    let s1 = (0.5 * nu1 * tau).sin();
    Ok(
        2.0 * tau / PI * (sine_integral(nu1 * tau) - sine_integral(nu0 * tau))
            + 4.0 / PI * (s0 * s0 / nu0 - s1 * s1 / nu1),
    )
}

/// Large-`tau` limit `(2/pi) (nu1 - nu0) / (nu0 nu1)` of [`q2_window`].
pub fn q2_window_asymptote(nu0: f64, nu1: f64) -> f64 {
    2.0 / PI * (nu1 - nu0) / (nu0 * nu1)
}

fn sd_check(mu: f64, k: f64, tau: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) || !(mu > 0.0 && mu.is_finite()) || !(tau >= 0.0) {
        return Err(Error::Domain(format!(
            "need k > 0, mu > 0, tau >= 0; got {k}, {mu}, {tau}"
        )));
    }
    Ok(())
}

/// `|s(tau)|` of the D-model with a flat density and `g ~ omega^k`:
/// `exp{-eps mu^k [1 - Re(e^{-i pi/2k} gamma(1/k, i mu tau)) / (k (mu tau)^{1/k})]}`.
///
/// The bracket equals `int_0^1 (1 - cos(mu tau u^k)) du`.
pub fn sd_closed_form(eps: f64, mu: f64, k: f64, tau: f64) -> Result<f64> {
    sd_check(mu, k, tau)?;
    if tau == 0.0 || eps == 0.0 {
        return Ok(1.0);
    }
    let a = 1.0 / k;
    let x = mu * tau;
    let g = lower_incomplete_gamma(a, Complex64::new(0.0, x))?;
    let mean_cos = (Complex64::from_polar(1.0, -FRAC_PI_2 * a) * g).re / (k * x.powf(a));
    Ok((-eps * mu.powf(k) * (1.0 - mean_cos)).exp())
}

/// Large-`mu tau` form of [`sd_closed_form`]:
/// `exp{-eps mu^k [1 - Gamma(1/k) cos(pi/2k) / (k (mu tau)^{1/k}) - sin(mu tau) / (k mu tau)]}`,
/// accurate up to `O((mu tau)^{-2})` inside the bracket.
pub fn sd_asymptotic(eps: f64, mu: f64, k: f64, tau: f64) -> Result<f64> {
    sd_check(mu, k, tau)?;
    let a = 1.0 / k;
    let x = mu * tau;
    let mean_cos = gamma(a)? * (FRAC_PI_2 * a).cos() / (k * x.powf(a)) + x.sin() / (k * x);
    Ok((-eps * mu.powf(k) * (1.0 - mean_cos)).exp())
}
