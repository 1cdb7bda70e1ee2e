use crate::error::{Error, Result};

/// `offset + scale * omega^exponent` on `omega >= 0`.
///
/// Covers the coupling profiles used for the D-model, `g0 * omega^k` and
/// `eps + omega^delta`, as well as constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingFn {
    pub offset: f64,
    pub scale: f64,
    pub exponent: f64,
}

impl CouplingFn {
    pub fn constant(c: f64) -> Self {
        Self {
            offset: c,
            scale: 0.0,
            exponent: 0.0,
        }
    }

    pub fn power(scale: f64, exponent: f64) -> Self {
        Self {
            offset: 0.0,
            scale,
            exponent,
        }
    }

    pub fn shifted_power(offset: f64, exponent: f64) -> Self {
        Self {
            offset,
            scale: 1.0,
            exponent,
        }
    }

    fn is_constant(&self) -> bool {
        self.scale == 0.0 || self.exponent == 0.0
    }

    pub fn eval(&self, omega: f64) -> f64 {
        if self.is_constant() {
            return self.offset
                + if self.exponent == 0.0 {
                    self.scale
                } else {
                    0.0
                };
        }
        self.offset + self.scale * omega.powf(self.exponent)
    }

    pub fn derivative(&self, omega: f64) -> f64 {
        if self.is_constant() {
            return 0.0;
        }
        self.scale * self.exponent * omega.powf(self.exponent - 1.0)
    }

    pub fn second_derivative(&self, omega: f64) -> f64 {
        if self.is_constant() || self.exponent == 1.0 {
            return 0.0;
        }
        self.scale * self.exponent * (self.exponent - 1.0) * omega.powf(self.exponent - 2.0)
    }

    /// Strictly monotone on `[0, inf)`.
    pub fn is_invertible(&self) -> bool {
        !self.is_constant() && self.exponent > 0.0
    }

    /// `g^{-1}(y)` for `y` in the range of `g` on `[0, inf)`.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        if !self.is_invertible() {
            return None;
        }
        let u = (y - self.offset) / self.scale;
        if u < 0.0 {
            return None;
        }
        Some(u.powf(1.0 / self.exponent))
    }
}

/// Mode density (`h_X` or `h_D`) as a function of frequency.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    /// `amplitude * omega^(2q+2) * exp(-omega / cutoff)`.
    PowerLawCutoff { amplitude: f64, q: f64, cutoff: f64 },
    /// `height` on `[lo, hi)`, zero elsewhere.
    HeavisideWindow { height: f64, lo: f64, hi: f64 },
    /// Piecewise linear through `(omega, h)` samples, zero outside them.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl SpectralDensity {
    /// Needs `q > -3/2` so that `h(omega) (1 - cos omega t) / omega^2` and
    /// `h` itself are integrable at the origin.
    pub fn power_law(amplitude: f64, q: f64, cutoff: f64) -> Result<Self> {
        if !(amplitude > 0.0 && amplitude.is_finite()) || !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidSpectralModel(format!(
                "power law needs positive amplitude and cutoff, got {amplitude}, {cutoff}"
            )));
        }
        if !(q > -1.5 && q.is_finite()) {
            return Err(Error::InvalidSpectralModel(format!(
                "exponent q = {q} must exceed -3/2"
            )));
        }
        Ok(Self::PowerLawCutoff {
            amplitude,
            q,
            cutoff,
        })
    }

    pub fn heaviside(height: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) || !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(Error::InvalidSpectralModel(format!(
                "Heaviside window needs h0 > 0 and 0 <= lo < hi < inf, got {height} on [{lo}, {hi})"
            )));
        }
        Ok(Self::HeavisideWindow { height, lo, hi })
    }

    /// Samples must have strictly increasing nonnegative abscissae and
    /// nonnegative finite values.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSpectralModel(
                "need at least two samples".into(),
            ));
        }
        if samples[0].0 < 0.0
            || samples
                .iter()
                .any(|&(w, h)| !w.is_finite() || !(h >= 0.0) || !h.is_finite())
        {
            return Err(Error::InvalidSpectralModel(
                "samples must be finite, omega >= 0, h >= 0".into(),
            ));
        }
        if samples.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::InvalidSpectralModel(
                "sample frequencies must increase".into(),
            ));
        }
        Ok(Self::Tabulated { samples })
    }

    pub fn eval(&self, omega: f64) -> f64 {
        if omega < 0.0 {
            return 0.0;
        }
        match self {
            Self::PowerLawCutoff {
                amplitude,
                q,
                cutoff,
            } => {
                if omega == 0.0 {
                    return self.value_at_zero();
                }
                let m = 2.0 * q + 2.0;
                amplitude * (m * omega.ln() - omega / cutoff).exp()
            }
            Self::HeavisideWindow { height, lo, hi } => {
                if *lo <= omega && omega < *hi {
                    *height
                } else {
                    0.0
                }
            }
            Self::Tabulated { samples } => {
                let first = samples[0].0;
                let last = samples[samples.len() - 1].0;
                if omega < first || omega > last {
                    return 0.0;
                }
                let k = samples.partition_point(|&(w, _)| w <= omega);
                if k == samples.len() {
                    return samples[k - 1].1;
                }
                let (w0, h0) = samples[k - 1];
                let (w1, h1) = samples[k];
                h0 + (h1 - h0) * (omega - w0) / (w1 - w0)
            }
        }
    }

    /// Right limit `h(0+)`; infinite for power laws with `q < -1`.
    pub fn value_at_zero(&self) -> f64 {
        match self {
            Self::PowerLawCutoff { amplitude, q, .. } => {
                let m = 2.0 * q + 2.0;
                if m > 0.0 {
                    0.0
                } else if m == 0.0 {
                    *amplitude
                } else {
                    f64::INFINITY
                }
            }
            Self::HeavisideWindow { height, lo, .. } => {
                if *lo == 0.0 {
                    *height
                } else {
                    0.0
                }
            }
            Self::Tabulated { samples } => {
                if samples[0].0 == 0.0 {
                    samples[0].1
                } else {
                    0.0
                }
            }
        }
    }

    /// Points where `h` is not smooth; quadrature panels should break there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::PowerLawCutoff { .. } => Vec::new(),
            Self::HeavisideWindow { lo, hi, .. } => vec![*lo, *hi],
            Self::Tabulated { samples } => samples.iter().map(|&(w, _)| w).collect(),
        }
    }

    /// Finite frequency beyond which `h` stays below `rel` times its maximum
    /// (for compactly supported densities, the end of the support).
    pub fn effective_upper_limit(&self, rel: f64) -> f64 {
        match self {
            Self::PowerLawCutoff { q, cutoff, .. } => {
                let m = 2.0 * q + 2.0;
                let log_env = |w: f64| m * w.ln() - w / cutoff;
                let peak = if m > 0.0 { m * cutoff } else { *cutoff };
                let target = log_env(peak) + rel.ln();
                let mut hi = peak.max(*cutoff) * 2.0;
                while log_env(hi) > target {
                    hi *= 2.0;
                }
                let mut lo = peak;
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if log_env(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
            Self::HeavisideWindow { hi, .. } => *hi,
            Self::Tabulated { samples } => samples[samples.len() - 1].0,
        }
    }
}

/// Continuum coupling data: a mode density together with the D-model
/// coupling profiles `g(omega)` and `f(omega)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    pub density: SpectralDensity,
    pub g: CouplingFn,
    pub f: CouplingFn,
}

impl SpectralModel {
    /// `g = 1`, `f = 0`.
    pub fn new(density: SpectralDensity) -> Self {
        Self {
            density,
            g: CouplingFn::constant(1.0),
            f: CouplingFn::constant(0.0),
        }
    }

    pub fn with_g(mut self, g: CouplingFn) -> Self {
        self.g = g;
        self
    }

    pub fn with_f(mut self, f: CouplingFn) -> Self {
        self.f = f;
        self
    }

    pub fn h(&self, omega: f64) -> f64 {
        self.density.eval(omega)
    }
}
