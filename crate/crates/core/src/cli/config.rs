use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Surface,
    Trace,
    Tpd,
    Verify,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    X,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Discrete,
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Power,
    Heaviside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    Split,
    Window,
}

macro_rules! keyword_enum {
    ($ty:ty, $($variant:ident => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $name),+ })
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok(Self::$variant),)+
                    _ => Err(Error::Config(format!("unknown value {s:?}, expected one of: {}", [$($name),+].join(", ")))),
                }
            }
        }
    };
}

keyword_enum!(Command, Surface => "surface", Trace => "trace", Tpd => "tpd", Verify => "verify", Sweep => "sweep");
keyword_enum!(ModelKind, X => "x", D => "d");
keyword_enum!(Engine, Discrete => "discrete", Continuum => "continuum");
keyword_enum!(DensityKind, Power => "power", Heaviside => "heaviside");
keyword_enum!(Spacing, Linear => "linear", Log => "log");
keyword_enum!(SweepFamily, Split => "split", Window => "window");

/// Everything a run needs. Unset optional values fall back to
/// command-specific defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelKind,
    pub seed: u64,
    pub out: Option<PathBuf>,

    // power-law X surface: |s| = exp(-epsilon Q2(q, tau))
    pub q: f64,
    pub epsilon: f64,
    // flat-density D surface with g ~ omega^k
    pub sd_k: f64,
    pub sd_mu: f64,

    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_steps: usize,
    pub tau_spacing: Spacing,

    pub engine: Engine,
    pub density: DensityKind,
    pub amplitude: f64,
    pub density_q: f64,
    pub cutoff: f64,
    pub height: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    pub g_offset: f64,
    pub g_scale: f64,
    pub g_exponent: f64,
    pub f_offset: f64,
    pub f_scale: f64,
    pub f_exponent: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub lambda: Option<f64>,
    pub dimer_frequency: Option<f64>,
    pub population: Option<f64>,
    pub mode_omegas: Option<Vec<f64>>,
    pub mode_couplings: Option<Vec<f64>>,
    pub mode_alpha_re: Option<Vec<f64>>,
    pub mode_alpha_im: Option<Vec<f64>>,

    pub tunneling: f64,
    pub mu: f64,
    pub regime_threshold: f64,

    pub family: SweepFamily,
    pub window_params: Vec<f64>,
    pub window_width: f64,

    pub tolerance: Option<f64>,
    pub gate: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Surface,
            model: ModelKind::X,
            seed: 0,
            out: None,
            q: 1.0,
            epsilon: 0.1,
            sd_k: 1.0,
            sd_mu: 1.0,
            p_min: 0.0,
            p_max: 1.0,
            p_steps: 101,
            tau_min: 0.0,
            tau_max: 100.0,
            tau_steps: 101,
            tau_spacing: Spacing::Linear,
            engine: Engine::Continuum,
            density: DensityKind::Power,
            amplitude: 1.0,
            density_q: 1.0,
            cutoff: 1.0,
            height: 1.0,
            band_lo: 0.0,
            band_hi: 1.0,
            g_offset: 0.0,
            g_scale: 1.0,
            g_exponent: 1.0,
            f_offset: 0.0,
            f_scale: 0.0,
            f_exponent: 0.0,
            window_lo: 0.0,
            window_hi: f64::INFINITY,
            t_min: 0.0,
            t_max: 50.0,
            t_steps: 101,
            lambda: None,
            dimer_frequency: None,
            population: None,
            mode_omegas: None,
            mode_couplings: None,
            mode_alpha_re: None,
            mode_alpha_im: None,
            tunneling: 0.0,
            mu: 0.0,
            regime_threshold: 0.1,
            family: SweepFamily::Split,
            window_params: vec![0.1, 0.5, 1.0, 2.0],
            window_width: 0.1,
            tolerance: None,
            gate: true,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value {value:?} for {key}")))
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    let x: f64 = parse(key, value)?;
    if x.is_nan() {
        return Err(Error::Config(format!("{key} is NaN")));
    }
    Ok(x)
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse_real(key, v)).collect()
}

fn list(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Applies one `key = value` setting. Dashes in keys are read as
    /// underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        let v = value.trim();
        match k {
            "command" => self.command = v.parse()?,
            "model" => self.model = v.parse()?,
            "seed" => self.seed = parse(k, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "q" => self.q = parse_real(k, v)?,
            "epsilon" => self.epsilon = parse_real(k, v)?,
            "sd_k" => self.sd_k = parse_real(k, v)?,
            "sd_mu" => self.sd_mu = parse_real(k, v)?,
            "p_min" => self.p_min = parse_real(k, v)?,
            "p_max" => self.p_max = parse_real(k, v)?,
            "p_steps" => self.p_steps = parse(k, v)?,
            "tau_min" => self.tau_min = parse_real(k, v)?,
            "tau_max" => self.tau_max = parse_real(k, v)?,
            "tau_steps" => self.tau_steps = parse(k, v)?,
            "tau_spacing" => self.tau_spacing = v.parse()?,
            "engine" => self.engine = v.parse()?,
            "density" => self.density = v.parse()?,
            "amplitude" => self.amplitude = parse_real(k, v)?,
            "density_q" => self.density_q = parse_real(k, v)?,
            "cutoff" => self.cutoff = parse_real(k, v)?,
            "height" => self.height = parse_real(k, v)?,
            "band_lo" => self.band_lo = parse_real(k, v)?,
            "band_hi" => self.band_hi = parse_real(k, v)?,
            "g_offset" => self.g_offset = parse_real(k, v)?,
            "g_scale" => self.g_scale = parse_real(k, v)?,
            "g_exponent" => self.g_exponent = parse_real(k, v)?,
            "f_offset" => self.f_offset = parse_real(k, v)?,
            "f_scale" => self.f_scale = parse_real(k, v)?,
            "f_exponent" => self.f_exponent = parse_real(k, v)?,
            "window_lo" => self.window_lo = parse_real(k, v)?,
            "window_hi" => self.window_hi = parse_real(k, v)?,
            "t_min" => self.t_min = parse_real(k, v)?,
            "t_max" => self.t_max = parse_real(k, v)?,
            "t_steps" => self.t_steps = parse(k, v)?,
            "lambda" => self.lambda = Some(parse_real(k, v)?),
            "dimer_frequency" => self.dimer_frequency = Some(parse_real(k, v)?),
            "population" | "p" => self.population = Some(parse_real(k, v)?),
            "mode_omegas" => self.mode_omegas = Some(parse_list(k, v)?),
            "mode_couplings" => self.mode_couplings = Some(parse_list(k, v)?),
            "mode_alpha_re" => self.mode_alpha_re = Some(parse_list(k, v)?),
            "mode_alpha_im" => self.mode_alpha_im = Some(parse_list(k, v)?),
            "tunneling" => self.tunneling = parse_real(k, v)?,
            "mu" => self.mu = parse_real(k, v)?,
            "regime_threshold" => self.regime_threshold = parse_real(k, v)?,
            "family" => self.family = v.parse()?,
            "window_params" => self.window_params = parse_list(k, v)?,
            "window_width" => self.window_width = parse_real(k, v)?,
            "tolerance" => self.tolerance = Some(parse_real(k, v)?),
            "gate" => self.gate = parse(k, v)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Reads flat `key = value` lines; `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        config.apply_text(text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {raw:?}", n + 1))
            })?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    /// All settings as `(key, value)` pairs; unset optional values are
    /// omitted.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut e: Vec<(&'static str, String)> = vec![
            ("command", self.command.to_string()),
            ("model", self.model.to_string()),
            ("seed", self.seed.to_string()),
        ];
        if let Some(out) = &self.out {
            e.push(("out", out.display().to_string()));
        }
        let reals = [
            ("q", self.q),
            ("epsilon", self.epsilon),
            ("sd_k", self.sd_k),
            ("sd_mu", self.sd_mu),
            ("p_min", self.p_min),
            ("p_max", self.p_max),
        ];
        e.extend(reals.iter().map(|&(k, v)| (k, v.to_string())));
        e.push(("p_steps", self.p_steps.to_string()));
        e.push(("tau_min", self.tau_min.to_string()));
        e.push(("tau_max", self.tau_max.to_string()));
        e.push(("tau_steps", self.tau_steps.to_string()));
        e.push(("tau_spacing", self.tau_spacing.to_string()));
        e.push(("engine", self.engine.to_string()));
        e.push(("density", self.density.to_string()));
        let reals = [
            ("amplitude", self.amplitude),
            ("density_q", self.density_q),
            ("cutoff", self.cutoff),
            ("height", self.height),
            ("band_lo", self.band_lo),
            ("band_hi", self.band_hi),
            ("g_offset", self.g_offset),
            ("g_scale", self.g_scale),
            ("g_exponent", self.g_exponent),
            ("f_offset", self.f_offset),
            ("f_scale", self.f_scale),
            ("f_exponent", self.f_exponent),
            ("window_lo", self.window_lo),
            ("window_hi", self.window_hi),
            ("t_min", self.t_min),
            ("t_max", self.t_max),
        ];
        e.extend(reals.iter().map(|&(k, v)| (k, v.to_string())));
        e.push(("t_steps", self.t_steps.to_string()));
        let optional = [
            ("lambda", self.lambda),
            ("dimer_frequency", self.dimer_frequency),
            ("population", self.population),
        ];
        e.extend(
            optional
                .iter()
                .filter_map(|&(k, v)| v.map(|v| (k, v.to_string()))),
        );
        let lists = [
            ("mode_omegas", &self.mode_omegas),
            ("mode_couplings", &self.mode_couplings),
            ("mode_alpha_re", &self.mode_alpha_re),
            ("mode_alpha_im", &self.mode_alpha_im),
        ];
        e.extend(
            lists
                .iter()
                .filter_map(|&(k, v)| v.as_ref().map(|v| (k, list(v)))),
        );
        e.push(("tunneling", self.tunneling.to_string()));
        e.push(("mu", self.mu.to_string()));
        e.push(("regime_threshold", self.regime_threshold.to_string()));
        e.push(("family", self.family.to_string()));
        e.push(("window_params", list(&self.window_params)));
        e.push(("window_width", self.window_width.to_string()));
        if let Some(t) = self.tolerance {
            e.push(("tolerance", t.to_string()));
        }
        e.push(("gate", self.gate.to_string()));
        e
    }

    pub fn render(&self) -> String {
        self.entries()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.p_steps < 2 || self.tau_steps < 2 || self.t_steps < 2 {
            return fail("grid steps must be at least 2".into());
        }
        if !(0.0..=1.0).contains(&self.p_min)
            || !(0.0..=1.0).contains(&self.p_max)
            || self.p_min > self.p_max
        {
            return fail(format!(
                "need 0 <= p_min <= p_max <= 1, got {} and {}",
                self.p_min, self.p_max
            ));
        }
        if !(self.tau_min >= 0.0) || !(self.tau_max >= self.tau_min) || !self.tau_max.is_finite() {
            return fail(format!(
                "need 0 <= tau_min <= tau_max < inf, got {} and {}",
                self.tau_min, self.tau_max
            ));
        }
        if self.tau_spacing == Spacing::Log && !(self.tau_min > 0.0) {
            return fail("log tau spacing needs tau_min > 0".into());
        }
        if !(self.t_min >= 0.0) || !(self.t_max >= self.t_min) || !self.t_max.is_finite() {
            return fail(format!(
                "need 0 <= t_min <= t_max < inf, got {} and {}",
                self.t_min, self.t_max
            ));
        }
        if let Some(p) = self.population {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("population {p} outside [0, 1]"));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return fail(format!("tolerance must be positive, got {t}"));
            }
        }
        if !(self.regime_threshold > 0.0) {
            return fail(format!(
                "regime_threshold must be positive, got {}",
                self.regime_threshold
            ));
        }
        Ok(())
    }
}

/// Evenly spaced (or log-spaced) grid with both end points.
pub fn grid(lo: f64, hi: f64, steps: usize, spacing: Spacing) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let u = i as f64 / last;
            if i + 1 == steps {
                return hi;
            }
            match spacing {
                Spacing::Linear => lo + (hi - lo) * u,
                Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * u).exp(),
            }
        })
        .collect()
}
