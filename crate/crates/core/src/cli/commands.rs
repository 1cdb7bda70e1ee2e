use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{grid, DensityKind, Engine, ModelKind, RunConfig, Spacing, SweepFamily};
use super::csv::{format_number, render_csv};
use crate::continuum::{
    d_plateau, eta_continuum, extremes, partial_decoherence_time, q2_closed_form, q2_quadrature,
    q2_split, q2_window, s_continuum_d, s_continuum_x, sd_closed_form, xi_coefficient,
};
use crate::discrete::perturbation::{b1_budget, c_alpha, BudgetInputs};
use crate::discrete::{entanglement_spectrum, r_parameter, s_discrete_d, s_discrete_x};
use crate::error::{Error, Result};
use crate::model::{
    CouplingFn, CouplingParams, DimerInitialState, DiscreteModeSet, FrequencyWindow, Mode,
    SpectralDensity, SpectralModel,
};
use crate::verify::{run_battery, VerifyConfig, VerifyReport};

/// Output of a command: CSV or report text, and whether it succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub success: bool,
}

fn csv(config: &RunConfig, header: &[&str], rows: &[Vec<f64>]) -> CommandOutput {
    CommandOutput {
        text: render_csv(&config.entries(), header, rows),
        success: true,
    }
}

fn entropy(p: f64, s_abs: f64) -> Result<f64> {
    Ok(entanglement_spectrum(p, s_abs)?.entropy())
}

fn p_grid(config: &RunConfig) -> Vec<f64> {
    grid(config.p_min, config.p_max, config.p_steps, Spacing::Linear)
}

fn tau_grid(config: &RunConfig) -> Vec<f64> {
    grid(
        config.tau_min,
        config.tau_max,
        config.tau_steps,
        config.tau_spacing,
    )
}

/// `Q2(q, tau)`: closed form where one exists, quadrature otherwise.
fn q2(q: f64, tau: f64) -> Result<f64> {
    if q == -1.0 || q > -0.5 {
        q2_closed_form(q, tau)
    } else {
        q2_quadrature(q, tau, 0.0, f64::INFINITY)
    }
}

/// Rows `(tau, p, S_E)` in row-major order, tau outermost.
pub fn cmd_surface(config: &RunConfig) -> Result<CommandOutput> {
    let ps = p_grid(config);
    let per_tau: Vec<Vec<Vec<f64>>> = tau_grid(config)
        .into_par_iter()
        .map(|tau| {
            let s = match config.model {
                ModelKind::X => (-config.epsilon * q2(config.q, tau)?).exp(),
                ModelKind::D => sd_closed_form(config.epsilon, config.sd_mu, config.sd_k, tau)?,
            };
            ps.iter()
                .map(|&p| Ok(vec![tau, p, entropy(p, s)?]))
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(csv(config, &["tau", "p", "S_E"], &per_tau.concat()))
}

fn spectral_model(config: &RunConfig) -> Result<SpectralModel> {
    let density = match config.density {
        DensityKind::Power => {
            SpectralDensity::power_law(config.amplitude, config.density_q, config.cutoff)?
        }
        DensityKind::Heaviside => {
            SpectralDensity::heaviside(config.height, config.band_lo, config.band_hi)?
        }
    };
    let g = CouplingFn {
        offset: config.g_offset,
        scale: config.g_scale,
        exponent: config.g_exponent,
    };
    let f = CouplingFn {
        offset: config.f_offset,
        scale: config.f_scale,
        exponent: config.f_exponent,
    };
    Ok(SpectralModel::new(density).with_g(g).with_f(f))
}

fn discrete_modes(config: &RunConfig, lambda: f64, omega: f64) -> Result<DiscreteModeSet> {
    let defaults = VerifyConfig::default();
    let omegas = config
        .mode_omegas
        .clone()
        .unwrap_or(defaults.omegas.clone());
    let n = omegas.len();
    let couplings = config
        .mode_couplings
        .clone()
        .unwrap_or(defaults.couplings.clone());
    let (re, im) = match (&config.mode_alpha_re, &config.mode_alpha_im) {
        (None, None) if config.mode_omegas.is_none() => (
            defaults.alphas.iter().map(|a| a.re).collect(),
            defaults.alphas.iter().map(|a| a.im).collect(),
        ),
        (re, im) => (
            re.clone().unwrap_or(vec![0.0; n]),
            im.clone().unwrap_or(vec![0.0; n]),
        ),
    };
    if couplings.len() != n || re.len() != n || im.len() != n {
        return Err(Error::Config(format!(
            "mode lists differ in length: {n} frequencies, {} couplings, {} + {} displacements",
            couplings.len(),
            re.len(),
            im.len()
        )));
    }
    let modes = (0..n)
        .map(|j| Mode::new(omegas[j], couplings[j], 0.0, Complex64::new(re[j], im[j])))
        .collect();
    match config.model {
        ModelKind::X => DiscreteModeSet::x_model(modes, lambda, omega),
        ModelKind::D => DiscreteModeSet::d_model(
            modes,
            CouplingParams {
                lambda,
                mu: 0.0,
                dimer_frequency: omega,
                tunneling: 0.0,
            },
        ),
    }
}

/// Rows `(t, |s_J|, r_J, S_J, |rho_12|)`.
pub fn cmd_trace(config: &RunConfig) -> Result<CommandOutput> {
    let lambda = config.lambda.unwrap_or(0.5);
    let omega = config.dimer_frequency.unwrap_or(1.0);
    let p = config.population.unwrap_or(0.5);
    let state = DimerInitialState::from_population(p)?;
    let c0 = state.coherence().norm();
    let window = FrequencyWindow::interval(config.window_lo, config.window_hi)?;
    let full = FrequencyWindow::full();
    let factors: Box<dyn Fn(f64) -> Result<(f64, f64)> + Sync> = match config.engine {
        Engine::Continuum => {
            let model = spectral_model(config)?;
            match config.model {
                ModelKind::X => Box::new(move |t| {
                    Ok((
                        s_continuum_x(&model, &window, lambda, t)?,
                        s_continuum_x(&model, &full, lambda, t)?,
                    ))
                }),
                ModelKind::D => Box::new(move |t| {
                    Ok((
                        s_continuum_d(&model, &window, lambda, t)?.norm(),
                        s_continuum_d(&model, &full, lambda, t)?.norm(),
                    ))
                }),
            }
        }
        Engine::Discrete => {
            let modes = discrete_modes(config, lambda, omega)?;
            match config.model {
                ModelKind::X => Box::new(move |t| {
                    Ok((
                        s_discrete_x(&modes, &window, t),
                        s_discrete_x(&modes, &full, t),
                    ))
                }),
                ModelKind::D => Box::new(move |t| {
                    Ok((
                        s_discrete_d(&modes, &window, t).norm(),
                        s_discrete_d(&modes, &full, t).norm(),
                    ))
                }),
            }
        }
    };
    let rows: Vec<Vec<f64>> = grid(config.t_min, config.t_max, config.t_steps, Spacing::Linear)
        .into_par_iter()
        .map(|t| {
            let (s_j, s_all) = factors(t)?;
            Ok(vec![
                t,
                s_j,
                r_parameter(p, s_j),
                entropy(p, s_j)?,
                s_all * c0,
            ])
        })
        .collect::<Result<_>>()?;
    Ok(csv(
        config,
        &["t", "abs_s_J", "r_J", "S_J", "abs_rho12"],
        &rows,
    ))
}

/// Partial decoherence report: `xi`, `t_pd`, plateau and the validity of
/// the first-order tunneling expansion.
pub fn cmd_tpd(config: &RunConfig) -> Result<CommandOutput> {
    let lambda = config.lambda.unwrap_or(1.0);
    let omega = config.dimer_frequency.unwrap_or(1.0);
    let model = spectral_model(config)?;
    let xi = xi_coefficient(&model)?;
    let t_pd = partial_decoherence_time(xi, lambda)?;
    let plateau = d_plateau(&model, &FrequencyWindow::full())?;
    let top = model.density.effective_upper_limit(1e-16);
    let (_, sup_f) = extremes(|w| model.f.eval(w), 0.0, top);
    let sup_f = sup_f.max(model.f.eval(0.0)).max(model.f.eval(top));
    let (inf_g, _) = extremes(|w| model.g.eval(w), 0.0, top);
    let inf_g = inf_g.min(model.g.eval(0.0)).min(model.g.eval(top));
    let eta = eta_continuum(&model, config.tunneling, omega, lambda, config.mu);
    let inputs = BudgetInputs {
        v: config.tunneling,
        omega,
        lambda,
        mu: config.mu,
        eta,
        xi,
        c_alpha: c_alpha(&model)?,
        sup_f,
        inf_g,
    };
    let budget = b1_budget(&inputs, config.regime_threshold)?;
    let lines = [
        ("xi", format_number(xi)),
        ("t_pd", format_number(t_pd)),
        ("plateau", format_number(plateau)),
        ("eta", format_number(eta)),
        ("c_alpha", format_number(inputs.c_alpha)),
        ("b1", format_number(budget.b1)),
        ("ratio_v_over_omega", format_number(budget.ratios[0])),
        ("ratio_tunneling_xi", format_number(budget.ratios[1])),
        ("ratio_exchange", format_number(budget.ratios[2])),
        ("valid", budget.valid.to_string()),
    ];
    let text = lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    Ok(CommandOutput {
        text,
        success: true,
    })
}

pub fn verify_config(config: &RunConfig) -> Result<VerifyConfig> {
    let mut v = VerifyConfig::default();
    if let Some(l) = config.lambda {
        v.lambda = l;
        v.perturbative_lambda = l;
    }
    if let Some(w) = config.dimer_frequency {
        v.dimer_frequency = w;
    }
    if let Some(p) = config.population {
        v.population = p;
    }
    if config.mode_omegas.is_some() {
        let modes = discrete_modes(
            &RunConfig {
                model: ModelKind::X,
                ..config.clone()
            },
            0.0,
            0.0,
        )?;
        v.omegas = modes.modes().iter().map(|m| m.omega).collect();
        v.couplings = modes.modes().iter().map(|m| m.g.re).collect();
        v.alphas = modes.modes().iter().map(|m| m.alpha).collect();
        v.perturbative_couplings = v.couplings.clone();
    }
    v.tolerance = config.tolerance;
    v.gate = config.gate;
    v.seed = config.seed;
    Ok(v)
}

pub fn cmd_verify(config: &RunConfig) -> Result<(CommandOutput, VerifyReport)> {
    let report = run_battery(&verify_config(config)?)?;
    let output = CommandOutput {
        text: report.render(),
        success: report.passed(),
    };
    Ok((output, report))
}

/// Split-window rows `(z0, tau, p, S_E_low, S_E_high)` or window rows
/// `(nu0, tau, p, S_E_window)` for `[nu0, nu0 + window_width]`.
pub fn cmd_sweep(config: &RunConfig) -> Result<CommandOutput> {
    if config.model != ModelKind::X {
        return Err(Error::Config(
            "sweep is defined for the X-model only".into(),
        ));
    }
    let ps = p_grid(config);
    let taus = tau_grid(config);
    let points: Vec<(f64, f64)> = config
        .window_params
        .iter()
        .flat_map(|&w| taus.iter().map(move |&t| (w, t)))
        .collect();
    let blocks: Vec<Vec<Vec<f64>>> = points
        .into_par_iter()
        .map(|(w, tau)| match config.family {
            SweepFamily::Split => {
                let (low, high) = q2_split(config.q, tau, w)?;
                let (sl, sh) = (
                    (-config.epsilon * low).exp(),
                    (-config.epsilon * high).exp(),
                );
                ps.iter()
                    .map(|&p| Ok(vec![w, tau, p, entropy(p, sl)?, entropy(p, sh)?]))
                    .collect()
            }
            SweepFamily::Window => {
                let s = (-config.epsilon * q2_window(w, w + config.window_width, tau)?).exp();
                ps.iter()
                    .map(|&p| Ok(vec![w, tau, p, entropy(p, s)?]))
                    .collect()
            }
        })
        .collect::<Result<_>>()?;
    let header: &[&str] = match config.family {
        SweepFamily::Split => &["z0", "tau", "p", "S_E_low", "S_E_high"],
        SweepFamily::Window => &["nu0", "tau", "p", "S_E_window"],
    };
    Ok(csv(config, header, &blocks.concat()))
}
