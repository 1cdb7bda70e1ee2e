//! One line per acceptance criterion, with the tolerance and runtime budget
//! each one is held to.

use std::f64::consts::{LN_2, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use dephase_ee::cli::cmd_surface;
use dephase_ee::cli::config::{ModelKind, RunConfig, Spacing};
use dephase_ee::continuum::{
    d_leading_envelope, d_plateau, q2_closed_form, q2_quadrature, q2_window, s_continuum_d,
    s_continuum_x, sd_closed_form, window_bounds_x, x_decoherence_exponent,
};
use dephase_ee::discrete::{
    dimer_state_d0, dimer_state_x, entanglement_spectrum, s_discrete_d, s_discrete_x,
};
use dephase_ee::model::{
    CouplingFn, CouplingParams, DimerInitialState, DiscreteModeSet, FrequencyWindow, Mode,
    SpectralDensity, SpectralModel,
};
use dephase_ee::oracle::{
    embed, evolve_exact, reduce_dimer, reduce_window, residual_report, spectrum_gap, window_frame,
    window_spectrum, TruncatedSpace, DEFAULT_CAP,
};
use dephase_ee::quadrature::{integrate, QuadOptions};
use dephase_ee::verify::{perturbative_ladder, VerifyConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn criterion(n: u32, name: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = run();
    let elapsed = start.elapsed();
    let passed = result.passed && elapsed < budget;
    let line = format!(
        "criterion {n:>2} {} {name}: {} [{:.2} s of {:.0} s]\n",
        if passed { "PASS" } else { "FAIL" },
        result.detail,
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    // Bypass the test harness capture so the lines always show.
    let _ = std::io::stderr().write_all(line.as_bytes());
    passed
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn entropy(p: f64, s: f64) -> f64 {
    entanglement_spectrum(p, s).unwrap().entropy()
}

fn reference_modes() -> Vec<Mode> {
    vec![
        Mode::new(1.0, 1.0, 0.0, c(0.8, 0.0)),
        Mode::new(1.7, 0.6, 0.0, c(0.0, 0.5)),
    ]
}

fn first_mode_window() -> FrequencyWindow {
    FrequencyWindow::interval(0.5, 1.5).unwrap()
}

const TIMES: [f64; 4] = [0.5, 1.0, 3.0, 10.0];

fn c1() -> Outcome {
    let s = (-0.1 * q2_closed_form(1.0, 1e3).unwrap()).exp();
    let got = entropy(0.5, s);
    outcome(
        (got - 0.3039).abs() <= 1e-3,
        format!("S_E(tau = 1e3) = {got:.6}, target 0.3039 +- 1e-3"),
    )
}

fn c2() -> Outcome {
    let s = (-0.1 * q2_closed_form(-1.0, 1e4).unwrap()).exp();
    let got = entropy(0.5, s);
    outcome(
        (got - LN_2).abs() <= 1e-3,
        format!("S_E(tau = 1e4) = {got:.6}, ln 2 = {LN_2:.6}, tol 1e-3"),
    )
}

fn c3() -> Outcome {
    let state = DimerInitialState::from_population(0.3).unwrap();
    let modes = DiscreteModeSet::x_model(reference_modes(), 0.3, 1.0).unwrap();
    let space = TruncatedSpace::for_x_model(&modes, 1e-14, DEFAULT_CAP).unwrap();
    let psi = evolve_exact(&state, &modes, &space, &TIMES).unwrap();
    let window = first_mode_window();
    let (mut coherence, mut spectrum) = (0.0f64, 0.0f64);
    for (psi_t, &t) in psi.iter().zip(&TIMES) {
        let oracle = reduce_dimer(psi_t).unwrap();
        coherence = coherence
            .max((oracle.coherence() - dimer_state_x(&state, &modes, t).coherence()).norm());
        let expected = entanglement_spectrum(0.3, s_discrete_x(&modes, &window, t)).unwrap();
        let got = window_spectrum(psi_t, &[0], 1e-12).unwrap();
        spectrum = spectrum.max(spectrum_gap(got.eigenvalues(), expected.eigenvalues()));
    }
    let dims_ok = space.dims().iter().all(|&d| d >= 25);
    outcome(
        dims_ok && coherence <= 1e-8 && spectrum <= 1e-8,
        format!(
            "d = {:?}, max |drho12| = {coherence:.2e}, spectrum gap = {spectrum:.2e}, tol 1e-8",
            space.dims()
        ),
    )
}

fn c4() -> Outcome {
    let state = DimerInitialState::from_population(0.3).unwrap();
    let params = CouplingParams {
        lambda: 0.3,
        mu: 0.0,
        dimer_frequency: 1.0,
        tunneling: 0.0,
    };
    let modes = DiscreteModeSet::d_model(reference_modes(), params).unwrap();
    let space = TruncatedSpace::for_d_model(&modes, 1e-14, DEFAULT_CAP).unwrap();
    let psi = evolve_exact(&state, &modes, &space, &TIMES).unwrap();
    let window = first_mode_window();
    let (mut coherence, mut spectrum, mut third, mut distance) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (psi_t, &t) in psi.iter().zip(&TIMES) {
        let oracle = reduce_dimer(psi_t).unwrap();
        coherence = coherence
            .max((oracle.coherence() - dimer_state_d0(&state, &modes, t).coherence()).norm());
        let s_j = s_discrete_d(&modes, &window, t);
        let expected = entanglement_spectrum(0.3, s_j.norm()).unwrap();
        let got = window_spectrum(psi_t, &[0], 0.0).unwrap();
        let ev = got.eigenvalues();
        spectrum = spectrum.max(spectrum_gap(&ev[..ev.len().min(2)], expected.eigenvalues()));
        third = third.max(ev.get(2).copied().unwrap_or(0.0));
        let rank2 = dephase_ee::discrete::reservoir_state_rank2(&state, s_j).unwrap();
        let frame = window_frame(&modes, &[0], t, &space);
        let rho = reduce_window(psi_t, &[0]).unwrap();
        distance = distance.max(
            residual_report(&rho, &embed(&frame, rank2.entries()))
                .unwrap()
                .0,
        );
    }
    outcome(
        coherence <= 1e-8 && spectrum <= 1e-8 && third < 1e-10 && distance <= 1e-8,
        format!(
            "max |drho12| = {coherence:.2e}, spectrum gap = {spectrum:.2e}, third eigenvalue = {third:.2e}, \
             rank-2 trace distance = {distance:.2e}"
        ),
    )
}

fn c5() -> Outcome {
    let cfg = VerifyConfig::default();
    let state = DimerInitialState::from_population(cfg.population).unwrap();
    let ladder = perturbative_ladder(&cfg, &state).unwrap();
    let decreasing = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    let window = ladder.window.clone().unwrap_or_default();
    outcome(
        decreasing(&ladder.dimer) && ladder.window.is_some() && decreasing(&window),
        format!(
            "V/Omega = {:?}: dimer residual/(V/Omega) = {:.3e}, {:.3e}, {:.3e}; window = {:.3e}, {:.3e}, {:.3e}",
            ladder.ratios, ladder.dimer[0], ladder.dimer[1], ladder.dimer[2], window[0], window[1], window[2]
        ),
    )
}

fn c6() -> Outcome {
    let model =
        SpectralModel::new(SpectralDensity::power_law(1.0 / (2.0 * PI), -1.0, 1.0).unwrap());
    let lambda = 0.5;
    let full = FrequencyWindow::full();
    let ts: Vec<f64> = (0..46).map(|k| 50.0 + 10.0 * k as f64).collect();
    let ys: Vec<f64> = ts
        .iter()
        .map(|&t| x_decoherence_exponent(&model, &full, lambda, t).unwrap())
        .collect();
    let n = ts.len() as f64;
    let (mt, my) = (ts.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = ts
        .iter()
        .zip(&ys)
        .map(|(t, y)| (t - mt) * (y - my))
        .sum::<f64>()
        / ts.iter().map(|t| (t - mt) * (t - mt)).sum::<f64>();
    let expected = 2.0 * PI * lambda * lambda / (2.0 * PI);
    outcome(
        ((slope - expected) / expected).abs() <= 0.05,
        format!("fitted slope {slope:.5}, expected {expected}, tol 5%"),
    )
}

fn c7() -> Outcome {
    let model = SpectralModel::new(SpectralDensity::heaviside(1.0, 0.0, 1.0).unwrap())
        .with_g(CouplingFn::power(1.0, 1.0));
    let lambda = 1.0;
    let full = FrequencyWindow::full();
    let plateau = d_plateau(&model, &full).unwrap();
    let plateau_err = (plateau - (-1.0f64).exp()).abs();
    let mut worst: f64 = 0.0;
    let mut best = f64::INFINITY;
    // Envelope over windows of one oscillation period of the cutoff term.
    for k in 0..30 {
        let lo = 10.0 + 3.0 * k as f64;
        let mut peak: f64 = 0.0;
        for i in 0..40 {
            let t = lo + PI * i as f64 / 40.0;
            let s = s_continuum_d(&model, &full, lambda, t).unwrap().norm();
            peak =
                peak.max((s - plateau).abs() / (plateau * d_leading_envelope(&model, lambda, t)));
        }
        worst = worst.max(peak);
        best = best.min(peak);
    }
    outcome(
        plateau_err <= 1e-8 && worst <= 2.0 && best >= 0.5,
        format!(
            "plateau error {plateau_err:.2e}; |s| - plateau over leading term, per-period peak in [{best:.3}, {worst:.3}], \
             allowed [0.5, 2], t in [10, 100]"
        ),
    )
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let model = SpectralModel::new(SpectralDensity::power_law(1.0, 0.0, 1.0).unwrap());
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    for _ in 0..20 {
        let w0 = rng.gen_range(0.2..2.0);
        let w1 = w0 + rng.gen_range(0.1..2.0);
        let lambda = rng.gen_range(0.05..1.0);
        let t = 2.0 / (w1 - w0) * rng.gen_range(1.05..20.0);
        let (lo, hi) = window_bounds_x(&model, w0, w1, lambda, t).unwrap();
        let s = s_continuum_x(
            &model,
            &FrequencyWindow::interval(w0, w1).unwrap(),
            lambda,
            t,
        )
        .unwrap();
        if !(lo <= s && s <= hi) {
            failures += 1;
        }
        tightest = tightest.min((s - lo).min(hi - s));
    }
    outcome(
        failures == 0,
        format!("{failures} of 20 draws outside the bounds, smallest margin {tightest:.3e}"),
    )
}

fn c9() -> Outcome {
    let taus: Vec<f64> = (0..50).map(|k| 0.05 * 1.17f64.powi(k)).collect();
    let opts = QuadOptions::default();
    let mut worst: f64 = 0.0;
    for q in [-1.0, 0.0, 0.5, 1.0, 2.0] {
        for &tau in &taus {
            let closed = q2_closed_form(q, tau).unwrap();
            let direct = q2_quadrature(q, tau, 0.0, f64::INFINITY).unwrap();
            worst = worst.max((closed - direct).abs() / closed.abs().max(1.0));
        }
    }
    let (nu0, nu1) = (0.3, 1.1);
    for &tau in &taus {
        let closed = q2_window(nu0, nu1, tau).unwrap();
        let direct = integrate(
            |z: f64| 2.0 / PI * (1.0 - (tau * z).cos()) / (z * z),
            nu0,
            nu1,
            opts,
        )
        .unwrap()
        .value;
        worst = worst.max((closed - direct).abs() / closed.abs().max(1.0));
    }
    for (eps, mu, k) in [(0.1, 1.0, 1.0), (0.5, 2.0, 0.5), (0.2, 0.5, 2.0)] {
        for &tau in &taus {
            let closed = sd_closed_form(eps, mu, k, tau).unwrap();
            let bracket = integrate(|u: f64| 1.0 - (mu * tau * u.powf(k)).cos(), 0.0, 1.0, opts)
                .unwrap()
                .value;
            let direct = (-eps * mu.powf(k) * bracket).exp();
            worst = worst.max((closed - direct).abs());
        }
    }
    outcome(
        worst <= 1e-7,
        format!("largest deviation {worst:.2e} over 50-point tau grids, tol 1e-7"),
    )
}

fn c10() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, err: f64, tol: f64| {
        ok &= err <= tol;
        notes.push(format!("{name} {err:.1e}"));
    };

    // X-model |s_J| does not depend on the displacements.
    let a = DiscreteModeSet::x_model(reference_modes(), 0.3, 1.0).unwrap();
    let shifted: Vec<Mode> = reference_modes()
        .into_iter()
        .map(|m| Mode {
            alpha: c(-1.3, 2.2),
            ..m
        })
        .collect();
    let b = DiscreteModeSet::x_model(shifted, 0.3, 1.0).unwrap();
    let full = FrequencyWindow::full();
    let err = TIMES
        .iter()
        .map(|&t| (s_discrete_x(&a, &full, t) - s_discrete_x(&b, &full, t)).abs())
        .fold(0.0, f64::max);
    check("alpha-independence", err, 0.0);

    // ln s is additive over disjoint windows, in both models.
    let model = SpectralModel::new(SpectralDensity::power_law(0.5, 0.5, 1.0).unwrap())
        .with_g(CouplingFn::power(1.0, 1.0));
    let (j1, j2) = (
        FrequencyWindow::interval(0.0, 0.7).unwrap(),
        FrequencyWindow::interval(0.7, 3.0).unwrap(),
    );
    let joint = j1.union(&j2).unwrap();
    let mut err: f64 = 0.0;
    for t in [0.5, 2.0, 9.0] {
        let x = |w: &FrequencyWindow| s_continuum_x(&model, w, 0.4, t).unwrap().ln();
        err = err.max((x(&joint) - x(&j1) - x(&j2)).abs());
        let d = |w: &FrequencyWindow| s_continuum_d(&model, w, 0.4, t).unwrap();
        err = err.max((d(&joint) - d(&j1) * d(&j2)).norm());
    }
    check("window additivity", err, 1e-10);

    // Entropy decreases as |s_J| grows, and vanishes for p in {0, 1}.
    let mut increase: f64 = 0.0;
    for p in [0.1, 0.3, 0.5, 0.8] {
        let values: Vec<f64> = (0..=100).map(|k| entropy(p, k as f64 / 100.0)).collect();
        increase = increase.max(
            values
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::NEG_INFINITY, f64::max),
        );
    }
    check("entropy monotone", increase.max(0.0), 0.0);
    let pure = [0.0, 0.4, 1.0]
        .iter()
        .map(|&s| entropy(0.0, s).max(entropy(1.0, s)))
        .fold(0.0, f64::max);
    check("p in {0,1}", pure, 0.0);

    // Entanglement entropy of the dimer equals that of the whole reservoir.
    let state = DimerInitialState::from_population(0.3).unwrap();
    let params = CouplingParams {
        lambda: 0.3,
        mu: 0.05,
        dimer_frequency: 1.0,
        tunneling: 0.2,
    };
    let modes = vec![
        Mode::new(1.0, 1.0, 0.4, c(0.6, 0.0)),
        Mode::new(1.7, 0.6, 0.2, c(0.0, 0.4)),
    ];
    let modes = DiscreteModeSet::d_model(modes, params).unwrap();
    let space = TruncatedSpace::new(vec![8, 8], DEFAULT_CAP).unwrap();
    let psi = evolve_exact(&state, &modes, &space, &[0.7, 4.0]).unwrap();
    let err = psi
        .iter()
        .map(|p| {
            let dimer = reduce_dimer(p).unwrap().spectrum().unwrap().entropy();
            (dimer - window_spectrum(p, &[0, 1], 0.0).unwrap().entropy()).abs()
        })
        .fold(0.0, f64::max);
    check("dimer-EE = reservoir-EE", err, 1e-10);

    // Identical configurations give byte-identical CSV, whatever the thread count.
    let cfg = RunConfig {
        model: ModelKind::D,
        p_steps: 11,
        tau_min: 0.1,
        tau_max: 100.0,
        tau_steps: 40,
        tau_spacing: Spacing::Log,
        ..Default::default()
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| cmd_surface(&cfg).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| cmd_surface(&cfg).unwrap());
    check(
        "csv determinism",
        if one == many && one.text == cmd_surface(&cfg).unwrap().text {
            0.0
        } else {
            1.0
        },
        0.0,
    );

    outcome(ok, notes.join(", "))
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "X plateau, q = 1", s(1), c1),
        criterion(2, "X maximal entropy, q = -1", s(1), c2),
        criterion(3, "oracle equivalence, X-model", s(10), c3),
        criterion(
            4,
            "oracle equivalence, D-model without tunneling",
            s(10),
            c4,
        ),
        criterion(5, "first-order residual scaling", s(60), c5),
        criterion(6, "X decay rate", s(5), c6),
        criterion(7, "D plateau and 1/t approach", s(5), c7),
        criterion(8, "window bounds bracket", s(5), c8),
        criterion(9, "closed forms against quadrature", s(30), c9),
        criterion(10, "invariant suite", s(10), c10),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
