use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, nine coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos sum and `t = x + g + 1/2` for `x = u - 1 >= -1/2`.
fn lanczos(u: f64) -> (f64, f64) {
    let x = u - 1.0;
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    (s, x + LANCZOS_G + 0.5)
}

fn gamma_unchecked(u: f64) -> f64 {
    if u < 0.5 {
        return PI / ((PI * u).sin() * gamma_unchecked(1.0 - u));
    }
    if u == u.floor() && u <= 171.0 {
        // exact factorials
        return (1..u as u64).fold(1.0, |acc, k| acc * k as f64);
    }
    let (s, t) = lanczos(u);
    (2.0 * PI).sqrt() * t.powf(u - 0.5) * (-t).exp() * s
}

/// `Gamma(u)` for `u > 0`.
pub fn gamma(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("gamma needs u > 0, got {u}")));
    }
    Ok(gamma_unchecked(u))
}

/// `ln Gamma(u)` for `u > 0`.
pub fn ln_gamma(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("ln_gamma needs u > 0, got {u}")));
    }
    if u < 0.5 {
        return Ok((PI / (PI * u).sin()).ln() - ln_gamma(1.0 - u)?);
    }
    let (s, t) = lanczos(u);
    Ok(0.5 * (2.0 * PI).ln() + (u - 0.5) * t.ln() - t + s.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(3.0).unwrap(), 2.0);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma(1.0 / 3.0).unwrap(),
            2.678_938_534_707_747_6,
            max_relative = 1e-14
        );
        assert_relative_eq!(gamma(2.5).unwrap(), 0.75 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            gamma(0.01).unwrap(),
            99.432_585_119_150_6,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            gamma(30.5).unwrap(),
            4.822_696_933_490_908_6e31,
            max_relative = 1e-13
        );
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
    }

    #[test]
    fn log_gamma_matches() {
        for &u in &[0.1, 0.5, 1.0, 2.7, 10.0, 55.5] {
            assert_relative_eq!(
                ln_gamma(u).unwrap(),
                gamma(u).unwrap().ln(),
                max_relative = 1e-13,
                epsilon = 1e-14
            );
        }
        assert_relative_eq!(
            ln_gamma(1000.0).unwrap(),
            5_905.220_423_209_181,
            max_relative = 1e-14
        );
    }

    #[test]
    fn recurrence() {
        for &u in &[0.3, 1.7, 4.2, 12.9] {
            assert_relative_eq!(
                gamma(u + 1.0).unwrap(),
                u * gamma(u).unwrap(),
                max_relative = 1e-13
            );
        }
    }
}
