use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

const TAYLOR_LIMIT: f64 = 4.0;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Sine integral `Si(x) = int_0^x sin(u)/u du`.
///
/// Taylor series for `|x| <= 4`; beyond that the continued fraction for
/// `E1(ix)`, from which `Si(x) = pi/2 + Im[e^{-ix} h]`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return FRAC_PI_2;
    }
    if x <= TAYLOR_LIMIT {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
            let contrib = term / (2.0 * n + 1.0);
            sum += contrib;
            if contrib.abs() < EPS * sum.abs() {
                return sum;
            }
        }
    }
    let tiny = Complex64::new(TINY, 0.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..1_000_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = a * d + b;
        if d.norm() < TINY {
            d = tiny;
        }
        d = d.inv();
        c = b + a / c;
        if c.norm() < TINY {
            c = tiny;
        }
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < EPS {
            break;
        }
    }
    let h = Complex64::new(x.cos(), -x.sin()) * h;
    FRAC_PI_2 + h.im
}
