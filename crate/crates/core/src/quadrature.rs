//! Globally adaptive Gauss–Kronrod (7/15) quadrature for real and complex
//! integrands on finite intervals.
//!
//! The caller supplies breakpoints; every initial panel enters one priority
//! queue and the panel with the largest error estimate is bisected until the
//! summed estimate meets the tolerance. Oscillatory integrands should be
//! pre-split into panels spanning at most a fraction of a period.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values the integrator can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed beyond the initial panels.
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_subdivisions: 20_000,
        }
    }
}

impl QuadOptions {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
}

struct Panel<T> {
    lo: f64,
    hi: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<T: QuadValue>(f: &impl Fn(f64) -> T, lo: f64, hi: f64) -> Panel<T> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    Panel {
        lo,
        hi,
        value,
        error,
    }
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the panels
/// delimited by `points` (which must be nondecreasing).
pub fn integrate_panels<T: QuadValue>(
    f: impl Fn(f64) -> T,
    points: &[f64],
    opts: QuadOptions,
) -> Result<QuadResult<T>> {
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod(&f, w[0], w[1]));
        }
    }
    let (lo, hi) = match (points.first(), points.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            return Ok(QuadResult {
                value: T::zero(),
                error: 0.0,
            })
        }
    };
    let totals = |heap: &BinaryHeap<Panel<T>>| {
        heap.iter()
            .fold((T::zero(), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = totals(&heap);
    let mut splits = 0;
    while error > opts.abs_tol.max(opts.rel_tol * value.magnitude()) {
        if splits >= opts.max_subdivisions {
            return Err(Error::QuadratureFailure { lo, hi, error });
        }
        let worst = heap.pop().expect("nonempty while error is positive");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            return Err(Error::QuadratureFailure { lo, hi, error });
        }
        let left = gauss_kronrod(&f, worst.lo, mid);
        let right = gauss_kronrod(&f, mid, worst.hi);
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        // refresh running sums now and then to shed accumulated rounding
        if splits % 256 == 0 {
            (value, error) = totals(&heap);
        }
    }
    let (value, error) = totals(&heap);
    Ok(QuadResult { value, error })
}

pub fn integrate<T: QuadValue>(
    f: impl Fn(f64) -> T,
    lo: f64,
    hi: f64,
    opts: QuadOptions,
) -> Result<QuadResult<T>> {
    integrate_panels(f, &[lo, hi], opts)
}

/// Breakpoints covering `[lo, hi]` with panels no wider than `max_width`,
/// merged with the extra `breaks` that fall inside.
pub fn panel_points(lo: f64, hi: f64, max_width: f64, breaks: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    let n = if max_width.is_finite() && max_width > 0.0 {
        ((hi - lo) / max_width).ceil().max(1.0) as usize
    } else {
        1
    };
    let step = (hi - lo) / n as f64;
    pts.extend((1..n).map(|i| lo + i as f64 * step));
    pts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
