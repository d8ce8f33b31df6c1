//! Globally adaptive 15-point Gauss–Kronrod quadrature on a finite interval.
//!
//! The initial partition is taken from caller-supplied breakpoints so that
//! kinks of piecewise-smooth integrands sit on interval boundaries.

use alloc::vec::Vec;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// 7-point Gauss weights at `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of per-interval `|Kronrod - Gauss|` estimates.
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]` to absolute
/// tolerance `abs_tol`, bisecting the worst segment until the summed error
/// estimate drops below it or `max_segments` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_segments: usize,
) -> Result<Quadrature> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "quadrature breakpoints must be strictly increasing",
        ));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::Domain("quadrature tolerance must be positive"));
    }

    let mut segments: Vec<Segment> = breakpoints
        .windows(2)
        .map(|w| gk15(&f, w[0], w[1]))
        .collect();

    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol {
            return Ok(Quadrature {
                value: segments.iter().map(|s| s.value).sum(),
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= max_segments {
            return Err(Error::QuadratureFailure {
                estimate: segments.iter().map(|s| s.value).sum(),
                error,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if !(s.a < mid && mid < s.b) {
            return Err(Error::QuadratureFailure {
                estimate: segments.iter().map(|s| s.value).sum::<f64>() + s.value,
                error,
            });
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x * x, &[0.0, 1.0], 1e-12, 10).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(q.intervals, 1);
    }

    #[test]
    fn kink_on_breakpoint() {
        let f = |u: f64| u.min(0.5).powi(2);
        let q = integrate(f, &[0.0, 0.5, 1.0], 1e-12, 100).unwrap();
        assert!((q.value - (1.0 / 24.0 + 0.125)).abs() < 1e-14);
    }

    #[test]
    fn kink_off_breakpoint_still_converges() {
        let f = |u: f64| (u - 0.3).abs();
        let q = integrate(f, &[0.0, 1.0], 1e-10, 1000).unwrap();
        assert!((q.value - (0.045 + 0.245)).abs() < 1e-9);
    }

    #[test]
    fn smooth_transcendental() {
        let q = integrate(|x: f64| x.exp(), &[0.0, 1.0], 1e-12, 50).unwrap();
        assert!((q.value - (core::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion() {
        let f = |x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 };
        assert!(matches!(
            integrate(f, &[0.0, 1.0], 1e-14, 4),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn bad_arguments() {
        assert!(integrate(|x| x, &[1.0, 0.0], 1e-8, 10).is_err());
        assert!(integrate(|x| x, &[0.0, 1.0], 0.0, 10).is_err());
    }
}
