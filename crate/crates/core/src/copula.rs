//! Analytical copula families with closed-form upper tail copulas.
//!
//! * `Nelsen(theta)`: `C(u,v) = min(u, theta v + (1 - theta)(u + v - 1)_+)`,
//!   tail copula `min(theta x, y)`.
//! * `KhoudrajiGumbel(alpha, beta, delta)`: the Khoudraji transform
//!   `u^(1-alpha) v^(1-beta) C*(u^alpha, v^beta)` of a Gumbel copula `C*`,
//!   tail copula `alpha x + beta y - ((alpha x)^delta + (beta y)^delta)^(1/delta)`.
//! * `MaxModel(m)`: the copula of `(Z_1, max(Z_1, ..., Z_m))`,
//!   `C(u,v) = min(u, v^(1/m)) v^(1 - 1/m)`, tail copula `min(x, y/m)`.
//!
//! The population coefficient is `eta(X|Y) = 3 int_0^1 Lambda(u,1)^2 du`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::Exp1;
// inherent f64 math shadows these whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::estimators::Direction;
use crate::quadrature::integrate;
use crate::ranks::{PairedSample, TiePolicy};
use crate::rng::{open01, stream_rng};
use crate::{Error, Result};

/// Segment budget for population quadrature.
const MAX_SEGMENTS: usize = 10_000;

/// Below this, the `delta = 2` closed form divides by (nearly) zero.
const ASINH_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaModel {
    Nelsen { theta: f64 },
    KhoudrajiGumbel { alpha: f64, beta: f64, delta: f64 },
    MaxModel { m: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopulationMethod {
    ClosedForm,
    Quadrature,
}

/// Population `eta(X|Y)`, `eta(Y|X)` and `Delta = eta(X|Y) - eta(Y|X)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationValues {
    pub eta_xy: f64,
    pub eta_yx: f64,
    pub delta: f64,
    /// How the two `eta` values were obtained.
    pub method: PopulationMethod,
    /// Independent closed-form `Delta`, when the family has one.
    pub delta_closed_form: Option<f64>,
}

fn unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

impl CopulaModel {
    pub fn nelsen(theta: f64) -> Result<Self> {
        Self::Nelsen { theta }.validated()
    }

    pub fn khoudraji_gumbel(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        Self::KhoudrajiGumbel { alpha, beta, delta }.validated()
    }

    pub fn max_model(m: u32) -> Result<Self> {
        Self::MaxModel { m }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        match self {
            Self::Nelsen { theta } if !unit(theta) => {
                Err(Error::InvalidParameter("theta must lie in [0, 1]"))
            }
            Self::KhoudrajiGumbel { alpha, beta, .. } if !unit(alpha) || !unit(beta) => {
                Err(Error::InvalidParameter("alpha and beta must lie in [0, 1]"))
            }
            Self::KhoudrajiGumbel { delta, .. } if !(delta >= 1.0) || !delta.is_finite() => {
                Err(Error::InvalidParameter("delta must be finite and >= 1"))
            }
            Self::MaxModel { m } if m < 2 => Err(Error::InvalidParameter("m must be >= 2")),
            model => Ok(model),
        }
    }

    /// Copula `C(u, v)` on the unit square.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        if !unit(u) || !unit(v) {
            return Err(Error::Domain("copula arguments must lie in [0, 1]"));
        }
        let c = match *self {
            Self::Nelsen { theta } => u.min(theta * v + (1.0 - theta) * (u + v - 1.0).max(0.0)),
            Self::KhoudrajiGumbel { alpha, beta, delta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    let s = gumbel_norm(-alpha * u.ln(), -beta * v.ln(), delta);
                    u.powf(1.0 - alpha) * v.powf(1.0 - beta) * (-s).exp()
                }
            }
            Self::MaxModel { m } => {
                let root = v.powf(1.0 / m as f64);
                u.min(root) * v / root.max(f64::MIN_POSITIVE)
            }
        };
        Ok(c.clamp(0.0, u.min(v)))
    }

    /// Survival copula `u + v - 1 + C(1 - u, 1 - v)`.
    pub fn survival(&self, u: f64, v: f64) -> Result<f64> {
        if !unit(u) || !unit(v) {
            return Err(Error::Domain("copula arguments must lie in [0, 1]"));
        }
        let s = u + v - 1.0 + self.cdf(1.0 - u, 1.0 - v)?;
        Ok(s.clamp(0.0, u.min(v)))
    }

    /// Upper tail copula `Lambda(x, y)`. An infinite argument returns the
    /// other one (`Lambda(x, inf) = x`).
    pub fn tail_copula(&self, x: f64, y: f64) -> Result<f64> {
        if x.is_nan() || y.is_nan() || x < 0.0 || y < 0.0 {
            return Err(Error::Domain("tail copula arguments must be >= 0"));
        }
        match (x.is_infinite(), y.is_infinite()) {
            (true, true) => return Err(Error::Domain("tail copula arguments both infinite")),
            (true, false) => return Ok(y),
            (false, true) => return Ok(x),
            _ => {}
        }
        let l = match *self {
            Self::Nelsen { theta } => (theta * x).min(y),
            Self::KhoudrajiGumbel { alpha, beta, delta } => {
                let (a, b) = (alpha * x, beta * y);
                a + b - gumbel_norm(a, b, delta)
            }
            Self::MaxModel { m } => x.min(y / m as f64),
        };
        Ok(l.clamp(0.0, x.min(y)))
    }

    /// Stable tail dependence function `x + y - Lambda(x, y)`.
    pub fn stable_tail_dependence(&self, x: f64, y: f64) -> Result<f64> {
        Ok(x + y - self.tail_copula(x, y)?)
    }

    /// Tail dependence coefficient `chi = Lambda(1, 1)`.
    pub fn chi(&self) -> f64 {
        self.tail_copula(1.0, 1.0).unwrap_or(0.0)
    }

    /// `u -> Lambda(u, 1)` for `XGivenY`, `u -> Lambda(1, u)` for `YGivenX`.
    pub fn tail_slice(&self, direction: Direction, u: f64) -> f64 {
        let (x, y) = match direction {
            Direction::XGivenY => (u, 1.0),
            Direction::YGivenX => (1.0, u),
        };
        self.tail_copula(x, y).unwrap_or(0.0)
    }

    /// Interior points where the slice is not differentiable.
    fn slice_kinks(&self, direction: Direction) -> Vec<f64> {
        let kink = match (*self, direction) {
            (Self::Nelsen { theta }, Direction::YGivenX) => Some(theta),
            (Self::MaxModel { m }, Direction::XGivenY) => Some(1.0 / m as f64),
            _ => None,
        };
        kink.into_iter().filter(|&p| p > 0.0 && p < 1.0).collect()
    }

    /// `3 int_0^1 slice(u)^2 du` by adaptive quadrature.
    pub fn eta_by_quadrature(&self, direction: Direction, tol: f64) -> Result<f64> {
        let mut points = vec![0.0];
        points.extend(self.slice_kinks(direction));
        points.push(1.0);
        let q = integrate(
            |u| {
                let l = self.tail_slice(direction, u);
                l * l
            },
            &points,
            tol / 3.0,
            MAX_SEGMENTS,
        )?;
        Ok(3.0 * q.value)
    }

    /// Population values by quadrature regardless of closed forms.
    pub fn quadrature_values(&self, tol: f64) -> Result<PopulationValues> {
        if !(tol > 0.0) {
            return Err(Error::Domain("integration tolerance must be positive"));
        }
        let eta_xy = self.eta_by_quadrature(Direction::XGivenY, tol)?;
        let eta_yx = self.eta_by_quadrature(Direction::YGivenX, tol)?;
        Ok(PopulationValues {
            eta_xy,
            eta_yx,
            delta: eta_xy - eta_yx,
            method: PopulationMethod::Quadrature,
            delta_closed_form: self.closed_form_delta(),
        })
    }

    /// Population values, closed form where the family has one and
    /// quadrature with absolute tolerance `tol` otherwise.
    pub fn population_values(&self, tol: f64) -> Result<PopulationValues> {
        if !(tol > 0.0) {
            return Err(Error::Domain("integration tolerance must be positive"));
        }
        match self.closed_form_etas() {
            Some((eta_xy, eta_yx)) => Ok(PopulationValues {
                eta_xy,
                eta_yx,
                delta: eta_xy - eta_yx,
                method: PopulationMethod::ClosedForm,
                delta_closed_form: self.closed_form_delta(),
            }),
            None => self.quadrature_values(tol),
        }
    }

    fn closed_form_etas(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Nelsen { theta } => {
                let t2 = theta * theta;
                Some((t2, 3.0 * t2 - 2.0 * t2 * theta))
            }
            Self::MaxModel { m } => {
                let m = m as f64;
                Some((3.0 / (m * m) - 2.0 / (m * m * m), 1.0 / (m * m)))
            }
            Self::KhoudrajiGumbel { alpha, beta, delta } => {
                if alpha == 0.0 || beta == 0.0 || delta == 1.0 {
                    // Lambda vanishes identically
                    Some((0.0, 0.0))
                } else {
                    None
                }
            }
        }
    }

    fn closed_form_delta(&self) -> Option<f64> {
        match *self {
            Self::Nelsen { theta } => Some(-2.0 * theta * theta * (1.0 - theta)),
            Self::MaxModel { m } => {
                let m = m as f64;
                Some(2.0 / (m * m) * (1.0 - 1.0 / m))
            }
            Self::KhoudrajiGumbel { alpha, beta, delta } => {
                if delta == 2.0 && alpha.min(beta) >= ASINH_GUARD {
                    Some(khoudraji_gumbel2_delta(alpha, beta))
                } else {
                    None
                }
            }
        }
    }

    /// `n` i.i.d. pairs from the model, deterministic in `seed`.
    ///
    /// Nelsen and Khoudraji–Gumbel draws have uniform margins. `MaxModel`
    /// returns the literal `(Z_1, max(Z_1, ..., Z_m))`, whose second margin
    /// is `v^m`; its copula is the model's.
    pub fn sample(&self, n: usize, seed: u64) -> Result<PairedSample> {
        if n < 2 {
            return Err(Error::InvalidN(n));
        }
        let mut rng = stream_rng(seed, 0);
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for _ in 0..n {
            let (a, b) = self.draw(&mut rng);
            x.push(a);
            y.push(b);
        }
        PairedSample::new(x, y, TiePolicy::Reject)
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            Self::Nelsen { theta } => {
                let v = open01(rng);
                let t = open01(rng);
                // conditional law of U given V = v is supported on at most
                // two points, read off the piecewise-linear copula
                let u = if v * (1.0 + theta) < 1.0 {
                    if t <= theta {
                        theta * v
                    } else {
                        1.0 - v
                    }
                } else {
                    (v - (1.0 - theta)) / theta
                };
                (u, v)
            }
            Self::KhoudrajiGumbel { alpha, beta, delta } => {
                let (w1, w2) = gumbel_pair(rng, delta);
                let u1 = open01(rng);
                let u2 = open01(rng);
                (khoudraji_mix(w1, u1, alpha), khoudraji_mix(w2, u2, beta))
            }
            Self::MaxModel { m } => {
                let z1 = open01(rng);
                let mut top = z1;
                for _ in 1..m {
                    top = top.max(open01(rng));
                }
                (z1, top)
            }
        }
    }
}

/// `(a^delta + b^delta)^(1/delta)` without overflow for large `delta`.
fn gumbel_norm(a: f64, b: f64, delta: f64) -> f64 {
    let hi = a.max(b);
    if hi == 0.0 {
        return 0.0;
    }
    let lo = a.min(b);
    hi * (1.0 + (lo / hi).powf(delta)).powf(1.0 / delta)
}

/// `max(w^(1/a), u^(1/(1-a)))`, dropping the factor whose exponent is
/// degenerate at `a = 0` or `a = 1`.
fn khoudraji_mix(w: f64, u: f64, a: f64) -> f64 {
    if a == 0.0 {
        u
    } else if a == 1.0 {
        w
    } else {
        w.powf(1.0 / a).max(u.powf(1.0 / (1.0 - a)))
    }
}

/// Positive stable variable with Laplace transform `exp(-t^a)`, `0 < a < 1`
/// (Kanter's representation).
pub(crate) fn positive_stable<R: Rng + ?Sized>(rng: &mut R, a: f64) -> f64 {
    let theta = PI * open01(rng);
    let e: f64 = rng.sample(Exp1);
    let left = (a * theta).sin() / theta.sin().powf(1.0 / a);
    let right = (((1.0 - a) * theta).sin() / e).powf((1.0 - a) / a);
    left * right
}

/// One draw from the symmetric Gumbel copula with parameter `delta` via
/// Marshall–Olkin frailty.
fn gumbel_pair<R: Rng + ?Sized>(rng: &mut R, delta: f64) -> (f64, f64) {
    if delta == 1.0 {
        return (open01(rng), open01(rng));
    }
    let a = 1.0 / delta;
    let s = positive_stable(rng, a);
    let e1: f64 = rng.sample(Exp1);
    let e2: f64 = rng.sample(Exp1);
    ((-(e1 / s).powf(a)).exp(), (-(e2 / s).powf(a)).exp())
}

/// Closed-form `Delta` of the Khoudraji–Gumbel family at `delta = 2`.
pub fn khoudraji_gumbel2_delta(alpha: f64, beta: f64) -> f64 {
    let (a, b) = (alpha, beta);
    let r = (a * a + b * b).sqrt();
    let a3 = a * a * a;
    let b3 = b * b * b;
    3.0 * a3 * (b / a).asinh() / b - 2.0 * a3 / b - 4.0 * a * a + 2.0 * a * a * r / b + a * r
        - 3.0 * b3 * (a / b).asinh() / a
        + 2.0 * b3 / a
        + 4.0 * b * b
        - 2.0 * b * b * r / a
        - b * r
}
