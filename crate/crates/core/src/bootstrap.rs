//! Multiplier bootstrap for `eta` and `Delta`.
//!
//! Each replicate reweights observation `i` by a positive multiplier
//! `xi_i`. With `w_i = xi_i / mean(xi)` the weighted reverse rank is
//! `R(v_i) = sum_j w_j I(v_j > v_i)`, and along decreasing `y`
//!
//! ```text
//! eta*(X|Y) = 3/k^3 sum_{i,j <= tau(k)} w_[i] w_[j] (k - max(R(X_[i]), R(X_[j])))_+
//! tau(k)    = max{i : R(Y_(i)) < k}
//! ```
//!
//! Replicate `b` draws its multipliers from ChaCha stream `b` of the seed,
//! so replicates can be computed in any order (or in parallel) and collected
//! by index with identical results.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Exp1, Gamma};
// inherent f64 math shadows these whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::estimators::{validate_kgrid, Direction};
use crate::normal::normal_quantile;
use crate::ranks::{descending_order, reverse_ranks, PairedSample};
use crate::rng::stream_rng;
use crate::{Error, Result};

/// Law of the bootstrap multipliers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum MultiplierScheme {
    /// Exponential with mean 1 (`mu = tau = 1`).
    #[default]
    UnitExponential,
    /// Gamma with mean `mu` and standard deviation `tau`.
    Gamma { mu: f64, tau: f64 },
}

impl MultiplierScheme {
    pub fn mu(&self) -> f64 {
        match *self {
            Self::UnitExponential => 1.0,
            Self::Gamma { mu, .. } => mu,
        }
    }

    pub fn tau(&self) -> f64 {
        match *self {
            Self::UnitExponential => 1.0,
            Self::Gamma { tau, .. } => tau,
        }
    }

    pub fn validated(self) -> Result<Self> {
        let (mu, tau) = (self.mu(), self.tau());
        if mu > 0.0 && tau > 0.0 && mu.is_finite() && tau.is_finite() {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(
                "multiplier mean and sd must be positive",
            ))
        }
    }

    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        match *self {
            Self::UnitExponential => (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect(),
            Self::Gamma { mu, tau } => {
                let shape = (mu / tau) * (mu / tau);
                let gamma = Gamma::new(shape, tau * tau / mu).expect("validated scheme");
                (0..n).map(|_| rng.sample(gamma)).collect()
            }
        }
    }
}

/// `n` multipliers from stream 0 of `seed`.
pub fn draw_multipliers(scheme: MultiplierScheme, n: usize, seed: u64) -> Vec<f64> {
    replicate_multipliers(scheme, n, seed, 0)
}

/// `n` multipliers for replicate `b` (stream `b` of `seed`).
pub fn replicate_multipliers(scheme: MultiplierScheme, n: usize, seed: u64, b: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, b);
    let mut w = scheme.fill(&mut rng, n);
    // an exponential draw can underflow to exactly 0
    for v in &mut w {
        if *v <= 0.0 {
            *v = f64::MIN_POSITIVE;
        }
    }
    w
}

fn normalized(weights: &[f64], n: usize) -> Result<Vec<f64>> {
    if weights.len() != n {
        return Err(Error::LengthMismatch {
            x: n,
            y: weights.len(),
        });
    }
    if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(
            "multiplier weights must be positive and finite",
        ));
    }
    let mean = weights.iter().sum::<f64>() / n as f64;
    Ok(weights.iter().map(|&w| w / mean).collect())
}

/// `R(v_i)` at each original index, given the descending order of `v`.
fn prefix_ranks(order: &[usize], w: &[f64]) -> Vec<f64> {
    let mut r = alloc::vec![0.0; order.len()];
    let mut acc = 0.0;
    for &i in order {
        r[i] = acc;
        acc += w[i];
    }
    r
}

/// `R(v_i) = sum_j (xi_j / mean(xi)) I(v_j > v_i)`; with equal weights this
/// is the reverse rank minus one.
pub fn weighted_reverse_rank(v: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    reverse_ranks(v)?;
    let w = normalized(weights, v.len())?;
    Ok(prefix_ranks(&descending_order(v), &w))
}

/// Descending orders of both series, shared by every replicate.
#[derive(Debug, Clone)]
struct Orders {
    x: Vec<usize>,
    y: Vec<usize>,
}

impl Orders {
    fn of(sample: &PairedSample) -> Self {
        Self {
            x: descending_order(sample.x()),
            y: descending_order(sample.y()),
        }
    }
}

/// Weighted reverse ranks of one replicate.
struct Weighted {
    w: Vec<f64>,
    rx: Vec<f64>,
    ry: Vec<f64>,
}

impl Weighted {
    fn new(orders: &Orders, w: Vec<f64>) -> Self {
        let rx = prefix_ranks(&orders.x, &w);
        let ry = prefix_ranks(&orders.y, &w);
        Self { w, rx, ry }
    }

    fn eta(&self, orders: &Orders, k: usize, direction: Direction) -> f64 {
        // conditioning series order and ranks, ranks of the explained series
        let (order, cond, target) = match direction {
            Direction::XGivenY => (&orders.y, &self.ry, &self.rx),
            Direction::YGivenX => (&orders.x, &self.rx, &self.ry),
        };
        let kf = k as f64;
        let tau = order.partition_point(|&i| cond[i] < kf);
        let mut top: Vec<(f64, f64)> = order[..tau]
            .iter()
            .map(|&i| (target[i], self.w[i]))
            .filter(|&(r, _)| r < kf)
            .collect();
        top.sort_by(|a, b| a.0.total_cmp(&b.0));

        // item l is the larger-ranked member of the pairs it forms with
        // itself and with every earlier item
        let mut earlier = 0.0;
        let mut sum = 0.0;
        for (r, w) in top {
            sum += w * (kf - r) * (w + 2.0 * earlier);
            earlier += w;
        }
        3.0 * sum / (kf * kf * kf)
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, min: 2, max: n });
    }
    Ok(())
}

/// Multiplier-bootstrap `eta*_{k,n}` for the given weights.
pub fn bootstrap_eta(
    sample: &PairedSample,
    k: usize,
    weights: &[f64],
    direction: Direction,
) -> Result<f64> {
    check_k(k, sample.n())?;
    let w = normalized(weights, sample.n())?;
    let orders = Orders::of(sample);
    Ok(Weighted::new(&orders, w).eta(&orders, k, direction))
}

/// `eta*(X|Y) - eta*(Y|X)` with one set of weights.
pub fn bootstrap_delta(sample: &PairedSample, k: usize, weights: &[f64]) -> Result<f64> {
    check_k(k, sample.n())?;
    let w = normalized(weights, sample.n())?;
    let orders = Orders::of(sample);
    let wr = Weighted::new(&orders, w);
    Ok(wr.eta(&orders, k, Direction::XGivenY) - wr.eta(&orders, k, Direction::YGivenX))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub scheme: MultiplierScheme,
    pub seed: u64,
    /// Level of the two-sided confidence interval, `(1 - alpha) 100%`.
    pub alpha: f64,
}

impl BootstrapConfig {
    pub fn new(replicates: usize, seed: u64) -> Self {
        Self {
            replicates,
            scheme: MultiplierScheme::UnitExponential,
            seed,
            alpha: 0.05,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidB);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)"));
        }
        self.scheme.validated().map(|_| ())
    }
}

/// Per-`k` outcome of a bootstrap test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub k: usize,
    pub statistic: f64,
    /// `exceedances / replicates`.
    pub p_value: f64,
    pub exceedances: usize,
    pub boot_sd: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub replicates: usize,
    pub alpha: f64,
}

/// Bootstrap `eta*` values of one replicate, per `k` of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Replicate {
    pub eta_xy: Vec<f64>,
    pub eta_yx: Vec<f64>,
}

impl Replicate {
    pub fn eta(&self, direction: Direction) -> &[f64] {
        match direction {
            Direction::XGivenY => &self.eta_xy,
            Direction::YGivenX => &self.eta_yx,
        }
    }
}

/// A sample, k-grid and configuration ready for replicate evaluation.
///
/// [`Bootstrap::replicate`] is a pure function of `b`, so callers may
/// evaluate replicates concurrently and pass them back in order of `b`.
#[derive(Debug, Clone)]
pub struct Bootstrap<'a> {
    sample: &'a PairedSample,
    kgrid: Vec<usize>,
    config: BootstrapConfig,
    orders: Orders,
}

impl<'a> Bootstrap<'a> {
    pub fn new(sample: &'a PairedSample, kgrid: &[usize], config: BootstrapConfig) -> Result<Self> {
        config.validate()?;
        validate_kgrid(kgrid, sample.n())?;
        Ok(Self {
            sample,
            kgrid: kgrid.to_vec(),
            config,
            orders: Orders::of(sample),
        })
    }

    pub fn kgrid(&self) -> &[usize] {
        &self.kgrid
    }

    pub fn config(&self) -> &BootstrapConfig {
        &self.config
    }

    /// Replicate `b`, for `b` in `1..=replicates`.
    pub fn replicate(&self, b: u64) -> Replicate {
        let raw = replicate_multipliers(self.config.scheme, self.sample.n(), self.config.seed, b);
        let w = normalized(&raw, self.sample.n()).expect("multipliers are positive");
        let wr = Weighted::new(&self.orders, w);
        let per = |d| {
            self.kgrid
                .iter()
                .map(|&k| wr.eta(&self.orders, k, d))
                .collect()
        };
        Replicate {
            eta_xy: per(Direction::XGivenY),
            eta_yx: per(Direction::YGivenX),
        }
    }

    pub fn run(&self) -> Vec<Replicate> {
        (1..=self.config.replicates as u64)
            .map(|b| self.replicate(b))
            .collect()
    }

    fn statistics(&self, direction: Direction) -> Vec<f64> {
        let ranks = match direction {
            Direction::XGivenY => self.sample.concomitant_ranks(),
            Direction::YGivenX => self.sample.swapped().concomitant_ranks(),
        };
        self.kgrid
            .iter()
            .map(|&k| crate::estimators::eta_from_ranks(&ranks, k).expect("validated grid"))
            .collect()
    }

    /// Test of `eta = 0` against `eta > 0`: counts replicates with
    /// `eta* - eta > eta`.
    pub fn eta_tests(
        &self,
        replicates: &[Replicate],
        direction: Direction,
    ) -> Result<Vec<TestResult>> {
        let stats = self.statistics(direction);
        self.summarize(
            replicates,
            &stats,
            |r, j| r.eta(direction)[j],
            |dev, stat| dev > stat,
        )
    }

    /// Test of `Delta = 0` against `Delta != 0`: counts replicates with
    /// `|Delta* - Delta| > |Delta|`.
    pub fn delta_tests(&self, replicates: &[Replicate]) -> Result<Vec<TestResult>> {
        let xy = self.statistics(Direction::XGivenY);
        let yx = self.statistics(Direction::YGivenX);
        let stats: Vec<f64> = xy.iter().zip(&yx).map(|(a, b)| a - b).collect();
        self.summarize(
            replicates,
            &stats,
            |r, j| r.eta_xy[j] - r.eta_yx[j],
            |dev, stat| dev.abs() > stat.abs(),
        )
    }

    fn summarize(
        &self,
        replicates: &[Replicate],
        stats: &[f64],
        value: impl Fn(&Replicate, usize) -> f64,
        exceeds: impl Fn(f64, f64) -> bool,
    ) -> Result<Vec<TestResult>> {
        let b = self.config.replicates;
        if replicates.len() != b {
            return Err(Error::InvalidB);
        }
        // replicate deviations are rescaled by mu / tau; 1 for the default
        let scale = self.config.scheme.mu() / self.config.scheme.tau();
        let z = normal_quantile(self.config.alpha / 2.0)?;
        Ok(self
            .kgrid
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                let stat = stats[j];
                let boot: Vec<f64> = replicates
                    .iter()
                    .map(|r| stat + scale * (value(r, j) - stat))
                    .collect();
                let exceedances = boot.iter().filter(|&&v| exceeds(v - stat, stat)).count();
                let boot_sd = if b > 1 {
                    let mean = boot.iter().sum::<f64>() / b as f64;
                    (boot.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (b - 1) as f64)
                        .sqrt()
                } else {
                    0.0
                };
                let half = z * boot_sd / (k as f64).sqrt();
                TestResult {
                    k,
                    statistic: stat,
                    p_value: exceedances as f64 / b as f64,
                    exceedances,
                    boot_sd,
                    ci_low: stat - half,
                    ci_high: stat + half,
                    replicates: b,
                    alpha: self.config.alpha,
                }
            })
            .collect())
    }
}

/// Bootstrap test of `eta(direction) = 0` over a k-grid.
pub fn test_eta_zero(
    sample: &PairedSample,
    kgrid: &[usize],
    direction: Direction,
    config: BootstrapConfig,
) -> Result<Vec<TestResult>> {
    let boot = Bootstrap::new(sample, kgrid, config)?;
    boot.eta_tests(&boot.run(), direction)
}

/// Bootstrap test of `Delta = 0` over a k-grid.
pub fn test_delta_zero(
    sample: &PairedSample,
    kgrid: &[usize],
    config: BootstrapConfig,
) -> Result<Vec<TestResult>> {
    let boot = Bootstrap::new(sample, kgrid, config)?;
    boot.delta_tests(&boot.run())
}

/// Sweep-level decision: reject when the share of `k` with `p < alpha`
/// reaches `rejection_fraction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepVerdict {
    pub fraction_rejected: f64,
    pub rejection_fraction: f64,
    pub reject: bool,
}

pub fn sweep_verdict(results: &[TestResult], alpha: f64, rejection_fraction: f64) -> SweepVerdict {
    let hits = results.iter().filter(|r| r.p_value < alpha).count();
    let fraction_rejected = if results.is_empty() {
        0.0
    } else {
        hits as f64 / results.len() as f64
    };
    SweepVerdict {
        fraction_rejected,
        rejection_fraction,
        reject: !results.is_empty() && fraction_rejected >= rejection_fraction,
    }
}
