//! Sample ETA coefficient, tail-asymmetry statistic and the empirical
//! upper tail copula slice.
//!
//! With `rho` the concomitant reverse ranks,
//!
//! ```text
//! eta_{k,n}(X|Y) = 3/k^3 * sum_{i,j < k} (k + 1 - max(rho_i, rho_j))_+
//! ```
//!
//! and the empirical slice `u -> (1/k) #{i < k : rho_i < k u + 1}` satisfies
//! `3 * int_0^1 slice(u)^2 du = eta_{k,n}(X|Y)` exactly.

use alloc::vec::Vec;

use crate::ranks::{ConcomitantRanks, PairedSample};
use crate::{Error, Result};

/// Which series is explained by which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `eta(X|Y)`: ranks of `x` along decreasing `y`.
    XGivenY,
    /// `eta(Y|X)`: ranks of `y` along decreasing `x`.
    YGivenX,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::XGivenY => Direction::YGivenX,
            Direction::YGivenX => Direction::XGivenY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaEstimate {
    pub value: f64,
    pub k: usize,
    pub n: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub value: f64,
    pub k: usize,
    pub n: usize,
    pub eta_xy: EtaEstimate,
    pub eta_yx: EtaEstimate,
}

/// Piecewise-constant `u -> Lambda_hat_{k,n}(u, 1)` on `[0, 1]`.
///
/// `values[j]` holds on `(breakpoints[j], breakpoints[j + 1]]`; the first
/// breakpoint is 0 and the last is 1. The function is left-continuous
/// because the defining indicator `rho_i < k u + 1` is strict.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCopulaGrid {
    pub k: usize,
    pub n: usize,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
    /// Sorted contributing ranks (`rho_i <= k`, `i < k`) for sample grids.
    ranks: Option<Vec<usize>>,
}

impl TailCopulaGrid {
    /// A grid with explicit breakpoints and segment values.
    pub fn from_steps(k: usize, n: usize, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let ok = breakpoints.len() == values.len() + 1
            && breakpoints.first() == Some(&0.0)
            && breakpoints.last() == Some(&1.0)
            && breakpoints.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(Error::Domain(
                "breakpoints must run from 0 to 1, one more than values",
            ));
        }
        Ok(Self {
            k,
            n,
            breakpoints,
            values,
            ranks: None,
        })
    }

    /// Value at `u`, evaluated from the ranks with the strict indicator when
    /// the grid came from a sample, else from the stored steps.
    pub fn eval(&self, u: f64) -> f64 {
        if let Some(ranks) = &self.ranks {
            let bound = self.k as f64 * u + 1.0;
            let hits = ranks.iter().filter(|&&r| (r as f64) < bound).count();
            return hits as f64 / self.k as f64;
        }
        match self.breakpoints.iter().position(|&b| u <= b) {
            Some(0) => 0.0,
            Some(j) => self.values[j - 1],
            None => *self.values.last().unwrap_or(&0.0),
        }
    }
}

/// Upper bound of `eta_{k,n}`, `(1 - 1/k)(1 + 5/(2k) - 3/k^2)`, attained when
/// `rho_i = i` for all `i < k`.
pub fn eta_upper_bound(k: usize) -> f64 {
    let k = k as u128;
    let num = (k - 1) * (2 * k * k + 5 * k - 6);
    num as f64 / (2 * k * k * k) as f64
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::KOutOfRange { k, min: 2, max: n });
    }
    Ok(())
}

fn ranks_for(sample: &PairedSample, direction: Direction) -> ConcomitantRanks {
    match direction {
        Direction::XGivenY => sample.concomitant_ranks(),
        Direction::YGivenX => sample.swapped().concomitant_ranks(),
    }
}

/// Ranks among the first `k - 1` concomitants that can contribute, sorted.
fn contributing_ranks(rho: &[usize], k: usize) -> Vec<usize> {
    let mut r: Vec<usize> = rho[..k - 1].iter().copied().filter(|&r| r <= k).collect();
    r.sort_unstable();
    r
}

/// `sum_{i,j < k} (k + 1 - max(rho_i, rho_j))_+` over sorted contributing
/// ranks: the `l`-th smallest is the maximum of `2l - 1` ordered pairs.
fn pair_sum(rho: &[usize], k: usize) -> u128 {
    contributing_ranks(rho, k)
        .iter()
        .enumerate()
        .map(|(l, &r)| (k + 1 - r) as u128 * (2 * l + 1) as u128)
        .sum()
}

fn scaled(pair_sum: u128, k: usize) -> f64 {
    let k = k as u128;
    (3 * pair_sum) as f64 / (k * k * k) as f64
}

/// ETA coefficient from precomputed concomitant ranks.
pub fn eta_from_ranks(ranks: &ConcomitantRanks, k: usize) -> Result<f64> {
    check_k(k, ranks.n())?;
    Ok(scaled(pair_sum(&ranks.rho, k), k))
}

pub fn eta_kn(sample: &PairedSample, k: usize, direction: Direction) -> Result<EtaEstimate> {
    check_k(k, sample.n())?;
    let ranks = ranks_for(sample, direction);
    Ok(EtaEstimate {
        value: eta_from_ranks(&ranks, k)?,
        k,
        n: sample.n(),
        direction,
    })
}

pub fn delta_kn(sample: &PairedSample, k: usize) -> Result<DeltaEstimate> {
    let eta_xy = eta_kn(sample, k, Direction::XGivenY)?;
    let eta_yx = eta_kn(sample, k, Direction::YGivenX)?;
    Ok(DeltaEstimate {
        value: eta_xy.value - eta_yx.value,
        k,
        n: sample.n(),
        eta_xy,
        eta_yx,
    })
}

/// The empirical tail copula slice `u -> Lambda_hat_{k,n}(u, 1)` (or
/// `Lambda_hat_{k,n}(1, u)` for [`Direction::YGivenX`]).
pub fn empirical_tail_copula_slice(
    sample: &PairedSample,
    k: usize,
    direction: Direction,
) -> Result<TailCopulaGrid> {
    check_k(k, sample.n())?;
    let ranks = ranks_for(sample, direction);
    let contributing = contributing_ranks(&ranks.rho, k);
    let kf = k as f64;

    let mut breakpoints = Vec::with_capacity(contributing.len() + 2);
    let mut values = Vec::with_capacity(contributing.len() + 1);
    breakpoints.push(0.0);
    for (count, &r) in contributing.iter().enumerate() {
        let b = (r - 1) as f64 / kf;
        if b > *breakpoints.last().unwrap() {
            breakpoints.push(b);
            values.push(count as f64 / kf);
        }
    }
    values.push(contributing.len() as f64 / kf);
    breakpoints.push(1.0);

    Ok(TailCopulaGrid {
        k,
        n: sample.n(),
        breakpoints,
        values,
        ranks: Some(contributing),
    })
}

/// `3 * int_0^1 g(u)^2 du` for a piecewise-constant slice.
pub fn eta_from_tail_copula(grid: &TailCopulaGrid) -> f64 {
    3.0 * grid
        .values
        .iter()
        .zip(grid.breakpoints.windows(2))
        .map(|(v, w)| v * v * (w[1] - w[0]))
        .sum::<f64>()
}

/// One estimate per `k`, sharing a single rank pass.
pub fn eta_sweep(
    sample: &PairedSample,
    kgrid: &[usize],
    direction: Direction,
) -> Result<Vec<EtaEstimate>> {
    validate_kgrid(kgrid, sample.n())?;
    let ranks = ranks_for(sample, direction);
    kgrid
        .iter()
        .map(|&k| {
            Ok(EtaEstimate {
                value: eta_from_ranks(&ranks, k)?,
                k,
                n: sample.n(),
                direction,
            })
        })
        .collect()
}

pub(crate) fn validate_kgrid(kgrid: &[usize], n: usize) -> Result<()> {
    if kgrid.is_empty() || kgrid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidKGrid);
    }
    kgrid.iter().try_for_each(|&k| check_k(k, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranks::TiePolicy;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Literal double sum over `i, j in 1..k`.
    fn eta_literal(rho: &[usize], k: usize) -> f64 {
        let mut s: u128 = 0;
        for i in 0..k - 1 {
            for j in 0..k - 1 {
                let m = rho[i].max(rho[j]);
                if k + 1 > m {
                    s += (k + 1 - m) as u128;
                }
            }
        }
        scaled(s, k)
    }

    fn random_sample(n: usize, seed: u64) -> PairedSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let y: Vec<f64> = x.iter().map(|a| a + rng.random::<f64>()).collect();
        PairedSample::new(x, y, TiePolicy::Reject).unwrap()
    }

    fn comonotone(n: usize) -> PairedSample {
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        PairedSample::new(x.clone(), x, TiePolicy::Reject).unwrap()
    }

    #[test]
    fn bound_at_k10() {
        let e = eta_kn(&comonotone(30), 10, Direction::XGivenY).unwrap();
        assert_eq!(e.value, eta_upper_bound(10));
        assert!((e.value - 1.098).abs() < 1e-15);
    }

    #[test]
    fn zero_when_top_ranks_discordant() {
        // top y values paired with the smallest x values
        let n = 20;
        let x: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let y: Vec<f64> = (0..n).map(|i| -(i as f64)).collect();
        let s = PairedSample::new(x, y, TiePolicy::Reject).unwrap();
        assert_eq!(eta_kn(&s, 5, Direction::XGivenY).unwrap().value, 0.0);
        let g = empirical_tail_copula_slice(&s, 5, Direction::XGivenY).unwrap();
        assert!(g.values.iter().all(|&v| v == 0.0));
        assert_eq!(eta_from_tail_copula(&g), 0.0);
    }

    #[test]
    fn hand_enumerated_case() {
        // n = 6, k = 3, rho_1 = 2, rho_2 = 5
        let ranks = ConcomitantRanks {
            rho: vec![2, 5, 1, 3, 4, 6],
            y_order: (0..6).collect(),
        };
        let v = eta_from_ranks(&ranks, 3).unwrap();
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
        assert_eq!(v, eta_literal(&ranks.rho, 3));
    }

    #[test]
    fn k_out_of_range() {
        let s = random_sample(10, 1);
        assert!(matches!(
            eta_kn(&s, 1, Direction::XGivenY),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            eta_kn(&s, 11, Direction::XGivenY),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(eta_kn(&s, 10, Direction::XGivenY).is_ok());
        assert!(empirical_tail_copula_slice(&s, 1, Direction::XGivenY).is_err());
    }

    #[test]
    fn delta_comonotone_and_antisymmetry() {
        for k in [2, 7, 19] {
            assert_eq!(delta_kn(&comonotone(20), k).unwrap().value, 0.0);
        }
        let s = random_sample(200, 5);
        let d = delta_kn(&s, 30).unwrap();
        let e = delta_kn(&s.swapped(), 30).unwrap();
        assert_eq!(d.value, -e.value);
        assert_eq!(d.value, d.eta_xy.value - d.eta_yx.value);
    }

    #[test]
    fn concordant_slice_k5() {
        let g = empirical_tail_copula_slice(&comonotone(20), 5, Direction::XGivenY).unwrap();
        // direct evaluation of (1/k) sum_{i<k} I(i < k u + 1)
        for step in 1..=10 {
            let u = step as f64 / 10.0;
            let direct = (1..5).filter(|&i| (i as f64) < 5.0 * u + 1.0).count() as f64 / 5.0;
            assert_eq!(g.eval(u), direct, "u = {u}");
        }
        assert_eq!(g.eval(1.0), 0.8);
        assert_eq!(g.eval(0.0), 0.0);
    }

    #[test]
    fn slice_shape() {
        for seed in 0..20 {
            let s = random_sample(100, seed);
            let g = empirical_tail_copula_slice(&s, 25, Direction::YGivenX).unwrap();
            assert!(g.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(g.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
            assert!(g.eval(1.0) <= 24.0 / 25.0);
            assert_eq!(*g.values.last().unwrap(), g.eval(1.0));
        }
    }

    #[test]
    fn integral_of_explicit_grids() {
        let zero = TailCopulaGrid::from_steps(5, 10, vec![0.0, 1.0], vec![0.0]).unwrap();
        assert_eq!(eta_from_tail_copula(&zero), 0.0);
        let c = 0.4;
        let flat = TailCopulaGrid::from_steps(5, 10, vec![0.0, 0.3, 1.0], vec![c, c]).unwrap();
        assert!((eta_from_tail_copula(&flat) - 3.0 * c * c).abs() < 1e-15);
        assert_eq!(flat.eval(0.5), c);
        assert!(TailCopulaGrid::from_steps(5, 10, vec![0.0, 0.5], vec![]).is_err());
    }

    #[test]
    fn integral_identity_n200_k40() {
        let s = random_sample(200, 11);
        for d in [Direction::XGivenY, Direction::YGivenX] {
            let eta = eta_kn(&s, 40, d).unwrap().value;
            let g = empirical_tail_copula_slice(&s, 40, d).unwrap();
            let via = eta_from_tail_copula(&g);
            assert!((via - eta).abs() <= 1e-12 * eta.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn sweep_examples() {
        let s = random_sample(500, 2);
        let sweep = eta_sweep(&s, &[25, 50, 100], Direction::XGivenY).unwrap();
        for e in &sweep {
            assert_eq!(*e, eta_kn(&s, e.k, Direction::XGivenY).unwrap());
        }
        let single = eta_sweep(&s, &[60], Direction::YGivenX).unwrap();
        assert_eq!(single, vec![eta_kn(&s, 60, Direction::YGivenX).unwrap()]);

        let c = eta_sweep(&comonotone(50), &[5, 10], Direction::XGivenY).unwrap();
        assert!((c[0].value - 1.104).abs() < 1e-15);
        assert!((c[1].value - 1.098).abs() < 1e-15);

        assert_eq!(
            eta_sweep(&s, &[], Direction::XGivenY),
            Err(Error::InvalidKGrid)
        );
        assert_eq!(
            eta_sweep(&s, &[10, 10], Direction::XGivenY),
            Err(Error::InvalidKGrid)
        );
        assert!(eta_sweep(&s, &[10, 501], Direction::XGivenY).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
            Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
        }

        proptest! {
            #[test]
            fn optimized_equals_literal(rho in (2usize..=12).prop_flat_map(perm), kf in 0.0f64..1.0) {
                let n = rho.len();
                let k = 2 + ((n - 1) as f64 * kf) as usize;
                let k = k.min(n);
                let ranks = ConcomitantRanks { rho: rho.clone(), y_order: (0..n).collect() };
                prop_assert_eq!(eta_from_ranks(&ranks, k).unwrap(), eta_literal(&rho, k));
            }

            #[test]
            fn within_range(rho in (2usize..=80).prop_flat_map(perm), kf in 0.0f64..1.0) {
                let n = rho.len();
                let k = (2 + ((n - 1) as f64 * kf) as usize).min(n);
                let ranks = ConcomitantRanks { rho, y_order: (0..n).collect() };
                let v = eta_from_ranks(&ranks, k).unwrap();
                prop_assert!(v >= 0.0 && v <= eta_upper_bound(k));
            }

            #[test]
            fn monotone_transform_is_bitwise_neutral(seed in 0u64..1000, k in 2usize..60) {
                let s = random_sample(60, seed);
                let t = PairedSample::new(
                    s.x().iter().map(|a| a.exp() * 2.0 + 5.0).collect(),
                    s.y().iter().map(|a| a.powi(3)).collect(),
                    TiePolicy::Reject,
                ).unwrap();
                for d in [Direction::XGivenY, Direction::YGivenX] {
                    prop_assert_eq!(eta_kn(&s, k, d).unwrap().value, eta_kn(&t, k, d).unwrap().value);
                }
            }
        }
    }
}
