//! Validated paired samples and concomitant reverse ranks.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::rng::{open01, stream_rng};
use crate::{Error, Result};

/// What to do when a series contains repeated values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    Reject,
    /// Break ties with seeded perturbations smaller than half the minimal
    /// nonzero gap between distinct values of the series.
    Jitter {
        seed: u64,
    },
}

/// Two aligned, finite, tie-free series of equal length `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    x: Vec<f64>,
    y: Vec<f64>,
    jittered: bool,
}

impl PairedSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>, policy: TiePolicy) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::TooFewObservations { n: x.len(), min: 2 });
        }
        check_finite(&x)?;
        check_finite(&y)?;

        let (mut x, mut y) = (x, y);
        let mut jittered = false;
        match policy {
            TiePolicy::Reject => {
                if has_ties(&x) || has_ties(&y) {
                    return Err(Error::TiesPresent);
                }
            }
            TiePolicy::Jitter { seed } => {
                jittered |= jitter_ties(&mut x, seed, 0)?;
                jittered |= jitter_ties(&mut y, seed, 1)?;
            }
        }
        Ok(Self { x, y, jittered })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Whether the jitter policy had to perturb any value.
    pub fn jittered(&self) -> bool {
        self.jittered
    }

    /// The same observations with the roles of the two series exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
            jittered: self.jittered,
        }
    }

    /// Concomitant reverse ranks of `x` along decreasing `y`.
    pub fn concomitant_ranks(&self) -> ConcomitantRanks {
        let x_rank = ranks_of_tie_free(&self.x);
        let y_order = descending_order(&self.y);
        let rho = y_order.iter().map(|&j| x_rank[j]).collect();
        ConcomitantRanks { rho, y_order }
    }
}

/// Reverse ranks of the `x`-concomitants, ordered by decreasing `y`.
///
/// `rho[i]` is the number of `x` values greater than or equal to the
/// concomitant of the `(i + 1)`-th largest `y`; `rho[i] == 1` marks the
/// overall maximum of `x`. `y_order[i]` is the original index of that `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcomitantRanks {
    pub rho: Vec<usize>,
    pub y_order: Vec<usize>,
}

impl ConcomitantRanks {
    pub fn n(&self) -> usize {
        self.rho.len()
    }
}

pub fn concomitant_ranks(sample: &PairedSample) -> ConcomitantRanks {
    sample.concomitant_ranks()
}

/// `r[i] = #{j : v[j] >= v[i]}`, so the maximum gets rank 1.
pub fn reverse_ranks(v: &[f64]) -> Result<Vec<usize>> {
    check_finite(v)?;
    if has_ties(v) {
        return Err(Error::TiesPresent);
    }
    Ok(ranks_of_tie_free(v))
}

/// Indices of `v` sorted by decreasing value.
pub(crate) fn descending_order(v: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    order
}

fn ranks_of_tie_free(v: &[f64]) -> Vec<usize> {
    let mut rank = alloc::vec![0; v.len()];
    for (pos, idx) in descending_order(v).into_iter().enumerate() {
        rank[idx] = pos + 1;
    }
    rank
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|a| !a.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn sorted_copy(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn has_ties(v: &[f64]) -> bool {
    sorted_copy(v).windows(2).any(|w| w[0] == w[1])
}

/// Perturbs every member of a tied group by `U * gap / 2` with `U` uniform
/// on (0, 1) drawn from stream `stream` of `seed`. Returns whether anything
/// changed.
fn jitter_ties(v: &mut [f64], seed: u64, stream: u64) -> Result<bool> {
    let sorted = sorted_copy(v);
    if !sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    let gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    // all values equal: fall back to a scale-aware spread
    let gap = if gap.is_finite() {
        gap
    } else {
        let scale = sorted[0].abs();
        if scale > 0.0 {
            scale * 1e-6
        } else {
            1e-6
        }
    };

    let tied = |a: f64| {
        let lo = sorted.partition_point(|&s| s.total_cmp(&a) == Ordering::Less);
        lo + 1 < sorted.len() && sorted[lo + 1] == a
    };
    let mut rng = stream_rng(seed, stream);
    for a in v.iter_mut() {
        if tied(*a) {
            *a += 0.5 * gap * open01(&mut rng);
        }
    }
    if has_ties(v) {
        // perturbation lost to rounding at this magnitude
        return Err(Error::TiesPresent);
    }
    Ok(true)
}
