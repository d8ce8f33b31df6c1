use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sample autocorrelations at lags `1..=max_lag` (mean-centred, divided by
/// `n` at every lag). Lag 0 is 1 by definition and not returned.
pub fn acf(r: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = r.len();
    if max_lag == 0 {
        return Err(Error::Config("max lag must be at least 1".into()));
    }
    if n <= max_lag {
        return Err(Error::SeriesTooShort {
            len: n,
            need: max_lag + 1,
        });
    }
    let mean = r.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = r.iter().map(|v| v - mean).collect();
    let c0: f64 = c.iter().map(|v| v * v).sum();
    if c0 == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((1..=max_lag)
        .map(|h| c[h..].iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect())
}

/// Autocorrelations with the `+-1.96 / sqrt(n)` white-noise band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfReport {
    pub n: usize,
    pub max_lag: usize,
    pub band: f64,
    pub values: Vec<f64>,
    /// Lags whose autocorrelation lies outside the band.
    pub flagged: Vec<usize>,
}

impl AcfReport {
    pub fn new(r: &[f64], max_lag: usize) -> Result<Self> {
        let values = acf(r, max_lag)?;
        let band = 1.96 / (r.len() as f64).sqrt();
        let flagged = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > band)
            .map(|(i, _)| i + 1)
            .collect();
        Ok(Self {
            n: r.len(),
            max_lag,
            band,
            values,
            flagged,
        })
    }
}
