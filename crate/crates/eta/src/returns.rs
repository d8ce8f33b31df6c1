use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `r_t = ln(p_{t+1} / p_t)`.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: prices.len(),
            need: 2,
        });
    }
    if let Some(index) = prices.iter().position(|&p| !(p > 0.0)) {
        return Err(Error::NonPositivePrice { index });
    }
    Ok(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    #[default]
    Upper,
    /// Losses: the series is negated so its lower tail becomes the upper.
    Lower,
}

pub fn tail_view(r: &[f64], tail: Tail) -> Vec<f64> {
    match tail {
        Tail::Upper => r.to_vec(),
        Tail::Lower => r.iter().map(|v| -v).collect(),
    }
}
