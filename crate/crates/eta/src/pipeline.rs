//! End-to-end pair analysis: transforms, diagnostics, estimates over a
//! k-grid and the bootstrap tests.

use eta_core::{
    delta_kn, sweep_verdict, Bootstrap, BootstrapConfig, Direction, MultiplierScheme, PairedSample,
    TestResult, TiePolicy,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acf::AcfReport;
use crate::returns::{log_returns, tail_view, Tail};
use crate::table::SeriesTable;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieHandling {
    #[default]
    Reject,
    /// Break ties by a seeded perturbation smaller than half the smallest gap.
    Jitter,
}

/// Inclusive `min..=max` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRange {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl KRange {
    pub fn grid(&self) -> Vec<usize> {
        (self.min..=self.max).step_by(self.step.max(1)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    /// `None` selects [`default_kgrid`].
    pub krange: Option<KRange>,
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    pub tail: Tail,
    pub tie_policy: TieHandling,
    pub rejection_fraction: f64,
    /// Run the `Delta` test only when an `eta` test rejects.
    pub eta_gate: bool,
    pub run_tests: bool,
    /// Convert both columns from prices to log-returns first.
    pub returns: bool,
    pub max_lag: usize,
    pub scheme: MultiplierScheme,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            krange: None,
            replicates: 100,
            alpha: 0.05,
            seed: 0,
            tail: Tail::Upper,
            tie_policy: TieHandling::Reject,
            rejection_fraction: 0.75,
            eta_gate: true,
            run_tests: true,
            returns: false,
            max_lag: 20,
            scheme: MultiplierScheme::UnitExponential,
        }
    }
}

/// `100, 110, ..., 500` once `n >= 2500`; below that, 21 evenly spaced
/// values from `ceil(0.05 n)` to `floor(0.20 n)`.
pub fn default_kgrid(n: usize) -> Result<Vec<usize>> {
    if n >= 2500 {
        return Ok((100..=500).step_by(10).collect());
    }
    let lo = n.div_ceil(20).max(2);
    let hi = n / 5;
    if hi < lo {
        return Err(Error::Config(format!(
            "n = {n} is too small for the default k-grid"
        )));
    }
    let mut grid: Vec<usize> = (0..=20)
        .map(|i| lo + (2 * i * (hi - lo) + 20) / 40)
        .collect();
    grid.dedup();
    Ok(grid)
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("B must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config("alpha must lie in (0, 1)".into()));
        }
        if !(self.rejection_fraction > 0.0 && self.rejection_fraction <= 1.0) {
            return Err(Error::Config(
                "rejection fraction must lie in (0, 1]".into(),
            ));
        }
        if let Some(r) = self.krange {
            if r.min < 2 || r.step == 0 || r.max < r.min {
                return Err(Error::Config(
                    "k-grid needs 2 <= k-min <= k-max and k-step >= 1".into(),
                ));
            }
        }
        self.scheme.validated()?;
        Ok(())
    }

    /// The grid for `n` observations; any `k > n - 1` is an error.
    pub fn kgrid_for(&self, n: usize) -> Result<Vec<usize>> {
        let grid = match self.krange {
            Some(r) => r.grid(),
            None => default_kgrid(n)?,
        };
        // the requested maximum counts even when the step skips it
        let top = self.krange.map(|r| r.max).or_else(|| grid.last().copied());
        if let Some(k) = top {
            if k + 1 > n {
                return Err(Error::Config(format!(
                    "k = {k} exceeds n - 1 = {}",
                    n.saturating_sub(1)
                )));
            }
        }
        Ok(grid)
    }
}

/// Sweep-level decision for one test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub fraction_rejected: f64,
    pub rejection_fraction: f64,
    pub reject: bool,
}

/// Bootstrap outcomes per `k`, aligned with [`Estimates::k`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSeries {
    pub p_value: Vec<f64>,
    pub exceedances: Vec<usize>,
    pub boot_sd: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub verdict: Verdict,
}

impl TestSeries {
    fn new(results: &[TestResult], alpha: f64, rejection_fraction: f64) -> Self {
        let v = sweep_verdict(results, alpha, rejection_fraction);
        Self {
            p_value: results.iter().map(|r| r.p_value).collect(),
            exceedances: results.iter().map(|r| r.exceedances).collect(),
            boot_sd: results.iter().map(|r| r.boot_sd).collect(),
            ci_low: results.iter().map(|r| r.ci_low).collect(),
            ci_high: results.iter().map(|r| r.ci_high).collect(),
            verdict: Verdict {
                fraction_rejected: v.fraction_rejected,
                rejection_fraction: v.rejection_fraction,
                reject: v.reject,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaGate {
    Disabled,
    Passed,
    Blocked,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tests {
    pub eta_xy: TestSeries,
    pub eta_yx: TestSeries,
    /// Absent when the gate blocked the test.
    pub delta: Option<TestSeries>,
    pub delta_gate: DeltaGate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub k: Vec<usize>,
    pub eta_xy: Vec<f64>,
    pub eta_yx: Vec<f64>,
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub kgrid: Vec<usize>,
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
    pub multiplier_mean: f64,
    pub multiplier_sd: f64,
    pub rejection_fraction: f64,
    pub eta_gate: bool,
    pub run_tests: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub key_column: Option<String>,
    pub x_column: String,
    pub y_column: String,
    /// Rows after the inner join.
    pub rows: usize,
    /// Observations entering the estimators.
    pub n: usize,
    pub returns: bool,
    pub tail: Tail,
    pub tie_policy: TieHandling,
    pub jittered: bool,
    pub tool: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub acf_x: Option<AcfReport>,
    pub acf_y: Option<AcfReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ConfigEcho,
    pub provenance: Provenance,
    pub diagnostics: Diagnostics,
    pub estimates: Estimates,
    pub tests: Option<Tests>,
}

fn acf_diagnostic(
    label: &str,
    r: &[f64],
    max_lag: usize,
    notes: &mut Vec<String>,
) -> Option<AcfReport> {
    let lag = max_lag.min(r.len().saturating_sub(1));
    match AcfReport::new(r, lag) {
        Ok(rep) => {
            if !rep.flagged.is_empty() {
                notes.push(format!(
                    "{label}: autocorrelation outside the white-noise band at lags {:?}",
                    rep.flagged
                ));
            }
            Some(rep)
        }
        Err(e) => {
            notes.push(format!("{label}: autocorrelation unavailable ({e})"));
            None
        }
    }
}

/// Runs the full analysis of `col_x` against `col_y`.
///
/// All three tests share one set of `B` multiplier replicates. Replicates are
/// evaluated in parallel and collected in replicate order, so the report is
/// independent of the thread count.
pub fn run_pair_analysis(
    table: &SeriesTable,
    col_x: &str,
    col_y: &str,
    config: &AnalysisConfig,
) -> Result<Report> {
    config.validate()?;
    let mut x = table.column(col_x)?.to_vec();
    let mut y = table.column(col_y)?.to_vec();
    if config.returns {
        x = log_returns(&x)?;
        y = log_returns(&y)?;
    }
    let x = tail_view(&x, config.tail);
    let y = tail_view(&y, config.tail);

    let mut notes = Vec::new();
    let acf_x = acf_diagnostic(col_x, &x, config.max_lag, &mut notes);
    let acf_y = acf_diagnostic(col_y, &y, config.max_lag, &mut notes);

    let policy = match config.tie_policy {
        TieHandling::Reject => TiePolicy::Reject,
        TieHandling::Jitter => TiePolicy::Jitter { seed: config.seed },
    };
    let sample = PairedSample::new(x, y, policy)?;
    let n = sample.n();
    let kgrid = config.kgrid_for(n)?;

    let mut est = Estimates {
        k: kgrid.clone(),
        eta_xy: Vec::with_capacity(kgrid.len()),
        eta_yx: Vec::with_capacity(kgrid.len()),
        delta: Vec::with_capacity(kgrid.len()),
    };
    for &k in &kgrid {
        let d = delta_kn(&sample, k)?;
        est.eta_xy.push(d.eta_xy.value);
        est.eta_yx.push(d.eta_yx.value);
        est.delta.push(d.value);
    }

    let tests = if config.run_tests {
        Some(bootstrap_tests(&sample, &kgrid, config)?)
    } else {
        None
    };

    Ok(Report {
        config: ConfigEcho {
            kgrid,
            replicates: config.replicates,
            alpha: config.alpha,
            seed: config.seed,
            multiplier_mean: config.scheme.mu(),
            multiplier_sd: config.scheme.tau(),
            rejection_fraction: config.rejection_fraction,
            eta_gate: config.eta_gate,
            run_tests: config.run_tests,
        },
        provenance: Provenance {
            source: table.provenance.clone(),
            key_column: table.key_column.clone(),
            x_column: col_x.to_owned(),
            y_column: col_y.to_owned(),
            rows: table.len(),
            n,
            returns: config.returns,
            tail: config.tail,
            tie_policy: config.tie_policy,
            jittered: sample.jittered(),
            tool: concat!("eta-tools ", env!("CARGO_PKG_VERSION")).to_owned(),
        },
        diagnostics: Diagnostics {
            acf_x,
            acf_y,
            notes,
        },
        estimates: est,
        tests,
    })
}

fn bootstrap_tests(
    sample: &PairedSample,
    kgrid: &[usize],
    config: &AnalysisConfig,
) -> Result<Tests> {
    let boot = Bootstrap::new(
        sample,
        kgrid,
        BootstrapConfig {
            replicates: config.replicates,
            scheme: config.scheme,
            seed: config.seed,
            alpha: config.alpha,
        },
    )?;
    let reps: Vec<_> = (1..=config.replicates as u64)
        .into_par_iter()
        .map(|b| boot.replicate(b))
        .collect();
    let series = |r: Vec<TestResult>| TestSeries::new(&r, config.alpha, config.rejection_fraction);
    let eta_xy = series(boot.eta_tests(&reps, Direction::XGivenY)?);
    let eta_yx = series(boot.eta_tests(&reps, Direction::YGivenX)?);
    let delta_gate = if !config.eta_gate {
        DeltaGate::Disabled
    } else if eta_xy.verdict.reject || eta_yx.verdict.reject {
        DeltaGate::Passed
    } else {
        DeltaGate::Blocked
    };
    let delta = match delta_gate {
        DeltaGate::Blocked => None,
        _ => Some(series(boot.delta_tests(&reps)?)),
    };
    Ok(Tests {
        eta_xy,
        eta_yx,
        delta,
        delta_gate,
    })
}
