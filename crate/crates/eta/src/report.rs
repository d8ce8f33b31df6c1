//! JSON and CSV emission. Floats are rounded to 12 significant digits and
//! printed in shortest round-trip form, so output bytes depend only on the
//! report contents.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::pipeline::Report;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 10] = [
    "k",
    "eta_xy",
    "eta_yx",
    "delta",
    "p_eta_xy",
    "p_eta_yx",
    "p_delta",
    "ci_delta_low",
    "ci_delta_high",
    "boot_sd_delta",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round12(n.as_f64().expect("f64 number"));
            *n = serde_json::Number::from_f64(r).expect("finite");
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn fmt(x: f64) -> String {
    serde_json::Number::from_f64(round12(x)).map_or_else(|| x.to_string(), |n| n.to_string())
}

pub fn to_json(report: &Report) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<Report> {
    Ok(serde_json::from_str(text)?)
}

/// One row per `k`; test columns are empty when the tests were not run.
pub fn to_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let e = &report.estimates;
    let tests = report.tests.as_ref();
    let delta = tests.and_then(|t| t.delta.as_ref());
    let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
    for (j, &k) in e.k.iter().enumerate() {
        w.write_record([
            k.to_string(),
            fmt(e.eta_xy[j]),
            fmt(e.eta_yx[j]),
            fmt(e.delta[j]),
            opt(tests.map(|t| t.eta_xy.p_value[j])),
            opt(tests.map(|t| t.eta_yx.p_value[j])),
            opt(delta.map(|d| d.p_value[j])),
            opt(delta.map(|d| d.ci_low[j])),
            opt(delta.map(|d| d.ci_high[j])),
            opt(delta.map(|d| d.boot_sd[j])),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

pub fn emit_report(report: &Report, format: Format, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}
