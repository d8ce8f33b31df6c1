use std::io::Write;
use std::path::Path;

use eta_core::CopulaModel;

use crate::{Error, Result};

/// Parses `nelsen:THETA`, `khoudraji:ALPHA,BETA,DELTA`, `gumbel:DELTA`
/// (exchangeable, `alpha = beta = 1`) or `max:M`.
pub fn parse_model(spec: &str) -> Result<CopulaModel> {
    let bad = || Error::ModelSpec(spec.to_owned());
    let (family, args) = spec.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = args
        .split(',')
        .map(|a| a.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let model = match (family.trim().to_ascii_lowercase().as_str(), nums.as_slice()) {
        ("nelsen", &[theta]) => CopulaModel::nelsen(theta),
        ("khoudraji" | "khoudraji-gumbel", &[a, b, d]) => CopulaModel::khoudraji_gumbel(a, b, d),
        ("gumbel", &[d]) => CopulaModel::khoudraji_gumbel(1.0, 1.0, d),
        ("max", &[m]) if m >= 1.0 && m.fract() == 0.0 && m <= u32::MAX as f64 => {
            CopulaModel::max_model(m as u32)
        }
        _ => return Err(bad()),
    };
    Ok(model?)
}

/// Writes `index,x,y` rows of `n` draws; values use the shortest decimal
/// form that round-trips.
pub fn write_simulation<W: Write>(out: W, model: &CopulaModel, n: usize, seed: u64) -> Result<()> {
    let s = model.sample(n, seed)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "x", "y"])?;
    for (i, (x, y)) in s.x().iter().zip(s.y()).enumerate() {
        w.write_record([(i + 1).to_string(), x.to_string(), y.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("output", e))?;
    Ok(())
}

pub fn simulate_to_file(
    path: impl AsRef<Path>,
    model: &CopulaModel,
    n: usize,
    seed: u64,
) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    write_simulation(std::io::BufWriter::new(file), model, n, seed)
}
