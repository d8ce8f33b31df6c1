//! CSV ingestion into key-aligned numeric columns.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{Error, Result};

/// Numeric columns aligned on a shared key, rows sorted by key.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub key_column: Option<String>,
    pub keys: Vec<String>,
    pub columns: Vec<String>,
    values: Vec<Vec<f64>>,
    /// What the values are (for example raw prices or log-returns).
    pub provenance: String,
}

impl SeriesTable {
    pub fn new(
        key_column: Option<String>,
        keys: Vec<String>,
        columns: Vec<(String, Vec<f64>)>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if columns.iter().any(|(_, v)| v.len() != keys.len()) {
            return Err(Error::Config("table columns differ in length".into()));
        }
        let (columns, values) = columns.into_iter().unzip();
        Ok(Self {
            key_column,
            keys,
            columns,
            values,
            provenance: provenance.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.values[i].as_slice())
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "NA" | "N/A" | "null")
}

/// Key ordering: numeric when every key parses as an integer, else
/// lexicographic (which orders ISO dates chronologically).
fn sort_keys(keys: &mut [String]) {
    if keys.iter().all(|k| k.parse::<i64>().is_ok()) {
        keys.sort_by_key(|k| k.parse::<i64>().unwrap());
    } else {
        keys.sort();
    }
}

/// Reads `value_columns` from a headed CSV file, keyed by `key_column` (or
/// by 1-based data row number when `None`).
///
/// Rows where any selected column is empty or `NA` are dropped, which is an
/// inner join of the columns on the key. Any other cell must parse as a
/// finite number with a decimal point and no grouping separators.
pub fn load_csv(
    path: impl AsRef<Path>,
    key_column: Option<&str>,
    value_columns: &[&str],
) -> Result<SeriesTable> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::io(&shown, e))?;
    read_csv(file, key_column, value_columns)
}

/// [`load_csv`] on any reader.
pub fn read_csv<R: std::io::Read>(
    reader: R,
    key_column: Option<&str>,
    value_columns: &[&str],
) -> Result<SeriesTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let key_idx = key_column.map(find).transpose()?;
    let idx: Vec<usize> = value_columns
        .iter()
        .map(|c| find(c))
        .collect::<Result<_>>()?;

    let mut rows: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let row = line + 1;
        let key = match key_idx {
            Some(i) => record.get(i).unwrap_or("").to_owned(),
            None => row.to_string(),
        };
        let mut values = Vec::with_capacity(idx.len());
        for (&i, &name) in idx.iter().zip(value_columns) {
            let cell = record.get(i).unwrap_or("");
            if is_missing(cell) {
                break;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::UnparsableValue {
                        row,
                        column: name.to_owned(),
                        value: cell.to_owned(),
                    })
                }
            }
        }
        if values.len() < idx.len() {
            continue;
        }
        if is_missing(&key) {
            continue;
        }
        if rows.insert(key.clone(), values).is_some() {
            return Err(Error::DuplicateKey(key));
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyIntersection);
    }

    let mut keys: Vec<String> = rows.keys().cloned().collect();
    sort_keys(&mut keys);
    let columns = value_columns
        .iter()
        .enumerate()
        .map(|(j, &name)| (name.to_owned(), keys.iter().map(|k| rows[k][j]).collect()))
        .collect();
    SeriesTable::new(key_column.map(str::to_owned), keys, columns, "raw values")
}
