//! Labeled decision matrices and CSV ingestion.
//!
//! Rows are alternatives (algorithms), columns are criteria (benchmarks).
//! Every matrix is validated on construction: non-empty, unique labels on
//! both axes, and finite nonnegative entries.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Axis, Error, Result};

/// Header cell expected in the top-left corner of every CSV input.
pub const CSV_CORNER: &str = "algorithm";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    /// Row-major, `row_labels.len() * col_labels.len()` entries.
    values: Vec<f64>,
}

impl LabeledMatrix {
    pub fn new(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if row_labels.is_empty() || col_labels.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if rows.len() != row_labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} row labels but {} rows of values",
                row_labels.len(),
                rows.len()
            )));
        }
        let n = col_labels.len();
        let mut values = Vec::with_capacity(rows.len() * n);
        for (label, row) in row_labels.iter().zip(&rows) {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row {label:?} has {} values, expected {n}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::from_parts(row_labels, col_labels, values)
    }

    fn from_parts(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_unique(&row_labels, Axis::Row)?;
        check_unique(&col_labels, Axis::Column)?;
        let n = col_labels.len();
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::BadValue(format!(
                    "{v} at ({}, {}) must be finite and nonnegative",
                    row_labels[idx / n],
                    col_labels[idx % n]
                )));
            }
        }
        Ok(Self {
            row_labels,
            col_labels,
            values,
        })
    }

    /// Same labels, new values computed cell by cell. Used by kernels whose
    /// output is nonnegative by construction.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let n = self.ncols();
        &self.values[row * n..(row + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.ncols())
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.ncols()).copied()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    /// Applies `f(col, value)` to every cell.
    pub fn map_cells(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Self> {
        let n = self.ncols();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| f(idx % n, v))
            .collect();
        Self::from_parts(self.row_labels.clone(), self.col_labels.clone(), values)
    }

    /// Reorders rows so that row `i` of the result is row `order[i]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Result<Self> {
        let mut labels = Vec::with_capacity(order.len());
        let mut values = Vec::with_capacity(order.len() * self.ncols());
        for &i in order {
            if i >= self.nrows() {
                return Err(Error::LengthMismatch {
                    expected: self.nrows(),
                    actual: i + 1,
                });
            }
            labels.push(self.row_labels[i].clone());
            values.extend_from_slice(self.row(i));
        }
        if labels.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Self::from_parts(labels, self.col_labels.clone(), values)
    }

    /// Drops the named rows. Every name must exist.
    pub fn without_rows<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        for name in names {
            if self.row_index(name.as_ref()).is_none() {
                return Err(Error::UnknownLabel {
                    axis: Axis::Row,
                    label: name.as_ref().to_string(),
                });
            }
        }
        let keep: Vec<usize> = (0..self.nrows())
            .filter(|&i| !names.iter().any(|n| n.as_ref() == self.row_labels[i]))
            .collect();
        self.select_rows(&keep)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        parse_csv(text)
    }

    pub fn to_csv(&self) -> String {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let header = std::iter::once(CSV_CORNER.to_string()).chain(self.col_labels.iter().cloned());
        wtr.write_record(header).expect("in-memory write");
        for (label, row) in self.row_labels.iter().zip(self.rows()) {
            let record = std::iter::once(label.clone()).chain(row.iter().map(|v| v.to_string()));
            wtr.write_record(record).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn check_unique(labels: &[String], axis: Axis) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel {
                axis,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

fn parse_csv(text: &str) -> Result<LabeledMatrix> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| Error::Csv(e.to_string()))?,
        None => return Err(Error::EmptyMatrix),
    };
    let corner = header.get(0).unwrap_or_default();
    if corner != CSV_CORNER {
        return Err(Error::BadValue(format!(
            "header must start with {CSV_CORNER:?}, found {corner:?}"
        )));
    }
    let col_labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

    let mut row_labels = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in records.enumerate() {
        let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let label = rec.get(0).unwrap_or_default().to_string();
        if rec.len() != col_labels.len() + 1 {
            return Err(Error::ShapeMismatch(format!(
                "data row {} ({label:?}) has {} numeric cells, header names {} benchmarks",
                line + 1,
                rec.len() - 1,
                col_labels.len()
            )));
        }
        let row = rec
            .iter()
            .skip(1)
            .zip(&col_labels)
            .map(|(cell, col)| {
                parse_number(cell)
                    .map_err(|msg| Error::BadValue(format!("({label}, {col}): {msg}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        row_labels.push(label);
        rows.push(row);
    }
    if row_labels.is_empty() || col_labels.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    LabeledMatrix::new(row_labels, col_labels, rows)
}

/// Period decimals; a comma is accepted as the decimal mark only when the
/// cell contains no period.
fn parse_number(cell: &str) -> std::result::Result<f64, String> {
    if cell.is_empty() {
        return Err("empty cell".into());
    }
    if cell.starts_with(['+', '-']) {
        return Err(format!("signed value {cell:?} not allowed"));
    }
    if !cell
        .bytes()
        .all(|b| b.is_ascii_digit() || b == b'.' || b == b',' || b == b'e' || b == b'E')
    {
        return Err(format!("{cell:?} is not a number"));
    }
    let normalized = if cell.contains('.') {
        cell.to_string()
    } else {
        cell.replacen(',', ".", 1)
    };
    normalized
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{cell:?} is not a number"))
}

/// The pair `D = {M_mu, M_sigma}`: per-cell means and standard deviations
/// over repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrixPair {
    mu: LabeledMatrix,
    sigma: LabeledMatrix,
}

impl DecisionMatrixPair {
    pub fn new(mu: LabeledMatrix, sigma: LabeledMatrix) -> Result<Self> {
        if mu.nrows() != sigma.nrows() || mu.ncols() != sigma.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "means are {}x{} but standard deviations are {}x{}",
                mu.nrows(),
                mu.ncols(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if mu.row_labels() != sigma.row_labels() {
            return Err(Error::ShapeMismatch(
                "algorithm labels differ between means and standard deviations".into(),
            ));
        }
        if mu.col_labels() != sigma.col_labels() {
            return Err(Error::ShapeMismatch(
                "benchmark labels differ between means and standard deviations".into(),
            ));
        }
        Ok(Self { mu, sigma })
    }

    pub fn mu(&self) -> &LabeledMatrix {
        &self.mu
    }

    pub fn sigma(&self) -> &LabeledMatrix {
        &self.sigma
    }

    pub fn row_labels(&self) -> &[String] {
        self.mu.row_labels()
    }

    pub fn without_rows<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        Self::new(
            self.mu.without_rows(names)?,
            self.sigma.without_rows(names)?,
        )
    }

    pub fn select_rows(&self, order: &[usize]) -> Result<Self> {
        Self::new(self.mu.select_rows(order)?, self.sigma.select_rows(order)?)
    }
}

/// Parses and cross-validates a mean CSV and a standard-deviation CSV.
pub fn load_matrix_pair(mean_source: &str, std_source: &str) -> Result<DecisionMatrixPair> {
    let mu = LabeledMatrix::from_csv(mean_source)?;
    let sigma = LabeledMatrix::from_csv(std_source)?;
    DecisionMatrixPair::new(mu, sigma)
}
