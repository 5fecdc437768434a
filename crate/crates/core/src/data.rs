//! Tabular data model and CSV ingestion.
//!
//! A [`Dataset`] is a column-typed container: numeric columns are stored as
//! `f64` with a distinguished missing marker, categorical and date columns as
//! optional strings pending encoding. The optional target column is parsed
//! into a [`LabelVector`] at load time (positive class = 1).
//!
//! Missing numeric cells are carried as NaN internally; all arithmetic stages
//! check for the marker explicitly via [`is_missing`] instead of letting it
//! propagate. Infinities are rejected at ingestion.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The missing-value marker for numeric cells.
pub const MISSING: f64 = f64::NAN;

/// True iff `v` is the missing marker.
#[inline]
pub fn is_missing(v: f64) -> bool {
    v.is_nan()
}

/// Dense row-major matrix of 64-bit reals. Cells are either finite or the
/// missing marker; infinities are rejected on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Build from row slices. Every cell must be finite or the missing marker.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            for &v in row {
                if v.is_infinite() {
                    return Err(Error::Parse(format!("non-finite value in row {i}")));
                }
                data.push(v);
            }
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: data.len() });
        }
        if data.iter().any(|v| v.is_infinite()) {
            return Err(Error::Parse("non-finite value in matrix".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(!v.is_infinite());
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_missing_at(&self, r: usize, c: usize) -> bool {
        is_missing(self.get(r, c))
    }

    pub fn has_missing(&self) -> bool {
        self.data.iter().any(|&v| is_missing(v))
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    /// New matrix holding the given columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            let row = self.row(r);
            for &c in idx {
                data.push(row[c]);
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }
}

/// Binary labels; positive class is 1 ("Yes").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelVector(Vec<u8>);

impl LabelVector {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|&&v| v > 1) {
            return Err(Error::Parse(format!("label out of {{0,1}}: {bad}")));
        }
        Ok(LabelVector(labels))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn select(&self, idx: &[usize]) -> LabelVector {
        LabelVector(idx.iter().map(|&i| self.0[i]).collect())
    }

    /// Indices of rows with the given label, in row order.
    pub fn indices_of(&self, label: u8) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &v)| (v == label).then_some(i))
            .collect()
    }
}

/// Exact (positive, negative) tallies.
pub fn class_counts(y: &LabelVector) -> (usize, usize) {
    let pos = y.iter().filter(|&v| v == 1).count();
    (pos, y.len() - pos)
}

/// Column role in the raw table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Date,
    Target,
}

/// Name and kind of one raw column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMeta {
    pub name: String,
    pub kind: ColumnKind,
}

impl ColumnMeta {
    pub fn new(name: &str, kind: ColumnKind) -> Self {
        ColumnMeta { name: name.to_string(), kind }
    }
}

/// Storage for one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ColumnData {
    /// Numeric cells; missing as NaN.
    Numeric(Vec<f64>),
    /// Categorical or date cells; missing as None.
    Text(Vec<Option<String>>),
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Column-typed tabular container. Feature columns keep their declared order;
/// the target column (at most one) is held separately as labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    columns: Vec<ColumnMeta>,
    data: Vec<ColumnData>,
    target_name: Option<String>,
    y: Option<LabelVector>,
}

impl Dataset {
    pub fn new(
        columns: Vec<ColumnMeta>,
        data: Vec<ColumnData>,
        target_name: Option<String>,
        y: Option<LabelVector>,
    ) -> Result<Self> {
        if columns.len() != data.len() {
            return Err(Error::Schema(format!(
                "{} column metas vs {} data columns",
                columns.len(),
                data.len()
            )));
        }
        let mut names = BTreeSet::new();
        for meta in &columns {
            if meta.kind == ColumnKind::Target {
                return Err(Error::Schema("target meta must not appear among feature columns".into()));
            }
            if !names.insert(meta.name.clone()) {
                return Err(Error::Schema(format!("duplicate column name {}", meta.name)));
            }
        }
        let n = data.first().map_or_else(|| y.as_ref().map_or(0, |y| y.len()), |c| c.len());
        if data.iter().any(|c| c.len() != n) {
            return Err(Error::Schema("ragged columns".into()));
        }
        if let Some(ref labels) = y {
            if labels.len() != n && !data.is_empty() {
                return Err(Error::Schema(format!(
                    "label length {} does not match row count {n}",
                    labels.len()
                )));
            }
        }
        Ok(Dataset { columns, data, target_name, y })
    }

    /// All-numeric dataset built from a feature matrix and optional labels.
    pub fn from_matrix(x: &Matrix, y: Option<LabelVector>, names: Option<Vec<String>>) -> Result<Self> {
        let names = names.unwrap_or_else(|| (0..x.n_cols()).map(|j| format!("f{j}")).collect());
        if names.len() != x.n_cols() {
            return Err(Error::DimensionMismatch { expected: x.n_cols(), got: names.len() });
        }
        let columns = names
            .iter()
            .map(|n| ColumnMeta::new(n, ColumnKind::Numeric))
            .collect();
        let data = (0..x.n_cols())
            .map(|j| ColumnData::Numeric((0..x.n_rows()).map(|i| x.get(i, j)).collect()))
            .collect();
        let target_name = y.as_ref().map(|_| "label".to_string());
        Dataset::new(columns, data, target_name, y)
    }

    pub fn n_rows(&self) -> usize {
        self.data
            .first()
            .map_or_else(|| self.y.as_ref().map_or(0, |y| y.len()), |c| c.len())
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[ColumnMeta] {
        &self.columns
    }

    pub fn column_data(&self, idx: usize) -> &ColumnData {
        &self.data[idx]
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|m| m.name == name)
    }

    pub fn labels(&self) -> Option<&LabelVector> {
        self.y.as_ref()
    }

    pub fn target_name(&self) -> Option<&str> {
        self.target_name.as_deref()
    }

    pub fn set_labels(&mut self, name: &str, y: LabelVector) -> Result<()> {
        if y.len() != self.n_rows() {
            return Err(Error::DimensionMismatch { expected: self.n_rows(), got: y.len() });
        }
        self.target_name = Some(name.to_string());
        self.y = Some(y);
        Ok(())
    }

    /// Rows restricted to the given indices, preserving the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Dataset {
        let data = self
            .data
            .iter()
            .map(|c| match c {
                ColumnData::Numeric(v) => ColumnData::Numeric(idx.iter().map(|&i| v[i]).collect()),
                ColumnData::Text(v) => {
                    ColumnData::Text(idx.iter().map(|&i| v[i].clone()).collect())
                }
            })
            .collect();
        Dataset {
            columns: self.columns.clone(),
            data,
            target_name: self.target_name.clone(),
            y: self.y.as_ref().map(|y| y.select(idx)),
        }
    }

    /// Feature matrix view; errors if any column is still unencoded text.
    pub fn to_matrix(&self) -> Result<Matrix> {
        let n = self.n_rows();
        let mut m = Matrix::zeros(n, self.columns.len());
        for (j, (meta, col)) in self.columns.iter().zip(&self.data).enumerate() {
            match col {
                ColumnData::Numeric(v) => {
                    for (i, &x) in v.iter().enumerate() {
                        m.set(i, j, x);
                    }
                }
                ColumnData::Text(_) => {
                    return Err(Error::Schema(format!(
                        "column {} is not numeric; encode it first",
                        meta.name
                    )))
                }
            }
        }
        Ok(m)
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.columns.iter().map(|m| m.name.clone()).collect()
    }

    /// Mutable access to the cells of a numeric column.
    pub fn numeric_column_mut(&mut self, idx: usize) -> Result<&mut Vec<f64>> {
        let name = self.columns[idx].name.clone();
        match &mut self.data[idx] {
            ColumnData::Numeric(v) => Ok(v),
            ColumnData::Text(_) => Err(Error::Schema(format!("column {name} is not numeric"))),
        }
    }
}

fn parse_numeric_cell(tok: &str, col: &str, line: usize) -> Result<f64> {
    if tok.is_empty() || tok == "NA" {
        return Ok(MISSING);
    }
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Parse(format!(
            "non-finite numeric value {tok:?} in column {col} (line {line})"
        ))),
        Err(_) => Err(Error::Parse(format!(
            "unparseable numeric value {tok:?} in column {col} (line {line})"
        ))),
    }
}

fn parse_target_cell(tok: &str, col: &str, line: usize) -> Result<u8> {
    match tok {
        "Yes" | "yes" | "1" => Ok(1),
        "No" | "no" | "0" => Ok(0),
        _ => Err(Error::Parse(format!(
            "unparseable target value {tok:?} in column {col} (line {line})"
        ))),
    }
}

/// Load an RFC-4180 CSV file against an explicit schema.
///
/// The header row must match the schema names exactly and in order. Numeric
/// cells parse as reals with "NA" and "" as the missing marker; categorical
/// and date cells are retained as strings (same missing sentinels). A target
/// column parses Yes/No/1/0 into labels.
pub fn load_csv(path: &Path, schema: &[ColumnMeta]) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file);

    let headers = reader.headers()?.clone();
    if headers.len() != schema.len() {
        return Err(Error::Schema(format!(
            "header has {} columns, schema expects {}",
            headers.len(),
            schema.len()
        )));
    }
    for (got, meta) in headers.iter().zip(schema) {
        if got != meta.name {
            return Err(Error::Schema(format!(
                "header column {got:?} does not match schema column {:?}",
                meta.name
            )));
        }
    }

    let target_count = schema.iter().filter(|m| m.kind == ColumnKind::Target).count();
    if target_count > 1 {
        return Err(Error::Schema("more than one target column in schema".into()));
    }

    let mut feature_meta = Vec::new();
    let mut data: Vec<ColumnData> = Vec::new();
    for meta in schema {
        if meta.kind == ColumnKind::Target {
            continue;
        }
        feature_meta.push(meta.clone());
        data.push(match meta.kind {
            ColumnKind::Numeric => ColumnData::Numeric(Vec::new()),
            _ => ColumnData::Text(Vec::new()),
        });
    }
    let mut labels: Vec<u8> = Vec::new();
    let mut target_name = None;

    for (rec_idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = rec_idx + 2; // header is line 1
        let mut feat_j = 0;
        for (cell, meta) in record.iter().zip(schema) {
            match meta.kind {
                ColumnKind::Target => {
                    target_name = Some(meta.name.clone());
                    labels.push(parse_target_cell(cell, &meta.name, line)?);
                }
                ColumnKind::Numeric => {
                    match &mut data[feat_j] {
                        ColumnData::Numeric(v) => {
                            v.push(parse_numeric_cell(cell, &meta.name, line)?)
                        }
                        _ => unreachable!(),
                    }
                    feat_j += 1;
                }
                ColumnKind::Categorical | ColumnKind::Date => {
                    match &mut data[feat_j] {
                        ColumnData::Text(v) => {
                            if cell.is_empty() || cell == "NA" {
                                v.push(None);
                            } else {
                                v.push(Some(cell.to_string()));
                            }
                        }
                        _ => unreachable!(),
                    }
                    feat_j += 1;
                }
            }
        }
    }

    let y = if target_count == 1 {
        if target_name.is_none() {
            // header-only file: keep the schema's target name
            target_name = schema
                .iter()
                .find(|m| m.kind == ColumnKind::Target)
                .map(|m| m.name.clone());
        }
        Some(LabelVector::new(labels)?)
    } else {
        None
    };
    Dataset::new(feature_meta, data, target_name, y)
}

/// Write a dataset back to CSV. Missing numeric cells become "NA", missing
/// text cells the empty string; labels are written as 0/1 under the target
/// name. Finite values round-trip bit-for-bit through [`load_csv`].
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = ds.columns.iter().map(|m| m.name.clone()).collect();
    if let Some(t) = &ds.target_name {
        header.push(t.clone());
    }
    writer.write_record(&header)?;

    let n = ds.n_rows();
    let mut buf = String::new();
    for i in 0..n {
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for col in &ds.data {
            match col {
                ColumnData::Numeric(v) => {
                    buf.clear();
                    if is_missing(v[i]) {
                        buf.push_str("NA");
                    } else {
                        write!(buf, "{}", v[i]).expect("format");
                    }
                    record.push(buf.clone());
                }
                ColumnData::Text(v) => record.push(v[i].clone().unwrap_or_default()),
            }
        }
        if let Some(y) = &ds.y {
            record.push(y.get(i).to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct DatasetFileHeader {
    format: String,
    version: u32,
    columns: Vec<ColumnMeta>,
    target: Option<String>,
    rows: usize,
}

/// Persist a dataset in the internal columnar-file format: one JSON header
/// line describing the columns, then one CSV-encoded record per row (no
/// header row), labels last when present. Stable across runs.
pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    let header = DatasetFileHeader {
        format: "rebalance-dataset".into(),
        version: 1,
        columns: ds.columns.clone(),
        target: ds.target_name.clone(),
        rows: ds.n_rows(),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;

    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let mut buf = String::new();
    for i in 0..ds.n_rows() {
        let mut record: Vec<String> = Vec::with_capacity(ds.columns.len() + 1);
        for col in &ds.data {
            match col {
                ColumnData::Numeric(v) => {
                    buf.clear();
                    if is_missing(v[i]) {
                        buf.push_str("NA");
                    } else {
                        write!(buf, "{}", v[i]).expect("format");
                    }
                    record.push(buf.clone());
                }
                ColumnData::Text(v) => record.push(v[i].clone().unwrap_or_default()),
            }
        }
        if let Some(y) = &ds.y {
            record.push(y.get(i).to_string());
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Load a dataset written by [`save_dataset`].
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let header: DatasetFileHeader = serde_json::from_str(first.trim_end())?;
    if header.format != "rebalance-dataset" {
        return Err(Error::Schema(format!("unrecognized dataset format {:?}", header.format)));
    }

    let mut data: Vec<ColumnData> = Vec::new();
    for _ in &header.columns {
        data.push(ColumnData::Numeric(Vec::new()));
    }
    // Column kinds drive cell parsing below; text columns get swapped in lazily.
    for (j, meta) in header.columns.iter().enumerate() {
        if meta.kind != ColumnKind::Numeric {
            data[j] = ColumnData::Text(Vec::new());
        }
    }
    let mut labels = Vec::new();

    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(reader);
    let expected_fields = header.columns.len() + usize::from(header.target.is_some());
    for (rec_idx, record) in csv_reader.records().enumerate() {
        let record = record?;
        let line = rec_idx + 2;
        if record.len() != expected_fields {
            return Err(Error::Schema(format!(
                "row {line} has {} fields, expected {expected_fields}",
                record.len()
            )));
        }
        for (j, meta) in header.columns.iter().enumerate() {
            let cell = &record[j];
            match &mut data[j] {
                ColumnData::Numeric(v) => v.push(parse_numeric_cell(cell, &meta.name, line)?),
                ColumnData::Text(v) => {
                    if cell.is_empty() || cell == "NA" {
                        v.push(None);
                    } else {
                        v.push(Some(cell.to_string()));
                    }
                }
            }
        }
        if header.target.is_some() {
            let cell = &record[record.len() - 1];
            labels.push(parse_target_cell(cell, "target", line)?);
        }
    }

    if data.iter().any(|c| c.len() != header.rows) {
        return Err(Error::Schema("row count does not match file header".into()));
    }
    let y = header.target.as_ref().map(|_| LabelVector::new(labels)).transpose()?;
    Dataset::new(header.columns, data, header.target, y)
}

/// The 24-column Rain-in-Australia schema (Kaggle export with RISK_MM).
pub fn rain_australia_schema() -> Vec<ColumnMeta> {
    use ColumnKind::*;
    [
        ("Date", Date),
        ("Location", Categorical),
        ("MinTemp", Numeric),
        ("MaxTemp", Numeric),
        ("Rainfall", Numeric),
        ("Evaporation", Numeric),
        ("Sunshine", Numeric),
        ("WindGustDir", Categorical),
        ("WindGustSpeed", Numeric),
        ("WindDir9am", Categorical),
        ("WindDir3pm", Categorical),
        ("WindSpeed9am", Numeric),
        ("WindSpeed3pm", Numeric),
        ("Humidity9am", Numeric),
        ("Humidity3pm", Numeric),
        ("Pressure9am", Numeric),
        ("Pressure3pm", Numeric),
        ("Cloud9am", Numeric),
        ("Cloud3pm", Numeric),
        ("Temp9am", Numeric),
        ("Temp3pm", Numeric),
        ("RainToday", Categorical),
        ("RISK_MM", Numeric),
        ("RainTomorrow", Target),
    ]
    .into_iter()
    .map(|(n, k)| ColumnMeta::new(n, k))
    .collect()
}

/// All-numeric schema built from a CSV header, with an optional target column.
pub fn numeric_schema(names: &[String], target: Option<&str>) -> Vec<ColumnMeta> {
    names
        .iter()
        .map(|n| {
            let kind = if Some(n.as_str()) == target {
                ColumnKind::Target
            } else {
                ColumnKind::Numeric
            };
            ColumnMeta::new(n, kind)
        })
        .collect()
}
