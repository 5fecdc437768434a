//! Preprocessing pipeline: column drops, month extraction from dates,
//! one-hot encoding, mean imputation, IQR outlier capping, min-max scaling,
//! and chi-square feature selection.
//!
//! Every stage that learns statistics is split into fit and apply so that
//! statistics learned on training rows can be applied to held-out rows
//! without leakage. [`PipelineSpec::paper_compat_full_fit`] deliberately
//! reverses that separation (statistics fitted on the full dataset) for
//! reproducing results produced under that regime; it is off by default.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::data::{is_missing, ColumnData, ColumnKind, ColumnMeta, Dataset, LabelVector, Matrix};
use crate::error::{Error, Result};
use crate::stats::chi2_sf;

/// Feature-selection strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SelectorSpec {
    None,
    KBest { k: usize },
    Fwe { alpha: f64 },
}

impl SelectorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SelectorSpec::None => Ok(()),
            SelectorSpec::KBest { k } => {
                if *k < 1 {
                    Err(Error::InvalidArgument("k_best requires k >= 1".into()))
                } else {
                    Ok(())
                }
            }
            SelectorSpec::Fwe { alpha } => {
                if *alpha <= 0.0 || *alpha >= 1.0 {
                    Err(Error::InvalidArgument("fwe requires 0 < alpha < 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Declarative pipeline configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub drop_list: Vec<String>,
    pub extract_month: bool,
    pub onehot_columns: Vec<String>,
    pub impute_mean: bool,
    /// IQR whisker; `Some(1.5)` is the conventional fence.
    pub cap_outliers: Option<f64>,
    pub scale_minmax: bool,
    pub selector: SelectorSpec,
    pub paper_compat_full_fit: bool,
}

impl Default for PipelineSpec {
    fn default() -> Self {
        PipelineSpec {
            drop_list: Vec::new(),
            extract_month: false,
            onehot_columns: Vec::new(),
            impute_mean: true,
            cap_outliers: None,
            scale_minmax: true,
            selector: SelectorSpec::None,
            paper_compat_full_fit: false,
        }
    }
}

impl PipelineSpec {
    /// The Rain-in-Australia preparation: drop the leaky and sparse columns,
    /// extract Month from Date, one-hot the categorical columns, mean-impute,
    /// and min-max scale. No capping or selection.
    pub fn rain_default() -> Self {
        PipelineSpec {
            drop_list: ["RISK_MM", "Sunshine", "Evaporation", "Cloud9am", "Cloud3pm"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            extract_month: true,
            onehot_columns: ["Location", "WindGustDir", "WindDir9am", "WindDir3pm", "RainToday"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            impute_mean: true,
            cap_outliers: None,
            scale_minmax: true,
            selector: SelectorSpec::None,
            paper_compat_full_fit: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.cap_outliers {
            if !(w > 0.0) {
                return Err(Error::InvalidArgument("whisker must be positive".into()));
            }
        }
        if self.selector != SelectorSpec::None && !self.scale_minmax {
            return Err(Error::InvalidArgument(
                "chi-square selection requires min-max scaling (nonnegative features)".into(),
            ));
        }
        self.selector.validate()
    }

    /// Compact human-readable description for reports.
    pub fn describe(&self) -> String {
        let sel = match &self.selector {
            SelectorSpec::None => "none".to_string(),
            SelectorSpec::KBest { k } => format!("k_best({k})"),
            SelectorSpec::Fwe { alpha } => format!("fwe({alpha})"),
        };
        format!(
            "drop={};month={};onehot={};impute={};cap={};scale={};selector={};full_fit={}",
            self.drop_list.len(),
            self.extract_month,
            self.onehot_columns.len(),
            if self.impute_mean { "mean" } else { "off" },
            self.cap_outliers.map_or("off".to_string(), |w| w.to_string()),
            if self.scale_minmax { "minmax" } else { "off" },
            sel,
            self.paper_compat_full_fit,
        )
    }
}

// ---------------------------------------------------------------------------
// Structural stages
// ---------------------------------------------------------------------------

/// Remove the named feature columns, preserving the order of the rest.
pub fn drop_columns(ds: &Dataset, names: &[String]) -> Result<Dataset> {
    for n in names {
        if ds.column_index(n).is_none() {
            return Err(Error::UnknownColumn(n.clone()));
        }
    }
    let keep: Vec<usize> = (0..ds.n_columns())
        .filter(|&j| !names.iter().any(|n| n == &ds.columns()[j].name))
        .collect();
    let columns = keep.iter().map(|&j| ds.columns()[j].clone()).collect();
    let data = keep.iter().map(|&j| ds.column_data(j).clone()).collect();
    Dataset::new(columns, data, ds.target_name().map(String::from), ds.labels().cloned())
}

fn parse_iso_month(cell: &str) -> Result<f64> {
    let parts: Vec<&str> = cell.split('-').collect();
    let ok = parts.len() == 3
        && parts[0].len() == 4
        && parts[1].len() == 2
        && parts[2].len() == 2
        && parts.iter().all(|p| p.bytes().all(|b| b.is_ascii_digit()));
    if !ok {
        return Err(Error::Parse(format!("malformed date {cell:?}; expected YYYY-MM-DD")));
    }
    let month: u32 = parts[1].parse().unwrap();
    let day: u32 = parts[2].parse().unwrap();
    if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
        return Err(Error::Parse(format!("date out of range: {cell:?}")));
    }
    Ok(month as f64)
}

/// Replace the date column by a numeric Month column in 1..12, appended at
/// the end (day and year are discarded).
pub fn extract_month(ds: &Dataset) -> Result<Dataset> {
    let date_idx = ds
        .columns()
        .iter()
        .position(|m| m.kind == ColumnKind::Date)
        .ok_or_else(|| Error::Schema("no date column present".into()))?;

    let months: Vec<f64> = match ds.column_data(date_idx) {
        ColumnData::Text(cells) => cells
            .iter()
            .map(|c| match c {
                Some(s) => parse_iso_month(s),
                None => Err(Error::Parse("missing date cell".into())),
            })
            .collect::<Result<_>>()?,
        ColumnData::Numeric(_) => {
            return Err(Error::Schema("date column holds numeric data".into()))
        }
    };

    let mut columns: Vec<ColumnMeta> = Vec::new();
    let mut data: Vec<ColumnData> = Vec::new();
    for j in 0..ds.n_columns() {
        if j == date_idx {
            continue;
        }
        columns.push(ds.columns()[j].clone());
        data.push(ds.column_data(j).clone());
    }
    columns.push(ColumnMeta::new("Month", ColumnKind::Numeric));
    data.push(ColumnData::Numeric(months));
    Dataset::new(columns, data, ds.target_name().map(String::from), ds.labels().cloned())
}

/// Category vocabularies per one-hot column, in column order.
pub type OneHotVocab = Vec<(String, Vec<String>)>;

/// Collect the sorted category vocabulary of each named column over the
/// given rows. Missing cells contribute nothing.
pub fn one_hot_fit(ds: &Dataset, rows: &[usize], columns: &[String]) -> Result<OneHotVocab> {
    let mut vocab = Vec::with_capacity(columns.len());
    for name in columns {
        let j = ds
            .column_index(name)
            .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
        if ds.columns()[j].kind != ColumnKind::Categorical {
            return Err(Error::Schema(format!("column {name} is not categorical")));
        }
        let cats: BTreeSet<String> = match ds.column_data(j) {
            ColumnData::Text(cells) => rows
                .iter()
                .filter_map(|&i| cells[i].clone())
                .collect(),
            ColumnData::Numeric(_) => {
                return Err(Error::Schema(format!("column {name} is not categorical")))
            }
        };
        vocab.push((name.clone(), cats.into_iter().collect()));
    }
    Ok(vocab)
}

/// Expand each vocabulary column into indicator columns (`name=category`).
/// Missing or unseen categories yield all-zero indicators.
pub fn one_hot_apply(ds: &Dataset, vocab: &OneHotVocab) -> Result<Dataset> {
    let n = ds.n_rows();
    let mut columns: Vec<ColumnMeta> = Vec::new();
    let mut data: Vec<ColumnData> = Vec::new();
    for j in 0..ds.n_columns() {
        let meta = &ds.columns()[j];
        if let Some((_, cats)) = vocab.iter().find(|(name, _)| name == &meta.name) {
            let cells = match ds.column_data(j) {
                ColumnData::Text(cells) => cells,
                ColumnData::Numeric(_) => {
                    return Err(Error::Schema(format!("column {} is not categorical", meta.name)))
                }
            };
            for cat in cats {
                let mut indicator = vec![0.0; n];
                for (i, cell) in cells.iter().enumerate() {
                    if cell.as_deref() == Some(cat.as_str()) {
                        indicator[i] = 1.0;
                    }
                }
                columns.push(ColumnMeta::new(&format!("{}={}", meta.name, cat), ColumnKind::Numeric));
                data.push(ColumnData::Numeric(indicator));
            }
        } else {
            columns.push(meta.clone());
            data.push(ds.column_data(j).clone());
        }
    }
    Dataset::new(columns, data, ds.target_name().map(String::from), ds.labels().cloned())
}

/// One-shot encoding: vocabularies observed on the data itself.
pub fn one_hot_encode(ds: &Dataset, columns: &[String]) -> Result<Dataset> {
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    let vocab = one_hot_fit(ds, &rows, columns)?;
    one_hot_apply(ds, &vocab)
}

// ---------------------------------------------------------------------------
// Numeric stages
// ---------------------------------------------------------------------------

fn numeric_columns(ds: &Dataset) -> Vec<usize> {
    (0..ds.n_columns())
        .filter(|&j| matches!(ds.column_data(j), ColumnData::Numeric(_)))
        .collect()
}

fn numeric_cells<'a>(ds: &'a Dataset, j: usize) -> &'a [f64] {
    match ds.column_data(j) {
        ColumnData::Numeric(v) => v,
        ColumnData::Text(_) => unreachable!("caller filtered numeric columns"),
    }
}

/// Per-column training means for imputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanImputer {
    /// (column name, mean) per numeric column, in column order.
    pub means: Vec<(String, f64)>,
}

impl MeanImputer {
    /// Fit means over the given rows; errors on an all-missing column.
    pub fn fit(ds: &Dataset, rows: &[usize]) -> Result<Self> {
        let mut means = Vec::new();
        for j in numeric_columns(ds) {
            let cells = numeric_cells(ds, j);
            let mut sum = 0.0;
            let mut count = 0usize;
            for &i in rows {
                if !is_missing(cells[i]) {
                    sum += cells[i];
                    count += 1;
                }
            }
            if count == 0 {
                return Err(Error::Degenerate(format!(
                    "column {} has no observed values to impute from",
                    ds.columns()[j].name
                )));
            }
            means.push((ds.columns()[j].name.clone(), sum / count as f64));
        }
        Ok(MeanImputer { means })
    }

    /// Replace every missing numeric cell with its training mean.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        let mut out = ds.clone();
        for (name, mean) in &self.means {
            let j = out
                .column_index(name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
            for cell in out.numeric_column_mut(j)?.iter_mut() {
                if is_missing(*cell) {
                    *cell = *mean;
                }
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper: fit on all rows and apply to the same data.
pub fn impute_mean(ds: &Dataset) -> Result<Dataset> {
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    MeanImputer::fit(ds, &rows)?.apply(ds)
}

/// Linear-interpolation (type-7) quantile of pre-sorted values.
pub fn quantile_type7(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Per-column IQR fences learned at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqrCapper {
    /// (column name, lower fence, upper fence) per numeric column.
    pub fences: Vec<(String, f64, f64)>,
}

impl IqrCapper {
    /// Fit fences `[Q1 - w*IQR, Q3 + w*IQR]` over the given rows. Requires
    /// imputed columns (no missing cells among the fit rows).
    pub fn fit(ds: &Dataset, rows: &[usize], whisker: f64) -> Result<Self> {
        if !(whisker > 0.0) {
            return Err(Error::InvalidArgument("whisker must be positive".into()));
        }
        let mut fences = Vec::new();
        for j in numeric_columns(ds) {
            let cells = numeric_cells(ds, j);
            let mut vals: Vec<f64> = Vec::with_capacity(rows.len());
            for &i in rows {
                if is_missing(cells[i]) {
                    return Err(Error::MissingValue(format!(
                        "column {} must be imputed before capping",
                        ds.columns()[j].name
                    )));
                }
                vals.push(cells[i]);
            }
            if vals.is_empty() {
                return Err(Error::Degenerate("no rows to fit fences on".into()));
            }
            vals.sort_unstable_by(f64::total_cmp);
            let q1 = quantile_type7(&vals, 0.25);
            let q3 = quantile_type7(&vals, 0.75);
            let iqr = q3 - q1;
            fences.push((ds.columns()[j].name.clone(), q1 - whisker * iqr, q3 + whisker * iqr));
        }
        Ok(IqrCapper { fences })
    }

    /// Clamp every numeric cell to its column fences.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        let mut out = ds.clone();
        for (name, lo, hi) in &self.fences {
            let j = out
                .column_index(name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
            for cell in out.numeric_column_mut(j)?.iter_mut() {
                if !is_missing(*cell) {
                    *cell = cell.clamp(*lo, *hi);
                }
            }
        }
        Ok(out)
    }
}

/// One-shot capping: quantiles from the data itself. Idempotent.
pub fn cap_outliers_iqr(ds: &Dataset, whisker: f64) -> Result<Dataset> {
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    IqrCapper::fit(ds, &rows, whisker)?.apply(ds)
}

/// Per-column (min, max) learned at fit time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    /// (column name, min, max) per numeric column.
    pub ranges: Vec<(String, f64, f64)>,
}

impl MinMaxScaler {
    /// Fit per-column min/max over the given rows; no missing cells allowed.
    pub fn fit(ds: &Dataset, rows: &[usize]) -> Result<Self> {
        let mut ranges = Vec::new();
        for j in numeric_columns(ds) {
            let cells = numeric_cells(ds, j);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &i in rows {
                if is_missing(cells[i]) {
                    return Err(Error::MissingValue(format!(
                        "column {} must be imputed before scaling",
                        ds.columns()[j].name
                    )));
                }
                lo = lo.min(cells[i]);
                hi = hi.max(cells[i]);
            }
            if rows.is_empty() {
                return Err(Error::Degenerate("no rows to fit scaler on".into()));
            }
            ranges.push((ds.columns()[j].name.clone(), lo, hi));
        }
        Ok(MinMaxScaler { ranges })
    }

    /// x -> (x - min) / (max - min); constant columns map to 0. Apply-time
    /// values outside the fit range pass through unclipped.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        let mut out = ds.clone();
        for (name, lo, hi) in &self.ranges {
            let j = out
                .column_index(name)
                .ok_or_else(|| Error::UnknownColumn(name.clone()))?;
            let span = hi - lo;
            for cell in out.numeric_column_mut(j)?.iter_mut() {
                if is_missing(*cell) {
                    continue;
                }
                *cell = if span == 0.0 { 0.0 } else { (*cell - lo) / span };
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Feature selection
// ---------------------------------------------------------------------------

/// Chi-square score of each feature column against the binary labels.
///
/// Observed values are the class-wise sums of the (nonnegative) feature;
/// expected values distribute the feature total by class prior. The statistic
/// is summed over the two classes and tested at one degree of freedom.
pub fn chi2_scores(x: &Matrix, y: &LabelVector) -> Result<Vec<(f64, f64)>> {
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.n_rows(), got: y.len() });
    }
    let n = x.n_rows();
    if n == 0 {
        return Err(Error::Degenerate("no rows to score".into()));
    }
    let pos = y.iter().filter(|&v| v == 1).count();
    let prior_pos = pos as f64 / n as f64;
    let prior_neg = 1.0 - prior_pos;

    let mut out = Vec::with_capacity(x.n_cols());
    for j in 0..x.n_cols() {
        let mut obs_pos = 0.0;
        let mut obs_neg = 0.0;
        for i in 0..n {
            let v = x.get(i, j);
            if is_missing(v) {
                return Err(Error::MissingValue(format!("feature {j} has missing cells")));
            }
            if v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "chi-square scores require nonnegative features; feature {j} has {v}"
                )));
            }
            if y.get(i) == 1 {
                obs_pos += v;
            } else {
                obs_neg += v;
            }
        }
        let total = obs_pos + obs_neg;
        let exp_pos = total * prior_pos;
        let exp_neg = total * prior_neg;
        let mut stat = 0.0;
        if exp_pos > 0.0 {
            stat += (obs_pos - exp_pos).powi(2) / exp_pos;
        }
        if exp_neg > 0.0 {
            stat += (obs_neg - exp_neg).powi(2) / exp_neg;
        }
        out.push((stat, chi2_sf(stat, 1.0)));
    }
    Ok(out)
}

/// Indices of the k largest statistics, ties to the lower index, returned in
/// increasing order.
pub fn select_k_best(scores: &[f64], k: usize) -> Result<Vec<usize>> {
    if k > scores.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds feature count {}",
            scores.len()
        )));
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut selected: Vec<usize> = idx.into_iter().take(k).collect();
    selected.sort_unstable();
    Ok(selected)
}

/// Bonferroni family-wise selection: keep feature i iff p_i < alpha / n.
/// An empty result is returned as-is; pipeline-level callers reject it.
pub fn select_fwe(p_values: &[f64], alpha: f64) -> Vec<usize> {
    let n = p_values.len();
    if n == 0 {
        return Vec::new();
    }
    let threshold = alpha / n as f64;
    (0..n).filter(|&i| p_values[i] < threshold).collect()
}

// ---------------------------------------------------------------------------
// Composed pipeline
// ---------------------------------------------------------------------------

/// All statistics learned by [`Pipeline::fit`]; reusable across datasets and
/// persistable as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPipeline {
    pub spec: PipelineSpec,
    pub onehot_vocab: OneHotVocab,
    pub imputer: Option<MeanImputer>,
    pub capper: Option<IqrCapper>,
    pub scaler: Option<MinMaxScaler>,
    /// Encoded feature names before selection.
    pub feature_names: Vec<String>,
    /// Strictly increasing indices into `feature_names`; None = keep all.
    pub selected: Option<Vec<usize>>,
}

/// Entry point for fitting a [`PipelineSpec`].
pub struct Pipeline;

impl Pipeline {
    /// Fit all pipeline statistics on the given rows of `ds`.
    pub fn fit(spec: &PipelineSpec, ds: &Dataset, rows: &[usize]) -> Result<FittedPipeline> {
        spec.validate()?;
        let structural = Self::structural_stub(spec, ds)?;
        let fit_view = structural.select_rows(rows);
        let vocab = one_hot_fit(&fit_view, &(0..rows.len()).collect::<Vec<_>>(), &spec.onehot_columns)?;
        let mut encoded = one_hot_apply(&fit_view, &vocab)?;

        let imputer = if spec.impute_mean {
            let all: Vec<usize> = (0..encoded.n_rows()).collect();
            let im = MeanImputer::fit(&encoded, &all)?;
            encoded = im.apply(&encoded)?;
            Some(im)
        } else {
            None
        };

        let capper = if let Some(w) = spec.cap_outliers {
            let all: Vec<usize> = (0..encoded.n_rows()).collect();
            let cap = IqrCapper::fit(&encoded, &all, w)?;
            encoded = cap.apply(&encoded)?;
            Some(cap)
        } else {
            None
        };

        let scaler = if spec.scale_minmax {
            let all: Vec<usize> = (0..encoded.n_rows()).collect();
            let sc = MinMaxScaler::fit(&encoded, &all)?;
            encoded = sc.apply(&encoded)?;
            Some(sc)
        } else {
            None
        };

        let feature_names = encoded.feature_names();
        let selected = match &spec.selector {
            SelectorSpec::None => None,
            sel => {
                let x = encoded.to_matrix()?;
                let y = encoded
                    .labels()
                    .ok_or_else(|| Error::Schema("feature selection requires labels".into()))?;
                let scores = chi2_scores(&x, y)?;
                let picked = match sel {
                    SelectorSpec::KBest { k } => {
                        let stats: Vec<f64> = scores.iter().map(|s| s.0).collect();
                        select_k_best(&stats, (*k).min(stats.len()))?
                    }
                    SelectorSpec::Fwe { alpha } => {
                        let ps: Vec<f64> = scores.iter().map(|s| s.1).collect();
                        select_fwe(&ps, *alpha)
                    }
                    SelectorSpec::None => unreachable!(),
                };
                if picked.is_empty() {
                    return Err(Error::Degenerate("feature selection kept no features".into()));
                }
                Some(picked)
            }
        };

        Ok(FittedPipeline {
            spec: spec.clone(),
            onehot_vocab: vocab,
            imputer,
            capper,
            scaler,
            feature_names,
            selected,
        })
    }

    fn structural_stub(spec: &PipelineSpec, ds: &Dataset) -> Result<Dataset> {
        let mut out = drop_columns(ds, &spec.drop_list)?;
        if spec.extract_month {
            out = extract_month(&out)?;
        }
        Ok(out)
    }
}

impl FittedPipeline {
    /// Number of features after selection.
    pub fn output_width(&self) -> usize {
        self.selected
            .as_ref()
            .map_or(self.feature_names.len(), |s| s.len())
    }

    /// Feature names after selection.
    pub fn output_names(&self) -> Vec<String> {
        match &self.selected {
            None => self.feature_names.clone(),
            Some(idx) => idx.iter().map(|&j| self.feature_names[j].clone()).collect(),
        }
    }

    /// Transform the given rows of `ds` using only fitted statistics.
    pub fn transform(&self, ds: &Dataset, rows: &[usize]) -> Result<(Matrix, Option<LabelVector>)> {
        let structural = Pipeline::structural_stub(&self.spec, ds)?;
        let view = structural.select_rows(rows);
        let mut encoded = one_hot_apply(&view, &self.onehot_vocab)?;
        if let Some(im) = &self.imputer {
            encoded = im.apply(&encoded)?;
        }
        if let Some(cap) = &self.capper {
            encoded = cap.apply(&encoded)?;
        }
        if let Some(sc) = &self.scaler {
            encoded = sc.apply(&encoded)?;
        }
        if encoded.feature_names() != self.feature_names {
            return Err(Error::Schema("dataset columns do not match fitted pipeline".into()));
        }
        let x = encoded.to_matrix()?;
        let x = match &self.selected {
            None => x,
            Some(idx) => x.select_cols(idx),
        };
        Ok((x, encoded.labels().cloned()))
    }

    /// Fit on all rows and transform all rows (single-file preparation).
    pub fn fit_transform_all(spec: &PipelineSpec, ds: &Dataset) -> Result<(FittedPipeline, Matrix, Option<LabelVector>)> {
        let rows: Vec<usize> = (0..ds.n_rows()).collect();
        let fitted = Pipeline::fit(spec, ds, &rows)?;
        let (x, y) = fitted.transform(ds, &rows)?;
        Ok((fitted, x, y))
    }
}
