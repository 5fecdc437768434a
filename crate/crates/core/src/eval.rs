//! Evaluation: confusion-matrix metrics, stratified splitting and k-fold
//! cross-validation with leakage-safe per-fold resampling, grid search, and
//! the sampler x model benchmark runner.
//!
//! Seed discipline: every stochastic stage derives its stream from the run
//! seed through [`mix`]. Fold f uses `mix(base, f)`, from which the sampler
//! and the model get separate salted streams, so fold scheduling cannot
//! change any result.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{class_counts, Dataset, LabelVector, Matrix};
use crate::error::{Error, Result};
use crate::models::{self, ModelSpec};
use crate::preprocess::{FittedPipeline, Pipeline, PipelineSpec};
use crate::samplers::Resampler;
use crate::seeding::{mix, rng_from_seed};

/// Salt used when deriving the 80/20 split stream from the run seed.
pub const SALT_SPLIT: u64 = 0xA1;
/// Salt used when deriving the fold-assignment stream from the run seed.
pub const SALT_FOLDS: u64 = 0xA2;
/// Salt applied to a fold seed to obtain the sampler stream.
pub const SALT_SAMPLER: u64 = 1;
/// Salt applied to a fold seed to obtain the model stream.
pub const SALT_MODEL: u64 = 2;
/// Fold index stand-in for the final 80%-train / 20%-test phase.
pub const FINAL_PHASE: u64 = 0xFFFF;

/// Exact counts with positive class = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

pub fn confusion(y_true: &LabelVector, y_pred: &LabelVector) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch { expected: y_true.len(), got: y_pred.len() });
    }
    let mut cm = ConfusionMatrix { true_pos: 0, false_pos: 0, false_neg: 0, true_neg: 0 };
    for (t, p) in y_true.iter().zip(y_pred.iter()) {
        match (t, p) {
            (1, 1) => cm.true_pos += 1,
            (0, 1) => cm.false_pos += 1,
            (1, 0) => cm.false_neg += 1,
            _ => cm.true_neg += 1,
        }
    }
    Ok(cm)
}

/// Positive-class precision, recall and F1; any 0/0 yields 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let precision = ratio(cm.true_pos, cm.true_pos + cm.false_pos);
    let recall = ratio(cm.true_pos, cm.true_pos + cm.false_neg);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Metrics { precision, recall, f1 }
}

/// Per-class proportional 80/20-style split: largest-remainder allocation of
/// the rounded test total across classes, uniform random within class.
///
/// A class of two or more rows must land on both sides; single-row classes
/// fall where the allocation puts them.
pub fn stratified_split(
    y: &LabelVector,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument("test_fraction must lie in (0, 1)".into()));
    }
    let (pos, neg) = class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }
    let n = y.len();
    let total_test = (n as f64 * test_fraction).round() as usize;

    let counts = [neg, pos];
    let quotas = [neg as f64 * test_fraction, pos as f64 * test_fraction];
    let mut test_counts = [quotas[0].floor() as usize, quotas[1].floor() as usize];
    let mut leftover = total_test.saturating_sub(test_counts[0] + test_counts[1]);
    // distribute remainders by largest fractional part, ties to class 0
    let mut order = [0usize, 1usize];
    order.sort_by(|&a, &b| {
        (quotas[b] - quotas[b].floor())
            .total_cmp(&(quotas[a] - quotas[a].floor()))
            .then(a.cmp(&b))
    });
    for c in order {
        if leftover == 0 {
            break;
        }
        if test_counts[c] < counts[c] {
            test_counts[c] += 1;
            leftover -= 1;
        }
    }

    if total_test == 0 || total_test >= n {
        return Err(Error::Degenerate("split leaves one side empty".into()));
    }
    for c in 0..2 {
        if counts[c] >= 2 && (test_counts[c] == 0 || test_counts[c] == counts[c]) {
            return Err(Error::Degenerate(format!(
                "class {c} would have zero rows on one side of the split"
            )));
        }
    }

    let mut rng = rng_from_seed(seed);
    let mut train = Vec::with_capacity(n - total_test);
    let mut test = Vec::with_capacity(total_test);
    for class in [0u8, 1u8] {
        use rand::seq::SliceRandom;
        let mut idx = y.indices_of(class);
        idx.shuffle(&mut rng);
        let take = test_counts[class as usize];
        test.extend_from_slice(&idx[..take]);
        train.extend_from_slice(&idx[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Disjoint fold assignment covering all rows; per-class round-robin after a
/// seeded shuffle, so per-fold class counts differ by at most one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    /// Fold id per row.
    pub assignment: Vec<usize>,
    pub seed: u64,
}

pub fn stratified_kfold(y: &LabelVector, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let (pos, neg) = class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }
    if k > pos.min(neg) {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the minority count {}",
            pos.min(neg)
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut assignment = vec![0usize; y.len()];
    for class in [0u8, 1u8] {
        use rand::seq::SliceRandom;
        let mut idx = y.indices_of(class);
        idx.shuffle(&mut rng);
        for (pos_in_class, &row) in idx.iter().enumerate() {
            assignment[row] = pos_in_class % k;
        }
    }
    Ok(FoldPlan { k, assignment, seed })
}

impl FoldPlan {
    /// (train rows, validation rows) of one fold, each in ascending order.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        assert!(fold < self.k, "fold out of range");
        let mut train = Vec::new();
        let mut val = Vec::new();
        for (row, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                val.push(row);
            } else {
                train.push(row);
            }
        }
        (train, val)
    }
}

/// Cross-validation outcome of one model x sampler cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub per_fold: Vec<Metrics>,
    pub mean_f1: f64,
    pub warnings: Vec<String>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Fit one pipeline per fold on that fold's training rows, or a single
/// pipeline on every row when `paper_compat_full_fit` is set.
pub fn fit_fold_pipelines(
    spec: &PipelineSpec,
    ds: &Dataset,
    plan: &FoldPlan,
) -> Result<Vec<FittedPipeline>> {
    if spec.paper_compat_full_fit {
        let all: Vec<usize> = (0..ds.n_rows()).collect();
        let shared = Pipeline::fit(spec, ds, &all)?;
        return Ok(vec![shared; plan.k]);
    }
    (0..plan.k)
        .into_par_iter()
        .map(|f| {
            let (train_rows, _) = plan.split(f);
            Pipeline::fit(spec, ds, &train_rows)
        })
        .collect()
}

fn run_fold(
    model_spec: &ModelSpec,
    sampler: &dyn Resampler,
    pipe: &FittedPipeline,
    ds: &Dataset,
    train_rows: &[usize],
    val_rows: &[usize],
    fold_seed: u64,
) -> Result<(Metrics, Vec<String>)> {
    let (x_tr, y_tr) = pipe.transform(ds, train_rows)?;
    let y_tr = y_tr.ok_or_else(|| Error::Schema("cross-validation requires labels".into()))?;
    let resampled = sampler.resample_seeded(&x_tr, &y_tr, mix(fold_seed, SALT_SAMPLER))?;

    let spec = ModelSpec { seed: mix(fold_seed, SALT_MODEL), ..model_spec.clone() };
    let model = models::fit(&spec, &resampled.x, &resampled.y)?;

    let (x_va, y_va) = pipe.transform(ds, val_rows)?;
    let y_va = y_va.ok_or_else(|| Error::Schema("cross-validation requires labels".into()))?;
    let pred = model.predict(&x_va)?;
    let m = metrics(&confusion(&y_va, &pred)?);
    Ok((m, resampled.warnings))
}

/// Cross-validate one model x sampler cell against pre-fitted per-fold
/// pipelines. Only the fold's training rows ever reach the pipeline fit and
/// the sampler; validation rows are transformed and scored, nothing else.
pub fn cross_validate_prepared(
    model_spec: &ModelSpec,
    sampler: &dyn Resampler,
    pipelines: &[FittedPipeline],
    ds: &Dataset,
    plan: &FoldPlan,
    base_seed: u64,
) -> Result<CvResult> {
    let outcomes: Vec<(Metrics, Vec<String>)> = (0..plan.k)
        .into_par_iter()
        .map(|f| {
            let (train_rows, val_rows) = plan.split(f);
            run_fold(
                model_spec,
                sampler,
                &pipelines[f],
                ds,
                &train_rows,
                &val_rows,
                mix(base_seed, f as u64),
            )
        })
        .collect::<Result<_>>()?;

    let per_fold: Vec<Metrics> = outcomes.iter().map(|(m, _)| *m).collect();
    let warnings = outcomes
        .into_iter()
        .enumerate()
        .flat_map(|(f, (_, ws))| ws.into_iter().map(move |w| format!("fold {f}: {w}")))
        .collect();
    Ok(CvResult { mean_f1: mean(per_fold.iter().map(|m| m.f1)), per_fold, warnings })
}

/// Fit pipelines per fold and cross-validate one cell.
pub fn cross_validate(
    model_spec: &ModelSpec,
    sampler: &dyn Resampler,
    pipeline: &PipelineSpec,
    ds: &Dataset,
    plan: &FoldPlan,
    base_seed: u64,
) -> Result<CvResult> {
    let pipelines = fit_fold_pipelines(pipeline, ds, plan)?;
    cross_validate_prepared(model_spec, sampler, &pipelines, ds, plan, base_seed)
}

/// Grid-search outcome: the winning spec and the full mean-F1 table.
#[derive(Debug, Clone)]
pub struct GridSearchResult {
    pub best_index: usize,
    pub best_spec: ModelSpec,
    pub best_mean_f1: f64,
    pub table: Vec<f64>,
}

/// Evaluate every grid point by cross-validation; the argmax of mean F1
/// wins, ties to the earlier grid point.
pub fn grid_search(
    grid: &[ModelSpec],
    sampler: &dyn Resampler,
    pipeline: &PipelineSpec,
    ds: &Dataset,
    plan: &FoldPlan,
    base_seed: u64,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("grid must not be empty".into()));
    }
    let pipelines = fit_fold_pipelines(pipeline, ds, plan)?;
    let mut table = Vec::with_capacity(grid.len());
    for spec in grid {
        let cv = cross_validate_prepared(spec, sampler, &pipelines, ds, plan, base_seed)?;
        table.push(cv.mean_f1);
    }
    let best_index = table
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.total_cmp(b).then(ib.cmp(ia)))
        .map(|(i, _)| i)
        .unwrap();
    Ok(GridSearchResult {
        best_index,
        best_spec: grid[best_index].clone(),
        best_mean_f1: table[best_index],
        table,
    })
}

/// One model x sampler cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub model: String,
    pub sampler: String,
    pub fold_metrics: Vec<Metrics>,
    pub cv_mean_f1: f64,
    /// Held-out 20%-test metrics of the model trained on the full 80%.
    pub test: Metrics,
    /// Metrics on the (unresampled) training portion itself; populated only
    /// when explicitly requested, and never part of the headline comparison.
    pub train_eval: Option<Metrics>,
    pub warnings: Vec<String>,
}

/// Full sampler x model comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub pipeline: String,
    pub seed: u64,
    pub k: usize,
    pub test_fraction: f64,
    pub n_rows: usize,
    pub n_features: usize,
    pub cells: Vec<CellReport>,
}

/// Precomputed state shared by every cell of an experiment: the 80/20 split,
/// the fold plan over the training portion, per-fold pipelines, and the
/// final-phase pipeline with its transformed matrices.
pub struct ExperimentPlan {
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub plan: FoldPlan,
    pub seed: u64,
    train_ds: Dataset,
    fold_pipelines: Vec<FittedPipeline>,
    final_x_train: Matrix,
    final_y_train: LabelVector,
    final_x_test: Matrix,
    final_y_test: LabelVector,
}

impl ExperimentPlan {
    pub fn prepare(
        pipeline: &PipelineSpec,
        ds: &Dataset,
        k: usize,
        test_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        let y = ds
            .labels()
            .ok_or_else(|| Error::Schema("experiments require a labeled dataset".into()))?;
        let (train_rows, test_rows) = stratified_split(y, test_fraction, mix(seed, SALT_SPLIT))?;
        let train_ds = ds.select_rows(&train_rows);
        let plan = stratified_kfold(
            train_ds.labels().expect("labels survive row selection"),
            k,
            mix(seed, SALT_FOLDS),
        )?;

        let fold_pipelines = if pipeline.paper_compat_full_fit {
            let all: Vec<usize> = (0..ds.n_rows()).collect();
            let shared = Pipeline::fit(pipeline, ds, &all)?;
            vec![shared; k]
        } else {
            fit_fold_pipelines(pipeline, &train_ds, &plan)?
        };

        let final_pipeline = if pipeline.paper_compat_full_fit {
            fold_pipelines[0].clone()
        } else {
            let all_train: Vec<usize> = (0..train_ds.n_rows()).collect();
            Pipeline::fit(pipeline, &train_ds, &all_train)?
        };
        let all_train: Vec<usize> = (0..train_ds.n_rows()).collect();
        let (final_x_train, y_tr) = final_pipeline.transform(&train_ds, &all_train)?;
        let (final_x_test, y_te) = final_pipeline.transform(ds, &test_rows)?;
        let final_y_train =
            y_tr.ok_or_else(|| Error::Schema("experiments require a labeled dataset".into()))?;
        let final_y_test =
            y_te.ok_or_else(|| Error::Schema("experiments require a labeled dataset".into()))?;

        Ok(ExperimentPlan {
            train_rows,
            test_rows,
            plan,
            seed,
            train_ds,
            fold_pipelines,
            final_x_train,
            final_y_train,
            final_x_test,
            final_y_test,
        })
    }

    pub fn n_features(&self) -> usize {
        self.final_x_train.n_cols()
    }

    /// Run one model x sampler cell: k-fold CV on the training portion plus
    /// a final train-on-80% / score-on-20% pass.
    pub fn run_cell(
        &self,
        model_spec: &ModelSpec,
        sampler: &dyn Resampler,
        eval_on_train: bool,
    ) -> Result<CellReport> {
        let cv = cross_validate_prepared(
            model_spec,
            sampler,
            &self.fold_pipelines,
            &self.train_ds,
            &self.plan,
            self.seed,
        )?;

        let final_seed = mix(self.seed, FINAL_PHASE);
        let resampled = sampler.resample_seeded(
            &self.final_x_train,
            &self.final_y_train,
            mix(final_seed, SALT_SAMPLER),
        )?;
        let spec = ModelSpec { seed: mix(final_seed, SALT_MODEL), ..model_spec.clone() };
        let model = models::fit(&spec, &resampled.x, &resampled.y)?;
        let pred = model.predict(&self.final_x_test)?;
        let test = metrics(&confusion(&self.final_y_test, &pred)?);

        let train_eval = if eval_on_train {
            let pred_tr = model.predict(&self.final_x_train)?;
            Some(metrics(&confusion(&self.final_y_train, &pred_tr)?))
        } else {
            None
        };

        let mut warnings = cv.warnings.clone();
        warnings.extend(resampled.warnings.iter().map(|w| format!("final: {w}")));
        Ok(CellReport {
            model: model_spec.name().to_string(),
            sampler: sampler.name(),
            fold_metrics: cv.per_fold,
            cv_mean_f1: cv.mean_f1,
            test,
            train_eval,
            warnings,
        })
    }
}

/// Run the full model x sampler grid in configured order.
pub fn run_experiment(
    models_list: &[ModelSpec],
    samplers_list: &[crate::samplers::SamplerConfig],
    pipeline: &PipelineSpec,
    ds: &Dataset,
    k: usize,
    test_fraction: f64,
    seed: u64,
    eval_on_train: bool,
) -> Result<ExperimentReport> {
    let plan = ExperimentPlan::prepare(pipeline, ds, k, test_fraction, seed)?;
    let mut cells = Vec::with_capacity(models_list.len() * samplers_list.len());
    for model_spec in models_list {
        for sampler in samplers_list {
            cells.push(plan.run_cell(model_spec, sampler, eval_on_train)?);
        }
    }
    Ok(ExperimentReport {
        pipeline: pipeline.describe(),
        seed,
        k,
        test_fraction,
        n_rows: ds.n_rows(),
        n_features: plan.n_features(),
        cells,
    })
}

/// Header of the per-fold section of a report CSV.
pub const CSV_HEADER: &str = "model,sampler,fold,f1,precision,recall";
/// Marker line opening the summary block.
pub const CSV_SUMMARY_MARKER: &str = "# summary";
/// Header of the summary block.
pub const CSV_SUMMARY_HEADER: &str =
    "model,sampler,cv_mean_f1,test_f1,test_precision,test_recall,train_f1";

/// One CSV line per fold of a cell, newline-terminated.
pub fn csv_fold_rows(cell: &CellReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for (f, m) in cell.fold_metrics.iter().enumerate() {
        writeln!(out, "{},{},{},{},{},{}", cell.model, cell.sampler, f, m.f1, m.precision, m.recall)
            .expect("write to string");
    }
    out
}

/// One summary CSV line for a cell, newline-terminated.
pub fn csv_summary_row(cell: &CellReport) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        cell.model,
        cell.sampler,
        cell.cv_mean_f1,
        cell.test.f1,
        cell.test.precision,
        cell.test.recall,
        cell.train_eval.map_or(String::new(), |m| m.f1.to_string()),
    )
}

/// Render the report as CSV: one row per (cell, fold), then a summary block.
pub fn report_to_csv(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for cell in &report.cells {
        out.push_str(&csv_fold_rows(cell));
    }
    out.push_str(CSV_SUMMARY_MARKER);
    out.push('\n');
    out.push_str(CSV_SUMMARY_HEADER);
    out.push('\n');
    for cell in &report.cells {
        out.push_str(&csv_summary_row(cell));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelKind;
    use crate::samplers::{SamplerConfig, SamplerKind};
    use approx::assert_relative_eq;

    #[test]
    fn confusion_examples() {
        let t = LabelVector::new(vec![1, 1, 0, 0]).unwrap();
        let p = LabelVector::new(vec![1, 0, 1, 0]).unwrap();
        let cm = confusion(&t, &p).unwrap();
        assert_eq!((cm.true_pos, cm.false_neg, cm.false_pos, cm.true_neg), (1, 1, 1, 1));

        let perfect = confusion(&t, &t).unwrap();
        assert_eq!((perfect.false_pos, perfect.false_neg), (0, 0));

        let all_one = LabelVector::new(vec![1, 1, 1]).unwrap();
        let all_zero = LabelVector::new(vec![0, 0, 0]).unwrap();
        let cm = confusion(&all_one, &all_zero).unwrap();
        assert_eq!((cm.true_pos, cm.false_neg), (0, 3));

        let short = LabelVector::new(vec![1]).unwrap();
        assert!(confusion(&t, &short).is_err());
    }

    #[test]
    fn metrics_examples() {
        let m = metrics(&ConfusionMatrix { true_pos: 1, false_pos: 1, false_neg: 1, true_neg: 0 });
        assert_relative_eq!(m.f1, 0.5, epsilon = 1e-12);

        let m = metrics(&ConfusionMatrix { true_pos: 3, false_pos: 1, false_neg: 2, true_neg: 4 });
        assert_relative_eq!(m.precision, 0.75, epsilon = 1e-12);
        assert_relative_eq!(m.recall, 0.6, epsilon = 1e-12);
        assert_relative_eq!(m.f1, 2.0 * 0.45 / 1.35, epsilon = 1e-12);

        let m = metrics(&ConfusionMatrix { true_pos: 0, false_pos: 0, false_neg: 5, true_neg: 5 });
        assert_eq!(m.f1, 0.0);
    }

    #[test]
    fn f1_matches_harmonic_mean_identity() {
        let cm = ConfusionMatrix { true_pos: 7, false_pos: 3, false_neg: 2, true_neg: 11 };
        let m = metrics(&cm);
        let harmonic = 2.0 / (1.0 / m.precision + 1.0 / m.recall);
        assert_relative_eq!(m.f1, harmonic, epsilon = 1e-12);
    }

    fn labels(pos: usize, neg: usize) -> LabelVector {
        let mut v = vec![1u8; pos];
        v.extend(std::iter::repeat_n(0u8, neg));
        LabelVector::new(v).unwrap()
    }

    #[test]
    fn stratified_split_proportions() {
        let y = labels(230, 770);
        let (train, test) = stratified_split(&y, 0.2, 7).unwrap();
        let test_pos = test.iter().filter(|&&i| i < 230).count();
        assert_eq!(test_pos, 46);
        assert_eq!(test.len() - test_pos, 154);
        assert_eq!(train.len() + test.len(), 1000);
    }

    #[test]
    fn stratified_split_two_rows_half() {
        let y = labels(1, 1);
        let (train, test) = stratified_split(&y, 0.5, 3).unwrap();
        assert_eq!(train.len(), 1);
        assert_eq!(test.len(), 1);
    }

    #[test]
    fn stratified_split_is_seed_deterministic() {
        let y = labels(40, 160);
        assert_eq!(stratified_split(&y, 0.25, 11).unwrap(), stratified_split(&y, 0.25, 11).unwrap());
        assert_ne!(stratified_split(&y, 0.25, 11).unwrap(), stratified_split(&y, 0.25, 12).unwrap());
    }

    #[test]
    fn stratified_split_rejects_unsplittable_class() {
        // 2 positives in 100 rows at 1%: one test row total, so the positive
        // class (which could reach both sides) would get zero test rows
        let y = labels(2, 98);
        assert!(stratified_split(&y, 0.01, 0).is_err());
        // a single-member class is exempt: it must land somewhere
        let y = labels(1, 9);
        assert!(stratified_split(&y, 0.2, 0).is_ok());
    }

    #[test]
    fn kfold_examples() {
        let y = labels(23, 77);
        let plan = stratified_kfold(&y, 10, 5).unwrap();
        for f in 0..10 {
            let (_, val) = plan.split(f);
            let pos = val.iter().filter(|&&i| i < 23).count();
            assert!(pos == 2 || pos == 3, "fold {f} has {pos} positives");
        }
        // disjoint cover
        let mut seen = vec![false; 100];
        for f in 0..10 {
            let (_, val) = plan.split(f);
            for i in val {
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn kfold_rejects_k_beyond_minority() {
        let y = labels(3, 97);
        assert!(stratified_kfold(&y, 4, 0).is_err());
        assert!(stratified_kfold(&y, 3, 0).is_ok());
    }

    fn toy_dataset(n_pos: usize, n_neg: usize, seed: u64) -> Dataset {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for _ in 0..n_pos {
            rows.push(vec![rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0)]);
            y.push(1u8);
        }
        for _ in 0..n_neg {
            rows.push(vec![rng.random_range(-2.0..0.5), rng.random_range(-1.0..1.0)]);
            y.push(0u8);
        }
        let x = Matrix::from_rows(&rows).unwrap();
        Dataset::from_matrix(&x, Some(LabelVector::new(y).unwrap()), None).unwrap()
    }

    #[test]
    fn cross_validate_none_sampler_equals_plain_cv() {
        let ds = toy_dataset(20, 40, 3);
        let plan = stratified_kfold(ds.labels().unwrap(), 4, 9).unwrap();
        let pipeline = PipelineSpec::default();
        let model = ModelSpec::of_kind(ModelKind::GaussianNb, 0);
        let none = SamplerConfig::of_kind(SamplerKind::None, 0);
        let cv = cross_validate(&model, &none, &pipeline, &ds, &plan, 42).unwrap();

        // manual loop without any resampling must agree exactly
        let pipelines = fit_fold_pipelines(&pipeline, &ds, &plan).unwrap();
        for f in 0..plan.k {
            let (train_rows, val_rows) = plan.split(f);
            let (x_tr, y_tr) = pipelines[f].transform(&ds, &train_rows).unwrap();
            let spec = ModelSpec {
                seed: mix(mix(42, f as u64), SALT_MODEL),
                ..model.clone()
            };
            let fitted = models::fit(&spec, &x_tr, &y_tr.unwrap()).unwrap();
            let (x_va, y_va) = pipelines[f].transform(&ds, &val_rows).unwrap();
            let pred = fitted.predict(&x_va).unwrap();
            let m = metrics(&confusion(&y_va.unwrap(), &pred).unwrap());
            assert_eq!(m, cv.per_fold[f]);
        }
    }

    #[test]
    fn cross_validate_leaves_dataset_untouched_and_is_deterministic() {
        let ds = toy_dataset(15, 45, 4);
        let before = ds.clone();
        let plan = stratified_kfold(ds.labels().unwrap(), 3, 1).unwrap();
        let pipeline = PipelineSpec::default();
        let model = ModelSpec::of_kind(ModelKind::Logistic, 0);
        let sampler = SamplerConfig::of_kind(SamplerKind::Smote, 0);
        let a = cross_validate(&model, &sampler, &pipeline, &ds, &plan, 7).unwrap();
        let b = cross_validate(&model, &sampler, &pipeline, &ds, &plan, 7).unwrap();
        assert_eq!(ds, before);
        assert_eq!(a, b);
        assert!((a.mean_f1 - b.mean_f1).abs() < 1e-15);
    }

    #[test]
    fn grid_search_single_point_and_tie_rule() {
        let ds = toy_dataset(12, 24, 8);
        let plan = stratified_kfold(ds.labels().unwrap(), 3, 2).unwrap();
        let pipeline = PipelineSpec::default();
        let none = SamplerConfig::of_kind(SamplerKind::None, 0);

        let single = vec![ModelSpec::of_kind(ModelKind::GaussianNb, 0)];
        let res = grid_search(&single, &none, &pipeline, &ds, &plan, 5).unwrap();
        assert_eq!(res.best_index, 0);

        // identical grid points tie; the earlier one must win
        let pair = vec![
            ModelSpec::of_kind(ModelKind::GaussianNb, 0),
            ModelSpec::of_kind(ModelKind::GaussianNb, 0),
        ];
        let res = grid_search(&pair, &none, &pipeline, &ds, &plan, 5).unwrap();
        assert_eq!(res.best_index, 0);
        assert_relative_eq!(res.best_mean_f1, res.table.iter().cloned().fold(f64::MIN, f64::max));
    }

    #[test]
    fn single_cell_experiment_matches_cross_validate() {
        let ds = toy_dataset(20, 60, 5);
        let pipeline = PipelineSpec::default();
        let model = ModelSpec::of_kind(ModelKind::GaussianNb, 0);
        let sampler = SamplerConfig::of_kind(SamplerKind::RandomUnder, 0);
        let report = run_experiment(
            &[model.clone()],
            &[sampler.clone()],
            &pipeline,
            &ds,
            3,
            0.25,
            77,
            false,
        )
        .unwrap();
        assert_eq!(report.cells.len(), 1);

        let plan = ExperimentPlan::prepare(&pipeline, &ds, 3, 0.25, 77).unwrap();
        let cell = plan.run_cell(&model, &sampler, false).unwrap();
        assert_eq!(report.cells[0], cell);
        // mean recomputable from the fold list
        let mean_f1 = cell.fold_metrics.iter().map(|m| m.f1).sum::<f64>() / 3.0;
        assert_relative_eq!(cell.cv_mean_f1, mean_f1, epsilon = 1e-15);
    }

    #[test]
    fn report_csv_is_deterministic() {
        let ds = toy_dataset(18, 42, 6);
        let pipeline = PipelineSpec::default();
        let models_list = vec![ModelSpec::of_kind(ModelKind::DecisionTree, 0)];
        let samplers_list =
            vec![SamplerConfig::of_kind(SamplerKind::None, 0), SamplerConfig::of_kind(SamplerKind::RandomOver, 0)];
        let r1 =
            run_experiment(&models_list, &samplers_list, &pipeline, &ds, 3, 0.2, 13, true).unwrap();
        let r2 =
            run_experiment(&models_list, &samplers_list, &pipeline, &ds, 3, 0.2, 13, true).unwrap();
        assert_eq!(report_to_csv(&r1), report_to_csv(&r2));
        assert!(report_to_csv(&r1).contains("# summary"));
    }
}
