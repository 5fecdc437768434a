//! From-scratch classifiers behind one fit/predict interface: logistic
//! regression, Gaussian naive Bayes, a CART decision tree, and a bagged
//! random forest.
//!
//! One decision rule everywhere: predicted label is 1 iff the model's
//! positive-class probability exceeds 0.5, so every tie breaks toward
//! class 0.

pub mod forest;
pub mod gaussian_nb;
pub mod logistic;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::data::{LabelVector, Matrix};
use crate::error::{Error, Result};

pub use forest::ForestModel;
pub use gaussian_nb::GaussianNbModel;
pub use logistic::LogisticModel;
pub use tree::TreeModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Logistic,
    GaussianNb,
    DecisionTree,
    RandomForest,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Logistic => "logistic",
            ModelKind::GaussianNb => "gaussian_nb",
            ModelKind::DecisionTree => "decision_tree",
            ModelKind::RandomForest => "random_forest",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "logistic" => ModelKind::Logistic,
            "gaussian_nb" => ModelKind::GaussianNb,
            "decision_tree" => ModelKind::DecisionTree,
            "random_forest" => ModelKind::RandomForest,
            other => return Err(Error::Config(format!("unknown model kind {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams { c: 1.0, tol: 1e-4, max_iter: 1000 }
    }
}

impl LogisticParams {
    /// The tuned configuration used in the benchmark comparison.
    pub fn tuned() -> Self {
        LogisticParams { c: 100.0, tol: 1e-3, max_iter: 2000 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) {
            return Err(Error::InvalidArgument("C must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    All,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
    pub max_features: MaxFeatures,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { min_samples_split: 2, min_samples_leaf: 1, max_features: MaxFeatures::All }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_leaf < 1 {
            return Err(Error::InvalidArgument("min_samples_leaf must be >= 1".into()));
        }
        if self.min_samples_split < 2 {
            return Err(Error::InvalidArgument("min_samples_split must be >= 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub tree: TreeParams,
    pub n_estimators: usize,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            tree: TreeParams {
                min_samples_split: 2,
                min_samples_leaf: 1,
                max_features: MaxFeatures::Sqrt,
            },
            n_estimators: 100,
            bootstrap: true,
        }
    }
}

impl ForestParams {
    /// The tuned configuration used in the benchmark comparison.
    pub fn tuned() -> Self {
        ForestParams {
            tree: TreeParams {
                min_samples_split: 4,
                min_samples_leaf: 2,
                max_features: MaxFeatures::Sqrt,
            },
            n_estimators: 300,
            bootstrap: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_estimators < 1 {
            return Err(Error::InvalidArgument("n_estimators must be >= 1".into()));
        }
        self.tree.validate()
    }
}

/// Which model to fit and with which hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub logistic: LogisticParams,
    pub tree: TreeParams,
    pub forest: ForestParams,
    pub seed: u64,
}

impl ModelSpec {
    pub fn of_kind(kind: ModelKind, seed: u64) -> Self {
        ModelSpec {
            kind,
            logistic: LogisticParams::default(),
            tree: TreeParams::default(),
            forest: ForestParams::default(),
            seed,
        }
    }

    /// The tuned model pair used in the benchmark comparison.
    pub fn tuned(kind: ModelKind, seed: u64) -> Self {
        ModelSpec {
            kind,
            logistic: LogisticParams::tuned(),
            tree: TreeParams::default(),
            forest: ForestParams::tuned(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.logistic.validate()?;
        self.tree.validate()?;
        self.forest.validate()
    }

    pub fn name(&self) -> &'static str {
        self.kind.as_str()
    }
}

/// A trained classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum FittedModel {
    Logistic(LogisticModel),
    GaussianNb(GaussianNbModel),
    DecisionTree(TreeModel),
    RandomForest(ForestModel),
}

/// Fit the configured model. Randomized models derive their streams from
/// `spec.seed`; the same spec and data always give the same model.
pub fn fit(spec: &ModelSpec, x: &Matrix, y: &LabelVector) -> Result<FittedModel> {
    spec.validate()?;
    Ok(match spec.kind {
        ModelKind::Logistic => FittedModel::Logistic(logistic::fit_logistic(x, y, &spec.logistic)?),
        ModelKind::GaussianNb => FittedModel::GaussianNb(gaussian_nb::fit_gaussian_nb(x, y)?),
        ModelKind::DecisionTree => {
            let mut rng = crate::seeding::rng_from_seed(crate::seeding::mix(spec.seed, 0));
            FittedModel::DecisionTree(tree::fit_tree(x, y, &spec.tree, &mut rng)?)
        }
        ModelKind::RandomForest => {
            FittedModel::RandomForest(forest::fit_forest(x, y, &spec.forest, spec.seed)?)
        }
    })
}

impl FittedModel {
    pub fn n_features(&self) -> usize {
        match self {
            FittedModel::Logistic(m) => m.n_features(),
            FittedModel::GaussianNb(m) => m.n_features(),
            FittedModel::DecisionTree(m) => m.n_features,
            FittedModel::RandomForest(m) => m.n_features(),
        }
    }

    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.n_cols() != self.n_features() {
            return Err(Error::DimensionMismatch { expected: self.n_features(), got: x.n_cols() });
        }
        if x.has_missing() {
            return Err(Error::MissingValue("prediction requires complete rows".into()));
        }
        Ok(())
    }

    /// Positive-class probability per row: the sigmoid score for logistic,
    /// the posterior for naive Bayes, the leaf fraction for a tree, the vote
    /// fraction for a forest.
    pub fn predict_proba(&self, x: &Matrix) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let prob = |row: &[f64]| -> f64 {
            match self {
                FittedModel::Logistic(m) => m.proba(row),
                FittedModel::GaussianNb(m) => m.proba(row),
                FittedModel::DecisionTree(m) => m.proba(row),
                FittedModel::RandomForest(m) => m.proba(row),
            }
        };
        Ok((0..x.n_rows()).map(|i| prob(x.row(i))).collect())
    }

    /// Labels via probability > 0.5 (ties to class 0).
    pub fn predict(&self, x: &Matrix) -> Result<LabelVector> {
        let probs = self.predict_proba(x)?;
        LabelVector::new(probs.iter().map(|&p| u8::from(p > 0.5)).collect())
    }
}
