//! Run configuration: a TOML file whose key names mirror the benchmark
//! program's parameters (`balancer_sel`, `dim_reducer_sel`,
//! `outliers_removal_sel`, `contamination`), plus explicit overrides for
//! pipeline, sampler, and model settings.
//!
//! Selector mappings:
//!
//! * `balancer_sel`: 0 none, 1 smote, 2 smote_tomek, 3 smote_enn, 4 adasyn,
//!   5 borderline_smote, 6 random_over, 7 random_under.
//! * `dim_reducer_sel`: 0 none, 1 k-best chi-square, 4 family-wise-error
//!   chi-square. Values 2, 3 (RFECV) and 5 (PCA) are rejected as
//!   unsupported.
//! * `outliers_removal_sel`: 0 none, 1 IQR capping with `whisker`.
//!   `contamination` is accepted for compatibility and ignored with a
//!   warning (isolation-forest removal is not part of this toolkit).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ForestParams, LogisticParams, ModelKind, ModelSpec, TreeParams};
use crate::preprocess::{PipelineSpec, SelectorSpec};
use crate::samplers::{SamplerConfig, SamplerKind, TomekMode};

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_seed() -> u64 {
    42
}
fn default_kfold() -> usize {
    10
}
fn default_test_fraction() -> f64 {
    0.2
}
fn default_k_neighbors() -> usize {
    5
}
fn default_enn_k() -> usize {
    3
}
fn default_beta() -> f64 {
    1.0
}
fn default_tomek_mode() -> String {
    "undersample_majority".into()
}
fn default_k_best() -> usize {
    50
}
fn default_alpha() -> f64 {
    0.05
}
fn default_whisker() -> f64 {
    1.5
}
fn default_schema() -> String {
    "rain".into()
}
fn default_models() -> Vec<String> {
    vec!["random_forest".into(), "logistic".into()]
}
fn default_balancers() -> Vec<u32> {
    (0..=7).collect()
}

/// Optional structural overrides of the schema's default pipeline.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineOverrides {
    pub drop: Option<Vec<String>>,
    pub extract_month: Option<bool>,
    pub one_hot: Option<Vec<String>>,
    pub impute_mean: Option<bool>,
    pub scale_minmax: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Raw CSV for `prepare` and `benchmark`.
    pub dataset: Option<PathBuf>,
    /// "rain" (the 24-column Rain-in-Australia layout) or "numeric".
    #[serde(default = "default_schema")]
    pub schema: String,
    /// Target column name for the "numeric" schema.
    pub target: Option<String>,
    /// Processed dataset file consumed by `resample` and `train`.
    pub input: Option<PathBuf>,
    /// Model file consumed by `evaluate`.
    pub model_file: Option<PathBuf>,
    /// Dataset file scored by `evaluate`.
    pub test_input: Option<PathBuf>,

    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Worker-thread cap; 0 means one worker per core.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default = "default_kfold")]
    pub kfold: usize,
    #[serde(default = "default_test_fraction")]
    pub test_fraction: f64,
    #[serde(default)]
    pub paper_compat_full_fit: bool,
    /// Additionally score the trained model on its own training portion.
    #[serde(default)]
    pub eval_on_train: bool,

    /// Numeric sampler selector (see module docs); `sampler_kind` wins when
    /// both are present.
    #[serde(default)]
    pub balancer_sel: u32,
    pub sampler_kind: Option<String>,
    #[serde(default = "default_k_neighbors")]
    pub k_neighbors: usize,
    #[serde(default = "default_k_neighbors")]
    pub m_neighbors: usize,
    #[serde(default = "default_enn_k")]
    pub enn_k: usize,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_tomek_mode")]
    pub tomek_mode: String,

    #[serde(default)]
    pub dim_reducer_sel: u32,
    #[serde(default = "default_k_best")]
    pub k_best: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    #[serde(default)]
    pub outliers_removal_sel: u32,
    #[serde(default = "default_whisker")]
    pub whisker: f64,
    /// Accepted for compatibility; ignored with a warning.
    pub contamination: Option<f64>,

    /// Model list for `benchmark`.
    #[serde(default = "default_models")]
    pub models: Vec<String>,
    /// Sampler list for `benchmark`, in `balancer_sel` numbering.
    #[serde(default = "default_balancers")]
    pub balancers: Vec<u32>,
    /// Single model for `train`; defaults to the first of `models`.
    pub model: Option<String>,

    #[serde(default = "LogisticParams::tuned")]
    pub logistic: LogisticParams,
    #[serde(default)]
    pub tree: TreeParams,
    #[serde(default = "ForestParams::tuned")]
    pub forest: ForestParams,

    #[serde(default)]
    pub pipeline: PipelineOverrides,
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config must deserialize")
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{e}")))
    }

    /// Non-fatal configuration notes to surface on stderr.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.contamination.is_some() {
            out.push(
                "contamination is ignored: isolation-forest outlier removal is not supported; \
                 use outliers_removal_sel = 1 for IQR capping"
                    .into(),
            );
        }
        out
    }

    pub fn sampler_kind_from_sel(sel: u32) -> Result<SamplerKind> {
        Ok(match sel {
            0 => SamplerKind::None,
            1 => SamplerKind::Smote,
            2 => SamplerKind::SmoteTomek,
            3 => SamplerKind::SmoteEnn,
            4 => SamplerKind::Adasyn,
            5 => SamplerKind::BorderlineSmote,
            6 => SamplerKind::RandomOver,
            7 => SamplerKind::RandomUnder,
            other => {
                return Err(Error::Config(format!(
                    "balancer_sel {other} is out of range (0..=7)"
                )))
            }
        })
    }

    fn tomek_mode(&self) -> Result<TomekMode> {
        Ok(match self.tomek_mode.as_str() {
            "undersample_majority" => TomekMode::UndersampleMajority,
            "clean_both" => TomekMode::CleanBoth,
            other => return Err(Error::Config(format!("unknown tomek_mode {other:?}"))),
        })
    }

    fn sampler_of_kind(&self, kind: SamplerKind) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            kind,
            k_neighbors: self.k_neighbors,
            m_neighbors: self.m_neighbors,
            enn_k: self.enn_k,
            beta: self.beta,
            tomek_mode: self.tomek_mode()?,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The single sampler used by `resample`.
    pub fn sampler_config(&self) -> Result<SamplerConfig> {
        let kind = match &self.sampler_kind {
            Some(name) => SamplerKind::parse(name)?,
            None => Self::sampler_kind_from_sel(self.balancer_sel)?,
        };
        self.sampler_of_kind(kind)
    }

    /// The sampler list used by `benchmark`.
    pub fn sampler_list(&self) -> Result<Vec<SamplerConfig>> {
        self.balancers
            .iter()
            .map(|&sel| self.sampler_of_kind(Self::sampler_kind_from_sel(sel)?))
            .collect()
    }

    pub fn model_spec(&self, name: &str) -> Result<ModelSpec> {
        let kind = ModelKind::parse(name)?;
        let spec = ModelSpec {
            kind,
            logistic: self.logistic.clone(),
            tree: self.tree.clone(),
            forest: self.forest.clone(),
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The model list used by `benchmark`.
    pub fn model_list(&self) -> Result<Vec<ModelSpec>> {
        if self.models.is_empty() {
            return Err(Error::Config("models list must not be empty".into()));
        }
        self.models.iter().map(|m| self.model_spec(m)).collect()
    }

    /// The single model used by `train`.
    pub fn single_model(&self) -> Result<ModelSpec> {
        match (&self.model, self.models.first()) {
            (Some(name), _) => self.model_spec(name),
            (None, Some(name)) => self.model_spec(name),
            (None, None) => Err(Error::Config("no model configured".into())),
        }
    }

    pub fn selector_spec(&self) -> Result<SelectorSpec> {
        Ok(match self.dim_reducer_sel {
            0 => SelectorSpec::None,
            1 => SelectorSpec::KBest { k: self.k_best },
            4 => SelectorSpec::Fwe { alpha: self.alpha },
            2 | 3 => {
                return Err(Error::Config(
                    "dim_reducer_sel 2/3 (RFECV) is not supported".into(),
                ))
            }
            5 => return Err(Error::Config("dim_reducer_sel 5 (PCA) is not supported".into())),
            other => {
                return Err(Error::Config(format!(
                    "dim_reducer_sel {other} is out of range"
                )))
            }
        })
    }

    pub fn pipeline_spec(&self) -> Result<PipelineSpec> {
        let mut spec = match self.schema.as_str() {
            "rain" => PipelineSpec::rain_default(),
            "numeric" => PipelineSpec::default(),
            other => return Err(Error::Config(format!("unknown schema {other:?}"))),
        };
        if let Some(drop) = &self.pipeline.drop {
            spec.drop_list = drop.clone();
        }
        if let Some(m) = self.pipeline.extract_month {
            spec.extract_month = m;
        }
        if let Some(oh) = &self.pipeline.one_hot {
            spec.onehot_columns = oh.clone();
        }
        if let Some(i) = self.pipeline.impute_mean {
            spec.impute_mean = i;
        }
        if let Some(s) = self.pipeline.scale_minmax {
            spec.scale_minmax = s;
        }
        spec.selector = self.selector_spec()?;
        spec.cap_outliers = match self.outliers_removal_sel {
            0 => None,
            1 => Some(self.whisker),
            other => {
                return Err(Error::Config(format!(
                    "outliers_removal_sel {other} is out of range (0 or 1)"
                )))
            }
        };
        spec.paper_compat_full_fit = self.paper_compat_full_fit;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_has_sane_defaults() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.kfold, 10);
        assert_eq!(cfg.balancer_sel, 0);
        assert_eq!(cfg.sampler_config().unwrap().kind, SamplerKind::None);
        assert_eq!(cfg.balancers, (0..=7).collect::<Vec<_>>());
        let pipe = cfg.pipeline_spec().unwrap();
        assert_eq!(pipe.drop_list.len(), 5);
        assert!(pipe.extract_month);
    }

    #[test]
    fn balancer_sel_mapping_matches_numbering() {
        let expect = [
            SamplerKind::None,
            SamplerKind::Smote,
            SamplerKind::SmoteTomek,
            SamplerKind::SmoteEnn,
            SamplerKind::Adasyn,
            SamplerKind::BorderlineSmote,
            SamplerKind::RandomOver,
            SamplerKind::RandomUnder,
        ];
        for (sel, kind) in expect.iter().enumerate() {
            assert_eq!(RunConfig::sampler_kind_from_sel(sel as u32).unwrap(), *kind);
        }
        assert!(RunConfig::sampler_kind_from_sel(8).is_err());
    }

    #[test]
    fn unsupported_reducers_are_rejected() {
        let mut cfg = RunConfig::default();
        for sel in [2u32, 3, 5] {
            cfg.dim_reducer_sel = sel;
            assert!(cfg.selector_spec().is_err(), "sel {sel}");
        }
        cfg.dim_reducer_sel = 4;
        assert_eq!(cfg.selector_spec().unwrap(), SelectorSpec::Fwe { alpha: 0.05 });
    }

    #[test]
    fn contamination_yields_warning_not_error() {
        let cfg: RunConfig = toml::from_str("contamination = 0.01").unwrap();
        assert_eq!(cfg.warnings().len(), 1);
        assert!(cfg.pipeline_spec().is_ok());
    }

    #[test]
    fn toml_round_trip_with_overrides() {
        let text = r#"
            dataset = "weather.csv"
            seed = 7
            balancer_sel = 5
            dim_reducer_sel = 1
            k_best = 30
            outliers_removal_sel = 1
            whisker = 3.0

            [pipeline]
            drop = ["RISK_MM"]

            [logistic]
            c = 10.0
            tol = 0.001
            max_iter = 50

            [forest]
            n_estimators = 10
            bootstrap = true

            [forest.tree]
            min_samples_split = 4
            min_samples_leaf = 2
            max_features = "sqrt"
        "#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.sampler_config().unwrap().kind, SamplerKind::BorderlineSmote);
        let pipe = cfg.pipeline_spec().unwrap();
        assert_eq!(pipe.drop_list, vec!["RISK_MM"]);
        assert_eq!(pipe.selector, SelectorSpec::KBest { k: 30 });
        assert_eq!(pipe.cap_outliers, Some(3.0));
        assert_eq!(cfg.model_spec("logistic").unwrap().logistic.c, 10.0);
        assert_eq!(cfg.model_spec("random_forest").unwrap().forest.n_estimators, 10);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("no_such_key = 1").is_err());
    }
}
