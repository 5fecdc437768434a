//! Imbalanced binary classification toolkit: data-level resampling
//! (random over/under-sampling, SMOTE, Borderline-SMOTE, ADASYN, Tomek
//! links, ENN, and their combinations), a tabular preprocessing pipeline,
//! from-scratch classifiers, and a cross-validated benchmark runner that
//! compares samplers against models on positive-class F1.

pub mod commands;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod models;
pub mod neighbors;
pub mod preprocess;
pub mod samplers;
pub mod seeding;
pub mod stats;

pub use error::{Error, Result};
