//! Bagged random forest over the CART trees.
//!
//! Tree `i` draws everything from `mix(seed, i)`: first the bootstrap sample
//! (n index draws, when enabled), then the per-node feature shuffles. Trees
//! may be built in parallel; the per-tree seeding keeps the result identical
//! regardless of scheduling. Prediction is majority vote, ties to class 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{class_counts, LabelVector, Matrix};
use crate::error::{Error, Result};
use crate::seeding::{mix, rng_from_seed};

use super::tree::{fit_tree_on, TreeModel};
use super::ForestParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
}

pub fn fit_forest(
    x: &Matrix,
    y: &LabelVector,
    params: &ForestParams,
    seed: u64,
) -> Result<ForestModel> {
    if x.n_rows() == 0 {
        return Err(Error::Degenerate("cannot fit on an empty set".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.n_rows(), got: y.len() });
    }
    params.validate()?;
    let (pos, neg) = class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }

    let n = x.n_rows();
    let trees: Vec<TreeModel> = (0..params.n_estimators)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(mix(seed, i as u64));
            let rows: Vec<usize> = if params.bootstrap {
                use rand::Rng;
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            fit_tree_on(x, y, &rows, &params.tree, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(ForestModel { trees })
}

impl ForestModel {
    pub fn n_features(&self) -> usize {
        self.trees.first().map_or(0, |t| t.n_features)
    }

    /// Fraction of trees voting for class 1.
    pub fn proba(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict_row(row) == 1).count();
        votes as f64 / self.trees.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{MaxFeatures, TreeParams};
    use crate::seeding::{mix, rng_from_seed};

    fn toy() -> (Matrix, LabelVector) {
        let x = Matrix::from_rows(&[
            vec![0.0, 1.0],
            vec![0.2, 0.8],
            vec![0.1, 0.9],
            vec![1.0, 0.1],
            vec![0.9, 0.0],
            vec![0.8, 0.2],
        ])
        .unwrap();
        (x, LabelVector::new(vec![0, 0, 0, 1, 1, 1]).unwrap())
    }

    #[test]
    fn single_unbagged_full_feature_forest_equals_one_tree() {
        let (x, y) = toy();
        let params = ForestParams {
            tree: TreeParams {
                min_samples_split: 2,
                min_samples_leaf: 1,
                max_features: MaxFeatures::All,
            },
            n_estimators: 1,
            bootstrap: false,
        };
        let forest = fit_forest(&x, &y, &params, 42).unwrap();
        let mut rng = rng_from_seed(mix(42, 0));
        let tree = crate::models::tree::fit_tree(&x, &y, &params.tree, &mut rng).unwrap();
        for i in 0..x.n_rows() {
            assert_eq!(
                u8::from(forest.proba(x.row(i)) > 0.5),
                tree.predict_row(x.row(i))
            );
        }
    }

    #[test]
    fn majority_vote_over_three_trees() {
        // hand-build stumps voting (1, 1, 0) for x >= 0 rows
        use crate::models::tree::{TreeModel, TreeNode};
        let vote1 = TreeModel {
            nodes: vec![TreeNode::Leaf { count_neg: 0, count_pos: 5 }],
            n_features: 1,
        };
        let vote0 = TreeModel {
            nodes: vec![TreeNode::Leaf { count_neg: 5, count_pos: 0 }],
            n_features: 1,
        };
        let forest = ForestModel { trees: vec![vote1.clone(), vote1, vote0] };
        assert_eq!(forest.proba(&[0.0]), 2.0 / 3.0);
        assert!(forest.proba(&[0.0]) > 0.5);
    }

    #[test]
    fn same_seed_same_forest() {
        let (x, y) = toy();
        let params = ForestParams {
            tree: TreeParams {
                min_samples_split: 2,
                min_samples_leaf: 1,
                max_features: MaxFeatures::Sqrt,
            },
            n_estimators: 7,
            bootstrap: true,
        };
        let a = fit_forest(&x, &y, &params, 9).unwrap();
        let b = fit_forest(&x, &y, &params, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prediction_invariant_under_tree_order() {
        let (x, y) = toy();
        let params = ForestParams {
            tree: TreeParams {
                min_samples_split: 2,
                min_samples_leaf: 1,
                max_features: MaxFeatures::Sqrt,
            },
            n_estimators: 5,
            bootstrap: true,
        };
        let forest = fit_forest(&x, &y, &params, 3).unwrap();
        let mut reversed = forest.clone();
        reversed.trees.reverse();
        for i in 0..x.n_rows() {
            assert_eq!(forest.proba(x.row(i)), reversed.proba(x.row(i)));
        }
    }
}
