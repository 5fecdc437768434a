//! CART decision tree with Gini impurity.
//!
//! Thresholds sit at midpoints between consecutive distinct sorted values;
//! `x <= threshold` goes left. A node splits whenever it is impure, holds at
//! least `min_samples_split` rows, and some candidate feature admits a split
//! with both children at least `min_samples_leaf` rows. Zero-gain splits are
//! allowed (the best split by weighted child impurity is taken even when it
//! equals the parent impurity), which is what lets XOR-like data be separated
//! in two levels. Leaves predict the majority class, ties to class 0.
//!
//! Nodes are built depth-first, left child before right, and per-node feature
//! subsampling draws from the passed RNG in that order, so a given seed
//! always reproduces the same tree.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{LabelVector, Matrix};
use crate::error::{Error, Result};

use super::{MaxFeatures, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        count_neg: usize,
        count_pos: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<TreeNode>,
    pub n_features: usize,
}

fn gini(pos: usize, neg: usize) -> f64 {
    let n = (pos + neg) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = pos as f64 / n;
    let q = neg as f64 / n;
    1.0 - p * p - q * q
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    weighted_impurity: f64,
    left_rows: Vec<usize>,
    right_rows: Vec<usize>,
}

/// Scan one feature for the best valid boundary; `None` when the feature is
/// constant on these rows or no boundary respects the leaf minimum.
fn scan_feature(
    x: &Matrix,
    y: &LabelVector,
    rows: &[usize],
    feature: usize,
    min_samples_leaf: usize,
) -> Option<(f64, f64)> {
    let mut pairs: Vec<(f64, u8)> = rows.iter().map(|&i| (x.get(i, feature), y.get(i))).collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len();
    if pairs[0].0 == pairs[n - 1].0 {
        return None;
    }

    let total_pos = pairs.iter().filter(|p| p.1 == 1).count();
    let mut best: Option<(f64, f64)> = None;
    let mut left_pos = 0usize;
    for i in 0..n - 1 {
        if pairs[i].1 == 1 {
            left_pos += 1;
        }
        if pairs[i].0 == pairs[i + 1].0 {
            continue;
        }
        let left_n = i + 1;
        let right_n = n - left_n;
        if left_n < min_samples_leaf || right_n < min_samples_leaf {
            continue;
        }
        let right_pos = total_pos - left_pos;
        let weighted = (left_n as f64 * gini(left_pos, left_n - left_pos)
            + right_n as f64 * gini(right_pos, right_n - right_pos))
            / n as f64;
        let mut threshold = (pairs[i].0 + pairs[i + 1].0) / 2.0;
        if threshold == pairs[i + 1].0 {
            // midpoint rounded up to the right value; fall back so the
            // boundary keeps the counted membership
            threshold = pairs[i].0;
        }
        if best.is_none_or(|(_, bw)| weighted < bw) {
            best = Some((threshold, weighted));
        }
    }
    best
}

fn best_split(
    x: &Matrix,
    y: &LabelVector,
    rows: &[usize],
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Option<BestSplit> {
    let d = x.n_cols();
    let candidate_order: Vec<usize> = match params.max_features {
        MaxFeatures::All => (0..d).collect(),
        MaxFeatures::Sqrt => {
            let mut order: Vec<usize> = (0..d).collect();
            order.shuffle(rng);
            order
        }
    };
    let budget = match params.max_features {
        MaxFeatures::All => d,
        MaxFeatures::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
    };

    let mut best: Option<(usize, f64, f64)> = None;
    let mut usable = 0usize;
    for &feature in &candidate_order {
        if usable >= budget {
            break;
        }
        if let Some((threshold, weighted)) =
            scan_feature(x, y, rows, feature, params.min_samples_leaf)
        {
            usable += 1;
            if best.is_none_or(|(_, _, bw)| weighted < bw) {
                best = Some((feature, threshold, weighted));
            }
        }
    }

    let (feature, threshold, weighted_impurity) = best?;
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
        rows.iter().partition(|&&i| x.get(i, feature) <= threshold);
    Some(BestSplit { feature, threshold, weighted_impurity, left_rows, right_rows })
}

/// Fit a tree on a subset of rows (duplicates allowed, as in bootstrap
/// samples).
pub fn fit_tree_on(
    x: &Matrix,
    y: &LabelVector,
    rows: &[usize],
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Result<TreeModel> {
    if rows.is_empty() {
        return Err(Error::Degenerate("cannot fit a tree on an empty set".into()));
    }
    if x.has_missing() {
        return Err(Error::MissingValue("decision tree requires complete rows".into()));
    }
    params.validate()?;

    let mut nodes: Vec<TreeNode> = vec![TreeNode::Leaf { count_neg: 0, count_pos: 0 }];
    // LIFO with right pushed first so the left child is processed first.
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, rows.to_vec())];
    while let Some((slot, node_rows)) = stack.pop() {
        let count_pos = node_rows.iter().filter(|&&i| y.get(i) == 1).count();
        let count_neg = node_rows.len() - count_pos;

        let splittable = count_pos != 0
            && count_neg != 0
            && node_rows.len() >= params.min_samples_split
            && node_rows.len() >= 2 * params.min_samples_leaf;
        let split = if splittable {
            best_split(x, y, &node_rows, params, rng)
        } else {
            None
        };

        match split {
            None => nodes[slot] = TreeNode::Leaf { count_neg, count_pos },
            Some(s) => {
                let _ = s.weighted_impurity;
                let left = nodes.len();
                nodes.push(TreeNode::Leaf { count_neg: 0, count_pos: 0 });
                let right = nodes.len();
                nodes.push(TreeNode::Leaf { count_neg: 0, count_pos: 0 });
                nodes[slot] =
                    TreeNode::Split { feature: s.feature, threshold: s.threshold, left, right };
                stack.push((right, s.right_rows));
                stack.push((left, s.left_rows));
            }
        }
    }

    Ok(TreeModel { nodes, n_features: x.n_cols() })
}

pub fn fit_tree(
    x: &Matrix,
    y: &LabelVector,
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
) -> Result<TreeModel> {
    let rows: Vec<usize> = (0..x.n_rows()).collect();
    fit_tree_on(x, y, &rows, params, rng)
}

impl TreeModel {
    fn leaf_for(&self, row: &[f64]) -> (usize, usize) {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf { count_neg, count_pos } => return (*count_neg, *count_pos),
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Fraction of positive training rows in the reached leaf.
    pub fn proba(&self, row: &[f64]) -> f64 {
        let (neg, pos) = self.leaf_for(row);
        pos as f64 / (pos + neg) as f64
    }

    /// Majority label of the reached leaf, ties to class 0.
    pub fn predict_row(&self, row: &[f64]) -> u8 {
        let (neg, pos) = self.leaf_for(row);
        u8::from(pos > neg)
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], at: usize) -> usize {
            match &nodes[at] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    /// Smallest training-row count among leaves.
    pub fn min_leaf_size(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Leaf { count_neg, count_pos } => Some(count_neg + count_pos),
                TreeNode::Split { .. } => None,
            })
            .min()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;

    fn params_all() -> TreeParams {
        TreeParams { min_samples_split: 2, min_samples_leaf: 1, max_features: MaxFeatures::All }
    }

    #[test]
    fn pure_input_is_a_single_leaf() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let y = LabelVector::new(vec![1, 1, 1]).unwrap();
        let model = fit_tree(&x, &y, &params_all(), &mut rng_from_seed(0)).unwrap();
        assert_eq!(model.nodes.len(), 1);
        assert_eq!(model.predict_row(&[5.0]), 1);
    }

    #[test]
    fn xor_is_separated_at_depth_two() {
        let x = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let y = LabelVector::new(vec![0, 0, 1, 1]).unwrap();
        let model = fit_tree(&x, &y, &params_all(), &mut rng_from_seed(0)).unwrap();
        assert_eq!(model.depth(), 2);
        for i in 0..4 {
            assert_eq!(model.predict_row(x.row(i)), y.get(i), "row {i}");
        }
    }

    #[test]
    fn leaves_respect_min_samples_leaf() {
        use rand::Rng;
        let mut rng = rng_from_seed(23);
        let rows: Vec<Vec<f64>> = (0..80)
            .map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
            .collect();
        let labels: Vec<u8> = (0..80).map(|_| u8::from(rng.random::<bool>())).collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let y = LabelVector::new(labels).unwrap();
        let params = TreeParams {
            min_samples_split: 4,
            min_samples_leaf: 3,
            max_features: MaxFeatures::All,
        };
        let model = fit_tree(&x, &y, &params, &mut rng_from_seed(1)).unwrap();
        assert!(model.min_leaf_size() >= 3);
    }

    #[test]
    fn pure_leaf_training_rows_predict_their_label() {
        let x = Matrix::from_rows(&[vec![0.0], vec![0.1], vec![5.0], vec![5.1]]).unwrap();
        let y = LabelVector::new(vec![0, 0, 1, 1]).unwrap();
        let model = fit_tree(&x, &y, &params_all(), &mut rng_from_seed(2)).unwrap();
        for i in 0..4 {
            assert_eq!(model.predict_row(x.row(i)), y.get(i));
        }
    }

    #[test]
    fn empty_input_errors() {
        let x = Matrix::from_rows(&[vec![0.0]]).unwrap();
        let y = LabelVector::new(vec![1]).unwrap();
        assert!(fit_tree_on(&x, &y, &[], &params_all(), &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn leaf_tie_predicts_class_zero() {
        let x = Matrix::from_rows(&[vec![0.0], vec![0.0]]).unwrap();
        let y = LabelVector::new(vec![0, 1]).unwrap();
        // constant feature: no split possible, leaf is a 1-1 tie
        let model = fit_tree(&x, &y, &params_all(), &mut rng_from_seed(0)).unwrap();
        assert_eq!(model.predict_row(&[0.0]), 0);
        assert_eq!(model.proba(&[0.0]), 0.5);
    }
}
