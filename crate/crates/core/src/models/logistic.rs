//! L2-regularized logistic regression fitted by deterministic full-batch
//! gradient descent with Armijo backtracking line search.
//!
//! The objective is mean log-loss plus `||w||^2 / (2 C n)` with the intercept
//! unpenalized, so `C` carries the usual inverse-regularization meaning.

use serde::{Deserialize, Serialize};

use crate::data::{LabelVector, Matrix};
use crate::error::{Error, Result};

use super::LogisticParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
    pub n_iter: usize,
    /// Objective value after every accepted step (index 0 = initial point).
    pub objective_trace: Vec<f64>,
}

impl LogisticModel {
    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + self.intercept
    }

    pub fn proba(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision(row))
    }
}

#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(1 + exp(-m)) without overflow.
#[inline]
fn softplus_neg(m: f64) -> f64 {
    if m > 0.0 {
        (-m).exp().ln_1p()
    } else {
        -m + m.exp().ln_1p()
    }
}

/// Mean log-loss + L2 term, and its gradient in (weights, intercept).
pub fn objective_and_gradient(
    x: &Matrix,
    y: &LabelVector,
    c: f64,
    weights: &[f64],
    intercept: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.n_rows();
    let d = x.n_cols();
    let inv_n = 1.0 / n as f64;

    let mut loss = 0.0;
    let mut grad_w = vec![0.0; d];
    let mut grad_b = 0.0;
    for i in 0..n {
        let row = x.row(i);
        let z = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + intercept;
        let yi = f64::from(y.get(i));
        let margin = if y.get(i) == 1 { z } else { -z };
        loss += softplus_neg(margin);
        let err = sigmoid(z) - yi;
        for (g, v) in grad_w.iter_mut().zip(row) {
            *g += err * v;
        }
        grad_b += err;
    }
    loss *= inv_n;
    grad_b *= inv_n;
    let reg_scale = 1.0 / (c * n as f64);
    let mut reg = 0.0;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g * inv_n + w * reg_scale;
        reg += w * w;
    }
    loss += 0.5 * reg * reg_scale;
    (loss, grad_w, grad_b)
}

fn grad_inf_norm(grad_w: &[f64], grad_b: f64) -> f64 {
    grad_w
        .iter()
        .map(|g| g.abs())
        .fold(grad_b.abs(), f64::max)
}

pub fn fit_logistic(x: &Matrix, y: &LabelVector, params: &LogisticParams) -> Result<LogisticModel> {
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.n_rows(), got: y.len() });
    }
    if x.n_rows() == 0 {
        return Err(Error::Degenerate("cannot fit on an empty set".into()));
    }
    if x.has_missing() {
        return Err(Error::MissingValue("logistic regression requires complete rows".into()));
    }
    let (pos, neg) = crate::data::class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }
    params.validate()?;

    let d = x.n_cols();
    let mut weights = vec![0.0; d];
    let mut intercept = 0.0;
    let (mut obj, mut grad_w, mut grad_b) =
        objective_and_gradient(x, y, params.c, &weights, intercept);
    let mut trace = vec![obj];
    let mut step = 1.0f64;
    let mut converged = false;
    let mut n_iter = 0;

    for iter in 0..params.max_iter {
        n_iter = iter + 1;
        let gnorm = grad_inf_norm(&grad_w, grad_b);
        if gnorm < params.tol {
            converged = true;
            n_iter = iter;
            break;
        }
        let g2: f64 = grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b;

        // Armijo backtracking from twice the previously accepted step.
        let mut t = (step * 2.0).min(1e12);
        let mut accepted = false;
        while t > 1e-20 {
            let cand_w: Vec<f64> =
                weights.iter().zip(&grad_w).map(|(w, g)| w - t * g).collect();
            let cand_b = intercept - t * grad_b;
            let (cand_obj, cand_gw, cand_gb) =
                objective_and_gradient(x, y, params.c, &cand_w, cand_b);
            if cand_obj <= obj - 1e-4 * t * g2 {
                weights = cand_w;
                intercept = cand_b;
                obj = cand_obj;
                grad_w = cand_gw;
                grad_b = cand_gb;
                step = t;
                trace.push(obj);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no descent step representable; gradient is numerically flat
            break;
        }
    }

    Ok(LogisticModel { weights, intercept, converged, n_iter, objective_trace: trace })
}
