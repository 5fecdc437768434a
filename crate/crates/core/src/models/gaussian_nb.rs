//! Gaussian naive Bayes: per-class priors, feature means and variances,
//! prediction by maximum log-posterior with ties to class 0.

use serde::{Deserialize, Serialize};

use crate::data::{class_counts, LabelVector, Matrix};
use crate::error::{Error, Result};

const VAR_SMOOTHING: f64 = 1e-9;
/// Absolute variance floor; keeps log posteriors finite even when every
/// feature is constant (where the relative smoothing term is zero).
const VAR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbModel {
    /// log prior per class, indexed by label.
    pub log_prior: [f64; 2],
    /// Per-class, per-feature means.
    pub means: [Vec<f64>; 2],
    /// Per-class, per-feature variances, smoothed strictly above zero.
    pub vars: [Vec<f64>; 2],
}

pub fn fit_gaussian_nb(x: &Matrix, y: &LabelVector) -> Result<GaussianNbModel> {
    if x.n_rows() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.n_rows(), got: y.len() });
    }
    if x.has_missing() {
        return Err(Error::MissingValue("naive Bayes requires complete rows".into()));
    }
    let (pos, neg) = class_counts(y);
    if pos == 0 || neg == 0 {
        return Err(Error::Degenerate("both classes must be present".into()));
    }
    let n = x.n_rows();
    let d = x.n_cols();

    // smoothing scale: the largest per-feature variance over all rows
    let mut max_total_var = 0.0f64;
    for j in 0..d {
        let mean = (0..n).map(|i| x.get(i, j)).sum::<f64>() / n as f64;
        let var = (0..n).map(|i| (x.get(i, j) - mean).powi(2)).sum::<f64>() / n as f64;
        max_total_var = max_total_var.max(var);
    }
    let eps = VAR_SMOOTHING * max_total_var;

    let mut means = [vec![0.0; d], vec![0.0; d]];
    let mut vars = [vec![0.0; d], vec![0.0; d]];
    let counts = [neg as f64, pos as f64];
    for i in 0..n {
        let c = y.get(i) as usize;
        for j in 0..d {
            means[c][j] += x.get(i, j);
        }
    }
    for c in 0..2 {
        for j in 0..d {
            means[c][j] /= counts[c];
        }
    }
    for i in 0..n {
        let c = y.get(i) as usize;
        for j in 0..d {
            let delta = x.get(i, j) - means[c][j];
            vars[c][j] += delta * delta;
        }
    }
    for c in 0..2 {
        for j in 0..d {
            vars[c][j] = vars[c][j] / counts[c] + eps.max(VAR_FLOOR);
        }
    }

    Ok(GaussianNbModel {
        log_prior: [(neg as f64 / n as f64).ln(), (pos as f64 / n as f64).ln()],
        means,
        vars,
    })
}

impl GaussianNbModel {
    pub fn n_features(&self) -> usize {
        self.means[0].len()
    }

    /// Unnormalized log posterior of the given class.
    pub fn log_posterior(&self, class: usize, row: &[f64]) -> f64 {
        let mut lp = self.log_prior[class];
        for (j, &v) in row.iter().enumerate() {
            let var = self.vars[class][j];
            let delta = v - self.means[class][j];
            lp += -0.5 * (2.0 * std::f64::consts::PI * var).ln() - delta * delta / (2.0 * var);
        }
        lp
    }

    /// Posterior probability of class 1.
    pub fn proba(&self, row: &[f64]) -> f64 {
        let lp0 = self.log_posterior(0, row);
        let lp1 = self.log_posterior(1, row);
        super::logistic::sigmoid(lp1 - lp0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line(points: &[f64], labels: &[u8]) -> (Matrix, LabelVector) {
        let x = Matrix::from_rows(&points.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap();
        (x, LabelVector::new(labels.to_vec()).unwrap())
    }

    #[test]
    fn separated_gaussians_classify_cleanly() {
        let (x, y) = line(&[-10.2, -9.8, -10.0, 9.9, 10.1, 10.0], &[0, 0, 0, 1, 1, 1]);
        let model = fit_gaussian_nb(&x, &y).unwrap();
        assert!(model.proba(&[-9.5]) < 0.5);
        assert!(model.proba(&[9.5]) > 0.5);
    }

    #[test]
    fn equal_likelihood_decided_by_prior_with_tie_to_zero() {
        // symmetric classes around 0, equal priors: x = 0 is an exact tie
        let (x, y) = line(&[-2.0, -1.0, 1.0, 2.0], &[0, 0, 1, 1]);
        let model = fit_gaussian_nb(&x, &y).unwrap();
        assert_relative_eq!(model.proba(&[0.0]), 0.5, epsilon = 1e-12);
        // skewed priors: three negatives, one positive group with same spread
        let (x, y) = line(&[-2.0, -1.0, -1.5, 1.5], &[0, 0, 0, 1]);
        let model = fit_gaussian_nb(&x, &y).unwrap();
        assert!(model.log_prior[0] > model.log_prior[1]);
    }

    #[test]
    fn hand_computed_posterior_on_four_points() {
        // class 0: {0, 2} -> mean 1, var 1; class 1: {3, 5} -> mean 4, var 1
        let (x, y) = line(&[0.0, 2.0, 3.0, 5.0], &[0, 0, 1, 1]);
        let model = fit_gaussian_nb(&x, &y).unwrap();

        // smoothing: total feature variance = 3.25, eps = 3.25e-9
        let eps = 1e-9 * 3.25;
        let var = 1.0 + eps;
        let q = 2.0f64;
        let ln_norm = -0.5 * (2.0 * std::f64::consts::PI * var).ln();
        let lp0 = 0.5f64.ln() + ln_norm - (q - 1.0).powi(2) / (2.0 * var);
        let lp1 = 0.5f64.ln() + ln_norm - (q - 4.0).powi(2) / (2.0 * var);
        assert_relative_eq!(model.log_posterior(0, &[q]), lp0, max_relative = 1e-12);
        assert_relative_eq!(model.log_posterior(1, &[q]), lp1, max_relative = 1e-12);
        let expect = 1.0 / (1.0 + (lp0 - lp1).exp());
        assert_relative_eq!(model.proba(&[q]), expect, max_relative = 1e-12);
    }

    #[test]
    fn log_posteriors_stay_finite_on_constant_features() {
        let (x, y) = line(&[1.0, 1.0, 1.0, 1.0], &[0, 0, 1, 1]);
        let model = fit_gaussian_nb(&x, &y).unwrap();
        assert!(model.log_posterior(0, &[1.0]).is_finite());
        assert!(model.log_posterior(1, &[123.0]).is_finite());
    }
}
