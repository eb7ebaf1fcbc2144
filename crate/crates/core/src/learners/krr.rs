use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::GramMatrix;

/// Relative residual bound every accepted fit must satisfy.
const RESIDUAL_TOL: f64 = 1e-8;

/// Dual-coefficient ridge regression model: predictions are
/// `alpha . k(x)` with `(K + lambda I) alpha = y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    pub alphas: Vec<f64>,
    pub lambda: f64,
    /// Training targets, kept for residual checks and reports.
    pub targets: Vec<f64>,
}

/// Fit dual weights through a symmetric positive-definite factorization.
///
/// Fails with [`Error::SingularSystem`] (naming the smallest eigenvalue)
/// when `K + lambda I` is not positive definite or the residual exceeds
/// `1e-8 ||y||`.
pub fn krr_fit(gram: &GramMatrix, y: &[f64], lambda: f64) -> Result<RegressionModel> {
    if y.len() != gram.size() {
        return Err(Error::DimensionMismatch {
            expected: gram.size(),
            got: y.len(),
        });
    }
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "regularization strength must be >= 0, got {lambda}"
        )));
    }
    let nd = gram.size();
    let mut a = gram.entries().clone();
    for i in 0..nd {
        a[(i, i)] += lambda;
    }
    let rhs = DVector::from_column_slice(y);
    let singular = |a: DMatrix<f64>| -> Error {
        let min_eigenvalue = SymmetricEigen::new(a)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Error::SingularSystem { min_eigenvalue }
    };
    let alphas = match Cholesky::new(a.clone()) {
        Some(ch) => ch.solve(&rhs),
        None => return Err(singular(a)),
    };
    let residual = (&a * &alphas - &rhs).norm();
    if residual > RESIDUAL_TOL * rhs.norm() {
        return Err(singular(a));
    }
    Ok(RegressionModel {
        alphas: alphas.iter().copied().collect(),
        lambda,
        targets: y.to_vec(),
    })
}

/// Predict at a point given its kernel vector against the training set.
pub fn krr_predict(model: &RegressionModel, kvec: &[f64]) -> Result<f64> {
    if kvec.len() != model.alphas.len() {
        return Err(Error::DimensionMismatch {
            expected: model.alphas.len(),
            got: kvec.len(),
        });
    }
    Ok(model
        .alphas
        .iter()
        .zip(kvec)
        .map(|(a, k)| a * k)
        .sum())
}

/// Evaluation-error table produced by [`select_lambda`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaTable {
    /// `(lambda, mse)` per grid value; `None` when that fit was singular.
    pub entries: Vec<(f64, Option<f64>)>,
    pub best_lambda: f64,
    pub best_mse: f64,
}

/// Fit at every grid value, score each fit by mean squared error on the
/// evaluation set, and return the best model with the full table. Ties go to
/// the larger (smoother) regularization.
pub fn select_lambda(
    gram: &GramMatrix,
    y: &[f64],
    eval_rows: &[Vec<f64>],
    eval_targets: &[f64],
    grid: &[f64],
) -> Result<(RegressionModel, LambdaTable)> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument(
            "regularization grid must be nonempty".into(),
        ));
    }
    if eval_rows.len() != eval_targets.len() {
        return Err(Error::DimensionMismatch {
            expected: eval_rows.len(),
            got: eval_targets.len(),
        });
    }
    let mut entries = Vec::with_capacity(grid.len());
    let mut best: Option<(RegressionModel, f64)> = None;
    let mut last_err = None;
    for &lambda in grid {
        match krr_fit(gram, y, lambda) {
            Ok(model) => {
                let preds = eval_rows
                    .iter()
                    .map(|row| krr_predict(&model, row))
                    .collect::<Result<Vec<f64>>>()?;
                let mse = super::metrics::mse(&preds, eval_targets);
                entries.push((lambda, Some(mse)));
                // `<=` so equal scores prefer the larger lambda.
                if best.as_ref().is_none_or(|(_, b)| mse <= *b) {
                    best = Some((model, mse));
                }
            }
            Err(e @ Error::SingularSystem { .. }) => {
                entries.push((lambda, None));
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    match best {
        Some((model, best_mse)) => {
            let best_lambda = model.lambda;
            Ok((
                model,
                LambdaTable {
                    entries,
                    best_lambda,
                    best_mse,
                },
            ))
        }
        None => Err(last_err.expect("no fit succeeded, so at least one failed")),
    }
}

/// `count` logarithmically spaced values from `min` to `max` inclusive.
pub fn log_lambda_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && count >= 1);
    if count == 1 {
        return vec![max];
    }
    let (lmin, lmax) = (min.log10(), max.log10());
    (0..count)
        .map(|i| 10f64.powf(lmin + (lmax - lmin) * i as f64 / (count - 1) as f64))
        .collect()
}
