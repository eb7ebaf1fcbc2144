//! Kernel learners: ridge regression and a hard-margin SVM.

mod krr;
mod metrics;
mod svm;

pub use krr::{krr_fit, krr_predict, log_lambda_grid, select_lambda, LambdaTable, RegressionModel};
pub use metrics::{hinge_loss, mse};
pub use svm::{svm_decision, svm_fit, svm_fit_with_options, SvmModel, SvmOptions};
