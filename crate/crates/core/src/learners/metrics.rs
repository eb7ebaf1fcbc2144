/// Mean squared error.
pub fn mse(pred: &[f64], truth: &[f64]) -> f64 {
    assert_eq!(pred.len(), truth.len(), "mse needs equal-length vectors");
    assert!(!pred.is_empty(), "mse of empty vectors");
    pred.iter()
        .zip(truth)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / pred.len() as f64
}

/// Hinge loss `(1/N) sum_i max(1 - y_i f_i, 0)` of decision values against
/// `+-1` labels.
pub fn hinge_loss(decisions: &[f64], labels: &[f64]) -> f64 {
    assert_eq!(
        decisions.len(),
        labels.len(),
        "hinge loss needs equal-length vectors"
    );
    assert!(!decisions.is_empty(), "hinge loss of empty vectors");
    decisions
        .iter()
        .zip(labels)
        .map(|(f, y)| (1.0 - y * f).max(0.0))
        .sum::<f64>()
        / decisions.len() as f64
}
