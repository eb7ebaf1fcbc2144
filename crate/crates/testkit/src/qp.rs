//! Exhaustive reference solver for the SVM dual on tiny instances.

use nalgebra::{DMatrix, DVector};

/// Dual objective `sum alpha - 1/2 sum alpha_i alpha_j y_i y_j K_ij`.
pub fn dual_objective(k: &DMatrix<f64>, y: &[f64], alpha: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[(i, j)];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Solve `max_alpha` of the dual subject to `0 <= alpha <= c`,
/// `sum alpha_i y_i = 0` by enumerating every assignment of points to
/// {lower bound, free, upper bound} and solving the stationarity system of
/// each pattern. Exponential in the point count; intended for `n <= 8`.
///
/// Returns `(alpha, objective)` of the best feasible pattern.
pub fn brute_force_svm(k: &DMatrix<f64>, y: &[f64], c: f64) -> (Vec<f64>, f64) {
    let n = y.len();
    assert!(n <= 8, "brute force enumerates 3^n patterns");
    let feas_tol = 1e-7;
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];

    let mut best: Option<(Vec<f64>, f64)> = None;
    // Pattern digits: 0 = alpha 0, 1 = free, 2 = alpha at cap.
    for pattern in 0..3usize.pow(n as u32) {
        let mut digits = Vec::with_capacity(n);
        let mut rem = pattern;
        for _ in 0..n {
            digits.push(rem % 3);
            rem /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| digits[i] == 1).collect();
        let capped: Vec<usize> = (0..n).filter(|&i| digits[i] == 2).collect();
        let f = free.len();

        // Stationarity for free i: sum_j Q_ij alpha_j + mu y_i = 1,
        // plus the equality constraint; unknowns are alpha_free and mu.
        let mut mat = DMatrix::zeros(f + 1, f + 1);
        let mut rhs = DVector::zeros(f + 1);
        for (row, &i) in free.iter().enumerate() {
            for (col, &j) in free.iter().enumerate() {
                mat[(row, col)] = q(i, j);
            }
            mat[(row, f)] = y[i];
            rhs[row] = 1.0 - capped.iter().map(|&j| q(i, j) * c).sum::<f64>();
        }
        for (col, &j) in free.iter().enumerate() {
            mat[(f, col)] = y[j];
        }
        rhs[f] = -capped.iter().map(|&j| y[j] * c).sum::<f64>();

        let sol = match mat.lu().solve(&rhs) {
            Some(s) => s,
            None => continue,
        };
        let mu = sol[f];
        let mut alpha = vec![0.0; n];
        for (col, &j) in free.iter().enumerate() {
            alpha[j] = sol[col];
        }
        for &j in &capped {
            alpha[j] = c;
        }

        // Feasibility of the free variables.
        if free.iter().any(|&j| alpha[j] < -feas_tol || alpha[j] > c + feas_tol) {
            continue;
        }
        // KKT signs for the bound variables.
        let margin = |i: usize| -> f64 {
            (0..n).map(|j| q(i, j) * alpha[j]).sum::<f64>() + mu * y[i]
        };
        let mut ok = true;
        for (i, digit) in digits.iter().enumerate() {
            match digit {
                0 if margin(i) < 1.0 - feas_tol => ok = false,
                2 if margin(i) > 1.0 + feas_tol => ok = false,
                _ => {}
            }
        }
        // Equality constraint survives the solve, but check against drift.
        let eq: f64 = (0..n).map(|i| y[i] * alpha[i]).sum();
        if eq.abs() > feas_tol * (1.0 + c) {
            ok = false;
        }
        if !ok {
            continue;
        }

        let obj = dual_objective(k, y, &alpha);
        if best.as_ref().is_none_or(|(_, b)| obj > *b) {
            best = Some((alpha, obj));
        }
    }
    best.expect("the QP always has a feasible point (alpha = 0)")
}
