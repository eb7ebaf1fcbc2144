use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::json;

use qkml::datasets::{make_circles, make_moons, scale_features};
use qkml::learners::{hinge_loss, svm_decision, svm_fit_with_options, SvmOptions};
use qkml::spinsim::{DataPoint, EncodingParams, SpinSystem};

use super::{build_gram, csv_row, kernel_rows, tau_column, write_file};
use crate::config::ExperimentConfig;
use crate::CliError;

/// Sibling path for the training-point decisions: `<stem>_train.csv`.
pub fn train_csv_path(out: &std::path::Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "classify".into());
    out.with_file_name(format!("{stem}_train.csv"))
}

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let system = SpinSystem::draw(cfg.spins, cfg.seed)?;
    let set = match cfg.task.as_str() {
        "circles" => make_circles(cfg.count, cfg.noise, cfg.factor, cfg.seed)?,
        "moons" => make_moons(cfg.count, cfg.noise, cfg.seed)?,
        other => return Err(CliError::config(format!("unknown classify task '{other}'"))),
    };
    let scaled = scale_features(&set, cfg.halfwidth);

    // Decision grid over the scaled domain, row-major in x2 then x1.
    let res = cfg.grid_res;
    let axis: Vec<f64> = (0..res)
        .map(|i| -cfg.halfwidth + 2.0 * cfg.halfwidth * i as f64 / (res - 1) as f64)
        .collect();
    let grid_points: Vec<DataPoint> = axis
        .iter()
        .flat_map(|&x2| axis.iter().map(move |&x1| DataPoint::new(vec![x1, x2])))
        .collect();

    let opts = SvmOptions {
        c_cap: cfg.c_cap,
        tol: cfg.svm_tol,
        ..SvmOptions::default()
    };

    let mut grid_columns: Vec<Vec<f64>> = Vec::with_capacity(cfg.taus.len());
    let mut train_columns: Vec<Vec<f64>> = Vec::with_capacity(cfg.taus.len());
    let mut results = Vec::with_capacity(cfg.taus.len());
    for &tau in &cfg.taus {
        let params = EncodingParams::with_dt(tau, cfg.dt, 2)?;
        let g = build_gram(cfg, &system, &params, &scaled.points)?;
        let model = svm_fit_with_options(&g, &scaled.targets, &opts)?;

        let train_decisions: Vec<f64> = (0..g.size())
            .map(|i| svm_decision(&model, &g.row(i)))
            .collect::<qkml::Result<_>>()?;
        let correct = train_decisions
            .iter()
            .zip(&scaled.targets)
            .filter(|(f, y)| f.signum() == **y)
            .count();
        let accuracy = correct as f64 / g.size() as f64;
        let loss = hinge_loss(&train_decisions, &scaled.targets);

        let rows = kernel_rows(cfg, &system, &params, &scaled.points, &grid_points)?;
        let grid_decisions: Vec<f64> = rows
            .iter()
            .map(|row| svm_decision(&model, row))
            .collect::<qkml::Result<_>>()?;

        results.push(json!({
            "tau": tau,
            "train_accuracy": accuracy,
            "hinge_loss": loss,
            "support_vector_count": model.support_indices.len(),
            "kkt_violation": model.max_violation,
            "iterations": model.iterations,
            "dual_objective": model.objective,
            "gram_warning": model.warning,
        }));
        grid_columns.push(grid_decisions);
        train_columns.push(train_decisions);
    }

    let labels: Vec<String> = cfg.taus.iter().map(|&t| tau_column("f", t)).collect();

    let mut out = cfg.header_block();
    writeln!(out, "x1,x2,{}", labels.join(",")).unwrap();
    for (i, p) in grid_points.iter().enumerate() {
        let mut row = vec![p.coords()[0], p.coords()[1]];
        row.extend(grid_columns.iter().map(|c| c[i]));
        writeln!(out, "{}", csv_row(&row)).unwrap();
    }
    write_file(&cfg.out, &out)?;

    let mut train_out = cfg.header_block();
    writeln!(train_out, "x1,x2,y,{}", labels.join(",")).unwrap();
    for (i, p) in scaled.points.iter().enumerate() {
        let mut row = vec![p.coords()[0], p.coords()[1], scaled.targets[i]];
        row.extend(train_columns.iter().map(|c| c[i]));
        writeln!(train_out, "{}", csv_row(&row)).unwrap();
    }
    write_file(&train_csv_path(&cfg.out), &train_out)?;

    let report = json!({
        "config": cfg.as_json(),
        "results": results,
    });
    write_file(&cfg.report_path(), &format!("{:#}\n", report))
}
