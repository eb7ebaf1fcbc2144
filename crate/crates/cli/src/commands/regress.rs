use std::fmt::Write as _;

use serde_json::json;

use qkml::datasets::{eval_grid_1d, regression_1d, RegressionTask};
use qkml::learners::{krr_predict, log_lambda_grid, mse, select_lambda};
use qkml::spinsim::{DataPoint, EncodingParams, SpinSystem};

use super::{build_gram, csv_row, gram_warning, kernel_rows, tau_column, to_phase, write_file};
use crate::config::{EvalMode, ExperimentConfig};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let task: RegressionTask = cfg.task.parse()?;
    let system = SpinSystem::draw(cfg.spins, cfg.seed)?;
    let train = regression_1d(task, cfg.count, (cfg.range_min, cfg.range_max), cfg.seed)?;

    // Evaluation inputs in sampled units, sorted for readable output.
    let mut eval_inputs: Vec<f64> = eval_grid_1d(cfg.eval_count, (cfg.range_min, cfg.range_max))
        .iter()
        .map(|p| p.coords()[0])
        .collect();
    if cfg.eval_mode == EvalMode::Union {
        eval_inputs.extend(train.points.iter().map(|p| p.coords()[0]));
        eval_inputs.sort_by(f64::total_cmp);
    }
    let eval_targets: Vec<f64> = eval_inputs.iter().map(|&x| task.target(x)).collect();

    let train_phases: Vec<DataPoint> = train
        .points
        .iter()
        .map(|p| p.map(|x| to_phase(cfg.units, x)))
        .collect();
    let eval_phases: Vec<DataPoint> = eval_inputs
        .iter()
        .map(|&x| DataPoint::scalar(to_phase(cfg.units, x)))
        .collect();
    let grid = log_lambda_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_count);

    let mut pred_columns: Vec<Vec<f64>> = Vec::with_capacity(cfg.taus.len());
    let mut results = Vec::with_capacity(cfg.taus.len());
    for &tau in &cfg.taus {
        let params = EncodingParams::with_dt(tau, cfg.dt, 1)?;
        let g = build_gram(cfg, &system, &params, &train_phases)?;
        let rows = kernel_rows(cfg, &system, &params, &train_phases, &eval_phases)?;
        let (model, table) = select_lambda(&g, &train.targets, &rows, &eval_targets, &grid)?;

        let preds: Vec<f64> = rows
            .iter()
            .map(|row| krr_predict(&model, row))
            .collect::<qkml::Result<_>>()?;
        let train_preds: Vec<f64> = (0..g.size())
            .map(|i| krr_predict(&model, &g.row(i)))
            .collect::<qkml::Result<_>>()?;
        let train_mse = mse(&train_preds, &train.targets);

        let table_json: Vec<_> = table
            .entries
            .iter()
            .map(|(lambda, maybe)| json!({ "lambda": lambda, "mse": maybe }))
            .collect();
        results.push(json!({
            "tau": tau,
            "best_lambda": table.best_lambda,
            "eval_mse": table.best_mse,
            "train_mse": train_mse,
            "lambda_table": table_json,
            "gram_warning": gram_warning(&g),
        }));
        pred_columns.push(preds);
    }

    let mut out = cfg.header_block();
    let labels: Vec<String> = cfg.taus.iter().map(|&t| tau_column("y_pred", t)).collect();
    writeln!(out, "x,y_true,{}", labels.join(",")).unwrap();
    for (i, (&x, &y)) in eval_inputs.iter().zip(&eval_targets).enumerate() {
        let mut row = vec![x, y];
        row.extend(pred_columns.iter().map(|c| c[i]));
        writeln!(out, "{}", csv_row(&row)).unwrap();
    }
    write_file(&cfg.out, &out)?;

    let report = json!({
        "config": cfg.as_json(),
        "results": results,
    });
    write_file(
        &cfg.report_path(),
        &format!("{:#}\n", report),
    )
}
