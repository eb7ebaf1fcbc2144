use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use qkml::qkernel::Profile1d;
use qkml::spinsim::{EncodingParams, SpinSystem};

use super::{csv_row, tau_column, write_file};
use crate::config::ExperimentConfig;
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let system = SpinSystem::draw(cfg.spins, cfg.seed)?;
    let deltas: Vec<f64> = (0..cfg.profile_points)
        .map(|i| -FRAC_PI_2 + std::f64::consts::PI * i as f64 / (cfg.profile_points - 1) as f64)
        .collect();

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(cfg.taus.len());
    for &tau in &cfg.taus {
        let params = EncodingParams::with_dt(tau, cfg.dt, 1)?;
        let profile = Profile1d::build(&system, &params)?;
        columns.push(deltas.iter().map(|&d| profile.eval(d)).collect());
    }

    let mut out = cfg.header_block();
    let labels: Vec<String> = cfg.taus.iter().map(|&t| tau_column("k", t)).collect();
    writeln!(out, "delta,{}", labels.join(",")).unwrap();
    for (i, &delta) in deltas.iter().enumerate() {
        let mut row = vec![delta];
        row.extend(columns.iter().map(|c| c[i]));
        writeln!(out, "{}", csv_row(&row)).unwrap();
    }
    write_file(&cfg.out, &out)
}
