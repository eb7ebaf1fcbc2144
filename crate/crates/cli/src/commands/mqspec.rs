use std::fmt::Write as _;

use qkml::qkernel::mq_spectrum_of_system;
use qkml::spinsim::{EncodingParams, SpinSystem};

use super::{tau_column, write_file};
use crate::config::ExperimentConfig;
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let system = SpinSystem::draw(cfg.spins, cfg.seed)?;
    let mut spectra = Vec::with_capacity(cfg.taus.len());
    for &tau in &cfg.taus {
        let params = EncodingParams::with_dt(tau, cfg.dt, 1)?;
        spectra.push(mq_spectrum_of_system(&system, &params, cfg.mq_samples)?);
    }

    let mut out = cfg.header_block();
    let labels: Vec<String> = cfg.taus.iter().map(|&t| tau_column("i", t)).collect();
    writeln!(out, "order,{}", labels.join(",")).unwrap();
    let orders = spectra[0].orders.clone();
    for (row_idx, m) in orders.iter().enumerate() {
        let intensities: Vec<String> = spectra
            .iter()
            .map(|s| qkml::fmt::g17(s.intensities[row_idx]))
            .collect();
        writeln!(out, "{m},{}", intensities.join(",")).unwrap();
    }
    write_file(&cfg.out, &out)
}
