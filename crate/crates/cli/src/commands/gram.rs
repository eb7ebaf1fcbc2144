use qkml::datasets::LabeledSet;
use qkml::spinsim::{DataPoint, EncodingParams, SpinSystem};

use super::{build_gram, to_phase, write_file};
use crate::config::{ExperimentConfig, Units};
use crate::CliError;

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let data_path = cfg.data.as_ref().expect("validated");
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", data_path.display())))?;
    let set = LabeledSet::from_csv_str(&text)?;
    if set.is_empty() {
        return Err(CliError::config("dataset is empty"));
    }
    let dim = set.dim();
    if cfg.units == Units::Degrees && dim != 1 {
        return Err(CliError::config(
            "degrees apply only to 1D regression inputs",
        ));
    }
    let points: Vec<DataPoint> = set
        .points
        .iter()
        .map(|p| p.map(|x| to_phase(cfg.units, x)))
        .collect();

    let system = SpinSystem::draw(cfg.spins, cfg.seed)?;
    let params = EncodingParams::with_dt(cfg.taus[0], cfg.dt, dim)?;
    let g = build_gram(cfg, &system, &params, &points)?;

    // Config context on top of the matrix's own self-describing header;
    // skip keys the matrix header already carries.
    let extras: Vec<(String, String)> = cfg
        .header_pairs()
        .into_iter()
        .filter(|(k, _)| !matches!(k.as_str(), "tau" | "seed" | "kernel"))
        .collect();
    let mut buf = Vec::new();
    g.write_csv_with_extras(&mut buf, &extras)?;
    write_file(
        &cfg.out,
        &String::from_utf8(buf).expect("CSV output is ASCII"),
    )?;

    if let Some(report) = &cfg.report {
        write_file(report, &format!("{}\n", g.to_json_string()?))?;
    }
    Ok(())
}
