//! Subcommand implementations.

pub mod classify;
pub mod gram;
pub mod mqspec;
pub mod profile;
pub mod regress;

use std::path::Path;

use qkml::fmt::g17;
use qkml::qkernel::{
    self, encode_points, trace_kernel_with_cap, GramMatrix, KernelKind,
};
use qkml::spinsim::{DataPoint, EncodingParams, SpinSystem};

use crate::config::{ExperimentConfig, Units};
use crate::CliError;

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Column label carrying the tau value, e.g. `k_tau0.06`.
pub fn tau_column(prefix: &str, tau: f64) -> String {
    format!("{prefix}_tau{tau}")
}

/// Convert sampled 1D inputs to encoding phases according to the unit flag.
pub fn to_phase(units: Units, x: f64) -> f64 {
    match units {
        Units::Degrees => x.to_radians(),
        Units::Radians => x,
    }
}

/// Gram matrix for the configured kernel.
pub fn build_gram(
    cfg: &ExperimentConfig,
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
) -> Result<GramMatrix, CliError> {
    let g = match cfg.kernel {
        KernelKind::Pure => {
            if cfg.fast_1d && params.feature_dim() == 1 {
                qkernel::gram_fast_1d(system, params, points)?
            } else {
                qkernel::gram(system, params, points)?
            }
        }
        KernelKind::Trace => qkernel::gram_trace(system, params, points, cfg.trace_cap)?,
    };
    Ok(g)
}

/// Kernel vectors of `xs` against the training points, one row per x.
pub fn kernel_rows(
    cfg: &ExperimentConfig,
    system: &SpinSystem,
    params: &EncodingParams,
    train: &[DataPoint],
    xs: &[DataPoint],
) -> Result<Vec<Vec<f64>>, CliError> {
    match cfg.kernel {
        KernelKind::Pure => {
            let cached = encode_points(system, params, train)?;
            Ok(cached.kernel_vectors(xs)?)
        }
        KernelKind::Trace => xs
            .iter()
            .map(|x| {
                train
                    .iter()
                    .map(|t| {
                        trace_kernel_with_cap(system, params, t, x, cfg.trace_cap)
                            .map_err(CliError::from)
                    })
                    .collect()
            })
            .collect(),
    }
}

/// A CSV data row of 17-significant-digit floats.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| g17(v)).collect::<Vec<_>>().join(",")
}

/// Warning string for a badly conditioned Gram matrix, if any.
pub fn gram_warning(g: &GramMatrix) -> Option<String> {
    let cond = g.condition_estimate();
    (!cond.is_finite() || cond > 1e12).then(|| {
        format!("kernel matrix close to singular (condition estimate {cond:.3e}); result may be unreliable")
    })
}
