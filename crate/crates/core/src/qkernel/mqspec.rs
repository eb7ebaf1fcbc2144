use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::profile::Profile1d;
use crate::spinsim::{EncodingParams, SpinSystem};

/// Default number of profile samples for the spectrum; enough for every
/// supported spin count.
pub const DEFAULT_MQ_SAMPLES: usize = 256;

/// Coherence-order intensities: the Fourier coefficients of the 1D kernel
/// profile at integer frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MqSpectrum {
    /// Orders `-n ..= n`.
    pub orders: Vec<i64>,
    /// Intensity per order, same indexing as `orders`.
    pub intensities: Vec<f64>,
    /// Largest imaginary residue dropped when taking real parts; should be
    /// at rounding level for a genuine kernel profile.
    pub max_imag_residue: f64,
}

impl MqSpectrum {
    pub fn intensity(&self, order: i64) -> Option<f64> {
        self.orders
            .iter()
            .position(|&m| m == order)
            .map(|i| self.intensities[i])
    }

    pub fn total(&self) -> f64 {
        self.intensities.iter().sum()
    }
}

/// Discrete Fourier transform of a kernel profile sampled uniformly over one
/// full period `[0, 2pi)`.
///
/// `samples` holds `(delta, k(delta))` pairs; the grid must start at 0, be
/// uniform with spacing `2pi/S`, and have at least `2 max_order + 1` points
/// so no order aliases.
pub fn mq_spectrum(samples: &[(f64, f64)], max_order: usize) -> Result<MqSpectrum> {
    let s = samples.len();
    if s < 2 * max_order + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples for orders up to {max_order}, got {s}",
            2 * max_order + 1
        )));
    }
    let step = TAU / s as f64;
    for (idx, &(delta, _)) in samples.iter().enumerate() {
        let expected = idx as f64 * step;
        if (delta - expected).abs() > 1e-9 {
            return Err(Error::NonUniformGrid(format!(
                "sample {idx} at {delta}, expected {expected}"
            )));
        }
    }

    let mut orders = Vec::with_capacity(2 * max_order + 1);
    let mut intensities = Vec::with_capacity(2 * max_order + 1);
    let mut max_imag: f64 = 0.0;
    for m in -(max_order as i64)..=(max_order as i64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (idx, &(_, k)) in samples.iter().enumerate() {
            let (sin, cos) = (m as f64 * idx as f64 * step).sin_cos();
            re += k * cos;
            im += k * sin;
        }
        orders.push(m);
        intensities.push(re / s as f64);
        max_imag = max_imag.max((im / s as f64).abs());
    }
    Ok(MqSpectrum {
        orders,
        intensities,
        max_imag_residue: max_imag,
    })
}

/// Build the spectrum of a system directly: sample the 1D profile on a
/// uniform `[0, 2pi)` grid and transform it. Orders run to the spin count.
pub fn mq_spectrum_of_system(
    system: &SpinSystem,
    params: &EncodingParams,
    samples: usize,
) -> Result<MqSpectrum> {
    let profile = Profile1d::build(system, params)?;
    let step = TAU / samples as f64;
    let grid: Vec<(f64, f64)> = (0..samples)
        .map(|i| {
            let d = i as f64 * step;
            (d, profile.eval(d))
        })
        .collect();
    mq_spectrum(&grid, system.n())
}
