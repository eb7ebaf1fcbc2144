use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinsim::{SpinSystem, StateVector};

/// Parameters of the data-encoding unitary: one segment of duration `tau`
/// per input coordinate, each Trotterized into `substeps` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodingParams {
    tau: f64,
    substeps: usize,
    feature_dim: usize,
}

impl EncodingParams {
    pub fn new(tau: f64, substeps: usize, feature_dim: usize) -> Result<Self> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "segment duration must be finite and >= 0, got {tau}"
            )));
        }
        if substeps == 0 {
            return Err(Error::InvalidArgument("substeps must be >= 1".into()));
        }
        if feature_dim == 0 {
            return Err(Error::InvalidArgument("feature_dim must be >= 1".into()));
        }
        Ok(Self {
            tau,
            substeps,
            feature_dim,
        })
    }

    /// Choose the substep count so that `tau / substeps` is as close as
    /// possible to the requested Trotter step `dt`.
    pub fn with_dt(tau: f64, dt: f64, feature_dim: usize) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "Trotter step must be finite and > 0, got {dt}"
            )));
        }
        let substeps = ((tau / dt).round() as usize).max(1);
        Self::new(tau, substeps, feature_dim)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    /// The realized Trotter step `tau / substeps`.
    pub fn dt(&self) -> f64 {
        self.tau / self.substeps as f64
    }
}

/// An input point: a vector of phase angles, one per encoding segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DataPoint {
    coords: Vec<f64>,
}

impl DataPoint {
    /// Panics on non-finite coordinates; file loaders validate before calling.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "data point coordinates must be finite"
        );
        Self { coords }
    }

    pub fn scalar(x: f64) -> Self {
        Self::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate-wise map, e.g. unit conversion.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.coords.iter().map(|&c| f(c)).collect())
    }
}

fn check_state(state: &StateVector, system: &SpinSystem) -> Result<()> {
    if state.n() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            got: state.n(),
        });
    }
    Ok(())
}

fn check_point(x: &DataPoint, params: &EncodingParams) -> Result<()> {
    if x.dim() != params.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: params.feature_dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

/// One encoding segment: `exp(-i H(x) tau)` with
/// `H(x) = exp(-i x I_z) [sum_{mu<nu} d_{mu,nu} (IyIy - IxIx)] exp(i x I_z)`,
/// approximated by the first-order Trotter product.
///
/// Gate stream, in application order: collective z by `-x`, then `substeps`
/// sweeps over pairs `mu < nu` in lexicographic order with angle
/// `tau d_{mu,nu} / substeps`, then collective z by `+x`. A zero `tau` is an
/// exact no-op.
pub fn evolve_segment(
    state: &mut StateVector,
    system: &SpinSystem,
    x: f64,
    params: &EncodingParams,
) -> Result<()> {
    check_state(state, system)?;
    if params.tau() == 0.0 {
        return Ok(());
    }
    let dt = params.dt();
    state.apply_collective_z(-x);
    for _ in 0..params.substeps() {
        for (mu, nu, d) in system.pairs() {
            if d != 0.0 {
                state.apply_dq_gate(mu, nu, dt * d)?;
            }
        }
    }
    state.apply_collective_z(x);
    Ok(())
}

/// Exact inverse of [`evolve_segment`]: the same stream reversed with every
/// gate daggered (pair sweeps run in reverse order with negated angles; the
/// two collective z factors trade places and so end up unchanged).
pub fn evolve_segment_adjoint(
    state: &mut StateVector,
    system: &SpinSystem,
    x: f64,
    params: &EncodingParams,
) -> Result<()> {
    check_state(state, system)?;
    if params.tau() == 0.0 {
        return Ok(());
    }
    let dt = params.dt();
    let pairs: Vec<_> = system.pairs().collect();
    state.apply_collective_z(-x);
    for _ in 0..params.substeps() {
        for &(mu, nu, d) in pairs.iter().rev() {
            if d != 0.0 {
                state.apply_dq_gate(mu, nu, -dt * d)?;
            }
        }
    }
    state.apply_collective_z(x);
    Ok(())
}

/// Encode a point: `U(x)|0> = exp(-i H(x_D) tau) ... exp(-i H(x_1) tau)|0>`,
/// the first coordinate's segment applied first.
pub fn encode(system: &SpinSystem, x: &DataPoint, params: &EncodingParams) -> Result<StateVector> {
    check_point(x, params)?;
    let mut state = StateVector::ground(system.n())?;
    for &c in x.coords() {
        evolve_segment(&mut state, system, c, params)?;
    }
    Ok(state)
}

/// Apply `U(x)^dagger` to an existing state: segments in reverse coordinate
/// order, each inverted. `encode` followed by `encode_adjoint` with the same
/// arguments restores the input to rounding error.
pub fn encode_adjoint(
    system: &SpinSystem,
    x: &DataPoint,
    params: &EncodingParams,
    state: &mut StateVector,
) -> Result<()> {
    check_point(x, params)?;
    for &c in x.coords().iter().rev() {
        evolve_segment_adjoint(state, system, c, params)?;
    }
    Ok(())
}
