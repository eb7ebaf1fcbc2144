use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spinsim::{encode, encode_adjoint, DataPoint, EncodingParams, SpinSystem, StateVector};

/// Default cap on the spin count for the trace kernel.
pub const DEFAULT_TRACE_CAP: usize = 12;

/// Pure-state kernel `|<0|U(xj)^dag U(xi)|0>|^2`, evaluated as the squared
/// inner product of the two encoded states.
pub fn kernel(
    system: &SpinSystem,
    params: &EncodingParams,
    xi: &DataPoint,
    xj: &DataPoint,
) -> Result<f64> {
    let psi_i = encode(system, xi, params)?;
    let psi_j = encode(system, xj, params)?;
    Ok(psi_j.inner(&psi_i).norm_sqr())
}

/// Same kernel through the uncompute route: encode `xi`, undo with `xj`,
/// read the probability left on `|0>`. Uses a single state buffer.
pub fn kernel_uncompute(
    system: &SpinSystem,
    params: &EncodingParams,
    xi: &DataPoint,
    xj: &DataPoint,
) -> Result<f64> {
    let mut state = encode(system, xi, params)?;
    encode_adjoint(system, xj, params, &mut state)?;
    Ok(state.amp(0).norm_sqr())
}

/// Ensemble trace kernel `Tr(A(xi) A(xj)) / Tr(I_z^2)` with
/// `A(x) = U(x) I_z U(x)^dag`, using the default spin-count cap.
pub fn trace_kernel(
    system: &SpinSystem,
    params: &EncodingParams,
    xi: &DataPoint,
    xj: &DataPoint,
) -> Result<f64> {
    trace_kernel_with_cap(system, params, xi, xj, DEFAULT_TRACE_CAP)
}

/// Trace kernel with an explicit cap.
///
/// Evaluated as `sum_z lambda_z <phi_z| I_z |phi_z> / sum_z lambda_z^2` with
/// `|phi_z> = U(xi)^dag U(xj) |z>` over all `2^n` basis states; the
/// normalization `Tr(I_z^2) = 2^n n / 4` makes the diagonal 1.
pub fn trace_kernel_with_cap(
    system: &SpinSystem,
    params: &EncodingParams,
    xi: &DataPoint,
    xj: &DataPoint,
    cap: usize,
) -> Result<f64> {
    let n = system.n();
    if n > cap {
        return Err(Error::TraceCapExceeded { n, cap });
    }
    let dim = 1usize << n;
    // Every basis state evolves independently; collect terms in index order
    // and sum serially so the result does not depend on thread scheduling.
    let terms = (0..dim)
        .into_par_iter()
        .map(|z| -> Result<f64> {
            let lambda = StateVector::iz_eigenvalue(n, z);
            if lambda == 0.0 {
                return Ok(0.0);
            }
            let mut phi = StateVector::basis(n, z)?;
            for &c in xj.coords() {
                crate::spinsim::evolve_segment(&mut phi, system, c, params)?;
            }
            encode_adjoint(system, xi, params, &mut phi)?;
            Ok(lambda * phi.iz_expectation())
        })
        .collect::<Result<Vec<f64>>>()?;
    let numerator: f64 = terms.iter().sum();
    let normalization = dim as f64 * n as f64 / 4.0;
    Ok(numerator / normalization)
}

/// Kernel vector against a fixed point: element `i` is
/// `kernel(points[i], x)`.
pub fn kernel_vector(
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
    x: &DataPoint,
) -> Result<Vec<f64>> {
    let cached = encode_points(system, params, points)?;
    cached.kernel_vector(x)
}

/// A set of points with their encoded states cached, so Gram matrices and
/// kernel vectors cost one evolution per new point instead of one per pair.
pub struct EncodedStates {
    system: SpinSystem,
    params: EncodingParams,
    points: Vec<DataPoint>,
    states: Vec<StateVector>,
}

/// Encode every point once (in parallel).
pub fn encode_points(
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
) -> Result<EncodedStates> {
    let states = points
        .par_iter()
        .map(|x| encode(system, x, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(EncodedStates {
        system: system.clone(),
        params: *params,
        points: points.to_vec(),
        states,
    })
}

impl EncodedStates {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn params(&self) -> &EncodingParams {
        &self.params
    }

    /// Kernel between two cached points.
    pub fn kernel_cached(&self, i: usize, j: usize) -> f64 {
        self.states[j].inner(&self.states[i]).norm_sqr()
    }

    /// Kernel vector of a new point against the cached set.
    pub fn kernel_vector(&self, x: &DataPoint) -> Result<Vec<f64>> {
        let psi = encode(&self.system, x, &self.params)?;
        Ok(self
            .states
            .iter()
            .map(|s| s.inner(&psi).norm_sqr())
            .collect())
    }

    /// Kernel vectors for many points, evolved in parallel.
    pub fn kernel_vectors(&self, xs: &[DataPoint]) -> Result<Vec<Vec<f64>>> {
        xs.par_iter().map(|x| self.kernel_vector(x)).collect()
    }
}
