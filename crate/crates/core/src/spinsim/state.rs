use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spinsim::MAX_SPINS;

/// A normalized `2^n`-amplitude state vector.
///
/// Gates mutate the buffer in place; no operation retains a reference to it.
/// All gates are exactly unitary (not series approximations), so the norm is
/// preserved to rounding error over arbitrarily long gate streams.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The ground state of collective `I_z`: amplitude 1 on index 0.
    pub fn ground(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// The computational basis state with index `z`.
    pub fn basis(n: usize, z: usize) -> Result<Self> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::InvalidArgument(format!(
                "spin count must be in 1..={MAX_SPINS}, got {n}"
            )));
        }
        let dim = 1usize << n;
        if z >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {z} out of range for n = {n}"
            )));
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[z] = Complex64::ONE;
        Ok(Self { n, amps })
    }

    /// Build a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_SPINS || amps.len() != 1usize << n {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector of length {} does not match n = {n}",
                amps.len()
            )));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "amplitudes must be finite and not all zero".into(),
            ));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, z: usize) -> Complex64 {
        self.amps[z]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `I_z` eigenvalue of basis index `z`: `(n_up - n_down)/2`, where a
    /// zero bit counts as up.
    pub fn iz_eigenvalue(n: usize, z: usize) -> f64 {
        n as f64 / 2.0 - z.count_ones() as f64
    }

    /// Expectation value of collective `I_z`.
    pub fn iz_expectation(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(z, a)| Self::iz_eigenvalue(self.n, z) * a.norm_sqr())
            .sum()
    }

    /// Probability mass per excitation number (popcount of the basis index).
    ///
    /// Entry `j` is the total probability of basis states with `j` flipped
    /// spins, i.e. with `I_z` eigenvalue `n/2 - j`.
    pub fn popcount_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (z, a) in self.amps.iter().enumerate() {
            w[z.count_ones() as usize] += a.norm_sqr();
        }
        w
    }

    /// Collective z rotation `exp(-i angle I_z)`.
    ///
    /// Each basis amplitude picks up `exp(-i angle lambda_z)` with `lambda_z`
    /// the `I_z` eigenvalue of the index.
    pub fn apply_collective_z(&mut self, angle: f64) {
        if angle == 0.0 {
            return;
        }
        // One phase per popcount class.
        let phases: Vec<Complex64> = (0..=self.n)
            .map(|j| {
                let lambda = self.n as f64 / 2.0 - j as f64;
                let (s, c) = (-angle * lambda).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        for (z, a) in self.amps.iter_mut().enumerate() {
            *a *= phases[z.count_ones() as usize];
        }
    }

    /// Exact two-spin double-quantum gate `exp(-i theta (IyIy - IxIx))` on
    /// spins `mu`, `nu`.
    ///
    /// `IyIy - IxIx = -(|00><11| + |11><00|)/2`, so the gate mixes the
    /// aligned pair states as a rotation, `|00> -> cos(theta/2)|00> +
    /// i sin(theta/2)|11>` and symmetrically, and leaves `|01>`, `|10>`
    /// untouched.
    pub fn apply_dq_gate(&mut self, mu: usize, nu: usize, theta: f64) -> Result<()> {
        if mu == nu || mu >= self.n || nu >= self.n {
            return Err(Error::InvalidArgument(format!(
                "double-quantum gate needs two distinct spins < {}, got ({mu}, {nu})",
                self.n
            )));
        }
        if theta == 0.0 {
            return Ok(());
        }
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let is = Complex64::new(0.0, s);

        let (lo, hi) = if mu < nu { (mu, nu) } else { (nu, mu) };
        let lo_mask = (1usize << lo) - 1;
        let mid_mask = (1usize << (hi - 1)) - 1 - lo_mask;
        let bit_lo = 1usize << lo;
        let bit_hi = 1usize << hi;

        // Enumerate all indices with bits lo, hi clear and pair each with its
        // double-flip partner.
        for k in 0..(self.dim() >> 2) {
            let low = k & lo_mask;
            let mid = (k & mid_mask) << 1;
            let high = (k & !(lo_mask | mid_mask)) << 2;
            let z00 = high | mid | low;
            let z11 = z00 | bit_lo | bit_hi;
            let a00 = self.amps[z00];
            let a11 = self.amps[z11];
            self.amps[z00] = c * a00 + is * a11;
            self.amps[z11] = is * a00 + c * a11;
        }
        Ok(())
    }
}
