use crate::error::{Error, Result};
use crate::spinsim::{evolve_segment, EncodingParams, SpinSystem, StateVector};

/// The 1D kernel as a function of the input difference.
///
/// For a single-segment encoding the two collective z factors reduce the
/// kernel to `k(delta) = |<chi| exp(-i delta I_z) |chi>|^2` with
/// `chi = W|0>` the state after the bare double-quantum evolution. Grouping
/// amplitudes by excitation number `j` (eigenvalue `n/2 - j`) gives
/// `k(delta) = |sum_j p_j exp(i delta j)|^2`, which costs one evolution for
/// the whole profile.
#[derive(Debug, Clone)]
pub struct Profile1d {
    /// Probability mass per excitation number.
    weights: Vec<f64>,
}

impl Profile1d {
    pub fn build(system: &SpinSystem, params: &EncodingParams) -> Result<Self> {
        if params.feature_dim() != 1 {
            return Err(Error::InvalidArgument(format!(
                "1D profile needs feature_dim = 1, got {}",
                params.feature_dim()
            )));
        }
        let mut chi = StateVector::ground(system.n())?;
        evolve_segment(&mut chi, system, 0.0, params)?;
        Ok(Self {
            weights: chi.popcount_weights(),
        })
    }

    /// `k(delta) = |sum_j p_j exp(i delta j)|^2`.
    pub fn eval(&self, delta: f64) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &p) in self.weights.iter().enumerate() {
            let (s, c) = (delta * j as f64).sin_cos();
            re += p * c;
            im += p * s;
        }
        re * re + im * im
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Kernel profile `k(delta) = kernel(delta, 0)` over a grid of differences.
pub fn kernel_profile_1d(
    system: &SpinSystem,
    params: &EncodingParams,
    deltas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let profile = Profile1d::build(system, params)?;
    Ok(deltas.iter().map(|&d| (d, profile.eval(d))).collect())
}

/// Full width at half maximum of a sampled profile.
///
/// The half level sits midway between the profile's maximum and its minimum
/// over the window, the usual convention for a peak on an elevated
/// baseline; for profiles decaying to zero this is the textbook half of the
/// maximum. Walks outward from the peak to the first crossing on each side
/// and interpolates linearly; a side that never crosses contributes its
/// grid endpoint, so a peak wider than the window reports the window width.
pub fn fwhm(profile: &[(f64, f64)]) -> f64 {
    assert!(profile.len() >= 2, "profile needs at least two samples");
    let peak_idx = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap();
    let floor = profile.iter().map(|&(_, k)| k).fold(f64::INFINITY, f64::min);
    let half = floor + (profile[peak_idx].1 - floor) / 2.0;

    let cross = |from: usize, step: isize| -> f64 {
        let mut i = from;
        loop {
            let next = i as isize + step;
            if next < 0 || next as usize >= profile.len() {
                return profile[i].0;
            }
            let next = next as usize;
            let (x0, y0) = profile[i];
            let (x1, y1) = profile[next];
            if y1 < half {
                // linear interpolation of the crossing
                return x0 + (x1 - x0) * (y0 - half) / (y0 - y1);
            }
            i = next;
        }
    };

    let right = cross(peak_idx, 1);
    let left = cross(peak_idx, -1);
    (right - left).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qkernel::kernel::kernel;
    use crate::spinsim::DataPoint;

    #[test]
    fn profile_peaks_at_one() {
        let sys = SpinSystem::draw(4, 2).unwrap();
        let params = EncodingParams::with_dt(0.2, 0.002, 1).unwrap();
        let prof = kernel_profile_1d(&sys, &params, &[0.0]).unwrap();
        assert!((prof[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_is_even() {
        let sys = SpinSystem::draw(4, 41).unwrap();
        let params = EncodingParams::with_dt(0.3, 0.003, 1).unwrap();
        let p = Profile1d::build(&sys, &params).unwrap();
        for d in [0.1, 0.35, 1.2, 1.5] {
            assert!((p.eval(d) - p.eval(-d)).abs() < 1e-10);
        }
    }

    #[test]
    fn profile_matches_direct_kernel() {
        let sys = SpinSystem::draw(4, 13).unwrap();
        let params = EncodingParams::with_dt(0.25, 0.005, 1).unwrap();
        let p = Profile1d::build(&sys, &params).unwrap();
        for d in [-1.1, -0.3, 0.0, 0.45, 0.9] {
            let direct = kernel(
                &sys,
                &params,
                &DataPoint::scalar(d),
                &DataPoint::scalar(0.0),
            )
            .unwrap();
            assert!(
                (p.eval(d) - direct).abs() < 1e-10,
                "delta {d}: {} vs {direct}",
                p.eval(d)
            );
        }
    }

    #[test]
    fn profile_requires_one_dimension() {
        let sys = SpinSystem::draw(3, 1).unwrap();
        let params = EncodingParams::new(0.1, 10, 2).unwrap();
        assert!(Profile1d::build(&sys, &params).is_err());
    }

    #[test]
    fn fwhm_of_triangle() {
        // Triangle peaking at 0 with half-crossings at -0.5, 0.5.
        let profile: Vec<(f64, f64)> = (-10..=10)
            .map(|i| {
                let x = i as f64 / 10.0;
                (x, (1.0 - x.abs()).max(0.0))
            })
            .collect();
        assert!((fwhm(&profile) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fwhm_saturates_at_window() {
        let profile: Vec<(f64, f64)> = (-5..=5).map(|i| (i as f64, 1.0)).collect();
        assert_eq!(fwhm(&profile), 10.0);
    }

    #[test]
    fn fwhm_on_elevated_baseline() {
        // cos^2 peak on a 0.5 floor: half level 0.75, crossings at +-pi/4.
        let profile: Vec<(f64, f64)> = (-100..=100)
            .map(|i| {
                let x = i as f64 * std::f64::consts::FRAC_PI_2 / 100.0;
                (x, 0.5 + 0.5 * x.cos().powi(2))
            })
            .collect();
        assert!((fwhm(&profile) - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    }
}
