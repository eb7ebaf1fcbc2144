//! Seeded dataset generators and their CSV form.
//!
//! Regression targets follow the conventions of the 1D tasks: inputs are
//! sampled in degrees on `[-45, 45]` and targets are computed with the
//! period-50 formulas directly in degrees. Conversion of the inputs to
//! radians for encoding happens at the caller (the CLI unit flag).

use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::spinsim::DataPoint;

/// Regression target family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegressionTask {
    /// `y = sin(2 pi x / 50)`, `x` in degrees.
    Sin,
    /// `y = sin(2 pi x / 50) / (2 pi x / 50)`, continued with 1 at `x = 0`.
    Sinc,
}

impl RegressionTask {
    pub fn target(&self, x_deg: f64) -> f64 {
        let u = 2.0 * PI * x_deg / 50.0;
        match self {
            RegressionTask::Sin => u.sin(),
            RegressionTask::Sinc => {
                if u == 0.0 {
                    1.0
                } else {
                    u.sin() / u
                }
            }
        }
    }
}

impl std::fmt::Display for RegressionTask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegressionTask::Sin => write!(f, "sin"),
            RegressionTask::Sinc => write!(f, "sinc"),
        }
    }
}

impl FromStr for RegressionTask {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin" => Ok(RegressionTask::Sin),
            "sinc" => Ok(RegressionTask::Sinc),
            other => Err(Error::Parse(format!("unknown regression task '{other}'"))),
        }
    }
}

/// Generator provenance carried with every dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetMeta {
    pub generator: String,
    pub seed: u64,
    /// Ordered key-value parameters, written verbatim into CSV headers.
    pub params: Vec<(String, String)>,
}

/// Points with targets: real-valued for regression, `+-1` for
/// classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSet {
    pub points: Vec<DataPoint>,
    pub targets: Vec<f64>,
    pub meta: SetMeta,
}

impl LabeledSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.dim())
    }

    /// Write the CSV form: `#` metadata lines, a column header, then one
    /// row per point with 17-significant-digit floats.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# dataset")?;
        writeln!(w, "# generator = {}", self.meta.generator)?;
        writeln!(w, "# seed = {}", self.meta.seed)?;
        for (k, v) in &self.meta.params {
            writeln!(w, "# {k} = {v}")?;
        }
        let cols: Vec<String> = (1..=self.dim()).map(|i| format!("x{i}")).collect();
        writeln!(w, "{},y", cols.join(","))?;
        for (p, y) in self.points.iter().zip(&self.targets) {
            let mut cells: Vec<String> = p.coords().iter().map(|&c| g17(c)).collect();
            cells.push(g17(*y));
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut generator = String::from("unknown");
        let mut seed = 0u64;
        let mut params = Vec::new();
        let mut header_seen = false;
        let mut dim = 0usize;
        let mut points = Vec::new();
        let mut targets = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    let (k, v) = (k.trim(), v.trim());
                    match k {
                        "generator" => generator = v.to_string(),
                        "seed" => {
                            seed = v
                                .parse()
                                .map_err(|e| Error::Parse(format!("bad seed '{v}': {e}")))?
                        }
                        _ => params.push((k.to_string(), v.to_string())),
                    }
                }
                continue;
            }
            if !header_seen {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.last() != Some(&"y") || cols.len() < 2 {
                    return Err(Error::Parse(format!("bad dataset column header '{line}'")));
                }
                dim = cols.len() - 1;
                header_seen = true;
                continue;
            }
            let cells = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad float '{s}': {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if cells.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "row has {} cells, expected {}",
                    cells.len(),
                    dim + 1
                )));
            }
            if cells.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parse("non-finite value in dataset".into()));
            }
            targets.push(cells[dim]);
            points.push(DataPoint::new(cells[..dim].to_vec()));
        }
        if !header_seen {
            return Err(Error::Parse("dataset has no column header".into()));
        }
        Ok(Self {
            points,
            targets,
            meta: SetMeta {
                generator,
                seed,
                params,
            },
        })
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

/// Draw `count` inputs uniformly from `range_deg` and label them with the
/// task's target function.
pub fn regression_1d(
    task: RegressionTask,
    count: usize,
    range_deg: (f64, f64),
    seed: u64,
) -> Result<LabeledSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    if range_deg.0.is_nan() || range_deg.1.is_nan() || range_deg.0 >= range_deg.1 {
        return Err(Error::InvalidArgument(format!(
            "empty sampling range [{}, {}]",
            range_deg.0, range_deg.1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    for _ in 0..count {
        let x: f64 = rng.random_range(range_deg.0..=range_deg.1);
        points.push(DataPoint::scalar(x));
        targets.push(task.target(x));
    }
    Ok(LabeledSet {
        points,
        targets,
        meta: SetMeta {
            generator: task.to_string(),
            seed,
            params: vec![
                ("count".into(), count.to_string()),
                ("range_min".into(), range_deg.0.to_string()),
                ("range_max".into(), range_deg.1.to_string()),
            ],
        },
    })
}

/// `count` uniformly spaced evaluation inputs spanning the range inclusive.
pub fn eval_grid_1d(count: usize, range_deg: (f64, f64)) -> Vec<DataPoint> {
    assert!(count >= 2, "evaluation grid needs at least two points");
    let (lo, hi) = range_deg;
    (0..count)
        .map(|i| DataPoint::scalar(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

/// Two concentric circles: the first `ceil(count/2)` points on the unit
/// circle (label `-1`), the rest on radius `factor` (label `+1`), angles
/// uniformly spaced, isotropic Gaussian noise of the given width.
pub fn make_circles(count: usize, noise_sd: f64, factor: f64, seed: u64) -> Result<LabeledSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    if factor.is_nan() || factor <= 0.0 || factor >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "factor must lie in (0, 1), got {factor}"
        )));
    }
    check_noise(noise_sd)?;
    let n_outer = count.div_ceil(2);
    let n_inner = count - n_outer;
    let mut points = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    for k in 0..n_outer {
        let t = 2.0 * PI * k as f64 / n_outer as f64;
        points.push(DataPoint::new(vec![t.cos(), t.sin()]));
        targets.push(-1.0);
    }
    for k in 0..n_inner {
        let t = 2.0 * PI * k as f64 / n_inner as f64;
        points.push(DataPoint::new(vec![factor * t.cos(), factor * t.sin()]));
        targets.push(1.0);
    }
    add_noise(&mut points, noise_sd, seed);
    Ok(LabeledSet {
        points,
        targets,
        meta: SetMeta {
            generator: "circles".into(),
            seed,
            params: vec![
                ("count".into(), count.to_string()),
                ("noise_sd".into(), noise_sd.to_string()),
                ("factor".into(), factor.to_string()),
            ],
        },
    })
}

/// Two interleaved half-circles: upper moon `(cos t, sin t)` with label
/// `-1`, lower moon `(1 - cos t, 0.5 - sin t)` with label `+1`, `t`
/// uniformly spaced over `[0, pi]` inclusive.
pub fn make_moons(count: usize, noise_sd: f64, seed: u64) -> Result<LabeledSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }
    check_noise(noise_sd)?;
    let n_upper = count.div_ceil(2);
    let n_lower = count - n_upper;
    let spaced = |k: usize, m: usize| -> f64 {
        if m <= 1 {
            0.0
        } else {
            PI * k as f64 / (m - 1) as f64
        }
    };
    let mut points = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    for k in 0..n_upper {
        let t = spaced(k, n_upper);
        points.push(DataPoint::new(vec![t.cos(), t.sin()]));
        targets.push(-1.0);
    }
    for k in 0..n_lower {
        let t = spaced(k, n_lower);
        points.push(DataPoint::new(vec![1.0 - t.cos(), 0.5 - t.sin()]));
        targets.push(1.0);
    }
    add_noise(&mut points, noise_sd, seed);
    Ok(LabeledSet {
        points,
        targets,
        meta: SetMeta {
            generator: "moons".into(),
            seed,
            params: vec![
                ("count".into(), count.to_string()),
                ("noise_sd".into(), noise_sd.to_string()),
            ],
        },
    })
}

fn check_noise(noise_sd: f64) -> Result<()> {
    if !noise_sd.is_finite() || noise_sd < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise width must be finite and >= 0, got {noise_sd}"
        )));
    }
    Ok(())
}

fn add_noise(points: &mut [DataPoint], noise_sd: f64, seed: u64) {
    if noise_sd == 0.0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_sd).expect("validated width");
    for p in points.iter_mut() {
        let noisy: Vec<f64> = p.coords().iter().map(|&c| c + normal.sample(&mut rng)).collect();
        *p = DataPoint::new(noisy);
    }
}

/// Affine map sending each coordinate's observed range onto
/// `[-halfwidth, +halfwidth]`; a constant column maps to 0.
pub fn scale_features(set: &LabeledSet, halfwidth_rad: f64) -> LabeledSet {
    assert!(
        halfwidth_rad > 0.0 && halfwidth_rad.is_finite(),
        "halfwidth must be positive"
    );
    let dim = set.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in &set.points {
        for (d, &c) in p.coords().iter().enumerate() {
            lo[d] = lo[d].min(c);
            hi[d] = hi[d].max(c);
        }
    }
    let points = set
        .points
        .iter()
        .map(|p| {
            let coords = p
                .coords()
                .iter()
                .enumerate()
                .map(|(d, &c)| {
                    if hi[d] > lo[d] {
                        (c - (lo[d] + hi[d]) / 2.0) * (2.0 * halfwidth_rad / (hi[d] - lo[d]))
                    } else {
                        0.0
                    }
                })
                .collect();
            DataPoint::new(coords)
        })
        .collect();
    let mut meta = set.meta.clone();
    meta.params
        .push(("scaled_halfwidth".into(), halfwidth_rad.to_string()));
    LabeledSet {
        points,
        targets: set.targets.clone(),
        meta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_task_values() {
        assert!((RegressionTask::Sin.target(12.5) - 1.0).abs() < 1e-15);
        assert!(RegressionTask::Sin.target(25.0).abs() < 1e-15);
        assert_eq!(RegressionTask::Sinc.target(0.0), 1.0);
        assert!((RegressionTask::Sinc.target(12.5) - 1.0 / (PI / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn regression_sampling_deterministic_and_in_range() {
        let a = regression_1d(RegressionTask::Sin, 40, (-45.0, 45.0), 3).unwrap();
        let b = regression_1d(RegressionTask::Sin, 40, (-45.0, 45.0), 3).unwrap();
        assert_eq!(a, b);
        for (p, y) in a.points.iter().zip(&a.targets) {
            let x = p.coords()[0];
            assert!((-45.0..=45.0).contains(&x));
            assert_eq!(*y, RegressionTask::Sin.target(x));
        }
        assert!(regression_1d(RegressionTask::Sin, 0, (-45.0, 45.0), 3).is_err());
        assert!(regression_1d(RegressionTask::Sin, 4, (45.0, -45.0), 3).is_err());
    }

    #[test]
    fn eval_grid_spacing() {
        let grid = eval_grid_1d(64, (-45.0, 45.0));
        assert_eq!(grid.len(), 64);
        assert_eq!(grid[0].coords()[0], -45.0);
        assert_eq!(grid[63].coords()[0], 45.0);
        let spacing = grid[1].coords()[0] - grid[0].coords()[0];
        assert!((spacing - 90.0 / 63.0).abs() < 1e-12);
        let two = eval_grid_1d(2, (-1.0, 1.0));
        assert_eq!(two[0].coords()[0], -1.0);
        assert_eq!(two[1].coords()[0], 1.0);
    }

    #[test]
    fn circles_noiseless_geometry() {
        let set = make_circles(4, 0.0, 0.5, 1).unwrap();
        assert_eq!(set.len(), 4);
        // Outer pair at angles 0 and pi on radius 1.
        assert!((set.points[0].coords()[0] - 1.0).abs() < 1e-15);
        assert!((set.points[1].coords()[0] + 1.0).abs() < 1e-12);
        assert_eq!(set.targets[..2], [-1.0, -1.0]);
        // Inner pair on radius 0.5.
        for p in &set.points[2..] {
            let r = (p.coords()[0].powi(2) + p.coords()[1].powi(2)).sqrt();
            assert!((r - 0.5).abs() < 1e-12);
        }
        assert_eq!(set.targets[2..], [1.0, 1.0]);
        assert!(make_circles(4, 0.0, 1.5, 1).is_err());
    }

    #[test]
    fn circles_deterministic_under_seed() {
        let a = make_circles(30, 0.08, 0.5, 9).unwrap();
        let b = make_circles(30, 0.08, 0.5, 9).unwrap();
        assert_eq!(a, b);
        let c = make_circles(30, 0.08, 0.5, 10).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn moons_noiseless_endpoints() {
        let set = make_moons(10, 0.0, 1).unwrap();
        let upper_first = &set.points[0];
        let upper_last = &set.points[4];
        assert!((upper_first.coords()[0] - 1.0).abs() < 1e-15);
        assert!(upper_first.coords()[1].abs() < 1e-15);
        assert!((upper_last.coords()[0] + 1.0).abs() < 1e-12);
        assert!(upper_last.coords()[1].abs() < 1e-12);
        let lower_first = &set.points[5];
        let lower_last = &set.points[9];
        assert!(lower_first.coords()[0].abs() < 1e-15);
        assert!((lower_first.coords()[1] - 0.5).abs() < 1e-15);
        assert!((lower_last.coords()[0] - 2.0).abs() < 1e-12);
        assert!((lower_last.coords()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn moons_label_balance() {
        for count in [7, 8, 101] {
            let set = make_moons(count, 0.0, 1).unwrap();
            let pos = set.targets.iter().filter(|&&y| y > 0.0).count();
            let neg = set.len() - pos;
            assert!(pos.abs_diff(neg) <= 1, "count {count}: {pos} vs {neg}");
        }
    }

    #[test]
    fn scaling_maps_extremes_to_halfwidth() {
        let set = make_moons(20, 0.0, 1).unwrap();
        let h = PI / 2.0;
        let scaled = scale_features(&set, h);
        for d in 0..2 {
            let lo = scaled
                .points
                .iter()
                .map(|p| p.coords()[d])
                .fold(f64::INFINITY, f64::min);
            let hi = scaled
                .points
                .iter()
                .map(|p| p.coords()[d])
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((lo + h).abs() < 1e-12);
            assert!((hi - h).abs() < 1e-12);
        }
        // Already-scaled data is a fixed point.
        let again = scale_features(&scaled, h);
        for (a, b) in again.points.iter().zip(&scaled.points) {
            for (x, y) in a.coords().iter().zip(b.coords()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scaling_constant_column_maps_to_zero() {
        let set = LabeledSet {
            points: vec![
                DataPoint::new(vec![2.0, 0.0]),
                DataPoint::new(vec![2.0, 1.0]),
            ],
            targets: vec![-1.0, 1.0],
            meta: SetMeta {
                generator: "manual".into(),
                seed: 0,
                params: vec![],
            },
        };
        let scaled = scale_features(&set, 1.0);
        assert_eq!(scaled.points[0].coords()[0], 0.0);
        assert_eq!(scaled.points[1].coords()[0], 0.0);
        assert_eq!(scaled.points[0].coords()[1], -1.0);
        assert_eq!(scaled.points[1].coords()[1], 1.0);
    }

    #[test]
    fn csv_round_trip() {
        let set = make_circles(12, 0.05, 0.5, 77).unwrap();
        let text = set.to_csv_string();
        let back = LabeledSet::from_csv_str(&text).unwrap();
        assert_eq!(back.meta.generator, "circles");
        assert_eq!(back.meta.seed, 77);
        assert_eq!(back.targets, set.targets);
        for (a, b) in back.points.iter().zip(&set.points) {
            for (x, y) in a.coords().iter().zip(b.coords()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
