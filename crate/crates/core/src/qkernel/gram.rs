use std::io::{BufRead, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::qkernel::kernel::{encode_points, trace_kernel_with_cap};
use crate::qkernel::profile::Profile1d;
use crate::spinsim::{DataPoint, EncodingParams, SpinSystem};

/// Which kernel a Gram matrix was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Pure,
    Trace,
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelKind::Pure => write!(f, "pure"),
            KernelKind::Trace => write!(f, "trace"),
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(KernelKind::Pure),
            "trace" => Ok(KernelKind::Trace),
            other => Err(Error::Parse(format!("unknown kernel kind '{other}'"))),
        }
    }
}

/// Provenance of a Gram matrix; enough to regenerate it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMeta {
    pub n: usize,
    pub tau: f64,
    pub substeps: usize,
    pub feature_dim: usize,
    pub seed: Option<u64>,
    pub kernel: KernelKind,
}

impl GramMeta {
    fn new(system: &SpinSystem, params: &EncodingParams, kernel: KernelKind) -> Self {
        Self {
            n: system.n(),
            tau: params.tau(),
            substeps: params.substeps(),
            feature_dim: params.feature_dim(),
            seed: system.seed(),
            kernel,
        }
    }
}

/// Symmetric kernel matrix over a dataset, diagonal pinned to exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    meta: GramMeta,
    points: Vec<DataPoint>,
    entries: DMatrix<f64>,
}

impl GramMatrix {
    pub fn meta(&self) -> &GramMeta {
        &self.meta
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i).iter().copied().collect()
    }

    /// Smallest eigenvalue; the matrix is a Gram so this should not dip
    /// below roughly `-1e-8`.
    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Ratio of extreme eigenvalue magnitudes; `inf` for a singular matrix.
    pub fn condition_estimate(&self) -> f64 {
        let eig = SymmetricEigen::new(self.entries.clone()).eigenvalues;
        let max = eig.iter().fold(0.0f64, |m, &e| m.max(e.abs()));
        let min = eig.iter().fold(f64::INFINITY, |m, &e| m.min(e.abs()));
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    fn from_upper_triangle(
        meta: GramMeta,
        points: Vec<DataPoint>,
        upper: Vec<((usize, usize), f64)>,
    ) -> Self {
        let nd = points.len();
        let mut entries = DMatrix::from_element(nd, nd, 0.0);
        for i in 0..nd {
            entries[(i, i)] = 1.0;
        }
        for ((i, j), k) in upper {
            entries[(i, j)] = k;
            entries[(j, i)] = k;
        }
        Self {
            meta,
            points,
            entries,
        }
    }

    // ---- serialization ----

    /// CSV: `#`-prefixed metadata lines, then the matrix row-major with
    /// 17-significant-digit entries. Points are not stored here; use the
    /// JSON envelope when they are needed.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        self.write_csv_with_extras(w, &[])
    }

    /// CSV form with extra caller header lines (`# key = value`); readers
    /// ignore keys they do not know.
    pub fn write_csv_with_extras<W: Write>(
        &self,
        mut w: W,
        extras: &[(String, String)],
    ) -> Result<()> {
        writeln!(w, "# gram")?;
        for (k, v) in extras {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "# n = {}", self.meta.n)?;
        writeln!(w, "# tau = {}", self.meta.tau)?;
        writeln!(w, "# substeps = {}", self.meta.substeps)?;
        writeln!(w, "# feature_dim = {}", self.meta.feature_dim)?;
        match self.meta.seed {
            Some(s) => writeln!(w, "# seed = {s}")?,
            None => writeln!(w, "# seed = none")?,
        }
        writeln!(w, "# kernel = {}", self.meta.kernel)?;
        writeln!(w, "# size = {}", self.size())?;
        for i in 0..self.size() {
            let row: Vec<String> = (0..self.size()).map(|j| g17(self.entry(i, j))).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// Parse the CSV form. The returned matrix carries no points.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut meta: Vec<(String, String)> = Vec::new();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    meta.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad float '{s}': {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let get = |key: &str| -> Result<&str> {
            meta.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| Error::Parse(format!("missing gram header key '{key}'")))
        };
        let n: usize = parse_field(get("n")?)?;
        let tau: f64 = parse_field(get("tau")?)?;
        let substeps: usize = parse_field(get("substeps")?)?;
        let feature_dim: usize = parse_field(get("feature_dim")?)?;
        let seed = match get("seed")? {
            "none" => None,
            s => Some(parse_field::<u64>(s)?),
        };
        let kernel: KernelKind = get("kernel")?.parse()?;
        let size: usize = parse_field(get("size")?)?;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Parse(format!(
                "gram body does not match declared size {size}"
            )));
        }
        let entries = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        Ok(Self {
            meta: GramMeta {
                n,
                tau,
                substeps,
                feature_dim,
                seed,
                kernel,
            },
            points: Vec::new(),
            entries,
        })
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }

    /// JSON envelope with metadata, points, and entries.
    pub fn to_json_string(&self) -> Result<String> {
        let envelope = GramJson {
            meta: self.meta.clone(),
            points: self.points.clone(),
            entries: (0..self.size()).map(|i| self.row(i)).collect(),
        };
        Ok(serde_json::to_string_pretty(&envelope)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let envelope: GramJson = serde_json::from_str(s)?;
        let size = envelope.entries.len();
        if envelope.entries.iter().any(|r| r.len() != size) {
            return Err(Error::Parse("gram entries are not square".into()));
        }
        if !envelope.points.is_empty() && envelope.points.len() != size {
            return Err(Error::Parse("gram points do not match entries".into()));
        }
        let entries = DMatrix::from_fn(size, size, |i, j| envelope.entries[i][j]);
        Ok(Self {
            meta: envelope.meta,
            points: envelope.points,
            entries,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    meta: GramMeta,
    points: Vec<DataPoint>,
    entries: Vec<Vec<f64>>,
}

fn parse_field<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| Error::Parse(format!("bad value '{s}': {e}")))
}

fn check_nonempty(points: &[DataPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "gram needs at least one point".into(),
        ));
    }
    Ok(())
}

/// Pure-state Gram matrix: encode every point once, then fill the upper
/// triangle with pairwise inner products. Entries are independent, so the
/// parallel fill is deterministic.
pub fn gram(
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
) -> Result<GramMatrix> {
    check_nonempty(points)?;
    let cached = encode_points(system, params, points)?;
    let nd = points.len();
    let pairs: Vec<(usize, usize)> = (0..nd)
        .flat_map(|i| ((i + 1)..nd).map(move |j| (i, j)))
        .collect();
    let upper: Vec<((usize, usize), f64)> = pairs
        .into_par_iter()
        .map(|(i, j)| ((i, j), cached.kernel_cached(i, j)))
        .collect();
    Ok(GramMatrix::from_upper_triangle(
        GramMeta::new(system, params, KernelKind::Pure),
        points.to_vec(),
        upper,
    ))
}

/// Shift-invariance fast path for one-dimensional single-segment encodings:
/// the kernel depends on `x_i - x_j` only, so one evolution yields the whole
/// matrix. Opt-in; agrees with [`gram`] to rounding error.
pub fn gram_fast_1d(
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
) -> Result<GramMatrix> {
    check_nonempty(points)?;
    let profile = Profile1d::build(system, params)?;
    let nd = points.len();
    let mut upper = Vec::with_capacity(nd * (nd - 1) / 2);
    for i in 0..nd {
        for j in (i + 1)..nd {
            let delta = points[i].coords()[0] - points[j].coords()[0];
            upper.push(((i, j), profile.eval(delta)));
        }
    }
    Ok(GramMatrix::from_upper_triangle(
        GramMeta::new(system, params, KernelKind::Pure),
        points.to_vec(),
        upper,
    ))
}

/// Trace-kernel Gram matrix. Cost per entry is `2^n` evolutions; keep `n`
/// under the cap.
pub fn gram_trace(
    system: &SpinSystem,
    params: &EncodingParams,
    points: &[DataPoint],
    cap: usize,
) -> Result<GramMatrix> {
    check_nonempty(points)?;
    let nd = points.len();
    let pairs: Vec<(usize, usize)> = (0..nd)
        .flat_map(|i| ((i + 1)..nd).map(move |j| (i, j)))
        .collect();
    let upper = pairs
        .into_iter()
        .map(|(i, j)| {
            trace_kernel_with_cap(system, params, &points[i], &points[j], cap)
                .map(|k| ((i, j), k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GramMatrix::from_upper_triangle(
        GramMeta::new(system, params, KernelKind::Trace),
        points.to_vec(),
        upper,
    ))
}
