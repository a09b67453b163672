//! Monte Carlo realisations of the Kesten-McKay law.
//!
//! Two models are provided:
//!
//! * the compressed model `X = (n/k) P O D O^T P`, read as a `k x k` matrix,
//!   with `O` Haar orthogonal, `D` a fixed `+-1` diagonal and `P` the
//!   projection onto the first `k` coordinates, `k = floor(n / (1 + c))`;
//! * sums `O_1 + O_1^T + ... + O_l + O_l^T` of independent Haar orthogonals,
//!   whose spectra approach the law with `c = 2l - 1`.
//!
//! Every realisation draws from its own ChaCha8 stream keyed by
//! `(seed, index)`, so ensembles are reproducible and can run in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, dot, orthonormalize_columns, LinalgError, SquareMatrix};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RandmatError {
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error("invalid histogram configuration: {0}")]
    InvalidHistogram(String),
    #[error("realization {realization}: {source}")]
    Eigensolver {
        realization: u64,
        #[source]
        source: LinalgError,
    },
}

pub type Result<T> = std::result::Result<T, RandmatError>;

/// The generator behind every realisation.
pub type RealizationRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent stream for realisation `index` under `seed`.
pub fn realization_stream(seed: u64, index: u64) -> RealizationRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Fills `out` with independent standard normals (polar Box-Muller).
pub fn fill_standard_normal<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    let mut pairs = out.chunks_exact_mut(2);
    for pair in &mut pairs {
        let (a, b) = polar_pair(rng);
        pair[0] = a;
        pair[1] = b;
    }
    if let [last] = pairs.into_remainder() {
        *last = polar_pair(rng).0;
    }
}

fn polar_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * rng.random::<f64>() - 1.0;
        let v = 2.0 * rng.random::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// First `k` columns of a Haar orthogonal `n x n` matrix, column-major.
/// Consumes the same normals, in the same order, as the first `k` columns
/// of [`haar_orthogonal`] on an identical stream, and returns exactly those
/// columns.
pub fn haar_frame<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    assert!(k <= n, "frame wider than the ambient dimension");
    let mut g = vec![0.0; n * k];
    fill_standard_normal(rng, &mut g);
    orthonormalize_columns(n, k, g)
}

/// Haar distributed orthogonal matrix: Gaussian fill (column by column),
/// Householder QR, columns multiplied by the signs of `diag(R)`.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SquareMatrix {
    let q = haar_frame(n, n, rng);
    let mut rows = vec![0.0; n * n];
    for (j, col) in q.chunks_exact(n.max(1)).enumerate() {
        for (i, &x) in col.iter().enumerate() {
            rows[i * n + j] = x;
        }
    }
    SquareMatrix::from_row_major(n, rows).expect("orthonormal columns are finite")
}

/// Diagonal of [`signed_diagonal`].
pub fn signed_diagonal_entries(n: usize) -> Vec<f64> {
    let plus = n.div_ceil(2);
    (0..n).map(|i| if i < plus { 1.0 } else { -1.0 }).collect()
}

/// `diag(+1, ..., +1, -1, ..., -1)` with `ceil(n/2)` leading `+1`s.
pub fn signed_diagonal(n: usize) -> SquareMatrix {
    SquareMatrix::from_diagonal(&signed_diagonal_entries(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Compressed { c: f64 },
    OrthogonalSum { l: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub kind: ModelKind,
    pub n: usize,
    pub seed: u64,
    pub realizations: u64,
}

impl ModelSpec {
    pub fn compressed(n: usize, c: f64, seed: u64, realizations: u64) -> Result<Self> {
        Self::validated(ModelKind::Compressed { c }, n, seed, realizations)
    }

    pub fn orthogonal_sum(n: usize, l: u32, seed: u64, realizations: u64) -> Result<Self> {
        Self::validated(ModelKind::OrthogonalSum { l }, n, seed, realizations)
    }

    fn validated(kind: ModelKind, n: usize, seed: u64, realizations: u64) -> Result<Self> {
        let spec = ModelSpec {
            kind,
            n,
            seed,
            realizations,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(RandmatError::InvalidSpec(msg));
        if self.n < 4 {
            return invalid(format!("n must be at least 4, got {}", self.n));
        }
        if self.realizations == 0 {
            return invalid("at least one realization is required".into());
        }
        match self.kind {
            ModelKind::Compressed { c } => {
                if !(c.is_finite() && c > 0.0) {
                    return invalid(format!("c must be positive and finite, got {c}"));
                }
                let k = self.dimension();
                if k < 2 {
                    return invalid(format!(
                        "k = floor(n / (1 + c)) = {k} is below 2 (n = {}, c = {c})",
                        self.n
                    ));
                }
            }
            ModelKind::OrthogonalSum { l } => {
                if l == 0 {
                    return invalid("l must be at least 1".into());
                }
            }
        }
        Ok(())
    }

    /// Size of each sampled matrix: `k` for the compressed model, `n` for sums.
    pub fn dimension(&self) -> usize {
        match self.kind {
            ModelKind::Compressed { c } => (self.n as f64 / (1.0 + c)).floor() as usize,
            ModelKind::OrthogonalSum { .. } => self.n,
        }
    }

    /// Parameter of the limiting law: `c`, or `2l - 1` for sums.
    pub fn limit_c(&self) -> f64 {
        match self.kind {
            ModelKind::Compressed { c } => c,
            ModelKind::OrthogonalSum { l } => 2.0 * l as f64 - 1.0,
        }
    }

    /// `n/k - 1` for the compressed model (the parameter actually realised
    /// after rounding `k`); `2l - 1` for sums.
    pub fn effective_c(&self) -> f64 {
        match self.kind {
            ModelKind::Compressed { .. } => self.n as f64 / self.dimension() as f64 - 1.0,
            ModelKind::OrthogonalSum { .. } => self.limit_c(),
        }
    }

    /// Exact expectation of the empirical second moment at this finite `n`.
    ///
    /// For the compressed model with `t = Tr D`, a uniform unit vector `q`
    /// has `E (q^T D q)^2 = (2n + t^2) / (n (n + 2))`, and each row of the
    /// full matrix `O^T D O` has squared norm one, which fixes the
    /// off-diagonal terms. For sums, `E Tr O = 0` and `E Tr O^2 = 1`.
    pub fn finite_second_moment(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            ModelKind::Compressed { .. } => {
                let k = self.dimension() as f64;
                let t = (self.n % 2) as f64;
                let diag = (2.0 * n + t * t) / (n * (n + 2.0));
                let off = (1.0 - diag) / (n - 1.0);
                (n / k).powi(2) * (diag + (k - 1.0) * off)
            }
            ModelKind::OrthogonalSum { l } => l as f64 * (2.0 + 2.0 / n),
        }
    }
}

/// Eigenvalues of one realisation, ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample<'a> {
    pub eigenvalues: Vec<f64>,
    pub model: &'a ModelSpec,
    pub realization_index: u64,
}

fn eigen(realization: u64, a: &SquareMatrix) -> Result<Vec<f64>> {
    linalg::symmetric_eigenvalues(a).map_err(|source| RandmatError::Eigensolver {
        realization,
        source,
    })
}

fn compressed_eigenvalues(
    n: usize,
    k: usize,
    diagonal: &[f64],
    rng: &mut RealizationRng,
    index: u64,
) -> Result<Vec<f64>> {
    // With O = Q^T, the leading k x k block of O D O^T is Q_k^T D Q_k,
    // where Q_k holds the first k columns of Q.
    let q = haar_frame(n, k, rng);
    let scale = n as f64 / k as f64;
    let dq: Vec<f64> = q
        .chunks_exact(n)
        .flat_map(|col| col.iter().zip(diagonal).map(|(x, d)| x * d))
        .collect();
    let mut x = vec![0.0; k * k];
    for i in 0..k {
        let dqi = &dq[i * n..(i + 1) * n];
        for j in i..k {
            let v = scale * dot(dqi, &q[j * n..(j + 1) * n]);
            x[i * k + j] = v;
            x[j * k + i] = v;
        }
    }
    let x = SquareMatrix::from_row_major(k, x).expect("finite entries");
    eigen(index, &x)
}

fn check_kind(spec: &ModelSpec, want_compressed: bool) -> Result<()> {
    spec.validate()?;
    let is_compressed = matches!(spec.kind, ModelKind::Compressed { .. });
    if is_compressed != want_compressed {
        return Err(RandmatError::InvalidSpec(format!(
            "model kind {:?} does not match the requested sampler",
            spec.kind
        )));
    }
    Ok(())
}

/// One realisation of the compressed model.
pub fn compressed_model(spec: &ModelSpec, realization_index: u64) -> Result<SpectralSample<'_>> {
    compressed_model_with_diagonal(spec, realization_index, &signed_diagonal_entries(spec.n))
}

/// As [`compressed_model`] with a caller-chosen `+-1` pattern for `D`.
pub fn compressed_model_with_diagonal<'a>(
    spec: &'a ModelSpec,
    realization_index: u64,
    diagonal: &[f64],
) -> Result<SpectralSample<'a>> {
    check_kind(spec, true)?;
    check_diagonal(spec.n, diagonal)?;
    let mut rng = realization_stream(spec.seed, realization_index);
    let eigenvalues = compressed_eigenvalues(
        spec.n,
        spec.dimension(),
        diagonal,
        &mut rng,
        realization_index,
    )?;
    Ok(SpectralSample {
        eigenvalues,
        model: spec,
        realization_index,
    })
}

fn check_diagonal(n: usize, diagonal: &[f64]) -> Result<()> {
    if diagonal.len() != n || diagonal.iter().any(|&d| d != 1.0 && d != -1.0) {
        return Err(RandmatError::InvalidSpec(format!(
            "D must be a +-1 diagonal of length {n}"
        )));
    }
    Ok(())
}

fn orthogonal_sum_eigenvalues(
    n: usize,
    l: u32,
    rng: &mut RealizationRng,
    index: u64,
) -> Result<Vec<f64>> {
    let mut s = SquareMatrix::zeros(n);
    for _ in 0..l {
        let o = haar_orthogonal(n, rng);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] += o[(i, j)] + o[(j, i)];
            }
        }
    }
    eigen(index, &s)
}

/// One realisation of `sum_i (O_i + O_i^T)`.
pub fn orthogonal_sum_model(
    spec: &ModelSpec,
    realization_index: u64,
) -> Result<SpectralSample<'_>> {
    check_kind(spec, false)?;
    let ModelKind::OrthogonalSum { l } = spec.kind else {
        unreachable!()
    };
    let mut rng = realization_stream(spec.seed, realization_index);
    let eigenvalues = orthogonal_sum_eigenvalues(spec.n, l, &mut rng, realization_index)?;
    Ok(SpectralSample {
        eigenvalues,
        model: spec,
        realization_index,
    })
}

/// Dispatches on the model kind.
pub fn sample(spec: &ModelSpec, realization_index: u64) -> Result<SpectralSample<'_>> {
    match spec.kind {
        ModelKind::Compressed { .. } => compressed_model(spec, realization_index),
        ModelKind::OrthogonalSum { .. } => orthogonal_sum_model(spec, realization_index),
    }
}

/// Default number of histogram bins.
pub const DEFAULT_BINS: usize = 61;
/// Default half-width of the windows placed on the atoms.
pub const DEFAULT_ATOM_WINDOW: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramConfig {
    pub bins: usize,
    pub lower: f64,
    pub upper: f64,
    pub moment_orders: Vec<u32>,
    /// Half-width of the windows centred on `+-(1 + c)` when `c < 1`.
    pub atom_window: f64,
}

impl HistogramConfig {
    /// 61 bins on `[-(1 + c) - 0.5, (1 + c) + 0.5]`, moments 2, 4, 6.
    pub fn for_model(spec: &ModelSpec) -> Self {
        let edge = 1.0 + spec.limit_c() + 0.5;
        HistogramConfig {
            bins: DEFAULT_BINS,
            lower: -edge,
            upper: edge,
            moment_orders: vec![2, 4, 6],
            atom_window: DEFAULT_ATOM_WINDOW,
        }
    }

    pub fn with_bins(mut self, bins: usize) -> Self {
        self.bins = bins;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(RandmatError::InvalidHistogram(msg.into()));
        if self.bins == 0 {
            return invalid("at least one bin is required");
        }
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return invalid("range must be finite with lower < upper");
        }
        if !(self.atom_window.is_finite() && self.atom_window > 0.0) {
            return invalid("atom window must be positive");
        }
        Ok(())
    }

    fn bin_of(&self, x: f64) -> Option<usize> {
        if !(x >= self.lower && x <= self.upper) {
            return None;
        }
        let t = (x - self.lower) / (self.upper - self.lower);
        Some(((t * self.bins as f64) as usize).min(self.bins - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `counts / total`, summing to one.
    pub masses: Vec<f64>,
    /// Eigenvalues that fell outside the binned range.
    pub outside: u64,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Mass divided by bin width.
    pub fn densities(&self) -> Vec<f64> {
        self.edges
            .windows(2)
            .zip(&self.masses)
            .map(|(w, m)| m / (w[1] - w[0]))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmpiricalMoment {
    pub order: u32,
    pub mean: f64,
    /// Across-realization standard error; absent for a single realization.
    pub standard_error: Option<f64>,
}

/// Average fraction of eigenvalues within `center +- half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowMass {
    pub center: f64,
    pub half_width: f64,
    pub mean: f64,
    pub standard_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStatistics {
    pub model: ModelSpec,
    pub dimension: usize,
    pub c_effective: f64,
    pub realizations: u64,
    pub histogram: Histogram,
    pub moments: Vec<EmpiricalMoment>,
    pub atom_windows: Vec<WindowMass>,
}

impl EnsembleStatistics {
    pub fn moment(&self, order: u32) -> Option<&EmpiricalMoment> {
        self.moments.iter().find(|m| m.order == order)
    }
}

struct Summary {
    counts: Vec<u64>,
    outside: u64,
    moments: Vec<f64>,
    windows: Vec<f64>,
}

fn summarize(eigenvalues: &[f64], config: &HistogramConfig, centers: &[f64]) -> Summary {
    let mut counts = vec![0u64; config.bins];
    let mut outside = 0;
    for &x in eigenvalues {
        match config.bin_of(x) {
            Some(b) => counts[b] += 1,
            None => outside += 1,
        }
    }
    let len = eigenvalues.len() as f64;
    let moments = config
        .moment_orders
        .iter()
        .map(|&p| eigenvalues.iter().map(|x| x.powi(p as i32)).sum::<f64>() / len)
        .collect();
    let windows = centers
        .iter()
        .map(|c| {
            let inside = eigenvalues
                .iter()
                .filter(|x| (*x - c).abs() <= config.atom_window)
                .count();
            inside as f64 / len
        })
        .collect();
    Summary {
        counts,
        outside,
        moments,
        windows,
    }
}

fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, Option<f64>) {
    let r = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / r;
    if r < 2.0 {
        return (mean, None);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0);
    (mean, Some((var / r).sqrt()))
}

/// Runs every realisation of `spec` and aggregates the results in index order.
pub fn ensemble_run(spec: &ModelSpec, config: &HistogramConfig) -> Result<EnsembleStatistics> {
    spec.validate()?;
    match spec.kind {
        ModelKind::Compressed { .. } => {
            ensemble_run_with_diagonal(spec, config, &signed_diagonal_entries(spec.n))
        }
        ModelKind::OrthogonalSum { l } => run(spec, config, |index| {
            let mut rng = realization_stream(spec.seed, index);
            orthogonal_sum_eigenvalues(spec.n, l, &mut rng, index)
        }),
    }
}

/// Compressed-model ensemble with a caller-chosen `+-1` pattern for `D`.
pub fn ensemble_run_with_diagonal(
    spec: &ModelSpec,
    config: &HistogramConfig,
    diagonal: &[f64],
) -> Result<EnsembleStatistics> {
    check_kind(spec, true)?;
    check_diagonal(spec.n, diagonal)?;
    let k = spec.dimension();
    run(spec, config, |index| {
        let mut rng = realization_stream(spec.seed, index);
        compressed_eigenvalues(spec.n, k, diagonal, &mut rng, index)
    })
}

fn run<F>(spec: &ModelSpec, config: &HistogramConfig, sampler: F) -> Result<EnsembleStatistics>
where
    F: Fn(u64) -> Result<Vec<f64>> + Sync,
{
    config.validate()?;
    let c = spec.limit_c();
    let centers: Vec<f64> = if c < 1.0 {
        vec![-(1.0 + c), 1.0 + c]
    } else {
        Vec::new()
    };
    let summaries = (0..spec.realizations)
        .into_par_iter()
        .map(|index| sampler(index).map(|ev| summarize(&ev, config, &centers)))
        .collect::<Result<Vec<_>>>()?;

    let mut counts = vec![0u64; config.bins];
    let mut outside = 0;
    for s in &summaries {
        for (total, c) in counts.iter_mut().zip(&s.counts) {
            *total += c;
        }
        outside += s.outside;
    }
    let binned: u64 = counts.iter().sum();
    let masses = counts
        .iter()
        .map(|&c| {
            if binned == 0 {
                0.0
            } else {
                c as f64 / binned as f64
            }
        })
        .collect();
    let width = (config.upper - config.lower) / config.bins as f64;
    let mut edges: Vec<f64> = (0..config.bins)
        .map(|i| config.lower + i as f64 * width)
        .collect();
    edges.push(config.upper);

    let moments = config
        .moment_orders
        .iter()
        .enumerate()
        .map(|(slot, &order)| {
            let (mean, standard_error) = mean_and_se(summaries.iter().map(|s| s.moments[slot]));
            EmpiricalMoment {
                order,
                mean,
                standard_error,
            }
        })
        .collect();
    let atom_windows = centers
        .iter()
        .enumerate()
        .map(|(slot, &center)| {
            let (mean, standard_error) = mean_and_se(summaries.iter().map(|s| s.windows[slot]));
            WindowMass {
                center,
                half_width: config.atom_window,
                mean,
                standard_error,
            }
        })
        .collect();

    Ok(EnsembleStatistics {
        model: *spec,
        dimension: spec.dimension(),
        c_effective: spec.effective_c(),
        realizations: spec.realizations,
        histogram: Histogram {
            edges,
            counts,
            masses,
            outside,
        },
        moments,
        atom_windows,
    })
}
