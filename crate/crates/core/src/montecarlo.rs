//! Monte Carlo estimation of the form factor for arbitrary shape pairs and
//! directions, full tidal-tensor estimation, and principal-direction
//! extraction.
//!
//! Estimation is chunked: the sample stream is split into fixed-size
//! chunks, each driven by its own counter-derived random stream, and chunk
//! statistics are merged in chunk order. The layout depends only on the
//! requested sample count, so a run is bit-identical for any worker count.

use crate::error::{Error, Result};
use crate::geometry::{GeometryPair, Point3, PreparedSampler};
use crate::linalg::jacobi_eigen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimum distance between paired sample points. Closer pairs (possible in
/// principle for touching shapes, probability ≈ 0) are redrawn; the redraw
/// count is reported in the estimate.
pub const MIN_SEPARATION: f64 = 1e-12;

const CHUNK_SAMPLES: u64 = 65_536;

/// A Monte Carlo estimate with its standard error and provenance counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithError {
    /// The estimate (for form factors: nonnegative, |V · mean kernel|).
    pub value: f64,
    /// Standard error of the mean, same scale as `value`.
    pub std_error: f64,
    /// Number of accepted sample pairs (≥ 2).
    pub samples: u64,
    /// Number of rejected coincident sample pairs that were redrawn.
    pub redraws: u64,
}

/// Signed tidal kernel (3(n·δ)² − |δ|²)/|δ|⁵ for displacement `delta` and
/// unit direction `n`. Positive along the separation axis of an axially
/// separated pair.
pub fn tidal_kernel(delta: Point3, n: Point3) -> Result<f64> {
    let d2 = delta.x * delta.x + delta.y * delta.y + delta.z * delta.z;
    if d2 < MIN_SEPARATION * MIN_SEPARATION {
        return Err(Error::domain(
            "tidal_kernel",
            format!("sample points closer than {MIN_SEPARATION:e}"),
        ));
    }
    let nd = n.x * delta.x + n.y * delta.y + n.z * delta.z;
    Ok((3.0 * (nd * nd) - d2) / (d2 * d2 * d2.sqrt()))
}

/// Running mean and sum of squared deviations for one output channel.
#[derive(Debug, Clone, Copy, Default)]
struct ChannelStat {
    mean: f64,
    m2: f64,
}

#[derive(Debug, Clone, Copy)]
struct ChunkStat<const C: usize> {
    count: u64,
    channels: [ChannelStat; C],
    redraws: u64,
}

impl<const C: usize> ChunkStat<C> {
    fn empty() -> Self {
        ChunkStat {
            count: 0,
            channels: [ChannelStat::default(); C],
            redraws: 0,
        }
    }

    fn push(&mut self, values: [f64; C]) {
        self.count += 1;
        let n = self.count as f64;
        for (ch, v) in self.channels.iter_mut().zip(values) {
            let delta = v - ch.mean;
            ch.mean += delta / n;
            ch.m2 += delta * (v - ch.mean);
        }
    }

    /// Pooled merge of two partial statistics (order-sensitive; callers
    /// merge strictly in chunk order).
    fn merge(&mut self, other: &ChunkStat<C>) {
        if other.count == 0 {
            self.redraws += other.redraws;
            return;
        }
        if self.count == 0 {
            *self = ChunkStat {
                redraws: self.redraws + other.redraws,
                ..*other
            };
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for (a, b) in self.channels.iter_mut().zip(other.channels.iter()) {
            let delta = b.mean - a.mean;
            a.mean += delta * (nb / n);
            a.m2 += b.m2 + delta * delta * na * nb / n;
        }
        self.count += other.count;
        self.redraws += other.redraws;
    }
}

/// Evaluates one chunk of the schedule. Chunk `index` owns random stream
/// `index` of the generator seeded by `seed`.
fn run_chunk<const C: usize, F>(
    pair: &GeometryPair,
    seed: u64,
    index: u64,
    chunk_samples: u64,
    f: &F,
) -> Result<ChunkStat<C>>
where
    F: Fn(f64, f64, f64, f64) -> [f64; C],
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let sampler_a = PreparedSampler::new(pair.a());
    let sampler_b = PreparedSampler::new(pair.b());
    let mut stat = ChunkStat::<C>::empty();
    let redraw_cap = chunk_samples + 1024;
    let mut produced = 0;
    while produced < chunk_samples {
        let pa = sampler_a.sample(&mut rng);
        let pb = sampler_b.sample(&mut rng);
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        let dz = pa.z - pb.z;
        let d2 = dx * dx + dy * dy + dz * dz;
        if d2 < MIN_SEPARATION * MIN_SEPARATION {
            stat.redraws += 1;
            if stat.redraws > redraw_cap {
                return Err(Error::domain(
                    "monte_carlo",
                    "excessive coincident-sample redraws; geometry is degenerate",
                ));
            }
            continue;
        }
        stat.push(f(dx, dy, dz, d2));
        produced += 1;
    }
    Ok(stat)
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(16)
}

/// Runs the full chunk schedule, optionally across worker threads, and
/// merges chunk statistics in chunk order.
fn estimate_channels<const C: usize, F>(
    pair: &GeometryPair,
    samples: u64,
    seed: u64,
    workers: usize,
    f: F,
) -> Result<ChunkStat<C>>
where
    F: Fn(f64, f64, f64, f64) -> [f64; C] + Sync,
{
    if samples < 2 {
        return Err(Error::domain(
            "monte_carlo",
            format!("need at least 2 samples, got {samples}"),
        ));
    }
    let n_chunks = samples.div_ceil(CHUNK_SAMPLES);
    let chunk_len = |idx: u64| -> u64 { CHUNK_SAMPLES.min(samples - idx * CHUNK_SAMPLES) };
    let workers = workers.max(1).min(n_chunks as usize);

    let per_worker: Vec<Vec<ChunkStat<C>>> = if workers == 1 {
        let mut chunks = Vec::with_capacity(n_chunks as usize);
        for idx in 0..n_chunks {
            chunks.push(run_chunk(pair, seed, idx, chunk_len(idx), &f)?);
        }
        vec![chunks]
    } else {
        let results: Vec<Result<Vec<ChunkStat<C>>>> = std::thread::scope(|scope| {
            let f = &f;
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        let mut chunks = Vec::new();
                        let mut idx = w as u64;
                        while idx < n_chunks {
                            chunks.push(run_chunk(pair, seed, idx, chunk_len(idx), f)?);
                            idx += workers as u64;
                        }
                        Ok(chunks)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut per_worker = Vec::with_capacity(workers);
        for r in results {
            per_worker.push(r?);
        }
        per_worker
    };

    // Merge strictly in chunk order: chunk idx lives at per_worker[idx % W][idx / W].
    let w = per_worker.len();
    let mut total = ChunkStat::<C>::empty();
    for idx in 0..n_chunks as usize {
        total.merge(&per_worker[idx % w][idx / w]);
    }
    Ok(total)
}

fn lambda_channel(n: Point3) -> impl Fn(f64, f64, f64, f64) -> [f64; 1] + Sync {
    move |dx, dy, dz, d2| {
        let nd = n.x * dx + n.y * dy + n.z * dz;
        let d5 = d2 * d2 * d2.sqrt();
        [(3.0 * (nd * nd) - d2) / d5]
    }
}

/// Estimates Λ = |V · E[kernel]| for the pair along its own direction,
/// using `samples` kernel draws. Deterministic for fixed (seed, samples):
/// worker count does not affect the result.
pub fn mc_lambda(pair: &GeometryPair, samples: u64, seed: u64) -> Result<EstimateWithError> {
    mc_lambda_with_workers(pair, samples, seed, default_workers())
}

/// [`mc_lambda`] with an explicit worker-thread count (same result for any
/// count; exposed so the determinism contract is testable).
pub fn mc_lambda_with_workers(
    pair: &GeometryPair,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<EstimateWithError> {
    let stat = estimate_channels::<1, _>(pair, samples, seed, workers, lambda_channel(pair.direction()))?;
    let v = pair.volume();
    let ch = stat.channels[0];
    let count = stat.count;
    let variance = ch.m2 / (count - 1) as f64;
    Ok(EstimateWithError {
        value: (v * ch.mean).abs(),
        std_error: v * (variance / count as f64).sqrt(),
        samples: count,
        redraws: stat.redraws,
    })
}

/// Symmetric 3×3 tidal tensor estimate with per-entry standard errors.
/// `n·T·n` reproduces the signed integrand of [`mc_lambda`] for every unit
/// `n`; for separated pairs the trace is ≈ 0.
#[derive(Debug, Clone, Copy)]
pub struct TidalTensor {
    /// Upper triangle in (xx, xy, xz, yy, yz, zz) order, scaled by volume.
    entries: [f64; 6],
    std_errors: [f64; 6],
    samples: u64,
    redraws: u64,
}

const TENSOR_INDEX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

impl TidalTensor {
    /// Builds a tensor directly from upper-triangle entries (xx, xy, xz,
    /// yy, yz, zz); standard errors default to zero. Intended for tests
    /// and for feeding externally computed tensors to
    /// [`principal_direction`].
    pub fn from_upper(entries: [f64; 6]) -> TidalTensor {
        TidalTensor {
            entries,
            std_errors: [0.0; 6],
            samples: 0,
            redraws: 0,
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[TENSOR_INDEX[row][col]]
    }

    pub fn std_error_entry(&self, row: usize, col: usize) -> f64 {
        self.std_errors[TENSOR_INDEX[row][col]]
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.entry(r, c);
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        self.entries[0] + self.entries[3] + self.entries[5]
    }

    /// Combined standard error of the trace (diagonal channels assumed
    /// independent; conservative for correlated channels only up to √3).
    pub fn trace_std_error(&self) -> f64 {
        let d = [self.std_errors[0], self.std_errors[3], self.std_errors[5]];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    /// The signed quadratic form n·T·n.
    pub fn quadratic_form(&self, n: Point3) -> f64 {
        let nv = [n.x, n.y, n.z];
        let mut total = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                total += nv[r] * nv[c] * self.entry(r, c);
            }
        }
        total
    }

    /// Upper bound on the standard error of n·T·n over all unit n:
    /// the root-sum-square of all nine entry errors.
    pub fn max_direction_std_error(&self) -> f64 {
        let e = &self.std_errors;
        (e[0] * e[0]
            + e[3] * e[3]
            + e[5] * e[5]
            + 2.0 * (e[1] * e[1] + e[2] * e[2] + e[4] * e[4]))
            .sqrt()
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn redraws(&self) -> u64 {
        self.redraws
    }
}

/// Estimates the full tidal tensor T_ab = V · E[(3 δ_a δ_b − δ_ab|δ|²)/|δ|⁵]
/// on the same sample stream [`mc_lambda`] would use: the zz channel is
/// bit-identical to the signed mean behind `mc_lambda` when the pair's
/// direction is e_z.
pub fn mc_tensor(pair: &GeometryPair, samples: u64, seed: u64) -> Result<TidalTensor> {
    mc_tensor_with_workers(pair, samples, seed, default_workers())
}

/// [`mc_tensor`] with an explicit worker-thread count.
pub fn mc_tensor_with_workers(
    pair: &GeometryPair,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<TidalTensor> {
    let stat = estimate_channels::<6, _>(pair, samples, seed, workers, |dx, dy, dz, d2| {
        let d5 = d2 * d2 * d2.sqrt();
        [
            (3.0 * (dx * dx) - d2) / d5,
            3.0 * (dx * dy) / d5,
            3.0 * (dx * dz) / d5,
            (3.0 * (dy * dy) - d2) / d5,
            3.0 * (dy * dz) / d5,
            (3.0 * (dz * dz) - d2) / d5,
        ]
    })?;
    let v = pair.volume();
    let count = stat.count;
    let mut entries = [0.0; 6];
    let mut std_errors = [0.0; 6];
    for (i, ch) in stat.channels.iter().enumerate() {
        entries[i] = v * ch.mean;
        let variance = ch.m2 / (count - 1) as f64;
        std_errors[i] = v * (variance / count as f64).sqrt();
    }
    Ok(TidalTensor {
        entries,
        std_errors,
        samples: count,
        redraws: stat.redraws,
    })
}

/// Direction-optimal form factor: the unit direction maximizing |n·T·n|
/// (the spectral radius of T) and that maximum. The zero tensor returns
/// (e_z, 0). The eigenvector sign is fixed so its largest-magnitude
/// component is positive.
pub fn principal_direction(t: &TidalTensor) -> (Point3, f64) {
    let m = t.matrix();
    if m.iter().flatten().all(|&v| v == 0.0) {
        return (Point3::new(0.0, 0.0, 1.0), 0.0);
    }
    let eig = jacobi_eigen(&m);
    let mut best = 0;
    for k in 1..3 {
        if eig.values[k].abs() > eig.values[best].abs() {
            best = k;
        }
    }
    let col = [
        eig.vectors[0][best],
        eig.vectors[1][best],
        eig.vectors[2][best],
    ];
    let mut lead = 0;
    for k in 1..3 {
        if col[k].abs() > col[lead].abs() {
            lead = k;
        }
    }
    let flip = if col[lead] < 0.0 { -1.0 } else { 1.0 };
    let n = Point3::new(flip * col[0], flip * col[1], flip * col[2]);
    (n, eig.values[best].abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AxisBox, GeometryPair, Shape};

    fn cube_pair_gap1() -> GeometryPair {
        let a = Shape::BoxUnion(vec![AxisBox::new(0.0, 1.0, 0.0, 1.0, 0.0, 1.0).unwrap()]);
        let b = Shape::BoxUnion(vec![AxisBox::new(0.0, 1.0, 0.0, 1.0, 2.0, 3.0).unwrap()]);
        GeometryPair::new(a, b, Point3::new(0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn kernel_reference_values() {
        let ez = Point3::new(0.0, 0.0, 1.0);
        assert_eq!(tidal_kernel(Point3::new(0.0, 0.0, 1.0), ez).unwrap(), 2.0);
        assert_eq!(tidal_kernel(Point3::new(1.0, 0.0, 0.0), ez).unwrap(), -1.0);
        let magic = 1.0 / 3.0f64.sqrt();
        let k = tidal_kernel(Point3::new(magic, magic, magic), ez).unwrap();
        assert!(k.abs() < 1e-15, "magic-angle kernel {k}");
    }

    #[test]
    fn kernel_rejects_coincident_points() {
        let ez = Point3::new(0.0, 0.0, 1.0);
        assert!(tidal_kernel(Point3::new(0.0, 0.0, 1e-13), ez).is_err());
    }

    #[test]
    fn kernel_scales_as_inverse_cube() {
        let ez = Point3::new(0.0, 0.0, 1.0);
        let k1 = tidal_kernel(Point3::new(0.3, -0.2, 0.9), ez).unwrap();
        let k2 = tidal_kernel(Point3::new(0.6, -0.4, 1.8), ez).unwrap();
        assert!((k2 - k1 / 8.0).abs() < 1e-15 * k1.abs().max(1.0));
    }

    #[test]
    fn estimator_is_deterministic_across_worker_counts() {
        let pair = cube_pair_gap1();
        let base = mc_lambda_with_workers(&pair, 200_000, 42, 1).unwrap();
        for workers in [2, 3, 8] {
            let other = mc_lambda_with_workers(&pair, 200_000, 42, workers).unwrap();
            assert_eq!(base.value.to_bits(), other.value.to_bits());
            assert_eq!(base.std_error.to_bits(), other.std_error.to_bits());
            assert_eq!(base.redraws, other.redraws);
        }
    }

    #[test]
    fn estimator_depends_on_seed() {
        let pair = cube_pair_gap1();
        let a = mc_lambda(&pair, 100_000, 1).unwrap();
        let b = mc_lambda(&pair, 100_000, 2).unwrap();
        assert_ne!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn tensor_zz_matches_lambda_channel_bitwise() {
        let pair = cube_pair_gap1();
        let est = mc_lambda_with_workers(&pair, 300_000, 9, 4).unwrap();
        let tensor = mc_tensor_with_workers(&pair, 300_000, 9, 2).unwrap();
        assert_eq!(est.value.to_bits(), tensor.entry(2, 2).abs().to_bits());
        assert_eq!(
            est.std_error.to_bits(),
            tensor.std_error_entry(2, 2).to_bits()
        );
    }

    #[test]
    fn tensor_is_symmetric_and_near_traceless() {
        let pair = cube_pair_gap1();
        let t = mc_tensor(&pair, 400_000, 5).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(t.entry(r, c).to_bits(), t.entry(c, r).to_bits());
            }
        }
        assert!(
            t.trace().abs() <= 3.0 * t.trace_std_error(),
            "trace {} vs σ {}",
            t.trace(),
            t.trace_std_error()
        );
    }

    #[test]
    fn principal_direction_diagonal() {
        let t = TidalTensor::from_upper([-0.5, 0.0, 0.0, -0.5, 0.0, 1.0]);
        let (n, lambda) = principal_direction(&t);
        assert!((lambda - 1.0).abs() < 1e-14);
        assert!(n.z > 0.999_999_999);
    }

    #[test]
    fn principal_direction_zero_tensor() {
        let t = TidalTensor::from_upper([0.0; 6]);
        let (n, lambda) = principal_direction(&t);
        assert_eq!(lambda, 0.0);
        assert_eq!((n.x, n.y, n.z), (0.0, 0.0, 1.0));
    }

    #[test]
    fn principal_direction_negative_dominant_eigenvalue() {
        // Spectral radius must consider |eigenvalue|, not the signed max.
        let t = TidalTensor::from_upper([-2.0, 0.0, 0.0, 1.0, 0.0, 0.5]);
        let (n, lambda) = principal_direction(&t);
        assert!((lambda - 2.0).abs() < 1e-14);
        assert!(n.x.abs() > 0.999_999_999);
        assert!(n.x > 0.0, "sign convention: leading component positive");
    }

    #[test]
    fn quadratic_form_never_exceeds_principal_value() {
        let t = TidalTensor::from_upper([0.3, -0.1, 0.25, -0.7, 0.05, 0.4]);
        let (_, lambda) = principal_direction(&t);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let v = Point3::new(
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            );
            let n = v.normalized().unwrap();
            assert!(t.quadratic_form(n).abs() <= lambda + 1e-12);
        }
    }
}
