use std::time::Instant;

use rayon::prelude::*;

use super::experiment::{build_quaternion_model, ModelParams};
use crate::algebra::{norm, Hypercomplex, Octonion, Quaternion, Real};
use crate::error::{check_len, HprError, Result};
use crate::rng::{derive_seed, stream};
use crate::sensing::{measure, DenseModel, ModelKind};
use crate::solvers::{
    concat_wf, oct_factor, owf, phase_factor, qtwf, qwf, spectral_init, SolverConfig, SolverKind,
};

/// A multi-channel image stored plane by plane: sample `(c, row, col)` is at
/// `c * width * height + row * width + col`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(HprError::InvalidParameter(format!(
                "image dimensions must be positive, got {width}x{height}x{channels}"
            )));
        }
        check_len(width * height * channels, data.len())?;
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Result<Self> {
        Self::new(
            width,
            height,
            channels,
            vec![0.0; width * height * channels],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let size = self.width * self.height;
        &self.data[c * size..(c + 1) * size]
    }

    pub fn get(&self, c: usize, row: usize, col: usize) -> f64 {
        self.data[(c * self.height + row) * self.width + col]
    }

    pub fn set(&mut self, c: usize, row: usize, col: usize, v: f64) {
        self.data[(c * self.height + row) * self.width + col] = v;
    }
}

/// Smooth RGB test image in `[0, 1]`: horizontal, vertical and diagonal ramps.
pub fn synthetic_gradient_rgb(width: usize, height: usize) -> Result<Image> {
    let mut img = Image::zeros(width, height, 3)?;
    let fx = |c: usize| c as f64 / (width.max(2) - 1) as f64;
    let fy = |r: usize| r as f64 / (height.max(2) - 1) as f64;
    for r in 0..height {
        for c in 0..width {
            img.set(0, r, c, 0.1 + 0.8 * fx(c));
            img.set(1, r, c, 0.1 + 0.8 * fy(r));
            img.set(2, r, c, 0.9 - 0.4 * (fx(c) + fy(r)));
        }
    }
    Ok(img)
}

/// Eight-band test image in `[0, 1]` with a different smooth pattern per band.
pub fn synthetic_msi(width: usize, height: usize) -> Result<Image> {
    let mut img = Image::zeros(width, height, 8)?;
    for b in 0..8 {
        let (kx, ky) = (0.15 * (b + 1) as f64, 0.1 * (8 - b) as f64);
        for r in 0..height {
            for c in 0..width {
                let v = 0.5 + 0.4 * (kx * c as f64 + ky * r as f64 + b as f64).sin();
                img.set(b, r, c, v);
            }
        }
    }
    Ok(img)
}

/// How pixels become hypercomplex samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelMapping {
    /// RGB as the `i, j, k` parts of a pure quaternion.
    PureQuaternion,
    /// Eight bands as the eight octonion coefficients.
    Octonion,
}

impl ChannelMapping {
    pub fn for_channels(channels: usize) -> Result<Self> {
        match channels {
            3 => Ok(ChannelMapping::PureQuaternion),
            8 => Ok(ChannelMapping::Octonion),
            c => Err(HprError::InvalidParameter(format!(
                "unsupported channel count {c}; expected 3 (RGB) or 8 (spectral bands)"
            ))),
        }
    }
}

/// Per-patch recovery method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSolver {
    Qwf,
    Qtwf,
    Owf,
    /// Real Wirtinger flow on every channel separately, with the measurement
    /// budget split evenly between channels.
    PerBandReal,
    /// Returns the ground truth; checks the patch and scoring plumbing.
    Oracle,
}

impl ImageSolver {
    /// Maps a command-line solver id; `concat-wf` becomes the per-band baseline.
    pub fn from_kind(kind: SolverKind) -> Self {
        match kind {
            SolverKind::Qwf => ImageSolver::Qwf,
            SolverKind::Qtwf => ImageSolver::Qtwf,
            SolverKind::Owf => ImageSolver::Owf,
            SolverKind::ConcatWf => ImageSolver::PerBandReal,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageTask {
    pub image: Image,
    /// Patch side; the image is zero-padded to a multiple and cropped back.
    pub patch: usize,
    /// Sensing model for quaternion patches. Octonion patches always use
    /// dense Gaussian sensing.
    pub model: ModelKind,
    pub m_over_n: f64,
    pub params: ModelParams,
    pub solver: ImageSolver,
    pub config: SolverConfig,
    /// Largest representable value, used as the PSNR peak and clamp bound.
    pub peak: f64,
    pub seed: u64,
}

impl ImageTask {
    pub fn new(image: Image, solver: ImageSolver) -> Self {
        ImageTask {
            image,
            patch: 32,
            model: ModelKind::CodedFourier,
            m_over_n: 15.0,
            params: ModelParams::default(),
            solver,
            config: SolverConfig::default(),
            peak: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageRecovery {
    /// Aligned reconstruction clamped to `[0, peak]`.
    pub image: Image,
    /// `f64::INFINITY` when the reconstruction is exact.
    pub psnr_db: f64,
    /// `dist / |x|` per patch in row-major patch order (`dist` when `x = 0`).
    pub per_patch_rel_dist: Vec<f64>,
    pub seconds: f64,
}

impl ImageRecovery {
    pub fn exact(&self) -> bool {
        self.psnr_db == f64::INFINITY
    }
}

/// Patch-wise sensing and recovery. Every patch is aligned to its ground
/// truth through the distance minimiser before stitching, then the image is
/// scored by PSNR over all channels.
pub fn recover_image(task: &ImageTask) -> Result<ImageRecovery> {
    let started = Instant::now();
    let img = &task.image;
    let mapping = ChannelMapping::for_channels(img.channels())?;
    let p = task.patch;
    if p == 0 {
        return Err(HprError::InvalidParameter(
            "patch size must be positive".into(),
        ));
    }
    if !(task.peak > 0.0 && task.peak.is_finite()) {
        return Err(HprError::InvalidParameter("peak must be positive".into()));
    }
    match (mapping, task.solver) {
        (ChannelMapping::PureQuaternion, ImageSolver::Owf) => {
            return Err(HprError::InvalidParameter(
                "owf needs an 8-band image".into(),
            ));
        }
        (ChannelMapping::Octonion, ImageSolver::Qwf | ImageSolver::Qtwf) => {
            return Err(HprError::InvalidParameter(
                "quaternion solvers need an RGB image".into(),
            ));
        }
        _ => {}
    }
    task.config.validate()?;
    let (cols, rows) = (img.width().div_ceil(p), img.height().div_ceil(p));
    let patches: Vec<Vec<Vec<f64>>> = (0..rows * cols)
        .map(|k| extract(img, p, k / cols, k % cols))
        .collect();

    let recovered: Vec<Result<(Vec<Vec<f64>>, f64)>> = patches
        .par_iter()
        .enumerate()
        .map(|(k, truth)| {
            let seed = |s: u64| derive_seed(task.seed, &[k as u64, s]);
            recover_patch(task, mapping, truth, &seed)
        })
        .collect();

    let mut out = Image::zeros(img.width(), img.height(), img.channels())?;
    let mut dists = Vec::with_capacity(recovered.len());
    for (k, res) in recovered.into_iter().enumerate() {
        let (bands, d) = res?;
        dists.push(d);
        let (pr, pc) = (k / cols, k % cols);
        for (c, band) in bands.iter().enumerate() {
            for (i, &v) in band.iter().enumerate() {
                let (r, col) = (pr * p + i / p, pc * p + i % p);
                if r < img.height() && col < img.width() {
                    out.set(c, r, col, v.clamp(0.0, task.peak));
                }
            }
        }
    }
    Ok(ImageRecovery {
        psnr_db: psnr(&out, img, task.peak)?,
        image: out,
        per_patch_rel_dist: dists,
        seconds: started.elapsed().as_secs_f64(),
    })
}

/// Channel planes of patch `(pr, pc)`, zero outside the image.
fn extract(img: &Image, p: usize, pr: usize, pc: usize) -> Vec<Vec<f64>> {
    (0..img.channels())
        .map(|c| {
            (0..p * p)
                .map(|i| {
                    let (r, col) = (pr * p + i / p, pc * p + i % p);
                    if r < img.height() && col < img.width() {
                        img.get(c, r, col)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Recovers one patch and returns its aligned channel planes and relative distance.
fn recover_patch(
    task: &ImageTask,
    mapping: ChannelMapping,
    truth: &[Vec<f64>],
    seed: &dyn Fn(u64) -> u64,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = task.patch * task.patch;
    let config = SolverConfig {
        seed: seed(stream::INIT),
        ..task.config.clone()
    };
    if task.solver == ImageSolver::PerBandReal {
        return per_band(task, truth, &config, seed);
    }
    match mapping {
        ChannelMapping::PureQuaternion => {
            let x: Vec<Quaternion> = (0..n)
                .map(|i| Quaternion::pure(truth[0][i], truth[1][i], truth[2][i]))
                .collect();
            let est = match task.solver {
                ImageSolver::Oracle => x.clone(),
                _ => {
                    let model = build_quaternion_model(
                        task.model,
                        &task.params,
                        n,
                        task.m_over_n,
                        seed(stream::SENSING),
                    )?;
                    let y = measure(&model, &x)?;
                    let config = SolverConfig {
                        pure_imaginary: true,
                        ..config
                    };
                    let x0 = spectral_init(&model, &y, &config)?.estimate;
                    if task.solver == ImageSolver::Qwf {
                        qwf(&model, &y, &config, &x0)?.estimate
                    } else {
                        qtwf(&model, &y, &config, &x0)?.estimate
                    }
                }
            };
            let aligned = align(est, &x, task.solver, |e, x| phase_factor(e, x).conj());
            let planes = vec![
                aligned.iter().map(|v| v.b).collect(),
                aligned.iter().map(|v| v.c).collect(),
                aligned.iter().map(|v| v.d).collect(),
            ];
            Ok((planes, rel_dist(&aligned, &x)))
        }
        ChannelMapping::Octonion => {
            let x: Vec<Octonion> = (0..n)
                .map(|i| Octonion(std::array::from_fn(|b| truth[b][i])))
                .collect();
            let est = match task.solver {
                ImageSolver::Oracle => x.clone(),
                _ => {
                    let m = (task.m_over_n * n as f64).round() as usize;
                    let model = DenseModel::<Octonion>::gaussian(m, n, seed(stream::SENSING))?;
                    let y = measure(&model, &x)?;
                    let x0 = spectral_init(&model, &y, &config)?.estimate;
                    owf(&model, &y, &config, &x0)?.estimate
                }
            };
            // (x w) conj(w) = x for unit w by alternativity.
            let aligned = align(est, &x, task.solver, |e, x| oct_factor(e, x).conj());
            let planes = (0..8)
                .map(|b| aligned.iter().map(|v| v.0[b]).collect())
                .collect();
            Ok((planes, rel_dist(&aligned, &x)))
        }
    }
}

fn per_band(
    task: &ImageTask,
    truth: &[Vec<f64>],
    config: &SolverConfig,
    seed: &dyn Fn(u64) -> u64,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = truth[0].len();
    let bands = truth.len();
    let m = ((task.m_over_n * n as f64) / bands as f64).round().max(1.0) as usize;
    let mut planes = Vec::with_capacity(bands);
    let (mut err, mut total) = (0.0, 0.0);
    for (b, band) in truth.iter().enumerate() {
        let x: Vec<Real> = band.iter().copied().map(Real).collect();
        let model =
            DenseModel::<Real>::gaussian(m, n, derive_seed(seed(stream::BASELINE), &[b as u64]))?;
        let y = measure(&model, &x)?;
        let config = SolverConfig {
            seed: derive_seed(config.seed, &[b as u64]),
            ..config.clone()
        };
        let x0 = spectral_init(&model, &y, &config)?.estimate;
        let est = concat_wf(&model, &y, &config, &x0)?.estimate;
        let w = phase_factor(&est, &x).0;
        let aligned: Vec<f64> = est.iter().map(|v| v.0 * w).collect();
        err += aligned
            .iter()
            .zip(band)
            .map(|(a, t)| (a - t).powi(2))
            .sum::<f64>();
        total += band.iter().map(|t| t * t).sum::<f64>();
        planes.push(aligned);
    }
    let d = err.sqrt();
    Ok((planes, if total > 0.0 { d / total.sqrt() } else { d }))
}

/// Right-multiplies by the conjugate of the distance minimiser. The oracle
/// output is already aligned and is kept bit-exact.
fn align<T: Hypercomplex>(
    est: Vec<T>,
    x: &[T],
    solver: ImageSolver,
    factor: impl Fn(&[T], &[T]) -> T,
) -> Vec<T> {
    if solver == ImageSolver::Oracle {
        return est;
    }
    let w = factor(&est, x);
    est.into_iter().map(|v| v * w).collect()
}

fn rel_dist<T: Hypercomplex>(aligned: &[T], x: &[T]) -> f64 {
    let d = aligned
        .iter()
        .zip(x)
        .map(|(&a, &b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let nx = norm(x);
    if nx > 0.0 {
        d / nx
    } else {
        d
    }
}

/// `10 log10(peak^2 / mse)` over every sample; `f64::INFINITY` for identical images.
pub fn psnr(estimate: &Image, truth: &Image, peak: f64) -> Result<f64> {
    if (estimate.width(), estimate.height(), estimate.channels())
        != (truth.width(), truth.height(), truth.channels())
    {
        return Err(HprError::InvalidParameter(
            "PSNR of images with different shapes".into(),
        ));
    }
    let mse = estimate
        .data()
        .iter()
        .zip(truth.data())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / truth.data().len() as f64;
    Ok(if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    })
}
