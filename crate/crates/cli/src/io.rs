//! Image files, result tables and run manifests.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context, Result};
use hpr_core::harness::{synthetic_gradient_rgb, synthetic_msi, ExperimentRecord, Image};
use image::{DynamicImage, ImageBuffer, Luma, Rgb};
use serde::{Deserialize, Serialize};

/// First token of the raw spectral-cube header line.
pub const MSI_MAGIC: &str = "HPRMSI";
pub const MSI_BANDS: usize = 8;

/// A decoded input and the value that maps to full scale.
#[derive(Debug, Clone)]
pub struct LoadedImage {
    pub image: Image,
    /// Full-scale value of the source encoding after normalisation.
    pub peak: Option<f64>,
}

/// Reads an RGB PNG/PPM, a directory of `band_0.png` .. `band_7.png`, a raw
/// `HPRMSI` cube, or a `synthetic-rgb:WxH` / `synthetic-msi:WxH` test image.
///
/// Integer encodings are scaled to `[0, 1]`; raw cubes are taken as is.
pub fn load_image(spec: &str) -> Result<LoadedImage> {
    if let Some(dims) = spec.strip_prefix("synthetic-rgb:") {
        let (w, h) = parse_dims(dims)?;
        return Ok(LoadedImage {
            image: synthetic_gradient_rgb(w, h)?,
            peak: Some(1.0),
        });
    }
    if let Some(dims) = spec.strip_prefix("synthetic-msi:") {
        let (w, h) = parse_dims(dims)?;
        return Ok(LoadedImage {
            image: synthetic_msi(w, h)?,
            peak: Some(1.0),
        });
    }
    let path = Path::new(spec);
    if path.is_dir() {
        return Ok(LoadedImage {
            image: read_band_dir(path)?,
            peak: Some(1.0),
        });
    }
    if is_raw_msi(path)? {
        return Ok(LoadedImage {
            image: read_raw_msi(path)?,
            peak: None,
        });
    }
    let img = image::open(path).with_context(|| format!("decoding {}", path.display()))?;
    Ok(LoadedImage {
        image: from_rgb(&img)?,
        peak: Some(1.0),
    })
}

fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| anyhow!("expected WxH, got `{s}`"))?;
    Ok((w.parse()?, h.parse()?))
}

fn is_sixteen_bit(img: &DynamicImage) -> bool {
    img.color().bytes_per_pixel() / img.color().channel_count().max(1) >= 2
}

fn from_rgb(img: &DynamicImage) -> Result<Image> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut out = Image::zeros(w, h, 3)?;
    if is_sixteen_bit(img) {
        for (x, y, p) in img.to_rgb16().enumerate_pixels() {
            for c in 0..3 {
                out.set(c, y as usize, x as usize, f64::from(p[c]) / 65535.0);
            }
        }
    } else {
        for (x, y, p) in img.to_rgb8().enumerate_pixels() {
            for c in 0..3 {
                out.set(c, y as usize, x as usize, f64::from(p[c]) / 255.0);
            }
        }
    }
    Ok(out)
}

fn band_path(dir: &Path, b: usize) -> PathBuf {
    dir.join(format!("band_{b}.png"))
}

fn read_band_dir(dir: &Path) -> Result<Image> {
    let mut bands = Vec::with_capacity(MSI_BANDS);
    for b in 0..MSI_BANDS {
        let p = band_path(dir, b);
        let img = image::open(&p).with_context(|| format!("decoding {}", p.display()))?;
        bands.push(img);
    }
    let (w, h) = (bands[0].width(), bands[0].height());
    ensure!(
        bands.iter().all(|b| b.width() == w && b.height() == h),
        "bands in {} differ in size",
        dir.display()
    );
    let mut data = Vec::with_capacity(MSI_BANDS * (w * h) as usize);
    for b in &bands {
        if is_sixteen_bit(b) {
            data.extend(b.to_luma16().pixels().map(|p| f64::from(p[0]) / 65535.0));
        } else {
            data.extend(b.to_luma8().pixels().map(|p| f64::from(p[0]) / 255.0));
        }
    }
    Ok(Image::new(w as usize, h as usize, MSI_BANDS, data)?)
}

fn is_raw_msi(path: &Path) -> Result<bool> {
    let mut head = [0u8; 6];
    let mut f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let n = f.read(&mut head)?;
    Ok(n == head.len() && head == *MSI_MAGIC.as_bytes())
}

/// Header line `HPRMSI v1 W H BANDS`, then `W*H*BANDS` little-endian `f64`
/// in band-planar, row-major order.
pub fn read_raw_msi(path: &Path) -> Result<Image> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut r = BufReader::new(f);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [magic, version, w, h, bands] = fields[..] else {
        bail!("malformed header `{}`", header.trim_end());
    };
    ensure!(magic == MSI_MAGIC, "not a {MSI_MAGIC} file");
    ensure!(version == "v1", "unsupported version `{version}`");
    let (w, h, bands): (usize, usize, usize) = (w.parse()?, h.parse()?, bands.parse()?);
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    let expected = w * h * bands * 8;
    ensure!(
        payload.len() == expected,
        "payload is {} bytes, header implies {expected}",
        payload.len()
    );
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(Image::new(w, h, bands, data)?)
}

pub fn write_raw_msi(path: &Path, img: &Image) -> Result<()> {
    let mut buf = format!(
        "{MSI_MAGIC} v1 {} {} {}\n",
        img.width(),
        img.height(),
        img.channels()
    )
    .into_bytes();
    for v in img.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

fn quantize(v: f64, peak: f64) -> u8 {
    (v / peak * 255.0).round().clamp(0.0, 255.0) as u8
}

/// 8-bit PNG of an RGB image, values scaled by `peak`.
pub fn write_rgb_png(path: &Path, img: &Image, peak: f64) -> Result<()> {
    let buf = ImageBuffer::from_fn(img.width() as u32, img.height() as u32, |x, y| {
        Rgb([0, 1, 2].map(|c| quantize(img.get(c, y as usize, x as usize), peak)))
    });
    buf.save(path)
        .with_context(|| format!("writing {}", path.display()))
}

/// One 8-bit grayscale PNG per band in `dir`.
pub fn write_band_dir(dir: &Path, img: &Image, peak: f64) -> Result<()> {
    fs::create_dir_all(dir)?;
    for b in 0..img.channels() {
        let buf = ImageBuffer::from_fn(img.width() as u32, img.height() as u32, |x, y| {
            Luma([quantize(img.get(b, y as usize, x as usize), peak)])
        });
        let p = band_path(dir, b);
        buf.save(&p)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// One row of `phase_transition.csv` / `snr_curve.csv`.
///
/// Cells that could not be run have empty statistics; `mean_seconds` is empty
/// unless timing was requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub solver: String,
    pub algebra: String,
    pub n: usize,
    pub m_over_n: f64,
    pub snr_db: f64,
    pub trials: usize,
    pub success_rate: Option<f64>,
    pub mean_rel_dist: Option<f64>,
    pub mean_iters: Option<f64>,
    pub mean_seconds: Option<f64>,
    pub seed: u64,
}

impl CsvRow {
    pub fn from_record(r: &ExperimentRecord, timing: bool) -> Self {
        let stat = |v: f64| (r.trials > 0 && v.is_finite()).then_some(v);
        CsvRow {
            solver: r.solver.to_string(),
            algebra: r.algebra.to_string(),
            n: r.n,
            m_over_n: r.m_over_n,
            snr_db: r.snr_db,
            trials: r.trials,
            success_rate: stat(r.success_rate),
            mean_rel_dist: stat(r.mean_rel_dist),
            mean_iters: stat(r.mean_iters),
            mean_seconds: if timing { stat(r.mean_seconds) } else { None },
            seed: r.seed,
        }
    }
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `metrics.json` of a recovery run. `psnr_db` is `null` for an exact
/// reconstruction, in which case `exact` is true.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub psnr_db: Option<f64>,
    pub exact: bool,
    pub per_patch_rel_dist: Vec<f64>,
    pub seconds: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}
