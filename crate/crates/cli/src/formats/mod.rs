//! On-disk formats: PFM float images, P5 PGM masks and JSON line sidecars.
//!
//! Every write goes to a temporary file in the target directory first and is
//! then renamed into place, so readers never see a partial file.

pub mod pfm;
pub mod pgm;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use lineshape::reconstruct::PostprocessConfig;
use lineshape::simulate::SimulationConfig;
use lineshape::{BinaryMask, HoughShape, HoughSpace, ImageGrid, Line};

use crate::CliError;

/// Malformed file contents.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
}

impl FormatError {
    pub(crate) fn parse(offset: usize, reason: impl Into<String>) -> Self {
        Self::Parse {
            offset,
            reason: reason.into(),
        }
    }
}

/// Splits a Netpbm-style header into `count` whitespace-separated tokens with
/// their byte offsets, skipping `#` comments. Returns the tokens and the
/// offset of the first data byte (after the single whitespace byte that
/// terminates the last token).
pub(crate) fn parse_header(bytes: &[u8], count: usize) -> Result<(Vec<(usize, String)>, usize), FormatError> {
    let mut tokens = Vec::with_capacity(count);
    let mut i = 0;
    while tokens.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        if i >= bytes.len() {
            return Err(FormatError::parse(i, "truncated header"));
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            if !bytes[i].is_ascii_graphic() {
                return Err(FormatError::parse(i, "non-ASCII byte in header"));
            }
            i += 1;
        }
        let text = String::from_utf8_lossy(&bytes[start..i]).into_owned();
        tokens.push((start, text));
    }
    if i >= bytes.len() {
        return Err(FormatError::parse(i, "missing whitespace after header"));
    }
    Ok((tokens, i + 1))
}

pub(crate) fn parse_dim(token: &(usize, String)) -> Result<usize, FormatError> {
    token
        .1
        .parse::<usize>()
        .ok()
        .filter(|&d| d > 0 && d <= 1 << 16)
        .ok_or_else(|| FormatError::parse(token.0, format!("bad dimension {:?}", token.1)))
}

/// Writes `bytes` to `path` atomically (temporary sibling, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let io = |e| CliError::io(path, e);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    fs::rename(&tmp, path).map_err(io)
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn write_image(path: &Path, img: &ImageGrid) -> Result<(), CliError> {
    write_atomic(path, &pfm::encode(img.width(), img.height(), img.data()))
}

/// Raw PFM contents as `(width, height, values)`.
pub fn read_pfm(path: &Path) -> Result<(usize, usize, Vec<f64>), CliError> {
    pfm::decode(&read(path)?).map_err(|e| CliError::format(path, e))
}

pub fn read_image(path: &Path, pixel_spacing: f64) -> Result<ImageGrid, CliError> {
    let (w, h, data) = read_pfm(path)?;
    Ok(ImageGrid::new(w, h, pixel_spacing, data)?)
}

pub fn write_mask(path: &Path, mask: &BinaryMask) -> Result<(), CliError> {
    write_atomic(path, &pgm::encode(mask))
}

pub fn read_mask(path: &Path) -> Result<BinaryMask, CliError> {
    pgm::decode(&read(path)?).map_err(|e| CliError::format(path, e))
}

/// Hough spaces are stored as a PFM with `n_rho` columns and `n_theta` rows;
/// the ρ range lives in the JSON sidecar.
pub fn write_hough(path: &Path, h: &HoughSpace) -> Result<(), CliError> {
    let s = h.shape();
    write_atomic(path, &pfm::encode(s.n_rho, s.n_theta, h.data()))
}

pub fn read_hough(path: &Path, shape: &HoughQuantization) -> Result<HoughSpace, CliError> {
    let (w, h, data) = read_pfm(path)?;
    hough_from_pfm(path, w, h, data, shape)
}

pub(crate) fn hough_from_pfm(
    path: &Path,
    w: usize,
    h: usize,
    data: Vec<f64>,
    shape: &HoughQuantization,
) -> Result<HoughSpace, CliError> {
    let shape = shape.to_shape()?;
    if (w, h) != (shape.n_rho, shape.n_theta) {
        return Err(CliError::Usage(format!(
            "{}: {w}x{h} does not match sidecar quantization {}x{}",
            path.display(),
            shape.n_rho,
            shape.n_theta
        )));
    }
    Ok(HoughSpace::new(shape, data)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Json {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_slice(&read(path)?).map_err(|e| CliError::Json {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// A line as stored on disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineRecord {
    pub theta_rad: f64,
    pub rho_px: f64,
}

impl From<&Line> for LineRecord {
    fn from(l: &Line) -> Self {
        Self {
            theta_rad: l.theta,
            rho_px: l.rho,
        }
    }
}

impl LineRecord {
    pub fn to_line(self) -> Result<Line, CliError> {
        Ok(Line::new(self.theta_rad, self.rho_px)?)
    }
}

/// Hough quantization metadata for a stored accumulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoughQuantization {
    pub n_theta: usize,
    pub n_rho: usize,
    pub rho_min: f64,
    pub rho_max: f64,
}

impl From<&HoughShape> for HoughQuantization {
    fn from(s: &HoughShape) -> Self {
        Self {
            n_theta: s.n_theta,
            n_rho: s.n_rho,
            rho_min: s.rho_min,
            rho_max: s.rho_max,
        }
    }
}

impl HoughQuantization {
    pub fn to_shape(self) -> Result<HoughShape, CliError> {
        Ok(HoughShape::new(self.n_theta, self.n_rho, self.rho_min, self.rho_max)?)
    }
}

/// `lines_<id>.json` of a generated sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleLines {
    pub id: usize,
    pub width: usize,
    pub height: usize,
    pub pixel_spacing: f64,
    pub lines: Vec<LineRecord>,
    pub roi_reference_point: (f64, f64),
    pub hough: HoughQuantization,
    pub config: SimulationConfig,
}

/// Predicted lines written by `detect`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedLines {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<usize>,
    pub width: usize,
    pub height: usize,
    pub pixel_spacing: f64,
    pub lines: Vec<LineRecord>,
    /// Fill seed used for the predicted mask.
    pub seed: (f64, f64),
    pub hough: HoughQuantization,
    /// `"classical"` for raw images, `"supplied"` for mask + Hough inputs.
    pub source: String,
    pub postprocess: PostprocessConfig,
}

/// The fields every line sidecar shares; enough for evaluation.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct LinesHeader {
    pub width: usize,
    pub height: usize,
    pub pixel_spacing: f64,
    pub lines: Vec<LineRecord>,
    pub hough: HoughQuantization,
}

/// File names of one dataset sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: usize,
    pub image: String,
    pub mask: String,
    pub hough: String,
    pub lines: String,
}

impl ManifestEntry {
    pub fn for_id(id: usize) -> Self {
        Self {
            id,
            image: format!("img_{id}.pfm"),
            mask: format!("mask_{id}.pgm"),
            hough: format!("hough_{id}.pfm"),
            lines: format!("lines_{id}.json"),
        }
    }
}

/// `manifest.json` of a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub count: usize,
    pub seed: u64,
    pub config: SimulationConfig,
    /// File names of external base images, used round-robin; empty for
    /// procedural phantoms.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_images: Vec<String>,
    pub samples: Vec<ManifestEntry>,
}
