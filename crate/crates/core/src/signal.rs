//! Sample vectors and the operations that produce or reshape them.

use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::rng::rng_from_seed;
use crate::{Error, Result};

pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 15_000.0;
pub const DEFAULT_SEGMENT_LEN: usize = 256;
/// Smallest peak amplitude accepted for a synthetic spike, in microvolts.
pub const MIN_SPIKE_AMPLITUDE_UV: f64 = 250.0;
pub const DEFAULT_SPIKE_HALF_WIDTH: usize = 30;

/// Where a signal came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Synthetic { seed: u64 },
    File { path: PathBuf },
}

/// A finite, real-valued sample vector in microvolts.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVector {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    origin: Origin,
}

impl SignalVector {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64, origin: Origin) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid(
                "samples",
                format!("need at least 2 samples, got {}", samples.len()),
            ));
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid(
                "sample_rate_hz",
                format!("must be positive, got {sample_rate_hz}"),
            ));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            origin,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Window `[center - half_width, center + half_width)` clipped to the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeWindow {
    pub center_index: usize,
    pub half_width: usize,
}

impl SpikeWindow {
    pub fn new(center_index: usize, half_width: usize) -> Self {
        Self {
            center_index,
            half_width,
        }
    }

    /// Clipped sample range for a signal of length `n`.
    pub fn range(&self, n: usize) -> Result<Range<usize>> {
        if self.half_width == 0 {
            return Err(Error::invalid("half_width", "must be positive"));
        }
        let start = self.center_index.saturating_sub(self.half_width);
        let end = self.center_index.saturating_add(self.half_width).min(n);
        if start >= end {
            return Err(Error::invalid(
                "window",
                format!(
                    "window around {} (half width {}) is empty for length {n}",
                    self.center_index, self.half_width
                ),
            ));
        }
        Ok(start..end)
    }
}

/// Parameters of the biphasic synthetic spike.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpikeTemplateParams {
    pub amplitude_uv: f64,
    /// Standard deviation of the positive (depolarisation) lobe, in samples.
    pub depol_width: f64,
    /// Standard deviation of the negative (repolarisation) lobe, in samples.
    pub repol_width: f64,
    pub noise_sigma_uv: f64,
    pub seed: u64,
}

impl Default for SpikeTemplateParams {
    fn default() -> Self {
        Self {
            amplitude_uv: 300.0,
            depol_width: 2.5,
            repol_width: 5.0,
            noise_sigma_uv: 5.0,
            seed: 0,
        }
    }
}

impl SpikeTemplateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude_uv >= MIN_SPIKE_AMPLITUDE_UV && self.amplitude_uv.is_finite()) {
            return Err(Error::invalid(
                "amplitude_uv",
                format!(
                    "must be at least {MIN_SPIKE_AMPLITUDE_UV} uV, got {}",
                    self.amplitude_uv
                ),
            ));
        }
        for (name, w) in [("depol_width", self.depol_width), ("repol_width", self.repol_width)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {w}")));
            }
        }
        if !(self.noise_sigma_uv >= 0.0 && self.noise_sigma_uv.is_finite()) {
            return Err(Error::invalid(
                "noise_sigma_uv",
                format!("must be non-negative, got {}", self.noise_sigma_uv),
            ));
        }
        Ok(())
    }
}

/// Ratio of the negative lobe depth to the positive lobe height.
const REPOL_DEPTH_RATIO: f64 = 0.5;

/// Synthesises a biphasic spike centred at `n / 2` plus white Gaussian noise.
///
/// The template is a positive Gaussian lobe at the centre followed by a
/// shallower, wider negative lobe `depol_width + repol_width` samples later,
/// rescaled so that its maximum equals `amplitude_uv`. Peak-to-peak is
/// therefore strictly above the amplitude.
pub fn generate_spike(n: usize, params: &SpikeTemplateParams) -> Result<SignalVector> {
    params.validate()?;
    let min_len = 4.0 * (params.depol_width + params.repol_width);
    if (n as f64) < min_len {
        return Err(Error::invalid(
            "n",
            format!(
                "{n} samples cannot hold the spike template; need at least {}",
                min_len.ceil()
            ),
        ));
    }

    let center = (n / 2) as f64;
    let neg_center = center + params.depol_width + params.repol_width;
    let mut samples: Vec<f64> = (0..n)
        .map(|j| {
            let t = j as f64;
            let pos = (-(t - center).powi(2) / (2.0 * params.depol_width.powi(2))).exp();
            let neg = (-(t - neg_center).powi(2) / (2.0 * params.repol_width.powi(2))).exp();
            pos - REPOL_DEPTH_RATIO * neg
        })
        .collect();
    let peak = samples.iter().cloned().fold(f64::MIN, f64::max);
    let scale = params.amplitude_uv / peak;
    samples.iter_mut().for_each(|v| *v *= scale);

    if params.noise_sigma_uv > 0.0 {
        let mut rng = rng_from_seed(params.seed);
        for v in samples.iter_mut() {
            let z: f64 = StandardNormal.sample(&mut rng);
            *v += params.noise_sigma_uv * z;
        }
    }

    SignalVector::new(samples, DEFAULT_SAMPLE_RATE_HZ, Origin::Synthetic { seed: params.seed })
}

/// On-disk sample encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFormat {
    Csv,
    F64le,
    F32le,
}

impl SampleFormat {
    pub const ALL: [SampleFormat; 3] = [SampleFormat::Csv, SampleFormat::F64le, SampleFormat::F32le];

    pub fn name(self) -> &'static str {
        match self {
            SampleFormat::Csv => "csv",
            SampleFormat::F64le => "f64le",
            SampleFormat::F32le => "f32le",
        }
    }
}

impl fmt::Display for SampleFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid("format", format!("unknown format `{s}`; expected csv, f64le or f32le")))
    }
}

pub fn load_signal(path: &Path, format: SampleFormat, sample_rate_hz: f64) -> Result<SignalVector> {
    let bytes = fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let samples = match format {
        SampleFormat::Csv => parse_csv(path, &bytes)?,
        SampleFormat::F64le => parse_packed::<8>(path, &bytes, f64::from_le_bytes)?,
        SampleFormat::F32le => parse_packed::<4>(path, &bytes, |b| f32::from_le_bytes(b) as f64)?,
    };
    if samples.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    SignalVector::new(
        samples,
        sample_rate_hz,
        Origin::File {
            path: path.to_path_buf(),
        },
    )
}

fn parse_csv(path: &Path, bytes: &[u8]) -> Result<Vec<f64>> {
    let text = String::from_utf8_lossy(bytes);
    let mut samples = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => samples.push(v),
            // A single header line is tolerated before any data.
            Err(_) if !seen_content => {}
            Err(_) => {
                return Err(Error::ParseLine {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    content: line.to_string(),
                })
            }
        }
        seen_content = true;
    }
    Ok(samples)
}

fn parse_packed<const W: usize>(path: &Path, bytes: &[u8], decode: impl Fn([u8; W]) -> f64) -> Result<Vec<f64>> {
    let trailing = bytes.len() % W;
    if trailing != 0 {
        return Err(Error::TruncatedBinary {
            path: path.to_path_buf(),
            offset: bytes.len() - trailing,
            trailing,
        });
    }
    Ok(bytes
        .chunks_exact(W)
        .map(|c| decode(c.try_into().expect("chunk width")))
        .collect())
}

/// Writes `signal` in `format`. CSV values use the shortest round-trip representation.
pub fn save_signal(signal: &SignalVector, path: &Path, format: SampleFormat) -> Result<()> {
    let bytes: Vec<u8> = match format {
        SampleFormat::Csv => signal
            .samples()
            .iter()
            .map(|v| format!("{v}\n"))
            .collect::<String>()
            .into_bytes(),
        SampleFormat::F64le => signal.samples().iter().flat_map(|v| v.to_le_bytes()).collect(),
        SampleFormat::F32le => signal
            .samples()
            .iter()
            .flat_map(|v| (*v as f32).to_le_bytes())
            .collect(),
    };
    fs::write(path, bytes).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Contiguous slice `[offset, offset + n)`; rate and origin are preserved.
pub fn segment(signal: &SignalVector, n: usize, offset: usize) -> Result<SignalVector> {
    let end = offset.saturating_add(n);
    if end > signal.len() {
        return Err(Error::OutOfRange {
            offset,
            end,
            available: signal.len(),
        });
    }
    SignalVector::new(
        signal.samples[offset..end].to_vec(),
        signal.sample_rate_hz,
        signal.origin.clone(),
    )
}

/// Index of the largest `|sample|`, lowest index on ties.
pub fn detect_spike_center(signal: &SignalVector, threshold_uv: f64) -> Result<usize> {
    let (index, peak) = signal
        .samples
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if v.abs() > bv {
                (i, v.abs())
            } else {
                (bi, bv)
            }
        });
    if peak >= threshold_uv {
        Ok(index)
    } else {
        Err(Error::NoSpike {
            peak,
            threshold: threshold_uv,
        })
    }
}

/// Inserts `factor - 1` linearly interpolated points between neighbours.
pub fn interpolate_linear(signal: &SignalVector, factor: usize) -> Result<SignalVector> {
    if factor < 2 {
        return Err(Error::invalid(
            "factor",
            format!("interpolation factor must be at least 2, got {factor}"),
        ));
    }
    let x = signal.samples();
    let mut out = Vec::with_capacity(factor * (x.len() - 1) + 1);
    for pair in x.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        out.push(a);
        for step in 1..factor {
            let t = step as f64 / factor as f64;
            out.push((a + (b - a) * t).clamp(a.min(b), a.max(b)));
        }
    }
    out.push(x[x.len() - 1]);
    SignalVector::new(out, signal.sample_rate_hz * factor as f64, signal.origin.clone())
}
