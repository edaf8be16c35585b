//! Per-pixel pipelines over an [`ImageBuffer`].
//!
//! Every operation is a pure function of one pixel, so pixels are mapped in
//! parallel and collected in order. Reductions (the decode report) run
//! sequentially over the collected values, which keeps output identical for
//! any thread count.

use std::io::Write;

use colordecode::{
    adapt_bgr, appearance_bgr, simulate_cvd_bgr, AppearanceDescriptor, ColorSignals, CvdProfile,
    GainVector, SIGNAL_NAMES,
};
use rayon::prelude::*;

use crate::error::Result;
use crate::image_io::ImageBuffer;

/// Hue is written with this many decimals.
pub const HUE_DECIMALS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transfer {
    #[default]
    Linear,
    Srgb,
}

impl Transfer {
    /// Encoded file value to linear.
    pub fn decode(self, v: f64) -> f64 {
        match self {
            Transfer::Linear => v,
            Transfer::Srgb if v <= 0.04045 => v / 12.92,
            Transfer::Srgb => ((v + 0.055) / 1.055).powf(2.4),
        }
    }

    /// Linear to encoded file value.
    pub fn encode(self, v: f64) -> f64 {
        match self {
            Transfer::Linear => v,
            Transfer::Srgb if v <= 0.003_130_8 => v * 12.92,
            Transfer::Srgb => 1.055 * v.powf(1.0 / 2.4) - 0.055,
        }
    }
}

/// How file samples become channel responses.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IngestConfig {
    pub transfer: Transfer,
    /// Row-major, acting on the (B, G, R) column vector.
    pub matrix: Option<[[f64; 3]; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operation {
    ToHsv,
    SimulateCvd(CvdProfile),
    Adapt(GainVector),
    DecodeReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub ingest: IngestConfig,
    pub operation: Operation,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PipelineOutput {
    Image(ImageBuffer),
    Hsv(HsvImage),
    Report(DecodeReport),
}

pub fn run_pixel_pipeline(img: &ImageBuffer, operation: &Operation) -> PipelineOutput {
    match *operation {
        Operation::SimulateCvd(profile) => {
            PipelineOutput::Image(map_pixels(img, |p| simulate_cvd_bgr(p, &profile)))
        }
        Operation::Adapt(gains) => PipelineOutput::Image(map_pixels(img, |p| adapt_bgr(p, &gains))),
        Operation::ToHsv => PipelineOutput::Hsv(HsvImage {
            source: img.clone(),
            pixels: img
                .pixels()
                .par_iter()
                .map(|&[b, g, r]| appearance_bgr(b, g, r))
                .collect(),
        }),
        Operation::DecodeReport => {
            let signals: Vec<ColorSignals> = img
                .pixels()
                .par_iter()
                .map(|&[b, g, r]| ColorSignals::from_bgr(b, g, r))
                .collect();
            PipelineOutput::Report(DecodeReport::from_signals(&signals))
        }
    }
}

fn map_pixels(img: &ImageBuffer, f: impl Fn([f64; 3]) -> [f64; 3] + Sync) -> ImageBuffer {
    img.with_pixels(img.pixels().par_iter().map(|&p| f(p)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsvImage {
    source: ImageBuffer,
    pixels: Vec<AppearanceDescriptor>,
}

impl HsvImage {
    pub fn pixels(&self) -> &[AppearanceDescriptor] {
        &self.pixels
    }

    /// Three planes at the source depth: file R = H/360, G = S, B = V.
    /// Undefined hue is written as 0.
    pub fn to_image(&self) -> ImageBuffer {
        let px = self
            .pixels
            .iter()
            .map(|a| [a.value, a.saturation, a.hue.unwrap_or(0.0) / 360.0])
            .collect();
        self.source.with_pixels(px)
    }

    /// `x,y,hue,saturation,value`, hue empty when undefined.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "hue", "saturation", "value"])?;
        let width = self.source.width() as usize;
        for (i, a) in self.pixels.iter().enumerate() {
            w.write_record([
                (i % width).to_string(),
                (i / width).to_string(),
                format_hue(a.hue),
                a.saturation.to_string(),
                a.value.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn format_hue(hue: Option<f64>) -> String {
    hue.map(|h| format!("{h:.HUE_DECIMALS$}"))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Summary statistics of the eight decoder signals over an image.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeReport {
    pub pixels: usize,
    /// In blackness .. whiteness order.
    pub stats: [SignalStats; 8],
}

impl DecodeReport {
    pub fn from_signals(signals: &[ColorSignals]) -> Self {
        let mut min = [f64::INFINITY; 8];
        let mut max = [f64::NEG_INFINITY; 8];
        let mut sum = [0.0; 8];
        for s in signals {
            for (k, v) in s.to_array().into_iter().enumerate() {
                min[k] = min[k].min(v);
                max[k] = max[k].max(v);
                sum[k] += v;
            }
        }
        let n = signals.len().max(1) as f64;
        let stats = std::array::from_fn(|k| SignalStats {
            min: min[k],
            max: max[k],
            mean: sum[k] / n,
        });
        Self {
            pixels: signals.len(),
            stats,
        }
    }

    pub fn get(&self, name: &str) -> Option<SignalStats> {
        SIGNAL_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.stats[i])
    }

    /// `signal,min,max,mean`, one row per signal.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["signal", "min", "max", "mean"])?;
        for (name, s) in SIGNAL_NAMES.iter().zip(&self.stats) {
            w.write_record([
                name.to_string(),
                s.min.to_string(),
                s.max.to_string(),
                s.mean.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
