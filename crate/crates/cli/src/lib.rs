//! File plumbing and per-pixel pipelines for the `colordecode` binary.

pub mod error;
pub mod image_io;
pub mod pipeline;

pub use error::{CliError, Result};
pub use image_io::{
    encode_image, ingest_bytes, ingest_image, write_image, BitDepth, ImageBuffer, Ingested,
    OutputFormat,
};
pub use pipeline::{
    format_hue, run_pixel_pipeline, DecodeReport, HsvImage, IngestConfig, Operation,
    PipelineConfig, PipelineOutput, SignalStats, Transfer,
};
