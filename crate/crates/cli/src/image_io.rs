//! PNG and binary PPM in and out.
//!
//! Files store channels in R, G, B order; [`ImageBuffer`] stores every
//! pixel as a (B, G, R) triple in [0, 1]. The swap happens here and nowhere
//! else.

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Read};
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PixmapHeader, PnmEncoder, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat, ImageReader};

use crate::error::{CliError, Result};
use crate::pipeline::{IngestConfig, Transfer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    depth: BitDepth,
    pixels: Vec<[f64; 3]>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32, depth: BitDepth, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(CliError::Parse(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width as usize * height as usize {
            return Err(CliError::Parse(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some((i, p)) = pixels
            .iter()
            .enumerate()
            .find(|(_, p)| p.iter().any(|v| !(0.0..=1.0).contains(v)))
        {
            return Err(CliError::Parse(format!("pixel {i} out of range: {p:?}")));
        }
        Ok(Self {
            width,
            height,
            depth,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn depth(&self) -> BitDepth {
        self.depth
    }

    /// Row-major (B, G, R) pixels.
    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    pub(crate) fn with_pixels(&self, pixels: Vec<[f64; 3]>) -> Self {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        Self {
            pixels,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub image: ImageBuffer,
    /// Channel values pulled back into [0, 1] after the input matrix.
    pub clamped: usize,
}

pub fn ingest_image(path: &Path, config: &IngestConfig) -> Result<Ingested> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    ingest_bytes(&bytes, config)
}

/// Decode PNG (8/16-bit) or PPM bytes, scale to [0, 1], apply the optional
/// transfer decode and matrix, then clamp.
pub fn ingest_bytes(bytes: &[u8], config: &IngestConfig) -> Result<Ingested> {
    let reader = ImageReader::new(Cursor::new(bytes)).with_guessed_format()?;
    match reader.format() {
        Some(ImageFormat::Png | ImageFormat::Pnm) => {}
        Some(f) => return Err(CliError::Format(format!("{f:?} input is not supported"))),
        None => return Err(CliError::Format("unrecognized image format".into())),
    }
    let decoded = reader.decode()?;
    let (width, height) = (decoded.width(), decoded.height());
    let (depth, rgb): (BitDepth, Vec<[f64; 3]>) = match decoded {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => {
            let buf = decoded.to_rgb8();
            let px = buf
                .pixels()
                .map(|p| p.0.map(|v| f64::from(v) / 255.0))
                .collect();
            (BitDepth::Eight, px)
        }
        DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) => {
            let buf = decoded.to_rgb16();
            let px = buf
                .pixels()
                .map(|p| p.0.map(|v| f64::from(v) / 65535.0))
                .collect();
            (BitDepth::Sixteen, px)
        }
        other => {
            return Err(CliError::Format(format!(
                "unsupported color type {:?}",
                other.color()
            )))
        }
    };

    let mut clamped = 0;
    let pixels = rgb
        .into_iter()
        .map(|[r, g, b]| {
            let mut bgr = [b, g, r].map(|v| config.transfer.decode(v));
            if let Some(m) = &config.matrix {
                bgr = apply_matrix(m, bgr);
            }
            bgr.map(|v| {
                let c = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
                if c != v {
                    clamped += 1;
                }
                c
            })
        })
        .collect();
    Ok(Ingested {
        image: ImageBuffer::new(width, height, depth, pixels)?,
        clamped,
    })
}

fn apply_matrix(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    m.map(|row| row[0] * v[0] + row[1] * v[1] + row[2] * v[2])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Png,
    Ppm,
}

impl OutputFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("png") => Ok(OutputFormat::Png),
            Some("ppm" | "pnm") => Ok(OutputFormat::Ppm),
            _ => Err(CliError::Usage(format!(
                "cannot infer image format from {}",
                path.display()
            ))),
        }
    }
}

/// Quantize to the image's bit depth, optionally re-encoding the transfer
/// curve, and write in file (R, G, B) order.
pub fn encode_image(
    img: &ImageBuffer,
    transfer: Transfer,
    format: OutputFormat,
) -> Result<Vec<u8>> {
    let max = img.depth.max_value();
    let quantize = |v: f64| (transfer.encode(v).clamp(0.0, 1.0) * max).round();
    let mut out = Vec::new();
    let (w, h) = (img.width, img.height);
    match img.depth {
        BitDepth::Eight => {
            let raw: Vec<u8> = img
                .pixels
                .iter()
                .flat_map(|&[b, g, r]| [r, g, b].map(|v| quantize(v) as u8))
                .collect();
            write_encoded(&mut out, format, &raw, w, h, ExtendedColorType::Rgb8, 255)?;
        }
        BitDepth::Sixteen => {
            let samples: Vec<u16> = img
                .pixels
                .iter()
                .flat_map(|&[b, g, r]| [r, g, b].map(|v| quantize(v) as u16))
                .collect();
            // both encoders expect native-endian 16-bit samples
            let raw: Vec<u8> = samples.iter().flat_map(|s| s.to_ne_bytes()).collect();
            write_encoded(
                &mut out,
                format,
                &raw,
                w,
                h,
                ExtendedColorType::Rgb16,
                65535,
            )?;
        }
    }
    Ok(out)
}

fn write_encoded(
    out: &mut Vec<u8>,
    format: OutputFormat,
    raw: &[u8],
    width: u32,
    height: u32,
    color: ExtendedColorType,
    maxval: u32,
) -> Result<()> {
    match format {
        OutputFormat::Png => PngEncoder::new(out).write_image(raw, width, height, color)?,
        // the pnm encoder only writes 8-bit pixmaps; 16-bit P6 is big-endian
        OutputFormat::Ppm if maxval > 255 => {
            out.extend_from_slice(format!("P6\n{width} {height}\n{maxval}\n").as_bytes());
            out.extend(
                raw.chunks_exact(2)
                    .flat_map(|c| u16::from_ne_bytes([c[0], c[1]]).to_be_bytes()),
            );
        }
        OutputFormat::Ppm => {
            let header = PixmapHeader {
                encoding: SampleEncoding::Binary,
                width,
                height,
                maxval,
            };
            PnmEncoder::new(out)
                .with_header(header.into())
                .write_image(raw, width, height, color)?
        }
    }
    Ok(())
}

pub fn write_image(img: &ImageBuffer, transfer: Transfer, path: &Path) -> Result<()> {
    let bytes = encode_image(img, transfer, OutputFormat::from_path(path)?)?;
    let mut w = BufWriter::new(File::create(path)?);
    std::io::Write::write_all(&mut w, &bytes)?;
    std::io::Write::flush(&mut w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ppm(header: &str, body: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(body);
        v
    }

    #[test]
    fn red_ppm_pixel_maps_to_bgr() {
        let bytes = ppm("P6\n1 1\n255\n", &[255, 0, 0]);
        let got = ingest_bytes(&bytes, &IngestConfig::default()).unwrap();
        assert_eq!(got.image.pixels(), &[[0.0, 0.0, 1.0]]);
        assert_eq!(got.image.depth(), BitDepth::Eight);
        assert_eq!(got.clamped, 0);
    }

    #[test]
    fn sixteen_bit_mid_gray() {
        let img = ImageBuffer::new(1, 1, BitDepth::Sixteen, vec![[0.5; 3]]).unwrap();
        let png = encode_image(&img, Transfer::Linear, OutputFormat::Png).unwrap();
        let got = ingest_bytes(&png, &IngestConfig::default()).unwrap().image;
        assert_eq!(got.depth(), BitDepth::Sixteen);
        for v in got.pixels()[0] {
            assert!((v - 0.5).abs() <= 1.0 / 65535.0);
        }
        let ppm = encode_image(&img, Transfer::Linear, OutputFormat::Ppm).unwrap();
        assert!(ppm.starts_with(b"P6"));
        let got = ingest_bytes(&ppm, &IngestConfig::default()).unwrap().image;
        assert_eq!(got.depth(), BitDepth::Sixteen);
        assert!((got.pixels()[0][0] - 0.5).abs() <= 1.0 / 65535.0);
    }

    #[test]
    fn corrupt_and_truncated_inputs() {
        assert!(ingest_bytes(b"P6\nxx yy\n255\n", &IngestConfig::default()).is_err());
        assert!(ingest_bytes(b"not an image at all", &IngestConfig::default()).is_err());
        let truncated = ppm("P6\n2 2\n255\n", &[1, 2, 3, 4]);
        assert!(matches!(
            ingest_bytes(&truncated, &IngestConfig::default()),
            Err(CliError::Parse(_) | CliError::Io(_))
        ));
    }

    #[test]
    fn eight_bit_round_trip_is_exact() {
        let raw: Vec<u8> = (0..=255u8).flat_map(|v| [v, 255 - v, v / 3]).collect();
        let mut bytes = b"P6\n16 16\n255\n".to_vec();
        bytes.extend_from_slice(&raw);
        for format in [OutputFormat::Ppm, OutputFormat::Png] {
            let img = ingest_bytes(&bytes, &IngestConfig::default())
                .unwrap()
                .image;
            let out = encode_image(&img, Transfer::Linear, format).unwrap();
            let back = ingest_bytes(&out, &IngestConfig::default()).unwrap().image;
            assert_eq!(back, img);
        }
        let img = ingest_bytes(&bytes, &IngestConfig::default())
            .unwrap()
            .image;
        let out = encode_image(&img, Transfer::Linear, OutputFormat::Ppm).unwrap();
        assert_eq!(out[out.len() - raw.len()..], raw[..]);
    }

    #[test]
    fn matrix_then_clamp_counts() {
        let bytes = ppm("P6\n1 1\n255\n", &[255, 255, 255]);
        let config = IngestConfig {
            transfer: Transfer::Linear,
            matrix: Some([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]),
        };
        let got = ingest_bytes(&bytes, &config).unwrap();
        assert_eq!(got.image.pixels(), &[[1.0, 1.0, 0.0]]);
        assert_eq!(got.clamped, 2);
    }

    #[test]
    fn buffer_invariants() {
        assert!(ImageBuffer::new(2, 1, BitDepth::Eight, vec![[0.0; 3]]).is_err());
        assert!(ImageBuffer::new(1, 1, BitDepth::Eight, vec![[0.0, 1.5, 0.0]]).is_err());
        assert!(ImageBuffer::new(0, 0, BitDepth::Eight, vec![]).is_err());
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(
            OutputFormat::from_path(Path::new("a.PNG")).unwrap(),
            OutputFormat::Png
        );
        assert_eq!(
            OutputFormat::from_path(Path::new("a.ppm")).unwrap(),
            OutputFormat::Ppm
        );
        assert!(OutputFormat::from_path(Path::new("a.jpg")).is_err());
    }
}
