//! Grayscale rasters, PGM I/O, bilinear sampling and seed-neighbourhood statistics.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::TemplateConfig;
use crate::point::Point;

/// Radius of the disc averaged around the seed, in pixels.
pub const SEED_DISC_RADIUS: f64 = 3.0;

/// Lower bound on the contrast scale: one 8-bit quantisation step.
pub const EPSILON_TAU: f64 = 1.0 / 255.0;

/// A row-major grayscale image with intensities in `[0, 1]` and isotropic pixel spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
    spacing: f64,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>, spacing: f64) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Domain(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Domain(format!(
                "expected {} intensities for a {width}x{height} image, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain(format!("intensity {bad} outside [0, 1]")));
        }
        check_spacing(spacing)?;
        Ok(GrayImage {
            width,
            height,
            data,
            spacing,
        })
    }

    /// A constant image, handy for tests and as a canvas.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        GrayImage::new(width, height, vec![value; width * height], 1.0)
    }

    /// Builds an image from raw 8-bit values (`value / 255`).
    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        let data = bytes.iter().map(|&b| f64::from(b) / 255.0).collect();
        GrayImage::new(width, height, data, 1.0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Millimetres per pixel.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn set_spacing(&mut self, spacing: f64) -> Result<()> {
        check_spacing(spacing)?;
        self.spacing = spacing;
        Ok(())
    }

    pub fn with_spacing(mut self, spacing: f64) -> Result<Self> {
        self.set_spacing(spacing)?;
        Ok(self)
    }

    pub fn intensities(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value.clamp(0.0, 1.0);
    }

    /// Intensities quantised back to 8 bits.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    /// Bilinear interpolation with border clamping. Exact at lattice points.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, max_x) };
        let y = if y.is_nan() { 0.0 } else { y.clamp(0.0, max_y) };

        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;

        let top = lerp(self.get(x0, y0), self.get(x1, y0), fx);
        let bottom = lerp(self.get(x0, y1), self.get(x1, y1), fx);
        lerp(top, bottom, fy)
    }

    pub fn sample(&self, p: Point) -> f64 {
        self.sample_bilinear(p.x, p.y)
    }

    /// Whether `p` lies within the sampling domain `[0, w-1] x [0, h-1]`.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= 0.0 && p.y >= 0.0 && p.x <= (self.width - 1) as f64 && p.y <= (self.height - 1) as f64
    }

    /// Whether `p` lies strictly inside the sampling domain (not on its border).
    pub fn contains_strictly(&self, p: Point) -> bool {
        p.x > 0.0 && p.y > 0.0 && p.x < (self.width - 1) as f64 && p.y < (self.height - 1) as f64
    }

    pub(crate) fn require_interior(&self, p: Point) -> Result<()> {
        if self.contains_strictly(p) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "seed ({}, {}) is not strictly inside the {}x{} image",
                p.x, p.y, self.width, self.height
            )))
        }
    }

    pub fn load_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = fs::read(path)?;
        GrayImage::decode_pgm(&bytes)
    }

    /// Parses a P2 (ASCII) or P5 (binary) PGM with maxval 255.
    pub fn decode_pgm(bytes: &[u8]) -> Result<Self> {
        let mut reader = HeaderReader { bytes, pos: 0 };
        let magic = reader.token("magic")?;
        let binary = match magic.as_str() {
            "P5" => true,
            "P2" => false,
            "P3" | "P6" => return Err(Error::format("magic", format!("{magic} is a color image"))),
            other => return Err(Error::format("magic", format!("unsupported magic {other:?}"))),
        };
        let width = reader.number("width")?;
        let height = reader.number("height")?;
        let maxval = reader.number("maxval")?;
        if maxval != 255 {
            return Err(Error::format("maxval", format!("expected 255, got {maxval}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::format("width", format!("degenerate size {width}x{height}")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| Error::format("width", "image size overflows"))?;

        let pixels = if binary {
            // Exactly one whitespace byte separates maxval from the raster.
            match reader.bytes.get(reader.pos) {
                Some(b) if b.is_ascii_whitespace() => reader.pos += 1,
                _ => return Err(Error::format("pixels", "missing separator after maxval")),
            }
            let raster = &reader.bytes[reader.pos..];
            if raster.len() < count {
                return Err(Error::format(
                    "pixels",
                    format!("truncated payload: expected {count} bytes, found {}", raster.len()),
                ));
            }
            raster[..count].to_vec()
        } else {
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let v = reader.number("pixels").map_err(|e| match e {
                    Error::Format { .. } => Error::format(
                        "pixels",
                        format!("truncated payload: expected {count} values, found {}", out.len()),
                    ),
                    other => other,
                })?;
                if v > 255 {
                    return Err(Error::format("pixels", format!("value {v} exceeds maxval")));
                }
                out.push(v as u8);
            }
            out
        };
        GrayImage::from_bytes(width, height, &pixels)
    }

    /// Binary P5 encoding.
    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.to_bytes());
        out
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = fs::File::create(path)?;
        file.write_all(&self.encode_pgm())?;
        Ok(())
    }
}

fn check_spacing(spacing: f64) -> Result<()> {
    if spacing.is_finite() && spacing > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("pixel spacing must be positive, got {spacing}")))
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self, field: &'static str) -> Result<String> {
        self.skip_blank();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(field, "unexpected end of file"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self, field: &'static str) -> Result<usize> {
        let tok = self.token(field)?;
        tok.parse()
            .map_err(|_| Error::format(field, format!("not a non-negative integer: {tok:?}")))
    }
}

/// Intensity statistics around a seed that parameterise the terminal weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedStats {
    /// Mean over the disc of radius [`SEED_DISC_RADIUS`] around the seed.
    pub mu_seed: f64,
    /// Mean over the template rim (the outermost node of every ray).
    pub mu_ring: f64,
    /// Contrast scale, `max(EPSILON_TAU, |mu_seed - mu_ring| / 2)`.
    pub tau: f64,
    /// Population standard deviation of the seed-disc samples.
    pub sigma_seed: f64,
}

/// Lattice offsets `(dx, dy)` with `dx^2 + dy^2 <= SEED_DISC_RADIUS^2`.
fn disc_offsets() -> impl Iterator<Item = (f64, f64)> {
    let r = SEED_DISC_RADIUS.floor() as i32;
    let limit = SEED_DISC_RADIUS * SEED_DISC_RADIUS;
    (-r..=r).flat_map(move |dy| {
        (-r..=r).filter_map(move |dx| {
            let (dx, dy) = (f64::from(dx), f64::from(dy));
            (dx * dx + dy * dy <= limit).then_some((dx, dy))
        })
    })
}

pub fn seed_stats(img: &GrayImage, seed: Point, cfg: &TemplateConfig) -> Result<SeedStats> {
    if !img.contains(seed) {
        return Err(Error::Domain(format!(
            "seed ({}, {}) lies outside the {}x{} image",
            seed.x,
            seed.y,
            img.width(),
            img.height()
        )));
    }
    let disc: Vec<f64> = disc_offsets()
        .map(|(dx, dy)| img.sample_bilinear(seed.x + dx, seed.y + dy))
        .collect();
    let n = disc.len() as f64;
    let mu_seed = disc.iter().sum::<f64>() / n;
    let sigma_seed = (disc.iter().map(|v| (v - mu_seed).powi(2)).sum::<f64>() / n).sqrt();

    let mu_ring = (0..cfg.num_rays)
        .map(|r| {
            let (dx, dy) = cfg.direction(r);
            img.sample_bilinear(seed.x + dx * cfg.radius_px, seed.y + dy * cfg.radius_px)
        })
        .sum::<f64>()
        / cfg.num_rays as f64;

    Ok(SeedStats {
        mu_seed,
        mu_ring,
        tau: EPSILON_TAU.max((mu_seed - mu_ring).abs() / 2.0),
        sigma_seed,
    })
}
