//! Synthetic B-mode-like lesion phantoms with ground truth.
//!
//! A disc lesion, an optional dark halo annulus around it, and a homogeneous background, all
//! multiplied by unit-mean log-normal speckle.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::contour::Mask;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::point::Point;

/// Largest lesion/background difference still called isoechoic.
pub const ISO_TOLERANCE: f64 = 0.02;

/// Echo pattern of a homogeneous lesion relative to the surrounding tissue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EchoClass {
    /// Hyperechoic: brighter.
    A,
    /// Isoechoic: similar.
    B,
    /// Hypoechoic: darker.
    C,
    /// Hyperechoic with a dark halo.
    D,
    /// Isoechoic with a dark halo.
    E,
}

impl EchoClass {
    pub const ALL: [EchoClass; 5] = [EchoClass::A, EchoClass::B, EchoClass::C, EchoClass::D, EchoClass::E];

    pub fn has_halo(self) -> bool {
        matches!(self, EchoClass::D | EchoClass::E)
    }

    pub fn description(self) -> &'static str {
        match self {
            EchoClass::A => "hyperechoic",
            EchoClass::B => "isoechoic",
            EchoClass::C => "hypoechoic",
            EchoClass::D => "hyperechoic with halo",
            EchoClass::E => "isoechoic with halo",
        }
    }
}

impl fmt::Display for EchoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EchoClass::A => "A",
            EchoClass::B => "B",
            EchoClass::C => "C",
            EchoClass::D => "D",
            EchoClass::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for EchoClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(EchoClass::A),
            "B" => Ok(EchoClass::B),
            "C" => Ok(EchoClass::C),
            "D" => Ok(EchoClass::D),
            "E" => Ok(EchoClass::E),
            other => Err(Error::Spec(format!("unknown echo class {other:?}, expected A-E"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    pub center: Point,
    pub lesion_radius: f64,
    pub background_level: f64,
    pub lesion_level: f64,
    pub halo_width: f64,
    pub halo_level: f64,
    pub speckle_sigma: f64,
    pub echo_class: EchoClass,
    pub rng_seed: u64,
}

impl PhantomSpec {
    /// Default intensity levels for each class, lesion centred in the image, no speckle.
    pub fn for_class(class: EchoClass, width: usize, height: usize, lesion_radius: f64) -> Self {
        let (background, lesion, halo_width, halo) = match class {
            EchoClass::A => (0.4, 0.65, 0.0, 0.0),
            EchoClass::B => (0.4, 0.41, 0.0, 0.0),
            EchoClass::C => (0.6, 0.2, 0.0, 0.0),
            EchoClass::D => (0.4, 0.65, 6.0, 0.15),
            EchoClass::E => (0.4, 0.41, 6.0, 0.15),
        };
        PhantomSpec {
            width,
            height,
            center: Point::new((width / 2) as f64, (height / 2) as f64),
            lesion_radius,
            background_level: background,
            lesion_level: lesion,
            halo_width,
            halo_level: halo,
            speckle_sigma: 0.0,
            echo_class: class,
            rng_seed: 0,
        }
    }

    pub fn with_speckle(mut self, sigma: f64, rng_seed: u64) -> Self {
        self.speckle_sigma = sigma;
        self.rng_seed = rng_seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Spec(msg));
        if self.width == 0 || self.height == 0 {
            return fail(format!("image size {}x{} is empty", self.width, self.height));
        }
        if !(self.lesion_radius.is_finite() && self.lesion_radius > 0.0) {
            return fail(format!("lesion_radius must be positive, got {}", self.lesion_radius));
        }
        if !(self.halo_width.is_finite() && self.halo_width >= 0.0) {
            return fail(format!("halo_width must be non-negative, got {}", self.halo_width));
        }
        if !(self.speckle_sigma.is_finite() && self.speckle_sigma >= 0.0) {
            return fail(format!("speckle_sigma must be non-negative, got {}", self.speckle_sigma));
        }
        for (name, v) in [
            ("background_level", self.background_level),
            ("lesion_level", self.lesion_level),
            ("halo_level", self.halo_level),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} {v} outside [0, 1]"));
            }
        }

        let reach = self.lesion_radius + self.halo_width + 2.0;
        let (cx, cy) = (self.center.x, self.center.y);
        let (max_x, max_y) = ((self.width - 1) as f64, (self.height - 1) as f64);
        if cx - reach < 0.0 || cy - reach < 0.0 || cx + reach > max_x || cy + reach > max_y {
            return fail(format!(
                "lesion margin: disc of radius {} plus halo {} plus 2 px around ({cx}, {cy}) leaves the {}x{} image",
                self.lesion_radius, self.halo_width, self.width, self.height
            ));
        }

        let (lesion, background) = (self.lesion_level, self.background_level);
        match self.echo_class {
            EchoClass::A | EchoClass::D if lesion <= background => {
                return fail(format!(
                    "class {}: lesion_level {lesion} must exceed background_level {background}",
                    self.echo_class
                ))
            }
            EchoClass::C if lesion >= background => {
                return fail(format!(
                    "class C: lesion_level {lesion} must be below background_level {background}"
                ))
            }
            EchoClass::B | EchoClass::E if (lesion - background).abs() > ISO_TOLERANCE => {
                return fail(format!(
                    "class {}: |lesion_level - background_level| = {} exceeds {ISO_TOLERANCE}",
                    self.echo_class,
                    (lesion - background).abs()
                ))
            }
            _ => {}
        }
        if self.echo_class.has_halo() {
            if self.halo_width <= 0.0 {
                return fail(format!("class {}: halo_width must be positive", self.echo_class));
            }
            if self.halo_level >= lesion.min(background) {
                return fail(format!(
                    "class {}: halo_level {} must be darker than both lesion and background",
                    self.echo_class, self.halo_level
                ));
            }
        }
        Ok(())
    }

    /// Noise-free intensity at pixel `(x, y)`.
    pub fn base_level(&self, x: usize, y: usize) -> f64 {
        let rho = Point::new(x as f64, y as f64).distance(self.center);
        if rho <= self.lesion_radius {
            self.lesion_level
        } else if rho <= self.lesion_radius + self.halo_width {
            self.halo_level
        } else {
            self.background_level
        }
    }

    /// Pixels whose centres lie in the lesion disc (halo excluded).
    pub fn truth_mask(&self) -> Mask {
        Mask::from_fn(self.width, self.height, |x, y| {
            Point::new(x as f64, y as f64).distance(self.center) <= self.lesion_radius
        })
    }

    pub fn generate(&self) -> Result<(GrayImage, Mask)> {
        self.validate()?;
        let (w, h) = (self.width, self.height);
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                data.push(self.base_level(x, y));
            }
        }
        if self.speckle_sigma > 0.0 {
            let sigma = self.speckle_sigma;
            let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
            for v in &mut data {
                let g: f64 = StandardNormal.sample(&mut rng);
                let s = (g * sigma - 0.5 * sigma * sigma).exp();
                *v = (*v * s).clamp(0.0, 1.0);
            }
        }
        let img = GrayImage::new(w, h, data, 1.0)?;
        Ok((img, self.truth_mask()))
    }
}

pub fn generate_phantom(spec: &PhantomSpec) -> Result<(GrayImage, Mask)> {
    spec.generate()
}
