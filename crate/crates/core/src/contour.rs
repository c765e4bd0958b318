//! Contours from cut indices, and the measurements taken on them.

use crate::error::{Error, Result};
use crate::graph::NodeGrid;
use crate::maxflow::CutResult;
use crate::point::Point;

/// Closed polygon with one vertex per ray, in image pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<Point>,
    /// Millimetres per pixel.
    pub spacing: f64,
}

/// The boundary on ray `r` sits midway between node `k_r` (inside) and node `k_r + 1`.
pub fn cut_to_contour(cut: &CutResult, grid: &NodeGrid, spacing: f64) -> Contour {
    let cfg = &grid.cfg;
    let points = cut
        .cut_indices
        .iter()
        .enumerate()
        .map(|(r, &k)| {
            let (dx, dy) = cfg.direction(r);
            let rho = 0.5 * (cfg.radius(k) + cfg.radius(k + 1));
            Point::new(grid.seed.x + dx * rho, grid.seed.y + dy * rho)
        })
        .collect();
    Contour { points, spacing }
}

impl Contour {
    /// Longest chord between any two vertices, in millimetres.
    pub fn max_diameter_mm(&self) -> Result<f64> {
        if self.points.len() < 2 {
            return Err(Error::Domain(format!(
                "diameter needs at least 2 points, got {}",
                self.points.len()
            )));
        }
        let mut best = 0.0f64;
        for (i, &a) in self.points.iter().enumerate() {
            for &b in &self.points[i + 1..] {
                best = best.max(a.distance(b));
            }
        }
        Ok(best * self.spacing)
    }

    /// Shoelace area in square millimetres, independent of orientation.
    pub fn area_mm2(&self) -> Result<f64> {
        if self.points.len() < 3 {
            return Err(Error::Domain(format!(
                "area needs at least 3 points, got {}",
                self.points.len()
            )));
        }
        Ok(polygon_area(&self.points).abs() * self.spacing * self.spacing)
    }

    /// Even-odd rasterisation at pixel centres (integer coordinates).
    pub fn rasterize(&self, width: usize, height: usize) -> Mask {
        let mut mask = Mask::new(width, height);
        if self.points.len() < 3 {
            return mask;
        }
        let (mut x_lo, mut y_lo, mut x_hi, mut y_hi) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in &self.points {
            x_lo = x_lo.min(p.x);
            y_lo = y_lo.min(p.y);
            x_hi = x_hi.max(p.x);
            y_hi = y_hi.max(p.y);
        }
        let clamp_range = |lo: f64, hi: f64, n: usize| {
            let start = lo.ceil().max(0.0) as usize;
            let end = (hi.floor().min(n as f64 - 1.0)).max(-1.0);
            (start, end)
        };
        let (x0, x1) = clamp_range(x_lo, x_hi, width);
        let (y0, y1) = clamp_range(y_lo, y_hi, height);
        if x1 < 0.0 || y1 < 0.0 {
            return mask;
        }
        for y in y0..=y1 as usize {
            for x in x0..=x1 as usize {
                if point_in_polygon(&self.points, Point::new(x as f64, y as f64)) {
                    mask.set(x, y, true);
                }
            }
        }
        mask
    }

    /// Dice overlap between this contour's raster and `truth`.
    pub fn dice(&self, truth: &Mask) -> f64 {
        self.rasterize(truth.width(), truth.height()).dice(truth).expect("same dimensions")
    }
}

/// Signed shoelace area in square pixels.
pub fn polygon_area(points: &[Point]) -> f64 {
    let n = points.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    0.5 * twice
}

/// Even-odd crossing test.
pub fn point_in_polygon(polygon: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = polygon.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Binary raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Mask {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Mask::new(width, height);
        for y in 0..height {
            for x in 0..width {
                mask.data[y * width + x] = f(x, y);
            }
        }
        mask
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    /// `2 |A n B| / (|A| + |B|)`, or 1 when both masks are empty.
    pub fn dice(&self, other: &Mask) -> Result<f64> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(Error::Domain(format!(
                "mask sizes differ: {}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        let both = self.data.iter().zip(&other.data).filter(|(a, b)| **a && **b).count();
        let total = self.count() + other.count();
        if total == 0 {
            return Ok(1.0);
        }
        Ok(2.0 * both as f64 / total as f64)
    }

    /// As an 8-bit image: 255 inside, 0 outside.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_nodes, TemplateConfig};
    use crate::image::GrayImage;

    fn circle(radius: f64, n: usize, spacing: f64) -> Contour {
        let points = (0..n)
            .map(|r| {
                let t = std::f64::consts::TAU * r as f64 / n as f64;
                Point::new(100.0 + radius * t.cos(), 100.0 + radius * t.sin())
            })
            .collect();
        Contour { points, spacing }
    }

    fn square(side: f64, x: f64, y: f64) -> Contour {
        Contour {
            points: vec![
                Point::new(x, y),
                Point::new(x + side, y),
                Point::new(x + side, y + side),
                Point::new(x, y + side),
            ],
            spacing: 1.0,
        }
    }

    #[test]
    fn constant_cut_gives_a_circle() {
        let img = GrayImage::filled(200, 200, 0.5).unwrap();
        let cfg = TemplateConfig::new(16, 10, 40.0, 1).unwrap();
        let grid = sample_nodes(&img, Point::new(100.0, 100.0), &cfg).unwrap();
        let c = 4;
        let cut = CutResult {
            flow_value: 0.0,
            source_side: vec![],
            cut_indices: vec![c; 16],
        };
        let contour = cut_to_contour(&cut, &grid, 1.0);
        assert_eq!(contour.points.len(), 16);
        let expected = 40.0 * (c as f64 + 1.5) / 10.0;
        for p in &contour.points {
            assert!((p.distance(grid.seed) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn diameter_examples() {
        let c = circle(50.0, 60, 0.2);
        let d = c.max_diameter_mm().unwrap();
        let chord = 2.0 * 50.0 * (std::f64::consts::PI * 30.0 / 60.0).sin() * 0.2;
        assert!((d - chord).abs() < 1e-9);
        assert!((d - 20.0).abs() <= 0.02);

        let two = Contour {
            points: vec![Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            spacing: 1.0,
        };
        assert!((two.max_diameter_mm().unwrap() - 10.0).abs() < 1e-12);
        assert!((square(1.0, 0.0, 0.0).max_diameter_mm().unwrap() - 2f64.sqrt()).abs() < 1e-12);

        let one = Contour {
            points: vec![Point::new(0.0, 0.0)],
            spacing: 1.0,
        };
        assert!(one.max_diameter_mm().is_err());
    }

    #[test]
    fn area_examples() {
        let sq = square(1.0, 0.0, 0.0);
        assert!((sq.area_mm2().unwrap() - 1.0).abs() < 1e-12);
        let mut rev = sq.clone();
        rev.points.reverse();
        assert_eq!(rev.area_mm2().unwrap(), sq.area_mm2().unwrap());

        let c = circle(50.0, 60, 1.0);
        let r = 60.0;
        let inscribed = std::f64::consts::PI * 2500.0 * ((std::f64::consts::TAU / r).sin() * r / std::f64::consts::TAU);
        let area = c.area_mm2().unwrap();
        assert!((area - inscribed).abs() < 1e-6);
        assert!((area / (std::f64::consts::PI * 2500.0) - 1.0).abs() < 0.002);

        let two = Contour {
            points: vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            spacing: 1.0,
        };
        assert!(two.area_mm2().is_err());
    }

    #[test]
    fn dice_examples() {
        let a = square(9.99, 10.0, 10.0).rasterize(40, 40);
        assert_eq!(a.count(), 100);
        assert_eq!(a.dice(&a).unwrap(), 1.0);

        let far = square(9.99, 25.0, 25.0).rasterize(40, 40);
        assert_eq!(a.dice(&far).unwrap(), 0.0);

        // Shifted by 5 px along x: the overlap is 5 x 10 of 100 + 100 pixels.
        let shifted = square(9.99, 15.0, 10.0);
        let by_hand = (10..20)
            .flat_map(|y| (10..20).map(move |x| (x, y)))
            .filter(|&(x, y)| (15..25).contains(&x) && (10..20).contains(&y))
            .count();
        assert_eq!(by_hand, 50);
        assert!((shifted.dice(&a) - 2.0 * 50.0 / 200.0).abs() < 1e-12);

        assert_eq!(Mask::new(3, 3).dice(&Mask::new(3, 3)).unwrap(), 1.0);
        assert!(Mask::new(3, 3).dice(&Mask::new(4, 3)).is_err());
    }

    #[test]
    fn point_in_polygon_even_odd() {
        let sq = square(2.0, 0.0, 0.0).points;
        assert!(point_in_polygon(&sq, Point::new(1.0, 1.0)));
        assert!(!point_in_polygon(&sq, Point::new(3.0, 1.0)));
        assert!(!point_in_polygon(&sq, Point::new(1.0, -0.5)));
    }

    #[test]
    fn contour_far_outside_rasterizes_empty() {
        let c = square(3.0, -20.0, -20.0);
        assert_eq!(c.rasterize(10, 10).count(), 0);
    }
}
