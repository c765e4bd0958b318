use uscut_core::{GrayImage, Point, SegmentationResult};

/// Copy of `img` with the contour vertices and a 3x3 seed block painted at full intensity.
pub fn render_overlay(img: &GrayImage, result: &SegmentationResult) -> GrayImage {
    let mut out = img.clone();
    let mut paint = |p: Point| {
        let (x, y) = (p.x.round(), p.y.round());
        if x >= 0.0 && y >= 0.0 && (x as usize) < out.width() && (y as usize) < out.height() {
            out.set(x as usize, y as usize, 1.0);
        }
    };
    for &p in &result.contour.points {
        paint(p);
    }
    for dy in -1..=1 {
        for dx in -1..=1 {
            paint(Point::new(result.seed.x + f64::from(dx), result.seed.y + f64::from(dy)));
        }
    }
    out
}
