//! The interactive pipeline: seed statistics, node sampling, graph, cut, contour.

use std::fmt::Write as _;
use std::time::Instant;

use crate::contour::{cut_to_contour, Contour};
use crate::error::{Error, Result};
use crate::graph::{build_network, sample_nodes, TemplateConfig, WeightModel};
use crate::image::{seed_stats, GrayImage};
use crate::maxflow::{CutResult, Solver};
use crate::point::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub seed: Point,
    pub cfg: TemplateConfig,
    pub contour: Contour,
    pub cut: CutResult,
    pub diameter_mm: f64,
    pub area_mm2: f64,
    /// Wall time of the whole pipeline.
    pub elapsed_ms: f64,
}

/// Pipeline settings beyond the template shape.
#[derive(Debug, Clone, Copy, Default)]
pub struct Segmenter {
    pub solver: Solver,
}

impl Segmenter {
    pub fn new(solver: Solver) -> Self {
        Segmenter { solver }
    }

    pub fn segment(&self, img: &GrayImage, seed: Point, cfg: &TemplateConfig) -> Result<SegmentationResult> {
        let start = Instant::now();
        cfg.validate()?;
        img.require_interior(seed)?;

        let stats = seed_stats(img, seed, cfg)?;
        let grid = sample_nodes(img, seed, cfg)?;
        let weights = WeightModel::from_stats(&stats).weights(&grid);
        let net = build_network(cfg, &weights);
        let cut = self.solver.solve(&net)?;
        cut.check_invariants(cfg)?;

        let contour = cut_to_contour(&cut, &grid, img.spacing());
        let diameter_mm = contour.max_diameter_mm()?;
        let area_mm2 = contour.area_mm2()?;
        Ok(SegmentationResult {
            seed,
            cfg: *cfg,
            contour,
            cut,
            diameter_mm,
            area_mm2,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    pub fn sweep(&self, img: &GrayImage, seeds: &[Point], cfg: &TemplateConfig) -> Vec<Result<SegmentationResult>> {
        seeds.iter().map(|&s| self.segment(img, s, cfg)).collect()
    }
}

/// Segments the lesion around `seed` with the default solver.
pub fn segment_at(img: &GrayImage, seed: Point, cfg: &TemplateConfig) -> Result<SegmentationResult> {
    Segmenter::default().segment(img, seed, cfg)
}

/// Replays a cursor path. Failures are reported per seed; the sweep always runs to the end.
pub fn sweep(img: &GrayImage, seeds: &[Point], cfg: &TemplateConfig) -> Vec<Result<SegmentationResult>> {
    Segmenter::default().sweep(img, seeds, cfg)
}

impl SegmentationResult {
    /// Plain-text record: `#`-prefixed header lines, then one `r x y` line per contour point.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# uscut contour");
        let _ = writeln!(out, "# seed {} {}", self.seed.x, self.seed.y);
        let _ = writeln!(
            out,
            "# cfg rays={} nodes={} radius_px={} delta={}",
            self.cfg.num_rays, self.cfg.nodes_per_ray, self.cfg.radius_px, self.cfg.delta
        );
        let _ = writeln!(out, "# spacing_mm {}", self.contour.spacing);
        let _ = writeln!(out, "# diameter_mm {}", self.diameter_mm);
        let _ = writeln!(out, "# area_mm2 {}", self.area_mm2);
        for (r, p) in self.contour.points.iter().enumerate() {
            let _ = writeln!(out, "{r} {} {}", p.x, p.y);
        }
        out
    }
}

/// A contour record read back from [`SegmentationResult::to_text`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContourRecord {
    pub seed: Point,
    pub cfg: TemplateConfig,
    pub contour: Contour,
    pub diameter_mm: f64,
    pub area_mm2: f64,
}

pub fn parse_contour_text(text: &str) -> Result<ContourRecord> {
    let bad = |msg: String| Error::format("contour", msg);
    let num = |tok: Option<&str>, what: &str| -> Result<f64> {
        tok.and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(format!("missing or malformed {what}")))
    };

    let mut seed = None;
    let mut cfg = None;
    let mut spacing = None;
    let mut diameter = None;
    let mut area = None;
    let mut points = Vec::new();

    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(header) = line.strip_prefix('#') {
            let mut it = header.split_whitespace();
            match it.next() {
                Some("seed") => seed = Some(Point::new(num(it.next(), "seed x")?, num(it.next(), "seed y")?)),
                Some("cfg") => {
                    let mut c = TemplateConfig::default();
                    for kv in it {
                        let (key, value) = kv.split_once('=').ok_or_else(|| bad(format!("bad cfg field {kv:?}")))?;
                        let parse_int = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("bad {key} {v:?}")));
                        match key {
                            "rays" => c.num_rays = parse_int(value)?,
                            "nodes" => c.nodes_per_ray = parse_int(value)?,
                            "delta" => c.delta = parse_int(value)?,
                            "radius_px" => c.radius_px = num(Some(value), "radius_px")?,
                            _ => return Err(bad(format!("unknown cfg field {key:?}"))),
                        }
                    }
                    cfg = Some(c);
                }
                Some("spacing_mm") => spacing = Some(num(it.next(), "spacing_mm")?),
                Some("diameter_mm") => diameter = Some(num(it.next(), "diameter_mm")?),
                Some("area_mm2") => area = Some(num(it.next(), "area_mm2")?),
                _ => {}
            }
            continue;
        }
        let mut it = line.split_whitespace();
        let r: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(format!("bad point line {line:?}")))?;
        if r != points.len() {
            return Err(bad(format!("point {r} out of order")));
        }
        points.push(Point::new(num(it.next(), "x")?, num(it.next(), "y")?));
    }

    Ok(ContourRecord {
        seed: seed.ok_or_else(|| bad("missing seed".into()))?,
        cfg: cfg.ok_or_else(|| bad("missing cfg".into()))?,
        contour: Contour {
            points,
            spacing: spacing.ok_or_else(|| bad("missing spacing_mm".into()))?,
        },
        diameter_mm: diameter.ok_or_else(|| bad("missing diameter_mm".into()))?,
        area_mm2: area.ok_or_else(|| bad("missing area_mm2".into()))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_image_cuts_at_the_rim() {
        let img = GrayImage::filled(256, 256, 0.5).unwrap();
        let cfg = TemplateConfig::default();
        let seed = Point::new(128.0, 128.0);
        let res = segment_at(&img, seed, &cfg).unwrap();
        assert_eq!(res.cut.cut_indices, vec![cfg.nodes_per_ray - 2; cfg.num_rays]);
        let expected = cfg.radius_px * (cfg.nodes_per_ray as f64 - 0.5) / cfg.nodes_per_ray as f64;
        for p in &res.contour.points {
            assert!((p.distance(seed) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn border_seed_is_rejected() {
        let img = GrayImage::filled(64, 64, 0.5).unwrap();
        let cfg = TemplateConfig::new(12, 6, 10.0, 1).unwrap();
        for seed in [Point::new(0.0, 30.0), Point::new(30.0, 63.0), Point::new(-3.0, -3.0)] {
            assert!(matches!(segment_at(&img, seed, &cfg), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let img = GrayImage::filled(64, 64, 0.5).unwrap();
        let cfg = TemplateConfig {
            num_rays: 12,
            nodes_per_ray: 6,
            radius_px: 10.0,
            delta: 6,
        };
        assert!(matches!(segment_at(&img, Point::new(30.0, 30.0), &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_keeps_order_and_reports_failures() {
        let img = GrayImage::filled(64, 64, 0.5).unwrap();
        let cfg = TemplateConfig::new(12, 6, 10.0, 1).unwrap();
        assert!(sweep(&img, &[], &cfg).is_empty());
        let seeds = [Point::new(30.0, 30.0), Point::new(-1.0, 0.0), Point::new(20.0, 25.0)];
        let out = sweep(&img, &seeds, &cfg);
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].as_ref().unwrap().seed, seeds[0]);
        assert!(out[1].is_err());
        assert_eq!(out[2].as_ref().unwrap().seed, seeds[2]);
        let single = segment_at(&img, seeds[0], &cfg).unwrap();
        assert_eq!(single.cut, out[0].as_ref().unwrap().cut);
    }

    #[test]
    fn text_record_round_trips() {
        let img = GrayImage::filled(64, 64, 0.5).unwrap().with_spacing(0.25).unwrap();
        let cfg = TemplateConfig::new(12, 6, 10.0, 1).unwrap();
        let res = segment_at(&img, Point::new(30.5, 31.25), &cfg).unwrap();
        let rec = parse_contour_text(&res.to_text()).unwrap();
        assert_eq!(rec.seed, res.seed);
        assert_eq!(rec.cfg, res.cfg);
        assert_eq!(rec.contour, res.contour);
        assert_eq!(rec.diameter_mm, res.diameter_mm);
        assert_eq!(rec.area_mm2, res.area_mm2);
    }
}
