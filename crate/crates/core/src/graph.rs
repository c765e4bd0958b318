//! The radial template graph.
//!
//! `R` rays leave the seed at equal angular steps, clockwise on screen (`theta = 0` along `+x`,
//! `+y` down). Each ray carries `N` nodes at radii `radius_px * (i + 1) / N`. Node `(r, i)` has
//! vertex id `r * N + i`; the source and sink follow as `R * N` and `R * N + 1`.
//!
//! Infinite-capacity arcs make every finite cut a per-ray prefix cut:
//!
//! * intra-arcs `(r, i) -> (r, i - 1)` keep the source side of a ray contiguous from the seed;
//! * inter-arcs `(r, i) -> (r', max(0, i - delta))` for both ring neighbours `r'` bound the jump of
//!   the cut index between adjacent rays by `delta`;
//! * `s -> (r, 0)` and `(r, N - 1) -> t` pin the seed inside and the template rim outside.
//!
//! Finite terminal arcs carry the gray-value affinities from [`WeightModel`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{GrayImage, SeedStats};
use crate::maxflow::FlowNetwork;
use crate::point::Point;

/// Radial template shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemplateConfig {
    pub num_rays: usize,
    pub nodes_per_ray: usize,
    pub radius_px: f64,
    /// Maximum change in cut index between neighbouring rays.
    pub delta: usize,
}

impl Default for TemplateConfig {
    fn default() -> Self {
        TemplateConfig {
            num_rays: 60,
            nodes_per_ray: 40,
            radius_px: 80.0,
            delta: 2,
        }
    }
}

impl TemplateConfig {
    pub fn new(num_rays: usize, nodes_per_ray: usize, radius_px: f64, delta: usize) -> Result<Self> {
        let cfg = TemplateConfig {
            num_rays,
            nodes_per_ray,
            radius_px,
            delta,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_rays < 3 {
            return Err(Error::Config(format!("need at least 3 rays, got {}", self.num_rays)));
        }
        if self.nodes_per_ray < 3 {
            return Err(Error::Config(format!(
                "need at least 3 nodes per ray, got {}",
                self.nodes_per_ray
            )));
        }
        if !(self.radius_px.is_finite() && self.radius_px > 0.0) {
            return Err(Error::Config(format!("radius must be positive, got {}", self.radius_px)));
        }
        if self.delta > self.nodes_per_ray - 2 {
            return Err(Error::Config(format!(
                "delta {} exceeds nodes_per_ray - 2 = {}",
                self.delta,
                self.nodes_per_ray - 2
            )));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.num_rays * self.nodes_per_ray
    }

    pub fn node_id(&self, ray: usize, index: usize) -> usize {
        ray * self.nodes_per_ray + index
    }

    /// Unit direction of ray `r`.
    pub fn direction(&self, ray: usize) -> (f64, f64) {
        let theta = std::f64::consts::TAU * ray as f64 / self.num_rays as f64;
        (theta.cos(), theta.sin())
    }

    /// Distance of node `i` from the seed.
    pub fn radius(&self, index: usize) -> f64 {
        self.radius_px * (index + 1) as f64 / self.nodes_per_ray as f64
    }

    /// Radial distance between consecutive nodes.
    pub fn node_spacing(&self) -> f64 {
        self.radius_px / self.nodes_per_ray as f64
    }

    /// Position of node `(ray, index)` around `seed`.
    pub fn position(&self, seed: Point, ray: usize, index: usize) -> Point {
        let (dx, dy) = self.direction(ray);
        let rho = self.radius(index);
        Point::new(seed.x + dx * rho, seed.y + dy * rho)
    }
}

/// Node positions and sampled intensities for one seed.
#[derive(Debug, Clone)]
pub struct NodeGrid {
    pub seed: Point,
    pub cfg: TemplateConfig,
    pub positions: Vec<Point>,
    pub intensities: Vec<f64>,
}

impl NodeGrid {
    pub fn position(&self, ray: usize, index: usize) -> Point {
        self.positions[self.cfg.node_id(ray, index)]
    }

    pub fn intensity(&self, ray: usize, index: usize) -> f64 {
        self.intensities[self.cfg.node_id(ray, index)]
    }
}

pub fn sample_nodes(img: &GrayImage, seed: Point, cfg: &TemplateConfig) -> Result<NodeGrid> {
    cfg.validate()?;
    img.require_interior(seed)?;
    let mut positions = Vec::with_capacity(cfg.node_count());
    for r in 0..cfg.num_rays {
        for i in 0..cfg.nodes_per_ray {
            positions.push(cfg.position(seed, r, i));
        }
    }
    let intensities = positions.iter().map(|&p| img.sample(p)).collect();
    Ok(NodeGrid {
        seed,
        cfg: *cfg,
        positions,
        intensities,
    })
}

/// Finite terminal capacities per node, indexed like the node grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalWeights {
    /// Capacity of `s -> v` (object affinity).
    pub source: Vec<f64>,
    /// Capacity of `v -> t` (background affinity).
    pub sink: Vec<f64>,
}

/// Multiple of the seed-disc standard deviation that the contrast scale never drops below.
pub const NOISE_FACTOR: f64 = 1.5;

/// Consecutive saturated background nodes that occlude the rest of a ray.
pub const OCCLUSION_RUN: usize = 2;

/// Seed-contrast terminal weights.
///
/// A node's deviation `d = |I - mu_seed|` is compared with the contrast scale `tau`:
/// `c_s = max(0, tau - d) / tau` and `c_t = max(0, min(d, 2 tau) - tau) / tau`, so `d = 0` is pure
/// object and `d >= 2 tau` pure background. With occlusion enabled, once [`OCCLUSION_RUN`]
/// consecutive nodes on a ray are saturated background, every node further out on that ray is
/// background too. On a profile whose deviation never decreases outward (a noise-free disc),
/// occlusion changes nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightModel {
    pub mu_seed: f64,
    pub tau: f64,
    pub occlusion: bool,
}

impl WeightModel {
    /// The default model: noise-floored scale `max(tau, NOISE_FACTOR * sigma_seed)` with
    /// ray occlusion. Identical to [`WeightModel::seed_contrast`] on noise-free seed regions.
    pub fn from_stats(stats: &SeedStats) -> Self {
        WeightModel::adaptive(stats, NOISE_FACTOR)
    }

    pub fn adaptive(stats: &SeedStats, noise_factor: f64) -> Self {
        WeightModel {
            mu_seed: stats.mu_seed,
            tau: stats.tau.max(noise_factor * stats.sigma_seed),
            occlusion: true,
        }
    }

    /// Plain seed/rim contrast: `tau` straight from the statistics, no occlusion.
    pub fn seed_contrast(stats: &SeedStats) -> Self {
        WeightModel {
            mu_seed: stats.mu_seed,
            tau: stats.tau,
            occlusion: false,
        }
    }

    /// `(c_s, c_t)` for a single intensity.
    pub fn affinities(&self, intensity: f64) -> (f64, f64) {
        let d = (intensity - self.mu_seed).abs();
        let tau = self.tau;
        let source = (tau - d).max(0.0) / tau;
        let sink = (d.min(2.0 * tau) - tau).max(0.0) / tau;
        (source, sink)
    }

    fn saturated(&self, intensity: f64) -> bool {
        (intensity - self.mu_seed).abs() >= 2.0 * self.tau
    }

    pub fn weights(&self, grid: &NodeGrid) -> TerminalWeights {
        let (mut source, mut sink): (Vec<f64>, Vec<f64>) =
            grid.intensities.iter().map(|&v| self.affinities(v)).unzip();
        if self.occlusion {
            let cfg = &grid.cfg;
            for r in 0..cfg.num_rays {
                let mut run = 0;
                for i in 0..cfg.nodes_per_ray {
                    let id = cfg.node_id(r, i);
                    if run >= OCCLUSION_RUN {
                        source[id] = 0.0;
                        sink[id] = 1.0;
                    } else if self.saturated(grid.intensities[id]) {
                        run += 1;
                    } else {
                        run = 0;
                    }
                }
            }
        }
        TerminalWeights { source, sink }
    }
}

/// Finite stand-in for an infinite capacity: exceeds the sum of every finite capacity.
pub fn infinite_capacity(weights: &TerminalWeights) -> f64 {
    weights.source.iter().chain(&weights.sink).sum::<f64>() + 1.0
}

pub fn build_graph(grid: &NodeGrid, stats: &SeedStats) -> FlowNetwork {
    let weights = WeightModel::from_stats(stats).weights(grid);
    build_network(&grid.cfg, &weights)
}

/// Assembles the template network for arbitrary terminal weights.
pub fn build_network(cfg: &TemplateConfig, weights: &TerminalWeights) -> FlowNetwork {
    let (rays, nodes) = (cfg.num_rays, cfg.nodes_per_ray);
    let n = cfg.node_count();
    assert_eq!(weights.source.len(), n, "source weights do not match the template");
    assert_eq!(weights.sink.len(), n, "sink weights do not match the template");

    let inf = infinite_capacity(weights);
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, s, t);
    net.reserve(rays * (nodes - 1) + 2 * n + 2 * rays + 2 * n);

    for r in 0..rays {
        for i in 1..nodes {
            net.add_arc(cfg.node_id(r, i), cfg.node_id(r, i - 1), inf);
        }
    }
    for r in 0..rays {
        let neighbours = [(r + 1) % rays, (r + rays - 1) % rays];
        for &other in &neighbours {
            for i in 0..nodes {
                let target = i.saturating_sub(cfg.delta);
                net.add_arc(cfg.node_id(r, i), cfg.node_id(other, target), inf);
            }
        }
    }
    for r in 0..rays {
        net.add_arc(s, cfg.node_id(r, 0), inf);
        net.add_arc(cfg.node_id(r, nodes - 1), t, inf);
    }
    for v in 0..n {
        if weights.source[v] > 0.0 {
            net.add_arc(s, v, weights.source[v]);
        }
        if weights.sink[v] > 0.0 {
            net.add_arc(v, t, weights.sink[v]);
        }
    }
    net.set_template(*cfg);
    net
}

/// Per-ray cost of cutting after node `k`, `sum_{i > k} c_s + sum_{i <= k} c_t`, for every `k`.
pub fn ray_cut_costs(cfg: &TemplateConfig, weights: &TerminalWeights, ray: usize) -> Vec<f64> {
    let base = cfg.node_id(ray, 0);
    let nodes = cfg.nodes_per_ray;
    let source = &weights.source[base..base + nodes];
    let sink = &weights.sink[base..base + nodes];
    (0..nodes - 1)
        .map(|k| source[k + 1..].iter().sum::<f64>() + sink[..=k].iter().sum::<f64>())
        .collect()
}
