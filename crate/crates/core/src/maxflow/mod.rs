//! Exact s-t max-flow / min-cut on the template network.
//!
//! Capacities are `f64`. Residual capacities at or below [`RESIDUAL_EPSILON`] count as
//! saturated, both while augmenting and when reading off the cut. The reported source side is
//! always the set of vertices reachable from the source in the final residual graph, i.e. the
//! minimal source set among all minimum cuts, so it does not depend on the solver or on arc
//! order. The flow value is the capacity of that cut summed in a canonical arc order.

mod bk;
mod dimacs;
mod dinic;
mod oracle;
mod residual;

pub use dimacs::{parse_dimacs, write_dimacs};
pub use oracle::{brute_force_cut, OracleCut, ORACLE_MAX_NODES, ORACLE_MAX_RAYS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemplateConfig;
use residual::Residual;

/// Residual capacity treated as zero.
pub const RESIDUAL_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

/// A directed capacitated graph with distinguished source and sink.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    vertex_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
    template: Option<TemplateConfig>,
}

impl FlowNetwork {
    pub fn new(vertex_count: usize, source: usize, sink: usize) -> Self {
        FlowNetwork {
            vertex_count,
            source,
            sink,
            arcs: Vec::new(),
            template: None,
        }
    }

    pub fn reserve(&mut self, additional: usize) {
        self.arcs.reserve(additional);
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: f64) {
        self.arcs.push(Arc { from, to, capacity });
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arcs_mut(&mut self) -> &mut Vec<Arc> {
        &mut self.arcs
    }

    /// The template layout, when this network was built from one. Enables cut-index extraction.
    pub fn template(&self) -> Option<&TemplateConfig> {
        self.template.as_ref()
    }

    pub fn set_template(&mut self, cfg: TemplateConfig) {
        self.template = Some(cfg);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count;
        if self.source >= n || self.sink >= n {
            return Err(Error::Network(format!(
                "terminal ids ({}, {}) out of range for {n} vertices",
                self.source, self.sink
            )));
        }
        if self.source == self.sink {
            return Err(Error::Network("source and sink coincide".into()));
        }
        for (idx, arc) in self.arcs.iter().enumerate() {
            if arc.from >= n || arc.to >= n {
                return Err(Error::Network(format!(
                    "arc {idx} ({} -> {}) references a missing vertex",
                    arc.from, arc.to
                )));
            }
            if !(arc.capacity.is_finite() && arc.capacity >= 0.0) {
                return Err(Error::Network(format!(
                    "arc {idx} has invalid capacity {}",
                    arc.capacity
                )));
            }
        }
        if !self.arcs.iter().any(|a| a.from == self.source && a.to != self.source) {
            return Err(Error::Network("source is not connected to any vertex".into()));
        }
        if let Some(cfg) = &self.template {
            cfg.validate()?;
            if cfg.node_count() + 2 != n {
                return Err(Error::Network(format!(
                    "template with {} nodes does not match {n} vertices",
                    cfg.node_count()
                )));
            }
        }
        Ok(())
    }
}

/// Which augmenting-path algorithm drives the solve. All produce the same [`CutResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Solver {
    /// Dual search trees grown from both terminals, reused across augmentations.
    #[default]
    BoykovKolmogorov,
    /// Blocking flows on BFS level graphs.
    Dinic,
}

impl Solver {
    pub fn solve(self, net: &FlowNetwork) -> Result<CutResult> {
        net.validate()?;
        let mut residual = Residual::new(net);
        match self {
            Solver::BoykovKolmogorov => bk::run(&mut residual, net.source(), net.sink()),
            Solver::Dinic => dinic::run(&mut residual, net.source(), net.sink()),
        }
        let source_side = residual.reachable_from(net.source());
        let flow_value = cut_capacity(net, &source_side);
        let cut_indices = match net.template() {
            Some(cfg) => cut_indices(cfg, &source_side),
            None => Vec::new(),
        };
        let cut = CutResult {
            flow_value,
            source_side,
            cut_indices,
        };
        if cfg!(debug_assertions) {
            if let Some(cfg) = net.template() {
                if let Err(e) = cut.check_invariants(cfg) {
                    panic!("{e}");
                }
            }
        }
        Ok(cut)
    }
}

/// Minimum cut of `net` with the default solver.
pub fn max_flow(net: &FlowNetwork) -> Result<CutResult> {
    Solver::default().solve(net)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub flow_value: f64,
    /// Minimal source set: vertices reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
    /// Outermost source-side node per ray. Empty for networks without a template layout.
    pub cut_indices: Vec<usize>,
}

impl CutResult {
    /// Checks the prefix property, the index range and the circular smoothness bound.
    pub fn check_invariants(&self, cfg: &TemplateConfig) -> Result<()> {
        let (rays, nodes) = (cfg.num_rays, cfg.nodes_per_ray);
        if self.cut_indices.len() != rays {
            return Err(Error::Invariant(format!(
                "expected {rays} cut indices, got {}",
                self.cut_indices.len()
            )));
        }
        for r in 0..rays {
            let k = self.cut_indices[r];
            if k > nodes - 2 {
                return Err(Error::Invariant(format!("ray {r}: cut index {k} outside [0, {}]", nodes - 2)));
            }
            for i in 0..nodes {
                if self.source_side[cfg.node_id(r, i)] != (i <= k) {
                    return Err(Error::Invariant(format!(
                        "ray {r}: source side is not the prefix 0..={k} (node {i})"
                    )));
                }
            }
            let next = self.cut_indices[(r + 1) % rays];
            if k.abs_diff(next) > cfg.delta {
                return Err(Error::Invariant(format!(
                    "rays {r} and {}: |{k} - {next}| exceeds delta {}",
                    (r + 1) % rays,
                    cfg.delta
                )));
            }
        }
        Ok(())
    }
}

fn cut_indices(cfg: &TemplateConfig, source_side: &[bool]) -> Vec<usize> {
    (0..cfg.num_rays)
        .map(|r| {
            (0..cfg.nodes_per_ray)
                .rev()
                .find(|&i| source_side[cfg.node_id(r, i)])
                .unwrap_or(0)
        })
        .collect()
}

/// Total capacity from the source side to the sink side, summed in sorted arc order so the
/// value is bit-identical for any insertion order.
fn cut_capacity(net: &FlowNetwork, source_side: &[bool]) -> f64 {
    let mut crossing: Vec<(usize, usize, u64)> = net
        .arcs()
        .iter()
        .filter(|a| source_side[a.from] && !source_side[a.to])
        .map(|a| (a.from, a.to, a.capacity.to_bits()))
        .collect();
    crossing.sort_unstable();
    crossing.iter().map(|&(_, _, bits)| f64::from_bits(bits)).sum()
}
