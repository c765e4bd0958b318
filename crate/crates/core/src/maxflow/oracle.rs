//! Exhaustive search over feasible per-ray cut indices. Verification only.

use crate::error::{Error, Result};
use crate::graph::{ray_cut_costs, TemplateConfig, TerminalWeights};

pub const ORACLE_MAX_RAYS: usize = 10;
pub const ORACLE_MAX_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCut {
    pub min_cost: f64,
    /// Lexicographically smallest minimiser.
    pub cut_indices: Vec<usize>,
    /// Whether no other feasible index vector reaches `min_cost`.
    pub unique: bool,
}

/// Minimises `sum_r [ sum_{i > k_r} c_s(r, i) + sum_{i <= k_r} c_t(r, i) ]` over all
/// `k_r in [0, N - 2]` with `|k_r - k_{(r + 1) mod R}| <= delta`.
pub fn brute_force_cut(weights: &TerminalWeights, cfg: &TemplateConfig) -> Result<OracleCut> {
    cfg.validate()?;
    if cfg.num_rays > ORACLE_MAX_RAYS || cfg.nodes_per_ray > ORACLE_MAX_NODES {
        return Err(Error::Domain(format!(
            "oracle limited to {ORACLE_MAX_RAYS} rays and {ORACLE_MAX_NODES} nodes per ray, got {}x{}",
            cfg.num_rays, cfg.nodes_per_ray
        )));
    }
    if weights.source.len() != cfg.node_count() || weights.sink.len() != cfg.node_count() {
        return Err(Error::Domain("weights do not match the template".into()));
    }

    let costs: Vec<Vec<f64>> = (0..cfg.num_rays)
        .map(|r| ray_cut_costs(cfg, weights, r))
        .collect();

    let mut search = Enumeration {
        costs: &costs,
        delta: cfg.delta,
        top: cfg.nodes_per_ray - 2,
        current: Vec::with_capacity(cfg.num_rays),
        best: None,
        ties: 0,
    };
    search.descend(0.0);
    let (min_cost, cut_indices) = search.best.expect("at least one feasible cut exists");
    Ok(OracleCut {
        min_cost,
        cut_indices,
        unique: search.ties == 0,
    })
}

struct Enumeration<'a> {
    costs: &'a [Vec<f64>],
    delta: usize,
    top: usize,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    ties: usize,
}

impl Enumeration<'_> {
    fn descend(&mut self, partial: f64) {
        let depth = self.current.len();
        if depth == self.costs.len() {
            let first = self.current[0];
            let last = self.current[depth - 1];
            if first.abs_diff(last) <= self.delta {
                self.offer(partial);
            }
            return;
        }
        let (lo, hi) = match self.current.last() {
            Some(&prev) => (prev.saturating_sub(self.delta), (prev + self.delta).min(self.top)),
            None => (0, self.top),
        };
        for k in lo..=hi {
            self.current.push(k);
            self.descend(partial + self.costs[depth][k]);
            self.current.pop();
        }
    }

    fn offer(&mut self, cost: f64) {
        match &mut self.best {
            None => self.best = Some((cost, self.current.clone())),
            Some((best, indices)) => {
                let tol = 1e-12 * (1.0 + best.abs());
                if cost < *best - tol {
                    *best = cost;
                    indices.clone_from(&self.current);
                    self.ties = 0;
                } else if (cost - *best).abs() <= tol {
                    self.ties += 1;
                }
            }
        }
    }
}
