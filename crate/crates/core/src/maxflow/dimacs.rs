//! DIMACS max-flow text format (`p max`, `n id s|t`, `a u v cap`, 1-based vertex ids).
//! Capacities are written in shortest round-trip decimal form.

use std::fmt::Write as _;

use super::FlowNetwork;
use crate::error::{Error, Result};

pub fn write_dimacs(net: &FlowNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c uscut template network");
    if let Some(cfg) = net.template() {
        let _ = writeln!(
            out,
            "c template rays={} nodes={} radius_px={} delta={}",
            cfg.num_rays, cfg.nodes_per_ray, cfg.radius_px, cfg.delta
        );
    }
    let _ = writeln!(out, "p max {} {}", net.vertex_count(), net.arcs().len());
    let _ = writeln!(out, "n {} s", net.source() + 1);
    let _ = writeln!(out, "n {} t", net.sink() + 1);
    for arc in net.arcs() {
        let _ = writeln!(out, "a {} {} {}", arc.from + 1, arc.to + 1, arc.capacity);
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<FlowNetwork> {
    let mut header: Option<(usize, usize)> = None;
    let mut source = None;
    let mut sink = None;
    let mut arcs = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let bad = |what: &str| Error::Network(format!("line {}: {what}: {raw:?}", lineno + 1));
        let mut fields = line.split_whitespace();
        match fields.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(bad("duplicate problem line"));
                }
                if fields.next() != Some("max") {
                    return Err(bad("expected problem type max"));
                }
                let n = parse_usize(fields.next()).ok_or_else(|| bad("bad vertex count"))?;
                let m = parse_usize(fields.next()).ok_or_else(|| bad("bad arc count"))?;
                header = Some((n, m));
            }
            Some("n") => {
                let id = parse_usize(fields.next()).ok_or_else(|| bad("bad node id"))?;
                let id = id.checked_sub(1).ok_or_else(|| bad("node ids are 1-based"))?;
                match fields.next() {
                    Some("s") => source = Some(id),
                    Some("t") => sink = Some(id),
                    _ => return Err(bad("node designator must be s or t")),
                }
            }
            Some("a") => {
                let from = parse_usize(fields.next()).and_then(|v| v.checked_sub(1));
                let to = parse_usize(fields.next()).and_then(|v| v.checked_sub(1));
                let cap = fields.next().and_then(|f| f.parse::<f64>().ok());
                match (from, to, cap) {
                    (Some(from), Some(to), Some(cap)) => arcs.push((from, to, cap)),
                    _ => return Err(bad("malformed arc")),
                }
            }
            Some(_) => return Err(bad("unknown line type")),
        }
    }

    let (n, m) = header.ok_or_else(|| Error::Network("missing problem line".into()))?;
    if arcs.len() != m {
        return Err(Error::Network(format!(
            "problem line declares {m} arcs, found {}",
            arcs.len()
        )));
    }
    let source = source.ok_or_else(|| Error::Network("missing source designator".into()))?;
    let sink = sink.ok_or_else(|| Error::Network("missing sink designator".into()))?;
    let mut net = FlowNetwork::new(n, source, sink);
    net.reserve(m);
    for (from, to, cap) in arcs {
        net.add_arc(from, to, cap);
    }
    net.validate()?;
    Ok(net)
}

fn parse_usize(field: Option<&str>) -> Option<usize> {
    field?.parse().ok()
}
