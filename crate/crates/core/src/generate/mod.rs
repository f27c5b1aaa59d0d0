//! Seeded generators for synthetic ground-truth graphs.
//!
//! Every generator is a pure function of its [`GenSpec`]: the same spec and
//! seed always yield the same graph.

mod ba;
mod er;
mod lfr;
mod ws;

use std::fmt;
use std::str::FromStr;

pub use ba::gen_ba;
pub use er::gen_er;
pub use lfr::{gen_lfr, mixing_fraction, LfrParams};
pub use ws::gen_ws;

use crate::error::{param, Error, Result};
use crate::graph::{basic_stats, Graph};
use crate::meta::Metadata;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Er,
    Ba,
    Ws,
    Lfr,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::Er,
        TopologyKind::Ba,
        TopologyKind::Ws,
        TopologyKind::Lfr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TopologyKind::Er => "er",
            TopologyKind::Ba => "ba",
            TopologyKind::Ws => "ws",
            TopologyKind::Lfr => "lfr",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "er" => Ok(TopologyKind::Er),
            "ba" => Ok(TopologyKind::Ba),
            "ws" => Ok(TopologyKind::Ws),
            "lfr" => Ok(TopologyKind::Lfr),
            other => Err(param(format!("unknown topology '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Er,
    Ba { m_attach: usize },
    Ws { k_ring: usize, beta: f64 },
    Lfr(LfrParams),
}

impl Topology {
    pub fn kind(&self) -> TopologyKind {
        match self {
            Topology::Er => TopologyKind::Er,
            Topology::Ba { .. } => TopologyKind::Ba,
            Topology::Ws { .. } => TopologyKind::Ws,
            Topology::Lfr(_) => TopologyKind::Lfr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub target_avg_degree: f64,
    pub seed: u64,
    pub topology: Topology,
}

pub const DEFAULT_NODES: usize = 500;
pub const DEFAULT_AVG_DEGREE: f64 = 12.0;

impl GenSpec {
    pub fn er(n: usize, target_avg_degree: f64, seed: u64) -> Self {
        GenSpec {
            n,
            target_avg_degree,
            seed,
            topology: Topology::Er,
        }
    }

    pub fn ba(n: usize, m_attach: usize, seed: u64) -> Self {
        GenSpec {
            n,
            target_avg_degree: 2.0 * m_attach as f64,
            seed,
            topology: Topology::Ba { m_attach },
        }
    }

    pub fn ws(n: usize, k_ring: usize, beta: f64, seed: u64) -> Self {
        GenSpec {
            n,
            target_avg_degree: k_ring as f64,
            seed,
            topology: Topology::Ws { k_ring, beta },
        }
    }

    pub fn lfr(n: usize, target_avg_degree: f64, params: LfrParams, seed: u64) -> Self {
        GenSpec {
            n,
            target_avg_degree,
            seed,
            topology: Topology::Lfr(params),
        }
    }

    /// Defaults for each family at `n` nodes and average degree about `avg`:
    /// ER with p = avg/(n-1), BA with avg/2 attachments, WS with an
    /// avg-neighbor ring and beta 0.1, LFR with [`LfrParams::default`].
    pub fn default_for(kind: TopologyKind, n: usize, avg: f64, seed: u64) -> Self {
        let half = ((avg / 2.0).round() as usize).max(1);
        match kind {
            TopologyKind::Er => Self::er(n, avg, seed),
            TopologyKind::Ba => Self::ba(n, half, seed),
            TopologyKind::Ws => Self::ws(n, 2 * half, 0.1, seed),
            TopologyKind::Lfr => Self::lfr(n, avg, LfrParams::default(), seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(param(format!("need at least 2 nodes, got {n}")));
        }
        let avg = self.target_avg_degree;
        if !(avg > 0.0 && avg <= (n - 1) as f64) {
            return Err(param(format!(
                "target average degree must be in (0, n-1], got {avg}"
            )));
        }
        match &self.topology {
            Topology::Er => Ok(()),
            Topology::Ba { m_attach } => {
                if *m_attach >= 1 && *m_attach < n {
                    Ok(())
                } else {
                    Err(param(format!("BA needs 1 <= m_attach < n, got {m_attach}")))
                }
            }
            Topology::Ws { k_ring, beta } => {
                if *k_ring == 0 || k_ring % 2 != 0 || *k_ring >= n {
                    return Err(param(format!(
                        "WS ring degree must be even, positive and below n, got {k_ring}"
                    )));
                }
                if !(0.0..=1.0).contains(beta) {
                    return Err(param(format!("WS beta must be in [0, 1], got {beta}")));
                }
                Ok(())
            }
            Topology::Lfr(p) => p.validate(n, avg),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Community id per node (LFR only).
    pub communities: Option<Vec<usize>>,
    pub meta: Metadata,
}

impl Generated {
    pub fn realized_mixing(&self) -> Option<f64> {
        self.communities
            .as_ref()
            .map(|c| mixing_fraction(&self.graph, c))
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let (graph, communities, mut extra) = match &spec.topology {
        Topology::Er => (gen_er(spec.n, spec.target_avg_degree, spec.seed)?, None, None),
        Topology::Ba { m_attach } => (gen_ba(spec.n, *m_attach, spec.seed)?, None, None),
        Topology::Ws { k_ring, beta } => (gen_ws(spec.n, *k_ring, *beta, spec.seed)?, None, None),
        Topology::Lfr(_) => {
            let out = gen_lfr(spec)?;
            (out.graph, Some(out.communities), Some(out.meta))
        }
    };
    let stats = basic_stats(&graph);
    let mut meta = Metadata::new();
    meta.push("topology", spec.topology.kind())
        .push("seed", spec.seed)
        .push("nodes", stats.n)
        .push("edges", stats.m)
        .push("realized_avg_degree", stats.avg_degree);
    match &spec.topology {
        Topology::Er => {
            meta.push("p", spec.target_avg_degree / (spec.n - 1) as f64);
        }
        Topology::Ba { m_attach } => {
            meta.push("m_attach", m_attach);
        }
        Topology::Ws { k_ring, beta } => {
            meta.push("k_ring", k_ring).push("beta", beta);
        }
        Topology::Lfr(p) => {
            meta.push("tau1", p.tau1)
                .push("tau2", p.tau2)
                .push("mu", p.mu)
                .push("max_degree", p.max_degree)
                .push("min_community", p.min_community)
                .push("max_community", p.max_community);
        }
    }
    if let Some(extra) = extra.take() {
        for (k, v) in extra.entries() {
            meta.push(k, v);
        }
    }
    Ok(Generated {
        graph,
        communities,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(GenSpec::er(1, 0.5, 0).validate().is_err());
        assert!(GenSpec::er(10, 0.0, 0).validate().is_err());
        assert!(GenSpec::er(10, 10.0, 0).validate().is_err());
        assert!(GenSpec::ba(10, 0, 0).validate().is_err());
        assert!(GenSpec::ba(10, 10, 0).validate().is_err());
        assert!(GenSpec::ws(10, 3, 0.1, 0).validate().is_err());
        assert!(GenSpec::ws(10, 10, 0.1, 0).validate().is_err());
        assert!(GenSpec::ws(10, 4, 1.5, 0).validate().is_err());
        assert!(GenSpec::ws(10, 4, 0.5, 0).validate().is_ok());
    }

    #[test]
    fn defaults_hit_degree_twelve() {
        let ba = GenSpec::default_for(TopologyKind::Ba, 500, 12.0, 0);
        assert_eq!(ba.topology, Topology::Ba { m_attach: 6 });
        let ws = GenSpec::default_for(TopologyKind::Ws, 500, 12.0, 0);
        assert_eq!(ws.topology, Topology::Ws { k_ring: 12, beta: 0.1 });
    }

    #[test]
    fn metadata_sidecar_fields() {
        let out = generate(&GenSpec::ws(20, 4, 0.0, 3)).unwrap();
        assert_eq!(out.meta.get("topology"), Some("ws"));
        assert_eq!(out.meta.get("seed"), Some("3"));
        assert_eq!(out.meta.get("realized_avg_degree"), Some("4"));
        assert!(out.realized_mixing().is_none());
    }

    #[test]
    fn topology_names_parse() {
        for k in TopologyKind::ALL {
            assert_eq!(k.name().parse::<TopologyKind>().unwrap(), k);
        }
        assert!("grid".parse::<TopologyKind>().is_err());
    }
}
