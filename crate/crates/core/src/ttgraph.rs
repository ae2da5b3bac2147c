//! Tracker-tracker (TT) co-occurrence graph derived from a PT graph.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{
    summarize, write_edge_list, DensityMode, Graph, GraphBuilder, GraphSummary, Role,
};
use crate::ptgraph::PtGraph;
use crate::{Error, Result};

pub const DEFAULT_THETA: u32 = 2;

/// Undirected graph over trackers; the weight of `(i, j)` is the number of
/// publishers embedding both, and only pairs with weight `>= theta` are
/// kept. Trackers with no kept pair stay as isolated nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TtGraph {
    pub graph: Graph,
    pub theta: u32,
}

impl TtGraph {
    pub fn write_edges<W: Write>(&self, out: W) -> Result<()> {
        write_edge_list(&self.graph, out, ["node_a", "node_b", "weight"])
    }
}

/// Counts, for every tracker pair sharing a publisher, the number of shared
/// publishers. Keys are PT node indices with `a < b`.
fn cooccurrence(g: &Graph) -> HashMap<(usize, usize), u32> {
    let publishers: Vec<usize> = (0..g.node_count())
        .filter(|&i| g.node(i).role == Role::Publisher)
        .collect();
    publishers
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<(usize, usize), u32>, &p| {
            let ts = g.neighbors(p);
            for (k, &(a, _)) in ts.iter().enumerate() {
                for &(b, _) in &ts[k + 1..] {
                    *acc.entry((a, b)).or_default() += 1;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut x, mut y| {
            if x.len() < y.len() {
                std::mem::swap(&mut x, &mut y);
            }
            for (k, v) in y {
                *x.entry(k).or_default() += v;
            }
            x
        })
}

pub fn build_tt(pt: &PtGraph, theta: u32) -> Result<TtGraph> {
    if theta < 1 {
        return Err(Error::InvalidInput(
            "co-occurrence threshold must be >= 1".into(),
        ));
    }
    let g = pt.graph();
    let mut b = GraphBuilder::new();
    for t in pt.trackers() {
        b.add_node((t, Role::Tracker));
    }
    let mut pairs: Vec<((usize, usize), u32)> = cooccurrence(g)
        .into_iter()
        .filter(|&(_, c)| c >= theta)
        .collect();
    pairs.sort_unstable();
    for ((a, b_), c) in pairs {
        b.add_edge(g.node(a).clone(), g.node(b_).clone(), c as f64)?;
    }
    Ok(TtGraph {
        graph: b.build(),
        theta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TtSummary {
    /// Trackers in the graph, isolated ones included.
    pub n_nodes_all: usize,
    pub theta: u32,
    /// Characteristics of the LCC.
    #[serde(flatten)]
    pub lcc: GraphSummary,
}

/// Characteristics row on the LCC with general density.
pub fn tt_summary(g: &TtGraph) -> Result<TtSummary> {
    if g.graph.edge_count() == 0 {
        return Err(Error::Undefined("TT graph has no edges".into()));
    }
    let core = crate::graph::lcc(&g.graph);
    Ok(TtSummary {
        n_nodes_all: g.graph.node_count(),
        theta: g.theta,
        lcc: summarize(&core, DensityMode::General, false)?,
    })
}
