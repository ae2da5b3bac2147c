//! Undirected weighted graphs and the metric suite shared by the PT, TT and
//! CS analyses.
//!
//! A node is identified by its `(id, role)` pair so a domain visited as a
//! publisher and embedded elsewhere as a tracker yields two nodes. Nodes are
//! stored in lexicographic `(id, role)` order and every algorithm iterates in
//! that order, which keeps outputs bit-stable.

mod io;
mod metrics;
mod stats;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use io::{fmt_weight, read_edge_list, read_roles, write_edge_list, write_roles};
pub use metrics::{
    avg_clustering, avg_redundancy, betweenness, components, core_numbers, coreness,
    degree_centrality, density, diameter, lcc, local_clustering, norm_avg_weight, summarize,
    DensityMode,
};
pub use stats::{pearson, Correlation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Publisher,
    Tracker,
    Untyped,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Publisher => "publisher",
            Role::Tracker => "tracker",
            Role::Untyped => "untyped",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "publisher" => Ok(Role::Publisher),
            "tracker" => Ok(Role::Tracker),
            "untyped" | "" => Ok(Role::Untyped),
            other => Err(Error::parse("role", format!("unknown role {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub id: String,
    pub role: Role,
}

impl Node {
    pub fn new(id: impl Into<String>, role: Role) -> Self {
        Self {
            id: id.into(),
            role,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.id, self.role.as_str())
    }
}

impl From<&str> for Node {
    fn from(id: &str) -> Self {
        Node::new(id, Role::Untyped)
    }
}

impl From<(&str, Role)> for Node {
    fn from((id, role): (&str, Role)) -> Self {
        Node::new(id, role)
    }
}

/// Immutable undirected graph with positive edge weights.
///
/// Invariants: no self-loops, at most one edge per node pair, adjacency
/// lists sorted by neighbor index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    nodes: Vec<Node>,
    adj: Vec<Vec<(usize, f64)>>,
    n_edges: usize,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn find(&self, id: &str, role: Role) -> Option<usize> {
        self.nodes
            .binary_search_by(|n| (n.id.as_str(), n.role).cmp(&(id, role)))
            .ok()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.adj[a]
            .binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|k| self.adj[a][k].1)
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.nodes.iter().filter(|n| n.role == role).count()
    }

    /// Node-induced subgraph on the nodes with `keep[i] == true`.
    pub fn induced(&self, keep: &[bool]) -> Graph {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if keep[i] {
                remap[i] = nodes.len();
                nodes.push(node.clone());
            }
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        let mut n_edges = 0;
        for (i, nbrs) in self.adj.iter().enumerate() {
            if !keep[i] {
                continue;
            }
            let list: &mut Vec<(usize, f64)> = &mut adj[remap[i]];
            for &(j, w) in nbrs {
                if keep[j] {
                    list.push((remap[j], w));
                    if j > i {
                        n_edges += 1;
                    }
                }
            }
        }
        Graph {
            nodes,
            adj,
            n_edges,
        }
    }

    /// Subgraph induced on the nodes whose ids are in `ids`, any role.
    pub fn induced_on_ids(&self, ids: &BTreeSet<String>) -> Graph {
        let keep: Vec<bool> = self.nodes.iter().map(|n| ids.contains(&n.id)).collect();
        self.induced(&keep)
    }

    /// Undirected edge keys by node id, `(a, b)` with `a < b`.
    pub fn edge_keys(&self) -> BTreeSet<(String, String)> {
        self.edges()
            .map(|(u, v, _)| edge_key(&self.nodes[u].id, &self.nodes[v].id))
            .collect()
    }
}

/// Order-independent key for an undirected edge between two ids.
pub fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Accumulates nodes and edges; duplicate edges are merged by summing
/// their weights.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: BTreeSet<Node>,
    edges: BTreeMap<(Node, Node), f64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, node: impl Into<Node>) -> &mut Self {
        self.nodes.insert(node.into());
        self
    }

    pub fn add_edge(
        &mut self,
        a: impl Into<Node>,
        b: impl Into<Node>,
        weight: f64,
    ) -> Result<&mut Self> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::InvalidInput(format!("self-loop on {a}")));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidInput(format!(
                "edge {a} - {b} has non-positive weight {weight}"
            )));
        }
        self.nodes.insert(a.clone());
        self.nodes.insert(b.clone());
        let key = if a < b { (a, b) } else { (b, a) };
        *self.edges.entry(key).or_insert(0.0) += weight;
        Ok(self)
    }

    pub fn build(self) -> Graph {
        let nodes: Vec<Node> = self.nodes.into_iter().collect();
        let index: HashMap<&Node, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        for ((a, b), w) in &self.edges {
            let (ia, ib) = (index[a], index[b]);
            adj[ia].push((ib, *w));
            adj[ib].push((ia, *w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(n, _)| n);
        }
        let n_edges = self.edges.len();
        Graph {
            nodes,
            adj,
            n_edges,
        }
    }
}

/// Per-node centrality triple, each normalized to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub degree_centrality: f64,
    pub betweenness: f64,
    pub coreness: f64,
}

/// One row of a graph characteristics table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    /// N
    pub n_nodes: usize,
    /// E
    pub n_edges: usize,
    /// W: mean edge weight over the maximum edge weight.
    pub norm_avg_weight: f64,
    /// CC: mean local triangle clustering.
    pub avg_clustering: f64,
    /// Mean bipartite redundancy coefficient, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub avg_redundancy: Option<f64>,
    /// DE
    pub density: f64,
    /// D
    pub diameter: usize,
}
