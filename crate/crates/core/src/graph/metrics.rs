//! Structural metrics over [`Graph`].
//!
//! Shortest-path quantities (betweenness, diameter) use hop counts; edge
//! weights only enter [`norm_avg_weight`]. Per-source work is spread over
//! rayon in fixed-size chunks that are reduced in chunk order, so results do
//! not depend on the thread count.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use super::{Graph, GraphSummary, Role};
use crate::{Error, Result};

/// Sources handled per parallel task. Fixed so the floating-point
/// reduction order never depends on the pool size.
const SOURCE_CHUNK: usize = 32;

/// Connected components as sorted node-index lists, ordered by their
/// smallest member.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest connected component as an induced subgraph. Ties go to the
/// component holding the lexicographically smallest node.
pub fn lcc(g: &Graph) -> Graph {
    let comps = components(g);
    let mut best: Option<&Vec<usize>> = None;
    for c in &comps {
        if best.is_none_or(|b| c.len() > b.len()) {
            best = Some(c);
        }
    }
    let mut keep = vec![false; g.node_count()];
    for &v in best.into_iter().flatten() {
        keep[v] = true;
    }
    g.induced(&keep)
}

/// Unweighted degree over `N - 1`, indexed like `g.nodes()`.
pub fn degree_centrality(g: &Graph) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::Undefined(format!(
            "degree centrality needs at least 2 nodes, got {n}"
        )));
    }
    let denom = (n - 1) as f64;
    Ok((0..n).map(|v| g.degree(v) as f64 / denom).collect())
}

struct BrandesScratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        Self {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    /// Adds the dependencies of source `s` onto `acc`.
    fn accumulate(&mut self, g: &Graph, s: usize, acc: &mut [f64]) {
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
        self.order.clear();

        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &(w, _) in g.neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }

        // predecessors of w are exactly the neighbors one hop closer to s
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &(v, _) in g.neighbors(w) {
                if self.dist[v] == self.dist[w] - 1 {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}

/// Brandes betweenness on hop-count shortest paths, normalized by
/// `(N-1)(N-2)/2`. Graphs with fewer than three nodes score all zeros.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut scratch = BrandesScratch::new(n);
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, x) in total.iter_mut().zip(part) {
            *t += x;
        }
    }
    // every unordered pair is seen from both endpoints
    let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
    total.iter().map(|b| b * scale).collect()
}

/// k-core number of every node (Batagelj-Zaversnik bucket peeling).
pub fn core_numbers(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = start of degree-d block in `vert`
    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            vert[pos[v]] = v;
            next[deg[v]] += 1;
        }
    }

    for i in 0..n {
        let v = vert[i];
        for &(u, _) in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg
}

/// Core numbers scaled by the graph's maximum core number; all zeros when
/// the graph has no edges.
pub fn coreness(g: &Graph) -> Vec<f64> {
    let cores = core_numbers(g);
    let max = cores.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return vec![0.0; cores.len()];
    }
    cores.iter().map(|&c| c as f64 / max as f64).collect()
}

/// Local triangle clustering `2T(v) / (deg(v)(deg(v)-1))`; zero when
/// `deg(v) < 2`.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |mark, v| {
                let d = g.degree(v);
                if d < 2 {
                    return 0.0;
                }
                for &(u, _) in g.neighbors(v) {
                    mark[u] = true;
                }
                let mut links = 0usize;
                for &(u, _) in g.neighbors(v) {
                    links += g
                        .neighbors(u)
                        .iter()
                        .filter(|&&(w, _)| w > u && mark[w])
                        .count();
                }
                for &(u, _) in g.neighbors(v) {
                    mark[u] = false;
                }
                2.0 * links as f64 / (d * (d - 1)) as f64
            },
        )
        .collect()
}

pub fn avg_clustering(g: &Graph) -> f64 {
    mean(&local_clustering(g))
}

/// Mean redundancy coefficient: for each node, the share of its neighbor
/// pairs that are also jointly linked to some other node. Meaningful on
/// bipartite graphs where triangle clustering is identically zero.
/// Nodes with degree below 2 contribute zero.
///
/// Cost grows with the square of hub degrees.
pub fn avg_redundancy(g: &Graph) -> f64 {
    let n = g.node_count();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |mark, v| {
                let d = g.degree(v);
                if d < 2 {
                    return 0.0;
                }
                for &(u, _) in g.neighbors(v) {
                    mark[u] = true;
                }
                let mut pairs: HashSet<(usize, usize)> = HashSet::new();
                for &(u, _) in g.neighbors(v) {
                    for &(x, _) in g.neighbors(u) {
                        if x == v {
                            continue;
                        }
                        for &(w, _) in g.neighbors(x) {
                            if w > u && mark[w] {
                                pairs.insert((u, w));
                            }
                        }
                    }
                }
                for &(u, _) in g.neighbors(v) {
                    mark[u] = false;
                }
                2.0 * pairs.len() as f64 / (d * (d - 1)) as f64
            },
        )
        .collect();
    mean(&values)
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    /// `2E / (N (N-1))`
    General,
    /// `E / (|publishers| * |trackers|)`
    Bipartite,
}

pub fn density(g: &Graph, mode: DensityMode) -> Result<f64> {
    let e = g.edge_count() as f64;
    match mode {
        DensityMode::General => {
            let n = g.node_count();
            if n < 2 {
                return Err(Error::Undefined(format!(
                    "general density needs at least 2 nodes, got {n}"
                )));
            }
            Ok(2.0 * e / (n as f64 * (n - 1) as f64))
        }
        DensityMode::Bipartite => {
            let p = g.count_role(Role::Publisher);
            let t = g.count_role(Role::Tracker);
            if p == 0 || t == 0 {
                return Err(Error::Undefined(format!(
                    "bipartite density needs both roles, got {p} publishers and {t} trackers"
                )));
            }
            Ok(e / (p as f64 * t as f64))
        }
    }
}

fn eccentricity(
    g: &Graph,
    s: usize,
    dist: &mut [i64],
    queue: &mut VecDeque<usize>,
) -> Option<usize> {
    dist.fill(-1);
    dist[s] = 0;
    queue.push_back(s);
    let mut reached = 1;
    let mut ecc = 0;
    while let Some(v) = queue.pop_front() {
        for &(u, _) in g.neighbors(v) {
            if dist[u] < 0 {
                dist[u] = dist[v] + 1;
                ecc = ecc.max(dist[u]);
                reached += 1;
                queue.push_back(u);
            }
        }
    }
    (reached == g.node_count()).then_some(ecc as usize)
}

/// Exact hop-count diameter. The graph must be connected.
pub fn diameter(g: &Graph) -> Result<usize> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Undefined("diameter of an empty graph".into()));
    }
    let eccs: Vec<Option<usize>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![-1i64; n], VecDeque::new()),
            |(dist, queue), s| eccentricity(g, s, dist, queue),
        )
        .collect();
    eccs.into_iter()
        .try_fold(0, |acc, e| e.map(|e| acc.max(e)))
        .ok_or(Error::Disconnected)
}

/// Mean of `w / max_w` over all edges.
pub fn norm_avg_weight(g: &Graph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::Undefined(
            "normalized average weight of an edgeless graph".into(),
        ));
    }
    let max_w = g.edges().map(|(_, _, w)| w).fold(0.0, f64::max);
    let sum: f64 = g.edges().map(|(_, _, w)| w / max_w).sum();
    Ok(sum / g.edge_count() as f64)
}

/// Full characteristics row for a connected graph.
pub fn summarize(g: &Graph, mode: DensityMode, with_redundancy: bool) -> Result<GraphSummary> {
    Ok(GraphSummary {
        n_nodes: g.node_count(),
        n_edges: g.edge_count(),
        norm_avg_weight: norm_avg_weight(g)?,
        avg_clustering: avg_clustering(g),
        avg_redundancy: with_redundancy.then(|| avg_redundancy(g)),
        density: density(g, mode)?,
        diameter: diameter(g)?,
    })
}
