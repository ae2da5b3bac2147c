//! Slow reference implementations used to cross-check the library. They
//! work on plain `(n, edge list)` graphs and share no code with it.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use trackscope::graph::{Graph, GraphBuilder, Role};

/// Plain undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone)]
pub struct Plain {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
    /// Node `i` is a publisher when `side[i] == Some(false)`, tracker when
    /// `Some(true)`; `None` for general graphs.
    pub side: Vec<Option<bool>>,
}

impl Plain {
    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let mut a = vec![vec![false; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = true;
            a[v][u] = true;
        }
        a
    }

    pub fn id(i: usize) -> String {
        format!("n{i:03}")
    }

    /// Same graph as a library `Graph`; node index `i` maps to index `i`.
    pub fn to_graph(&self) -> Graph {
        let role = |i: usize| match self.side[i] {
            None => Role::Untyped,
            Some(false) => Role::Publisher,
            Some(true) => Role::Tracker,
        };
        let mut b = GraphBuilder::new();
        for i in 0..self.n {
            b.add_node((Self::id(i).as_str(), role(i)));
        }
        for &(u, v) in &self.edges {
            b.add_edge(
                (Self::id(u).as_str(), role(u)),
                (Self::id(v).as_str(), role(v)),
                1.0,
            )
            .unwrap();
        }
        b.build()
    }
}

fn add(edges: &mut BTreeSet<(usize, usize)>, u: usize, v: usize) {
    edges.insert((u.min(v), u.max(v)));
}

/// Random graph with `n` nodes and edge probability `p`; bipartite graphs
/// split nodes into two sides and only join across them. With `connected`
/// a random spanning tree is added first.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    p: f64,
    bipartite: bool,
    connected: bool,
) -> Plain {
    let side: Vec<Option<bool>> = if bipartite {
        let split = rng.gen_range(1..n.max(2));
        (0..n).map(|i| Some(i >= split)).collect()
    } else {
        vec![None; n]
    };
    let allowed = |u: usize, v: usize| u != v && (!bipartite || side[u] != side[v]);
    let mut edges = BTreeSet::new();
    if connected && n > 1 {
        if bipartite {
            let (ps, ts): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| side[i] == Some(false));
            // chain every node to a random node on the other side, then
            // link the sides' first nodes
            add(&mut edges, ps[0], ts[0]);
            for &p_ in &ps[1..] {
                add(&mut edges, p_, ts[rng.gen_range(0..ts.len())]);
            }
            for &t in &ts[1..] {
                add(&mut edges, t, ps[rng.gen_range(0..ps.len())]);
            }
        } else {
            for v in 1..n {
                add(&mut edges, v, rng.gen_range(0..v));
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            if allowed(u, v) && rng.gen_bool(p) {
                add(&mut edges, u, v);
            }
        }
    }
    Plain { n, edges, side }
}

/// All-pairs hop distances; `usize::MAX` for unreachable pairs.
pub fn floyd_warshall(g: &Plain) -> Vec<Vec<usize>> {
    let inf = usize::MAX;
    let mut d = vec![vec![inf; g.n]; g.n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in &g.edges {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..g.n {
        for i in 0..g.n {
            for j in 0..g.n {
                if d[i][k] != inf && d[k][j] != inf && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn diameter(g: &Plain) -> Option<usize> {
    let d = floyd_warshall(g);
    let mut best = 0;
    for row in &d {
        for &x in row {
            if x == usize::MAX {
                return None;
            }
            best = best.max(x);
        }
    }
    Some(best)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Component of the largest size, ties to the one with the smallest node.
pub fn lcc_nodes(g: &Plain) -> BTreeSet<usize> {
    let mut parent: Vec<usize> = (0..g.n).collect();
    for &(u, v) in &g.edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a.max(b)] = a.min(b);
    }
    let mut comps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..g.n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().insert(i);
    }
    comps
        .into_values()
        .max_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| b.first().cmp(&a.first()))
        })
        .unwrap_or_default()
}

/// Betweenness by explicit enumeration of every shortest path between
/// every unordered pair, normalized by `(n-1)(n-2)/2`.
pub fn betweenness(g: &Plain) -> Vec<f64> {
    let d = floyd_warshall(g);
    let a = g.adjacency();
    let mut bc = vec![0.0; g.n];
    for s in 0..g.n {
        for t in s + 1..g.n {
            if d[s][t] == usize::MAX || d[s][t] < 2 {
                continue;
            }
            let mut through = vec![0u64; g.n];
            let mut total = 0u64;
            let mut path = vec![s];
            walk(&a, &d, t, &mut path, &mut through, &mut total);
            for v in 0..g.n {
                if v != s && v != t {
                    bc[v] += through[v] as f64 / total as f64;
                }
            }
        }
    }
    if g.n > 2 {
        let scale = 2.0 / ((g.n - 1) * (g.n - 2)) as f64;
        for x in &mut bc {
            *x *= scale;
        }
    }
    bc
}

fn walk(
    a: &[Vec<bool>],
    d: &[Vec<usize>],
    t: usize,
    path: &mut Vec<usize>,
    through: &mut [u64],
    total: &mut u64,
) {
    let cur = *path.last().unwrap();
    if cur == t {
        *total += 1;
        for &v in path.iter() {
            through[v] += 1;
        }
        return;
    }
    for next in 0..a.len() {
        if a[cur][next] && d[next][t] != usize::MAX && d[next][t] + 1 == d[cur][t] {
            path.push(next);
            walk(a, d, t, path, through, total);
            path.pop();
        }
    }
}

/// Core numbers by repeatedly deleting a node of minimum remaining degree.
pub fn core_numbers(g: &Plain) -> Vec<usize> {
    let a = g.adjacency();
    let mut alive = vec![true; g.n];
    let mut deg: Vec<usize> = a.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    let mut core = vec![0; g.n];
    let mut k = 0;
    for _ in 0..g.n {
        let v = (0..g.n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| deg[i])
            .unwrap();
        k = k.max(deg[v]);
        core[v] = k;
        alive[v] = false;
        for u in 0..g.n {
            if alive[u] && a[v][u] {
                deg[u] -= 1;
            }
        }
    }
    core
}

/// Local clustering by counting triangles through each node.
pub fn clustering(g: &Plain) -> Vec<f64> {
    let a = g.adjacency();
    (0..g.n)
        .map(|v| {
            let nb: Vec<usize> = (0..g.n).filter(|&u| a[v][u]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut tri = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if a[nb[i]][nb[j]] {
                        tri += 1;
                    }
                }
            }
            2.0 * tri as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

/// Tracker co-occurrence by intersecting publisher sets for every tracker
/// pair. `pt` maps tracker -> publishers.
pub fn cooccurrence(
    pt: &BTreeMap<String, BTreeSet<String>>,
    theta: usize,
) -> BTreeMap<(String, String), usize> {
    let trackers: Vec<&String> = pt.keys().collect();
    let mut out = BTreeMap::new();
    for i in 0..trackers.len() {
        for j in i + 1..trackers.len() {
            let c = pt[trackers[i]].intersection(&pt[trackers[j]]).count();
            if c >= theta {
                out.insert((trackers[i].clone(), trackers[j].clone()), c);
            }
        }
    }
    out
}

/// Pearson r from raw sums.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}
