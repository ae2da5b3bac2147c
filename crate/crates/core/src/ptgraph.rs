//! Weighted two-mode publisher-tracker (PT) graph: construction, summary
//! row, per-node metric distributions, metric correlations and tracker
//! rankings.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Serialize;

use crate::graph::{
    betweenness, coreness, degree_centrality, fmt_weight, lcc, pearson, summarize, DensityMode,
    Graph, GraphBuilder, GraphSummary, Node, NodeMetrics, Role,
};
use crate::ingest::{
    classify_request, publisher_key, OrgMap, RequestClass, Snapshot, SuffixRules, TrackerList,
};
use crate::netstats::{cdf, CdfSeries};
use crate::{Error, Result};

/// p-values at or above this bound are flagged as not significant.
pub const SIGNIFICANCE_BOUND: f64 = 0.009;

/// Strictly bipartite graph between publisher and tracker nodes; edge
/// weight is the number of requests from the publisher page to the tracker.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PtGraph {
    graph: Graph,
}

impl PtGraph {
    /// Wraps a graph after checking that it only has publisher and tracker
    /// nodes and every edge crosses the two roles.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        if let Some(n) = graph.nodes().iter().find(|n| n.role == Role::Untyped) {
            return Err(Error::InvalidInput(format!(
                "PT graph node {n} has no role"
            )));
        }
        if let Some((u, v, _)) = graph
            .edges()
            .find(|&(u, v, _)| graph.node(u).role == graph.node(v).role)
        {
            return Err(Error::InvalidInput(format!(
                "PT graph edge {} - {} joins two nodes of the same role",
                graph.node(u),
                graph.node(v)
            )));
        }
        Ok(Self { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn publishers(&self) -> impl Iterator<Item = &str> {
        self.role_ids(Role::Publisher)
    }

    pub fn trackers(&self) -> impl Iterator<Item = &str> {
        self.role_ids(Role::Tracker)
    }

    fn role_ids(&self, role: Role) -> impl Iterator<Item = &str> {
        self.graph
            .nodes()
            .iter()
            .filter(move |n| n.role == role)
            .map(|n| n.id.as_str())
    }

    pub fn n_publishers(&self) -> usize {
        self.graph.count_role(Role::Publisher)
    }

    pub fn n_trackers(&self) -> usize {
        self.graph.count_role(Role::Tracker)
    }

    /// Largest connected component plus the nodes left outside it.
    pub fn lcc(&self) -> (PtGraph, Vec<Node>) {
        let core = lcc(&self.graph);
        let dropped = self
            .graph
            .nodes()
            .iter()
            .filter(|n| core.find(&n.id, n.role).is_none())
            .cloned()
            .collect();
        (PtGraph { graph: core }, dropped)
    }

    /// Writes `tracker,publisher,weight` rows.
    pub fn write_edges<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["tracker", "publisher", "weight"])?;
        let mut rows: Vec<(&str, &str, f64)> = self
            .graph
            .edges()
            .map(|(u, v, w)| {
                let (a, b) = (self.graph.node(u), self.graph.node(v));
                if a.role == Role::Tracker {
                    (a.id.as_str(), b.id.as_str(), w)
                } else {
                    (b.id.as_str(), a.id.as_str(), w)
                }
            })
            .collect();
        rows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        for (t, p, w) in rows {
            wtr.write_record([t, p, &fmt_weight(w)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads `tracker,publisher,weight` rows; `extra_nodes` adds isolated
    /// nodes from a role table.
    pub fn read_edges<R: Read>(input: R, extra_nodes: &[Node]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut b = GraphBuilder::new();
        for n in extra_nodes {
            b.add_node(n.clone());
        }
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let ctx = || format!("PT edge list row {}", i + 2);
            let (Some(t), Some(p)) = (row.get(0), row.get(1)) else {
                return Err(Error::parse(ctx(), "expected tracker,publisher,weight"));
            };
            let w = match row.get(2).filter(|s| !s.is_empty()) {
                Some(s) => s.parse::<f64>().map_err(|e| Error::parse(ctx(), e))?,
                None => 1.0,
            };
            b.add_edge((t, Role::Tracker), (p, Role::Publisher), w)
                .map_err(|e| Error::parse(ctx(), e))?;
        }
        Self::from_graph(b.build())
    }
}

/// One tracker node per observed tracker eTLD+1, one publisher node per
/// publisher, edge weight = number of tracker requests between them.
pub fn build_pt(snapshot: &Snapshot, trackers: &TrackerList, rules: &SuffixRules) -> PtGraph {
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for r in &snapshot.records {
        let c = classify_request(r, trackers, rules);
        if c.class == RequestClass::ThirdPartyTracker {
            let tracker = c.request_domain.expect("tracker requests have a domain");
            *counts
                .entry((tracker, publisher_key(r, rules)))
                .or_default() += 1;
        }
    }
    let mut b = GraphBuilder::new();
    for ((t, p), w) in counts {
        b.add_edge(
            (t.as_str(), Role::Tracker),
            (p.as_str(), Role::Publisher),
            w as f64,
        )
        .expect("positive weight between distinct roles");
    }
    PtGraph { graph: b.build() }
}

/// Characteristics row computed on the LCC with bipartite density.
pub fn pt_summary(g: &PtGraph, with_redundancy: bool) -> Result<GraphSummary> {
    if g.is_empty() {
        return Err(Error::Undefined("no publishers with trackers".into()));
    }
    let (core, _) = g.lcc();
    summarize(core.graph(), DensityMode::Bipartite, with_redundancy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Degree,
    Betweenness,
    Coreness,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Degree, Metric::Betweenness, Metric::Coreness];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::Betweenness => "betweenness",
            Metric::Coreness => "coreness",
        }
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            Metric::Degree => "DC",
            Metric::Betweenness => "BC",
            Metric::Coreness => "CP",
        }
    }

    pub fn of(self, m: &NodeMetrics) -> f64 {
        match self {
            Metric::Degree => m.degree_centrality,
            Metric::Betweenness => m.betweenness,
            Metric::Coreness => m.coreness,
        }
    }
}

/// Per-node metrics on the LCC of a PT graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PtMetrics {
    pub lcc: PtGraph,
    /// Nodes outside the LCC.
    pub dropped: Vec<Node>,
    /// Indexed like `lcc.graph().nodes()`.
    pub metrics: Vec<NodeMetrics>,
}

impl PtMetrics {
    pub fn rows(&self) -> impl Iterator<Item = (&Node, &NodeMetrics)> {
        self.lcc.graph().nodes().iter().zip(&self.metrics)
    }

    pub fn series(&self, role: Role, metric: Metric) -> Vec<f64> {
        self.rows()
            .filter(|(n, _)| n.role == role)
            .map(|(_, m)| metric.of(m))
            .collect()
    }

    pub fn cdf(&self, role: Role, metric: Metric) -> Result<CdfSeries> {
        cdf(&self.series(role, metric))
    }
}

pub fn pt_node_metrics(g: &PtGraph) -> Result<PtMetrics> {
    let (core, dropped) = g.lcc();
    let graph = core.graph();
    let dc = degree_centrality(graph)?;
    let bc = betweenness(graph);
    let cp = coreness(graph);
    let metrics = (0..graph.node_count())
        .map(|i| NodeMetrics {
            degree_centrality: dc[i],
            betweenness: bc[i],
            coreness: cp[i],
        })
        .collect();
    Ok(PtMetrics {
        lcc: core,
        dropped,
        metrics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCorrelation {
    /// e.g. `DC-BC`
    pub pair: String,
    /// `None` when either series is constant.
    pub r: Option<f64>,
    pub p: Option<f64>,
    /// Set when the correlation is undefined or `p >= SIGNIFICANCE_BOUND`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoleCorrelations {
    pub role: Role,
    pub n: usize,
    pub pairs: Vec<PairCorrelation>,
}

/// Pearson correlations DC-BC, DC-CP and BC-CP over the nodes of one role.
pub fn metric_correlations(m: &PtMetrics, role: Role) -> Result<RoleCorrelations> {
    let n = m.rows().filter(|(node, _)| node.role == role).count();
    if n < 3 {
        return Err(Error::Undefined(format!(
            "correlations need at least 3 {} nodes, got {n}",
            role.as_str()
        )));
    }
    let pairs = [
        (Metric::Degree, Metric::Betweenness),
        (Metric::Degree, Metric::Coreness),
        (Metric::Betweenness, Metric::Coreness),
    ]
    .into_iter()
    .map(|(a, b)| {
        let pair = format!("{}-{}", a.abbrev(), b.abbrev());
        match pearson(&m.series(role, a), &m.series(role, b)) {
            Ok(c) => Ok(PairCorrelation {
                pair,
                r: Some(c.r),
                p: Some(c.p),
                flagged: c.p >= SIGNIFICANCE_BOUND,
            }),
            Err(Error::ConstantSeries) => Ok(PairCorrelation {
                pair,
                r: None,
                p: None,
                flagged: true,
            }),
            Err(e) => Err(e),
        }
    })
    .collect::<Result<Vec<_>>>()?;
    Ok(RoleCorrelations { role, n, pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingEntry {
    pub tracker: String,
    pub value: f64,
    /// Share of LCC publishers with an edge to the tracker.
    pub coverage: f64,
    pub organization: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackerRanking {
    pub metric: Metric,
    pub entries: Vec<RankingEntry>,
    /// Set when fewer than the requested number of trackers exist.
    pub truncated: bool,
}

impl TrackerRanking {
    /// 1-based rank of `tracker`, if listed.
    pub fn rank_of(&self, tracker: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.tracker == tracker)
            .map(|i| i + 1)
    }
}

/// Trackers sorted by `metric` (descending, ties by domain). `k = None`
/// keeps every tracker.
pub fn rank_trackers(
    m: &PtMetrics,
    metric: Metric,
    k: Option<usize>,
    orgs: Option<&OrgMap>,
) -> TrackerRanking {
    let graph = m.lcc.graph();
    let n_pub = m.lcc.n_publishers();
    let mut entries: Vec<RankingEntry> = m
        .rows()
        .enumerate()
        .filter(|(_, (n, _))| n.role == Role::Tracker)
        .map(|(i, (n, nm))| RankingEntry {
            tracker: n.id.clone(),
            value: metric.of(nm),
            coverage: if n_pub == 0 {
                0.0
            } else {
                graph.degree(i) as f64 / n_pub as f64
            },
            organization: orgs.and_then(|o| o.get(&n.id)).map(str::to_string),
        })
        .collect();
    entries.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then_with(|| a.tracker.cmp(&b.tracker))
    });
    let truncated = k.is_some_and(|k| k > entries.len());
    if let Some(k) = k {
        entries.truncate(k);
    }
    TrackerRanking {
        metric,
        entries,
        truncated,
    }
}

/// Top-`k` trackers of a PT graph by `metric`, computed on its LCC.
pub fn top_k(
    g: &PtGraph,
    metric: Metric,
    k: usize,
    orgs: Option<&OrgMap>,
) -> Result<TrackerRanking> {
    if k == 0 {
        return Err(Error::InvalidInput("top_k needs k >= 1".into()));
    }
    let m = pt_node_metrics(g)?;
    Ok(rank_trackers(&m, metric, Some(k), orgs))
}
