//! Cookie-synchronization (CS) ground-truth graphs and their edge overlap
//! with TT graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::Serialize;

use crate::graph::{edge_key, write_edge_list, Graph, GraphBuilder, Role};
use crate::ingest::SuffixRules;
use crate::ttgraph::TtGraph;
use crate::{Error, Result};

type EdgeKey = (String, String);

/// Undirected graph of tracker pairs observed syncing cookies.
#[derive(Debug, Clone, PartialEq)]
pub struct CsGraph {
    pub graph: Graph,
    /// False when the source had no weight column; stored weights are then 1.
    pub weighted: bool,
    pub self_loops_dropped: usize,
    /// Rows whose domains could not be reduced to a registrable domain.
    pub rows_skipped: usize,
}

impl CsGraph {
    pub fn write_edges<W: Write>(&self, out: W) -> Result<()> {
        write_edge_list(&self.graph, out, ["node_a", "node_b", "weight"])
    }

    fn weights(&self) -> Result<BTreeMap<EdgeKey, f64>> {
        if !self.weighted {
            return Err(Error::WeightsRequired);
        }
        let g = &self.graph;
        Ok(g.edges()
            .map(|(u, v, w)| (edge_key(&g.node(u).id, &g.node(v).id), w))
            .collect())
    }
}

/// Reads `domain_a,domain_b[,weight]` rows. Without a weight column the
/// graph is unweighted unless `default_weight` is set, in which case every
/// pair (and every empty weight cell) counts 1.
pub fn load_cs<R: Read>(input: R, rules: &SuffixRules, default_weight: bool) -> Result<CsGraph> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let has_weight = rdr.headers()?.len() >= 3;
    let weighted = has_weight || default_weight;

    let mut pairs: BTreeMap<EdgeKey, f64> = BTreeMap::new();
    let (mut rows, mut self_loops, mut skipped) = (0usize, 0usize, 0usize);
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let ctx = || format!("CS row {}", i + 2);
        rows += 1;
        let (Some(a), Some(b)) = (row.get(0), row.get(1)) else {
            return Err(Error::parse(ctx(), "expected domain_a,domain_b[,weight]"));
        };
        let w = match row.get(2).filter(|_| has_weight) {
            Some("") | None if default_weight || !has_weight => 1.0,
            Some("") | None => return Err(Error::parse(ctx(), "missing weight")),
            Some(s) => {
                let w: f64 = s
                    .parse()
                    .map_err(|e| Error::parse(ctx(), format!("weight {s:?}: {e}")))?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::parse(
                        ctx(),
                        format!("weight must be positive, got {s}"),
                    ));
                }
                w
            }
        };
        let (Ok(a), Ok(b)) = (rules.etld1(a), rules.etld1(b)) else {
            skipped += 1;
            continue;
        };
        if a == b {
            self_loops += 1;
            continue;
        }
        let slot = pairs.entry(edge_key(&a, &b)).or_insert(0.0);
        *slot = if weighted { *slot + w } else { 1.0 };
    }
    if rows == 0 {
        return Err(Error::InvalidInput("CS file has no rows".into()));
    }
    let mut b = GraphBuilder::new();
    for ((x, y), w) in pairs {
        b.add_edge((x.as_str(), Role::Tracker), (y.as_str(), Role::Tracker), w)?;
    }
    Ok(CsGraph {
        graph: b.build(),
        weighted,
        self_loops_dropped: self_loops,
        rows_skipped: skipped,
    })
}

/// Induces both graphs on the trackers they share.
pub fn restrict_common(cs: &CsGraph, tt: &TtGraph) -> Result<(CsGraph, TtGraph, usize)> {
    let cs_ids: BTreeSet<&str> = cs.graph.nodes().iter().map(|n| n.id.as_str()).collect();
    let common: BTreeSet<String> = tt
        .graph
        .nodes()
        .iter()
        .filter(|n| cs_ids.contains(n.id.as_str()))
        .map(|n| n.id.clone())
        .collect();
    if common.is_empty() {
        return Err(Error::NoCommonTrackers);
    }
    let cs2 = CsGraph {
        graph: cs.graph.induced_on_ids(&common),
        ..cs.clone()
    };
    let tt2 = TtGraph {
        graph: tt.graph.induced_on_ids(&common),
        theta: tt.theta,
    };
    Ok((cs2, tt2, common.len()))
}

/// The three edge sets compared by [`overlap`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeSets {
    pub common: BTreeSet<EdgeKey>,
    pub cs_only: BTreeSet<EdgeKey>,
    pub tt_only: BTreeSet<EdgeKey>,
}

impl EdgeSets {
    pub fn new(cs: &Graph, tt: &Graph) -> Self {
        let (e_cs, e_tt) = (cs.edge_keys(), tt.edge_keys());
        Self {
            common: e_cs.intersection(&e_tt).cloned().collect(),
            cs_only: e_cs.difference(&e_tt).cloned().collect(),
            tt_only: e_tt.difference(&e_cs).cloned().collect(),
        }
    }

    /// Audit CSV with `set,node_a,node_b` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["set", "node_a", "node_b"])?;
        for (name, set) in [
            ("common", &self.common),
            ("cs_only", &self.cs_only),
            ("tt_only", &self.tt_only),
        ] {
            for (a, b) in set {
                wtr.write_record([name, a, b])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

pub const TOP_WEIGHT_Q: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub n_common: usize,
    pub e_cs: usize,
    pub e_tt: usize,
    pub n_overlap: usize,
    /// Percentage of CS edges also in TT.
    pub o_common: Option<f64>,
    /// Percentage of TT edges absent from CS.
    pub o_neg_cs: Option<f64>,
    /// Percentage of CS edges absent from TT.
    pub o_neg_tt: Option<f64>,
    /// Share of CS weight mass on overlapping edges; `None` if unweighted.
    pub weight_coverage: Option<f64>,
    /// Share of overlapping edges among the top 5% heaviest CS edges.
    pub top5_weight_share: Option<f64>,
    /// Quantities that could not be computed, with the reason.
    pub undefined: Vec<String>,
    pub definitions: BTreeMap<&'static str, &'static str>,
}

fn definitions() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("o_common", "100 * |E_CS & E_TT| / |E_CS|"),
        ("o_neg_tt", "100 * |E_CS - E_TT| / |E_CS|"),
        ("o_neg_cs", "100 * |E_TT - E_CS| / |E_TT|"),
        (
            "weight_coverage",
            "sum of CS weights on E_CS & E_TT / sum of all CS weights",
        ),
        (
            "top5_weight_share",
            "|E_CS & E_TT & top 5% heaviest CS edges| / |E_CS & E_TT|",
        ),
        (
            "scope",
            "both graphs induced on the trackers common to CS and TT",
        ),
    ])
}

fn pct(num: usize, den: usize) -> f64 {
    num as f64 * 100.0 / den as f64
}

/// Overlap between two graphs already restricted to the same node set.
pub fn overlap(cs: &CsGraph, tt: &TtGraph) -> OverlapReport {
    let sets = EdgeSets::new(&cs.graph, &tt.graph);
    let (e_cs, e_tt) = (cs.graph.edge_count(), tt.graph.edge_count());
    let mut undefined = Vec::new();
    let (o_common, o_neg_tt) = if e_cs == 0 {
        undefined.push("o_common, o_neg_tt: no CS edges among common trackers".to_string());
        (None, None)
    } else {
        (
            Some(pct(sets.common.len(), e_cs)),
            Some(pct(sets.cs_only.len(), e_cs)),
        )
    };
    let o_neg_cs = if e_tt == 0 {
        undefined.push("o_neg_cs: no TT edges among common trackers".to_string());
        None
    } else {
        Some(pct(sets.tt_only.len(), e_tt))
    };
    let mut attempt = |name: &str, r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            undefined.push(format!("{name}: {e}"));
            None
        }
    };
    let weight_coverage = attempt("weight_coverage", weight_coverage(cs, &sets.common));
    let top5_weight_share = attempt(
        "top5_weight_share",
        top_weight_share(cs, &sets.common, TOP_WEIGHT_Q),
    );
    OverlapReport {
        n_common: cs.graph.node_count(),
        e_cs,
        e_tt,
        n_overlap: sets.common.len(),
        o_common,
        o_neg_cs,
        o_neg_tt,
        weight_coverage,
        top5_weight_share,
        undefined,
        definitions: definitions(),
    }
}

/// Fraction of total CS weight carried by the CS edges in `common_edges`.
pub fn weight_coverage(cs: &CsGraph, common_edges: &BTreeSet<EdgeKey>) -> Result<f64> {
    let weights = cs.weights()?;
    let total: f64 = weights.values().sum();
    if total == 0.0 {
        return Err(Error::Undefined("CS graph has no edges".into()));
    }
    let covered: f64 = weights
        .iter()
        .filter(|(k, _)| common_edges.contains(*k))
        .map(|(_, w)| w)
        .sum();
    Ok(covered / total)
}

/// Fraction of `common_edges` among the `ceil(q% * |E_CS|)` heaviest CS
/// edges (ties broken by edge key).
pub fn top_weight_share(cs: &CsGraph, common_edges: &BTreeSet<EdgeKey>, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 100.0) {
        return Err(Error::InvalidInput(format!(
            "percentile must lie in (0, 100), got {q}"
        )));
    }
    let weights = cs.weights()?;
    if common_edges.is_empty() {
        return Err(Error::Undefined("no overlapping edges".into()));
    }
    let mut ranked: Vec<(&EdgeKey, f64)> = weights.iter().map(|(k, &w)| (k, w)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n_top = (q / 100.0 * ranked.len() as f64).ceil() as usize;
    let hits = ranked[..n_top.min(ranked.len())]
        .iter()
        .filter(|(k, _)| common_edges.contains(*k))
        .count();
    Ok(hits as f64 / common_edges.len() as f64)
}
