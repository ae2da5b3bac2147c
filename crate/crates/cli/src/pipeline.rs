//! Pipeline stages. Each stage computes its results and writes them
//! through an [`OutputDir`]; stages run in a fixed order and every file is
//! produced from ordered collections, so reruns are byte-identical.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use trackscope::csoverlap::{load_cs, overlap, restrict_common, CsGraph, EdgeSets, OverlapReport};
use trackscope::graph::{fmt_weight, read_edge_list, read_roles, write_roles, GraphSummary, Role};
use trackscope::ingest::{
    class_counts, filter_publishers, load_tracker_list, parse_crawl_log, ClassCounts, FilterReport,
    OrgMap, Snapshot, SuffixRules, TrackerList,
};
use trackscope::longitudinal::{align, topk_stability, trend, SnapshotSeries, Trend};
use trackscope::netstats::{cdf, https_adoption, percentile, publisher_activity, CdfSeries, Panel};
use trackscope::ptgraph::{
    build_pt, metric_correlations, pt_node_metrics, pt_summary, rank_trackers, Metric, PtGraph,
    PtMetrics, TrackerRanking,
};
use trackscope::ttgraph::{build_tt, tt_summary, TtGraph, TtSummary};

use crate::config::{RunConfig, SnapshotSpec};
use crate::error::{CliError, CliResult, Context};
use crate::output::{fmt_frac, fmt_pct, frac, pct, OutputDir};

/// A snapshot after parsing, publisher filtering and (optional) alignment.
#[derive(Debug, Clone)]
pub struct PreparedSnapshot {
    pub spec: SnapshotSpec,
    pub trackers: TrackerList,
    pub orgs: OrgMap,
    pub rejected_list_entries: Vec<String>,
    pub lines_parsed: usize,
    pub malformed_lines: Vec<usize>,
    /// Request classes before publisher filtering.
    pub classes: ClassCounts,
    pub filter: FilterReport,
    pub snapshot: Snapshot,
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub rules: SuffixRules,
    pub snaps: Vec<PreparedSnapshot>,
    pub series: Option<SnapshotSeries>,
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Loads every input named by the config and records their hashes.
pub fn prepare(cfg: &RunConfig, out: &mut OutputDir) -> CliResult<Prepared> {
    cfg.validate()?;
    out.config_hash = Some(cfg.hash());
    for (role, p) in cfg.input_files() {
        out.add_input(&role, p, &cfg.resolve(p))?;
    }

    let rules_path = cfg.resolve(&cfg.suffix_rules);
    let rules = SuffixRules::parse(&read_text(&rules_path)?)
        .context(|| rules_path.display().to_string())?;
    let extra_orgs = match &cfg.org_map {
        Some(p) => {
            let p = cfg.resolve(p);
            OrgMap::from_csv(open(&p)?, &rules).context(|| p.display().to_string())?
        }
        None => OrgMap::default(),
    };

    let mut snaps = Vec::new();
    for spec in &cfg.snapshots {
        let list_path = cfg.resolve(&spec.tracker_list);
        let loaded = load_tracker_list(&read_text(&list_path)?, spec.list_version(), &rules)
            .context(|| list_path.display().to_string())?;
        out.tracker_list_versions
            .push((spec.id.clone(), loaded.list.version.clone()));
        let mut orgs = loaded.orgs;
        orgs.extend(extra_orgs.clone());

        let log_path = cfg.resolve(&spec.log);
        let parsed = parse_crawl_log(open(&log_path)?, &spec.id)
            .context(|| log_path.display().to_string())?;
        let lines_parsed = parsed.records.len() + parsed.skipped();
        let raw = Snapshot::new(
            &spec.id,
            spec.date_label(),
            spec.list_version(),
            parsed.records,
        );
        let classes = class_counts(&raw, &loaded.list, &rules);
        let (snapshot, filter) = filter_publishers(&raw, &loaded.list, &rules);
        snaps.push(PreparedSnapshot {
            spec: spec.clone(),
            trackers: loaded.list,
            orgs,
            rejected_list_entries: loaded.rejected,
            lines_parsed,
            malformed_lines: parsed.malformed_lines,
            classes,
            filter,
            snapshot,
        });
    }

    let series = if cfg.align && snaps.len() >= 2 {
        let all: Vec<Snapshot> = snaps.iter().map(|s| s.snapshot.clone()).collect();
        let (series, aligned) = align(&all, &rules).context(|| "aligning snapshots".into())?;
        for (s, a) in snaps.iter_mut().zip(aligned) {
            s.snapshot = a;
        }
        Some(series)
    } else {
        None
    };
    Ok(Prepared {
        rules,
        snaps,
        series,
    })
}

pub fn stage_ingest(p: &Prepared, out: &mut OutputDir) -> CliResult<()> {
    for s in &p.snaps {
        let report = json!({
            "snapshot": s.spec.id,
            "date_label": s.spec.date_label(),
            "tracker_list_version": s.trackers.version,
            "tracker_domains": s.trackers.len(),
            "tracker_list_rejected": s.rejected_list_entries,
            "lines": s.lines_parsed,
            "malformed_lines": s.malformed_lines,
            "classes": s.classes,
            "filter": s.filter,
            "analysed_publishers": s.snapshot.publishers(&p.rules).len(),
            "analysed_records": s.snapshot.records.len(),
        });
        out.write_json(&format!("{}/ingest.json", s.spec.id), &report)?;
    }
    if let Some(series) = &p.series {
        out.write_json(
            "aligned_publishers.json",
            &json!({
                "snapshots": series.snapshots,
                "common_publishers": series.common_publishers.len(),
                "publishers": series.common_publishers,
            }),
        )?;
    }
    Ok(())
}

/// Per-snapshot scalars from the netstats stage, used for trends.
#[derive(Debug, Clone, Serialize)]
pub struct NetSummary {
    pub publishers: usize,
    /// `(panel, median, p90)`
    pub panels: Vec<(&'static str, f64, f64)>,
    pub https_fraction: f64,
}

fn write_cdf(out: &mut OutputDir, rel: &str, c: &CdfSeries) -> CliResult<()> {
    out.write_csv(
        rel,
        &["value", "fraction"],
        c.points.iter().map(|&(v, f)| [fmt_weight(v), fmt_frac(f)]),
    )
}

pub fn stage_netstats(p: &Prepared, out: &mut OutputDir) -> CliResult<Vec<NetSummary>> {
    let mut sums = Vec::new();
    for s in &p.snaps {
        let id = &s.spec.id;
        let act = publisher_activity(&s.snapshot, &s.trackers, &p.rules);
        if act.is_empty() {
            return Err(CliError::Analysis {
                context: format!("snapshot {id}: netstats"),
                source: trackscope::Error::Undefined("no publishers with trackers".into()),
            });
        }
        let mut panels = Vec::new();
        let mut panel_json = serde_json::Map::new();
        for panel in Panel::ALL {
            let values: Vec<f64> = act.values().map(|a| panel.value(a)).collect();
            let name = panel.name();
            out.write_csv(
                &format!("{id}/netstats/{name}.csv"),
                &["publisher", "value"],
                act.values()
                    .map(|a| [a.publisher.clone(), fmt_weight(frac(panel.value(a)))]),
            )?;
            let c = cdf(&values).context(|| format!("snapshot {id}: {name} CDF"))?;
            write_cdf(out, &format!("{id}/netstats/cdf_{name}.csv"), &c)?;
            let med = percentile(&values, 50.0).context(|| format!("snapshot {id}: {name}"))?;
            let p90 = percentile(&values, 90.0).context(|| format!("snapshot {id}: {name}"))?;
            panel_json.insert(name.into(), json!({"median": frac(med), "p90": frac(p90)}));
            panels.push((name, med, p90));
        }
        let https = https_adoption(&s.snapshot, &p.rules)
            .context(|| format!("snapshot {id}: HTTPS adoption"))?;
        out.write_json(
            &format!("{id}/netstats/summary.json"),
            &json!({
                "snapshot": id,
                "publishers": act.len(),
                "panels": panel_json,
                "https_adoption": {
                    "fraction": frac(https.fraction),
                    "https_publishers": https.https_publishers,
                    "publishers": https.publishers,
                    "flagged_without_document": https.flagged,
                },
            }),
        )?;
        sums.push(NetSummary {
            publishers: act.len(),
            panels,
            https_fraction: https.fraction,
        });
    }
    Ok(sums)
}

fn rounded(s: &GraphSummary) -> GraphSummary {
    GraphSummary {
        norm_avg_weight: frac(s.norm_avg_weight),
        avg_clustering: frac(s.avg_clustering),
        avg_redundancy: s.avg_redundancy.map(frac),
        density: frac(s.density),
        ..s.clone()
    }
}

#[derive(Debug, Clone)]
pub struct PtOutcome {
    pub pt: PtGraph,
    pub summary: GraphSummary,
    /// Every LCC tracker ranked by degree centrality.
    pub degree_ranking: TrackerRanking,
}

fn write_ranking(out: &mut OutputDir, rel: &str, r: &TrackerRanking) -> CliResult<()> {
    out.write_csv(
        rel,
        &["rank", "tracker", "organization", "value", "coverage_pct"],
        r.entries.iter().enumerate().map(|(i, e)| {
            [
                (i + 1).to_string(),
                e.tracker.clone(),
                e.organization.clone().unwrap_or_else(|| e.tracker.clone()),
                fmt_frac(e.value),
                fmt_pct(e.coverage * 100.0),
            ]
        }),
    )
}

fn write_correlations(out: &mut OutputDir, rel: &str, m: &PtMetrics) -> CliResult<()> {
    let roles: Vec<serde_json::Value> = [Role::Publisher, Role::Tracker]
        .into_iter()
        .map(|role| match metric_correlations(m, role) {
            Ok(c) => json!({
                "role": role,
                "n": c.n,
                "pairs": c.pairs.iter().map(|p| json!({
                    "pair": p.pair,
                    "r": p.r.map(frac),
                    "p": p.p,
                    "flagged": p.flagged,
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({"role": role, "undefined": e.to_string()}),
        })
        .collect();
    out.write_json(
        rel,
        &json!({"significance_bound": trackscope::ptgraph::SIGNIFICANCE_BOUND, "roles": roles}),
    )
}

pub fn stage_pt(p: &Prepared, cfg: &RunConfig, out: &mut OutputDir) -> CliResult<Vec<PtOutcome>> {
    let mut outcomes = Vec::new();
    for s in &p.snaps {
        let id = &s.spec.id;
        let ctx = || format!("snapshot {id}: pt");
        let pt = build_pt(&s.snapshot, &s.trackers, &p.rules);
        let summary = pt_summary(&pt, cfg.metrics.redundancy).context(ctx)?;
        let m = pt_node_metrics(&pt).context(ctx)?;

        let mut buf = Vec::new();
        pt.write_edges(&mut buf).context(ctx)?;
        out.write(&format!("{id}/pt/edges.csv"), &buf)?;
        out.write_csv(
            &format!("{id}/pt/nodes.csv"),
            &["node", "role"],
            pt.graph()
                .nodes()
                .iter()
                .map(|n| [n.id.as_str(), n.role.as_str()]),
        )?;
        out.write_json(&format!("{id}/pt/summary.json"), &rounded(&summary))?;
        out.write_csv(
            &format!("{id}/pt/node_metrics.csv"),
            &["node", "role", "degree", "betweenness", "coreness"],
            m.rows().map(|(n, nm)| {
                [
                    n.id.clone(),
                    n.role.as_str().to_string(),
                    fmt_frac(nm.degree_centrality),
                    fmt_frac(nm.betweenness),
                    fmt_frac(nm.coreness),
                ]
            }),
        )?;
        out.write_csv(
            &format!("{id}/pt/dropped.csv"),
            &["node", "role"],
            m.dropped.iter().map(|n| [n.id.as_str(), n.role.as_str()]),
        )?;
        for role in [Role::Publisher, Role::Tracker] {
            for metric in Metric::ALL {
                let c = m.cdf(role, metric).context(ctx)?;
                let rows = c.points.iter().map(|&(v, f)| [fmt_frac(v), fmt_frac(f)]);
                out.write_csv(
                    &format!("{id}/pt/cdf_{}_{}.csv", role.as_str(), metric.name()),
                    &["value", "fraction"],
                    rows,
                )?;
            }
        }
        if cfg.metrics.correlations {
            write_correlations(out, &format!("{id}/pt/correlations.json"), &m)?;
        }
        for metric in [Metric::Degree, Metric::Betweenness] {
            let r = rank_trackers(&m, metric, Some(cfg.top_k), Some(&s.orgs));
            write_ranking(out, &format!("{id}/pt/ranking_{}.csv", metric.name()), &r)?;
        }
        outcomes.push(PtOutcome {
            degree_ranking: rank_trackers(&m, Metric::Degree, None, Some(&s.orgs)),
            pt,
            summary,
        });
    }
    Ok(outcomes)
}

#[derive(Debug, Clone)]
pub struct TtOutcome {
    pub tt: TtGraph,
    pub summary: TtSummary,
}

/// Builds and writes a TT graph under `prefix`.
pub fn write_tt(
    pt: &PtGraph,
    theta: u32,
    prefix: &str,
    out: &mut OutputDir,
) -> CliResult<TtOutcome> {
    let ctx = || format!("{prefix}: tt");
    let tt = build_tt(pt, theta).context(ctx)?;
    let summary = tt_summary(&tt).context(ctx)?;
    let mut buf = Vec::new();
    tt.write_edges(&mut buf).context(ctx)?;
    out.write(&format!("{prefix}/edges.csv"), &buf)?;
    let mut buf = Vec::new();
    write_roles(&tt.graph, &mut buf).context(ctx)?;
    out.write(&format!("{prefix}/nodes.csv"), &buf)?;
    let mut json_summary = summary.clone();
    json_summary.lcc = rounded(&summary.lcc);
    out.write_json(&format!("{prefix}/summary.json"), &json_summary)?;
    Ok(TtOutcome { tt, summary })
}

pub fn stage_tt(
    p: &Prepared,
    pts: &[PtOutcome],
    cfg: &RunConfig,
    out: &mut OutputDir,
) -> CliResult<Vec<TtOutcome>> {
    p.snaps
        .iter()
        .zip(pts)
        .map(|(s, o)| write_tt(&o.pt, cfg.theta, &format!("{}/tt", s.spec.id), out))
        .collect()
}

/// Restricts to common trackers, then writes the report and audit CSV.
pub fn write_overlap(
    cs: &CsGraph,
    tt: &TtGraph,
    prefix: &str,
    out: &mut OutputDir,
) -> CliResult<OverlapReport> {
    let (cs2, tt2, _) = restrict_common(cs, tt).context(|| format!("{prefix}: overlap"))?;
    let report = overlap(&cs2, &tt2);
    let mut buf = Vec::new();
    EdgeSets::new(&cs2.graph, &tt2.graph)
        .write_csv(&mut buf)
        .context(|| format!("{prefix}: overlap"))?;
    out.write(&format!("{prefix}/edge_sets.csv"), &buf)?;
    let r = OverlapReport {
        o_common: report.o_common.map(pct),
        o_neg_cs: report.o_neg_cs.map(pct),
        o_neg_tt: report.o_neg_tt.map(pct),
        weight_coverage: report.weight_coverage.map(frac),
        top5_weight_share: report.top5_weight_share.map(frac),
        ..report.clone()
    };
    out.write_json(
        &format!("{prefix}/report.json"),
        &json!({
            "cs_nodes": cs.graph.node_count(),
            "cs_edges": cs.graph.edge_count(),
            "cs_weighted": cs.weighted,
            "cs_self_loops_dropped": cs.self_loops_dropped,
            "cs_rows_skipped": cs.rows_skipped,
            "tt_nodes": tt.graph.node_count(),
            "tt_edges": tt.graph.edge_count(),
            "tt_theta": (tt.theta > 0).then_some(tt.theta),
            "overlap": r,
        }),
    )?;
    Ok(report)
}

pub fn load_cs_file(path: &Path, rules: &SuffixRules, default_weight: bool) -> CliResult<CsGraph> {
    load_cs(open(path)?, rules, default_weight).context(|| path.display().to_string())
}

pub fn stage_overlap(
    p: &Prepared,
    tts: &[TtOutcome],
    cfg: &RunConfig,
    out: &mut OutputDir,
) -> CliResult<()> {
    for spec in &cfg.cs {
        let cs = load_cs_file(&cfg.resolve(&spec.path), &p.rules, spec.default_weight)?;
        for (s, t) in p.snaps.iter().zip(tts) {
            write_overlap(
                &cs,
                &t.tt,
                &format!("overlap/{}/{}", spec.name, s.spec.id),
                out,
            )?;
        }
    }
    Ok(())
}

fn trends(net: &[NetSummary], pts: &[PtOutcome], tts: &[TtOutcome]) -> Vec<Trend> {
    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    let mut push =
        |name: String, f: &dyn Fn(usize) -> f64| rows.push((name, (0..pts.len()).map(f).collect()));
    push("publishers".into(), &|i| net[i].publishers as f64);
    for (k, (name, _, _)) in net[0].panels.iter().enumerate() {
        push(format!("{name}_median"), &|i| net[i].panels[k].1);
        push(format!("{name}_p90"), &|i| net[i].panels[k].2);
    }
    push("https_adoption".into(), &|i| net[i].https_fraction);
    let pt_s: Vec<&GraphSummary> = pts.iter().map(|o| &o.summary).collect();
    let tt_s: Vec<&GraphSummary> = tts.iter().map(|o| &o.summary.lcc).collect();
    for (prefix, s) in [("pt", &pt_s), ("tt", &tt_s)] {
        push(format!("{prefix}_nodes"), &|i| s[i].n_nodes as f64);
        push(format!("{prefix}_edges"), &|i| s[i].n_edges as f64);
        push(format!("{prefix}_norm_avg_weight"), &|i| {
            s[i].norm_avg_weight
        });
        push(format!("{prefix}_clustering"), &|i| s[i].avg_clustering);
        push(format!("{prefix}_density"), &|i| s[i].density);
        push(format!("{prefix}_diameter"), &|i| s[i].diameter as f64);
    }
    push("tt_nodes_all".into(), &|i| {
        tts[i].summary.n_nodes_all as f64
    });
    rows.into_iter()
        .map(|(name, values)| trend(&name, values))
        .collect()
}

pub fn stage_evolve(
    p: &Prepared,
    net: &[NetSummary],
    pts: &[PtOutcome],
    tts: &[TtOutcome],
    cfg: &RunConfig,
    out: &mut OutputDir,
) -> CliResult<()> {
    if p.snaps.len() < 2 {
        return Err(CliError::Config("evolve needs at least 2 snapshots".into()));
    }
    let ids: Vec<&str> = p.snaps.iter().map(|s| s.spec.id.as_str()).collect();

    let table = trends(net, pts, tts);
    let mut header = vec!["metric"];
    header.extend(&ids);
    header.push("change_pct");
    out.write_csv(
        "evolve/trends.csv",
        &header,
        table.iter().map(|t| {
            let mut row = vec![t.metric.clone()];
            row.extend(t.values.iter().map(|&v| fmt_weight(frac(v))));
            row.push(t.change_pct.map(fmt_pct).unwrap_or_default());
            row
        }),
    )?;

    let rankings: Vec<TrackerRanking> = pts.iter().map(|o| o.degree_ranking.clone()).collect();
    let k = cfg
        .top_k
        .min(rankings.iter().map(|r| r.entries.len()).max().unwrap_or(0));
    let report = topk_stability(&rankings, k).context(|| "stability".into())?;
    let rank_cols: Vec<String> = ids.iter().map(|id| format!("rank_{id}")).collect();
    let mut header: Vec<&str> = vec![
        "legend",
        "tracker",
        "organization",
        "class",
        "avg_coverage_pct",
    ];
    header.extend(rank_cols.iter().map(String::as_str));
    out.write_csv(
        "evolve/stability.csv",
        &header,
        report.entries.iter().map(|e| {
            let mut row = vec![
                e.class.legend().to_string(),
                e.tracker.clone(),
                e.organization.clone().unwrap_or_else(|| e.tracker.clone()),
                e.class.name().to_string(),
                fmt_pct(e.avg_coverage_pct),
            ];
            row.extend(
                e.ranks
                    .iter()
                    .map(|r| r.map(|r| r.to_string()).unwrap_or_default()),
            );
            row
        }),
    )?;

    out.write_json(
        "evolve/series.json",
        &json!({
            "snapshots": p.snaps.iter().map(|s| json!({"id": s.spec.id, "date_label": s.spec.date_label()})).collect::<Vec<_>>(),
            "aligned": p.series.is_some(),
            "common_publishers": p.series.as_ref().map(|s| s.common_publishers.len()),
            "top_k": k,
            "legend": {"*": "stable", "+/-": "dropped", "+": "climbed"},
        }),
    )
}

/// Subcommands that read a run config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Netstats,
    Pt,
    Evolve,
    All,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Netstats => "netstats",
            Stage::Pt => "pt",
            Stage::Evolve => "evolve",
            Stage::All => "all",
        }
    }
}

pub fn run_config_stage(stage: Stage, cfg: &RunConfig, out: &mut OutputDir) -> CliResult<()> {
    if stage == Stage::Evolve && cfg.snapshots.len() < 2 {
        return Err(CliError::Config("evolve needs at least 2 snapshots".into()));
    }
    let p = prepare(cfg, out)?;
    match stage {
        Stage::Ingest => stage_ingest(&p, out),
        Stage::Netstats => stage_netstats(&p, out).map(drop),
        Stage::Pt => stage_pt(&p, cfg, out).map(drop),
        Stage::Evolve => {
            let net = stage_netstats(&p, out)?;
            let pts = stage_pt(&p, cfg, out)?;
            let tts = stage_tt(&p, &pts, cfg, out)?;
            stage_evolve(&p, &net, &pts, &tts, cfg, out)
        }
        Stage::All => {
            stage_ingest(&p, out)?;
            let net = stage_netstats(&p, out)?;
            let pts = stage_pt(&p, cfg, out)?;
            let tts = stage_tt(&p, &pts, cfg, out)?;
            stage_overlap(&p, &tts, cfg, out)?;
            if p.snaps.len() >= 2 {
                stage_evolve(&p, &net, &pts, &tts, cfg, out)?;
            }
            Ok(())
        }
    }
}

/// `tt` subcommand: TT graph from a PT edge list (and optional role table).
pub fn run_tt(
    pt_edges: &Path,
    pt_nodes: Option<&Path>,
    theta: u32,
    out: &mut OutputDir,
) -> CliResult<()> {
    out.add_input("pt_edges", pt_edges, pt_edges)?;
    let extra = match pt_nodes {
        Some(p) => {
            out.add_input("pt_nodes", p, p)?;
            read_roles(open(p)?).context(|| p.display().to_string())?
        }
        None => Vec::new(),
    };
    let pt =
        PtGraph::read_edges(open(pt_edges)?, &extra).context(|| pt_edges.display().to_string())?;
    write_tt(&pt, theta, "tt", out).map(drop)
}

/// `overlap` subcommand: one CS file against one TT edge list.
pub fn run_overlap(
    cs_path: &Path,
    tt_edges: &Path,
    tt_nodes: Option<&Path>,
    rules_path: &Path,
    default_weight: bool,
    out: &mut OutputDir,
) -> CliResult<()> {
    out.add_input("cs", cs_path, cs_path)?;
    out.add_input("tt_edges", tt_edges, tt_edges)?;
    out.add_input("suffix_rules", rules_path, rules_path)?;
    let rules =
        SuffixRules::parse(&read_text(rules_path)?).context(|| rules_path.display().to_string())?;
    let cs = load_cs_file(cs_path, &rules, default_weight)?;
    let mut graph = read_edge_list(open(tt_edges)?, Role::Tracker)
        .context(|| tt_edges.display().to_string())?;
    if let Some(p) = tt_nodes {
        out.add_input("tt_nodes", p, p)?;
        let nodes = read_roles(open(p)?).context(|| p.display().to_string())?;
        let mut b = trackscope::graph::GraphBuilder::new();
        for n in nodes {
            b.add_node((n.id.as_str(), Role::Tracker));
        }
        for (u, v, w) in graph.edges() {
            b.add_edge(graph.node(u).clone(), graph.node(v).clone(), w)
                .context(|| tt_edges.display().to_string())?;
        }
        graph = b.build();
    }
    // threshold unknown for an external edge list
    let tt = TtGraph { graph, theta: 0 };
    write_overlap(&cs, &tt, "overlap", out).map(drop)
}
