#[path = "support/oracles.rs"]
mod oracles;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use trackscope::csoverlap::{load_cs, overlap, restrict_common, weight_coverage, EdgeSets};
use trackscope::graph::{edge_key, Role};
use trackscope::ingest::{
    class_counts, filter_publishers, CrawlRecord, ResourceKind, Scheme, Snapshot, SuffixRules,
    TrackerList,
};
use trackscope::longitudinal::{align, topk_stability, Stability};
use trackscope::netstats::{cdf, publisher_activity};
use trackscope::ptgraph::{build_pt, pt_node_metrics, rank_trackers, Metric, PtGraph};
use trackscope::ttgraph::{build_tt, TtGraph};

fn rules() -> SuffixRules {
    SuffixRules::parse("com\nnet\nco.uk").unwrap()
}

const KINDS: [ResourceKind; 5] = [
    ResourceKind::Script,
    ResourceKind::Image,
    ResourceKind::Document,
    ResourceKind::Xhr,
    ResourceKind::Other,
];

/// Requests from `pub{i}.com` pages to hosts drawn from a pool mixing
/// tracker subdomains, other third parties and first-party hosts.
fn snapshot_strategy() -> impl Strategy<Value = Snapshot> {
    prop::collection::vec(
        (0usize..12, 0usize..30, 0usize..5, any::<bool>(), 0usize..3),
        0..150,
    )
    .prop_map(|rows| {
        let records = rows
            .into_iter()
            .map(|(p, h, k, https, sub)| {
                let publisher = format!("www.pub{p}.com");
                let request_host = match h {
                    0..=14 => format!("{}trk{h}.net", ["", "cdn.", "a.b."][sub]),
                    15..=24 => format!("other{h}.co.uk"),
                    _ => format!("static.pub{p}.com"),
                };
                CrawlRecord {
                    snapshot_id: "S".into(),
                    publisher_host: publisher,
                    request_host,
                    request_path: "/x".into(),
                    scheme: if https { Scheme::Https } else { Scheme::Http },
                    resource_kind: KINDS[k],
                }
            })
            .collect();
        Snapshot::new("S", "S", "v", records)
    })
}

fn tracker_list() -> TrackerList {
    TrackerList::from_entries("v", (0..15).map(|i| format!("trk{i}.net")), &rules()).0
}

/// tracker -> publishers adjacency of a PT graph.
fn tracker_sets(pt: &PtGraph) -> BTreeMap<String, BTreeSet<String>> {
    let g = pt.graph();
    let mut m: BTreeMap<String, BTreeSet<String>> = pt
        .trackers()
        .map(|t| (t.to_string(), BTreeSet::new()))
        .collect();
    for (u, v, _) in g.edges() {
        let (a, b) = (g.node(u), g.node(v));
        let (t, p) = if a.role == Role::Tracker {
            (a, b)
        } else {
            (b, a)
        };
        m.get_mut(&t.id).unwrap().insert(p.id.clone());
    }
    m
}

fn tt_edges(tt: &TtGraph) -> BTreeMap<(String, String), usize> {
    let g = &tt.graph;
    g.edges()
        .map(|(u, v, w)| ((g.node(u).id.clone(), g.node(v).id.clone()), w as usize))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pt_is_bipartite_and_conserves_weight(s in snapshot_strategy()) {
        let (r, t) = (rules(), tracker_list());
        let (s, _) = filter_publishers(&s, &t, &r);
        let pt = build_pt(&s, &t, &r);
        let g = pt.graph();
        prop_assert!(g.edges().all(|(u, v, _)| g.node(u).role != g.node(v).role));
        prop_assert_eq!(g.total_weight() as usize, class_counts(&s, &t, &r).third_party_tracker);
    }

    #[test]
    fn filtered_publishers_all_have_trackers(s in snapshot_strategy()) {
        let (r, t) = (rules(), tracker_list());
        let (f, report) = filter_publishers(&s, &t, &r);
        let act = publisher_activity(&f, &t, &r);
        prop_assert_eq!(act.len(), report.publishers_retained);
        prop_assert!(act.values().all(|a| a.unique_trackers >= 1));
        let (again, _) = filter_publishers(&f, &t, &r);
        prop_assert_eq!(again, f);
    }

    #[test]
    fn netstats_identity_and_cdf(s in snapshot_strategy()) {
        let (r, t) = (rules(), tracker_list());
        let (s, _) = filter_publishers(&s, &t, &r);
        let act = publisher_activity(&s, &t, &r);
        for a in act.values() {
            prop_assert_eq!(a.avg_requests_per_tracker, a.total_tracker_requests as f64 / a.unique_trackers as f64);
            prop_assert!(a.library_providers <= a.total_tracker_requests);
        }
        let totals: Vec<f64> = act.values().map(|a| a.total_tracker_requests as f64).collect();
        if let Ok(c) = cdf(&totals) {
            prop_assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
            prop_assert_eq!(c.points.last().unwrap().1, 1.0);
        }
    }

    #[test]
    fn tt_matches_pair_enumeration(s in snapshot_strategy(), theta in 1u32..4) {
        let (r, t) = (rules(), tracker_list());
        let pt = build_pt(&s, &t, &r);
        let sets = tracker_sets(&pt);
        let tt = build_tt(&pt, theta).unwrap();
        prop_assert_eq!(tt_edges(&tt), oracles::cooccurrence(&sets, theta as usize));
        let nodes: BTreeSet<String> = tt.graph.nodes().iter().map(|n| n.id.clone()).collect();
        prop_assert_eq!(nodes, sets.keys().cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn raising_theta_never_adds_edges(s in snapshot_strategy()) {
        let (r, t) = (rules(), tracker_list());
        let pt = build_pt(&s, &t, &r);
        let mut prev: Option<BTreeSet<(String, String)>> = None;
        for theta in 1..=4 {
            let e = build_tt(&pt, theta).unwrap().graph.edge_keys();
            if let Some(p) = &prev {
                prop_assert!(e.is_subset(p));
            }
            prev = Some(e);
        }
    }

    #[test]
    fn overlap_partitions_cs_edges(
        cs_rows in prop::collection::vec((0usize..10, 0usize..10, 1u32..50), 1..40),
        tt_rows in prop::collection::vec((0usize..10, 0usize..10), 0..40),
        shuffle_seed in any::<u64>(),
    ) {
        let mut text = String::from("domain_a,domain_b,weight\n");
        for (a, b, w) in &cs_rows {
            text.push_str(&format!("t{a}.net,t{b}.net,{w}\n"));
        }
        let cs = load_cs(text.as_bytes(), &rules(), false).unwrap();
        let tt = tt_graph(&tt_rows);
        let Ok((cs2, tt2, _)) = restrict_common(&cs, &tt) else { return Ok(()) };
        let rep = overlap(&cs2, &tt2);
        if let (Some(a), Some(b)) = (rep.o_common, rep.o_neg_tt) {
            prop_assert!((a + b - 100.0).abs() < 1e-9);
            let two = format!("{a:.2}").parse::<f64>().unwrap() + format!("{b:.2}").parse::<f64>().unwrap();
            prop_assert_eq!(format!("{two:.2}"), "100.00");
        }
        if let Some(c) = rep.weight_coverage {
            prop_assert!((0.0..=1.0).contains(&c));
        }

        // row order and direction do not matter
        let mut rows = cs_rows.clone();
        let k = (shuffle_seed as usize) % rows.len();
        rows.rotate_left(k);
        let mut text2 = String::from("domain_a,domain_b,weight\n");
        for (a, b, w) in &rows {
            text2.push_str(&format!("t{b}.net,t{a}.net,{w}\n"));
        }
        let cs_b = load_cs(text2.as_bytes(), &rules(), false).unwrap();
        let (cs_b2, tt_b2, _) = restrict_common(&cs_b, &tt).unwrap();
        let rep_b = overlap(&cs_b2, &tt_b2);
        prop_assert_eq!((rep.o_common, rep.o_neg_cs, rep.o_neg_tt), (rep_b.o_common, rep_b.o_neg_cs, rep_b.o_neg_tt));
    }

    #[test]
    fn coverage_is_monotone(
        cs_rows in prop::collection::vec((0usize..8, 0usize..8, 1u32..50), 1..30),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..10),
    ) {
        let mut text = String::from("domain_a,domain_b,weight\n");
        for (a, b, w) in &cs_rows {
            text.push_str(&format!("t{a}.net,t{b}.net,{w}\n"));
        }
        let cs = load_cs(text.as_bytes(), &rules(), false).unwrap();
        let all: Vec<(String, String)> = cs.graph.edge_keys().into_iter().collect();
        prop_assume!(!all.is_empty());
        let mut set = BTreeSet::new();
        let mut last = weight_coverage(&cs, &set).unwrap();
        for ix in picks {
            set.insert(ix.get(&all).clone());
            let now = weight_coverage(&cs, &set).unwrap();
            prop_assert!(now >= last);
            last = now;
        }
    }

    #[test]
    fn align_is_order_insensitive(a in snapshot_strategy(), b in snapshot_strategy(), c in snapshot_strategy()) {
        let r = rules();
        let common = |v: &[Snapshot]| align(v, &r).map(|(s, _)| s.common_publishers).ok();
        let x = common(&[a.clone(), b.clone(), c.clone()]);
        prop_assert_eq!(&x, &common(&[c.clone(), a.clone(), b.clone()]));
        prop_assert_eq!(&x, &common(&[b, c, a]));
    }

    #[test]
    fn stability_classes_partition_topk(snaps in prop::collection::vec(snapshot_strategy(), 2..5), k in 1usize..6) {
        let (r, t) = (rules(), tracker_list());
        let mut rankings = Vec::new();
        for s in &snaps {
            let pt = build_pt(s, &t, &r);
            match pt_node_metrics(&pt) {
                Ok(m) => rankings.push(rank_trackers(&m, Metric::Degree, None, None)),
                Err(_) => return Ok(()),
            }
        }
        let Ok(rep) = topk_stability(&rankings, k) else { return Ok(()) };
        let in_some_top: BTreeSet<&str> = rankings
            .iter()
            .flat_map(|r| r.entries.iter().take(k).map(|e| e.tracker.as_str()))
            .collect();
        let listed: BTreeSet<&str> = rep.entries.iter().map(|e| e.tracker.as_str()).collect();
        prop_assert_eq!(listed, in_some_top);
        for e in &rep.entries {
            let top: Vec<bool> = e.ranks.iter().map(|r| r.is_some_and(|r| r <= k)).collect();
            match e.class {
                Stability::Stable => prop_assert!(top.iter().all(|&x| x)),
                Stability::Dropped => prop_assert!(!top[top.len() - 1]),
                Stability::Climbed => prop_assert!(!top[0] && top[top.len() - 1]),
                Stability::Transient => {}
            }
        }
    }
}

fn tt_graph(rows: &[(usize, usize)]) -> TtGraph {
    let mut b = trackscope::graph::GraphBuilder::new();
    for i in 0..10 {
        b.add_node((format!("t{i}.net").as_str(), Role::Tracker));
    }
    let keys: BTreeSet<(String, String)> = rows
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| edge_key(&format!("t{a}.net"), &format!("t{b}.net")))
        .collect();
    for (x, y) in keys {
        b.add_edge(
            (x.as_str(), Role::Tracker),
            (y.as_str(), Role::Tracker),
            2.0,
        )
        .unwrap();
    }
    TtGraph {
        graph: b.build(),
        theta: 2,
    }
}

#[test]
fn overlap_audit_sets_cover_both_graphs() {
    let cs = load_cs(
        "domain_a,domain_b,weight\nt1.net,t2.net,3\nt2.net,t3.net,1\n".as_bytes(),
        &rules(),
        false,
    )
    .unwrap();
    let tt = tt_graph(&[(1, 2), (1, 3)]);
    let (cs2, tt2, n) = restrict_common(&cs, &tt).unwrap();
    assert_eq!(n, 3);
    let sets = EdgeSets::new(&cs2.graph, &tt2.graph);
    assert_eq!(
        sets.common.len() + sets.cs_only.len(),
        cs2.graph.edge_count()
    );
    assert_eq!(
        sets.common.len() + sets.tt_only.len(),
        tt2.graph.edge_count()
    );
    assert_eq!(weight_coverage(&cs2, &sets.common).unwrap(), 0.75);
}
