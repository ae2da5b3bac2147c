//! Cross-snapshot alignment, metric trends and top-K stability classes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ingest::{Snapshot, SuffixRules};
use crate::ptgraph::TrackerRanking;
use crate::{Error, Result};

/// Snapshots in chronological (input) order and the publishers common to
/// all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotSeries {
    /// `(id, date_label)` pairs.
    pub snapshots: Vec<(String, String)>,
    pub common_publishers: BTreeSet<String>,
}

/// Intersects publisher sets by eTLD+1 and filters every snapshot to the
/// common set. Input order is taken as chronological.
pub fn align(
    snapshots: &[Snapshot],
    rules: &SuffixRules,
) -> Result<(SnapshotSeries, Vec<Snapshot>)> {
    if snapshots.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "alignment needs at least 2 snapshots, got {}",
            snapshots.len()
        )));
    }
    let mut common = snapshots[0].publishers(rules);
    for s in &snapshots[1..] {
        let p = s.publishers(rules);
        common.retain(|x| p.contains(x));
    }
    if common.is_empty() {
        return Err(Error::InvalidInput("snapshots share no publishers".into()));
    }
    let filtered = snapshots
        .iter()
        .map(|s| s.retain_publishers(rules, |p| common.contains(p)))
        .collect();
    let series = SnapshotSeries {
        snapshots: snapshots
            .iter()
            .map(|s| (s.id.clone(), s.date_label.clone()))
            .collect(),
        common_publishers: common,
    };
    Ok((series, filtered))
}

/// A scalar tracked across snapshots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub metric: String,
    pub values: Vec<f64>,
    /// `(last - first) / first * 100`; `None` when the series starts at 0
    /// or has no values.
    pub change_pct: Option<f64>,
}

pub fn trend(metric: &str, values: Vec<f64>) -> Trend {
    let change_pct = match (values.first(), values.last()) {
        (Some(&first), Some(&last)) if first != 0.0 => Some((last - first) / first * 100.0),
        _ => None,
    };
    Trend {
        metric: metric.to_string(),
        values,
        change_pct,
    }
}

/// Named scalar read from one per-snapshot item.
pub type Extractor<'a, T> = (&'a str, &'a dyn Fn(&T) -> f64);

/// One trend per extracted metric over the per-snapshot items.
pub fn trend_table<T>(items: &[T], extractors: &[Extractor<'_, T>]) -> Vec<Trend> {
    extractors
        .iter()
        .map(|(name, f)| trend(name, items.iter().map(f).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    /// In the top-K of every snapshot.
    Stable,
    /// In the top-K where first ranked, outside it at the end.
    Dropped,
    /// Outside the top-K at the start, inside it at the end.
    Climbed,
    Transient,
}

impl Stability {
    pub fn legend(self) -> &'static str {
        match self {
            Stability::Stable => "*",
            Stability::Dropped => "+/-",
            Stability::Climbed => "+",
            Stability::Transient => "",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Dropped => "dropped",
            Stability::Climbed => "climbed",
            Stability::Transient => "transient",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityEntry {
    pub tracker: String,
    pub organization: Option<String>,
    pub class: Stability,
    /// 1-based rank per snapshot; `None` when the tracker is unranked.
    pub ranks: Vec<Option<usize>>,
    /// Mean publisher coverage (%) over the snapshots ranking the tracker.
    pub avg_coverage_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub k: usize,
    /// Trackers that reached the top-K at least once, by descending average
    /// coverage.
    pub entries: Vec<StabilityEntry>,
}

impl StabilityReport {
    pub fn get(&self, tracker: &str) -> Option<&StabilityEntry> {
        self.entries.iter().find(|e| e.tracker == tracker)
    }
}

/// Classifies every tracker that appears in some top-`k`. Rankings should
/// be complete (not truncated to `k`) so that ranks beyond `k` are known.
pub fn topk_stability(rankings: &[TrackerRanking], k: usize) -> Result<StabilityReport> {
    if rankings.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "stability needs at least 2 rankings, got {}",
            rankings.len()
        )));
    }
    let longest = rankings.iter().map(|r| r.entries.len()).max().unwrap_or(0);
    if k == 0 || k > longest {
        return Err(Error::InvalidInput(format!(
            "k = {k} exceeds every ranking (longest has {longest})"
        )));
    }

    // tracker -> (rank per snapshot, coverage % where ranked, organization)
    type Seen<'a> = (Vec<Option<usize>>, Vec<f64>, Option<&'a str>);
    let mut seen: BTreeMap<&str, Seen> = BTreeMap::new();
    for (s, r) in rankings.iter().enumerate() {
        for (i, e) in r.entries.iter().enumerate() {
            let slot = seen
                .entry(e.tracker.as_str())
                .or_insert_with(|| (vec![None; rankings.len()], Vec::new(), None));
            slot.0[s] = Some(i + 1);
            slot.1.push(e.coverage * 100.0);
            slot.2 = slot.2.or(e.organization.as_deref());
        }
    }

    let in_top = |r: Option<usize>| r.is_some_and(|r| r <= k);
    let mut entries: Vec<StabilityEntry> = seen
        .into_iter()
        .filter(|(_, (ranks, _, _))| ranks.iter().any(|&r| in_top(r)))
        .map(|(tracker, (ranks, cov, org))| {
            let first_seen = ranks.iter().copied().find(Option::is_some).flatten();
            let (start, end) = (
                in_top(ranks[0]),
                in_top(*ranks.last().expect("two rankings")),
            );
            let class = if ranks.iter().all(|&r| in_top(r)) {
                Stability::Stable
            } else if in_top(first_seen) && !end {
                Stability::Dropped
            } else if !start && end {
                Stability::Climbed
            } else {
                Stability::Transient
            };
            StabilityEntry {
                tracker: tracker.to_string(),
                organization: org.map(str::to_string),
                class,
                ranks,
                avg_coverage_pct: cov.iter().sum::<f64>() / cov.len() as f64,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.avg_coverage_pct
            .total_cmp(&a.avg_coverage_pct)
            .then_with(|| a.tracker.cmp(&b.tracker))
    });
    Ok(StabilityReport { k, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CrawlRecord, ResourceKind, Scheme};
    use crate::ptgraph::{Metric, RankingEntry};

    fn rules() -> SuffixRules {
        SuffixRules::parse("com").unwrap()
    }

    fn snap(id: &str, pubs: &[&str]) -> Snapshot {
        let records = pubs
            .iter()
            .map(|p| CrawlRecord {
                snapshot_id: id.into(),
                publisher_host: p.to_string(),
                request_host: "t.com".into(),
                request_path: "/".into(),
                scheme: Scheme::Https,
                resource_kind: ResourceKind::Script,
            })
            .collect();
        Snapshot::new(id, id, "v", records)
    }

    fn ranking(order: &[&str]) -> TrackerRanking {
        TrackerRanking {
            metric: Metric::Degree,
            entries: order
                .iter()
                .enumerate()
                .map(|(i, t)| RankingEntry {
                    tracker: t.to_string(),
                    value: (order.len() - i) as f64,
                    coverage: 0.5,
                    organization: None,
                })
                .collect(),
            truncated: false,
        }
    }

    #[test]
    fn intersection_of_publishers() {
        let (series, filtered) = align(
            &[
                snap("A", &["a.com", "www.b.com", "c.com"]),
                snap("B", &["b.com", "c.com", "d.com"]),
            ],
            &rules(),
        )
        .unwrap();
        let common: Vec<_> = series
            .common_publishers
            .iter()
            .map(String::as_str)
            .collect();
        assert_eq!(common, vec!["b.com", "c.com"]);
        assert_eq!(filtered[0].records.len(), 2);
        assert_eq!(filtered[1].records.len(), 2);
        assert_eq!(series.snapshots[1].0, "B");
    }

    #[test]
    fn align_identity_and_errors() {
        let s = snap("A", &["a.com", "b.com"]);
        let (series, filtered) = align(&[s.clone(), s.clone()], &rules()).unwrap();
        assert_eq!(series.common_publishers.len(), 2);
        assert_eq!(filtered[0], s);
        assert!(align(std::slice::from_ref(&s), &rules()).is_err());
        assert!(align(&[s, snap("B", &["z.com"])], &rules()).is_err());
    }

    #[test]
    fn trend_changes() {
        assert!((trend("median", vec![10.0, 9.1]).change_pct.unwrap() + 9.0).abs() < 1e-12);
        assert_eq!(trend("x", vec![3.0, 3.0, 3.0]).change_pct, Some(0.0));
        assert_eq!(trend("x", vec![4.0, 5.0, 8.0]).change_pct, Some(100.0));
        assert_eq!(trend("x", vec![0.0, 1.0]).change_pct, None);
    }

    #[test]
    fn trend_table_extracts() {
        let rows = [(1.0, 10.0), (2.0, 5.0)];
        let t = trend_table(
            &rows,
            &[("a", &|r: &(f64, f64)| r.0), ("b", &|r: &(f64, f64)| r.1)],
        );
        assert_eq!(t[0].change_pct, Some(100.0));
        assert_eq!(t[1].values, vec![10.0, 5.0]);
    }

    #[test]
    fn legend_classes() {
        let r = [
            ranking(&["g", "q", "x", "d"]),
            ranking(&["g", "q", "d", "x"]),
            ranking(&["g", "d", "x", "q"]),
        ];
        let rep = topk_stability(&r, 2).unwrap();
        assert_eq!(rep.get("g").unwrap().class, Stability::Stable);
        assert_eq!(rep.get("q").unwrap().class, Stability::Dropped);
        assert_eq!(rep.get("d").unwrap().class, Stability::Climbed);
        assert_eq!(rep.get("q").unwrap().ranks, vec![Some(2), Some(2), Some(4)]);
        // x never reaches the top 2
        assert!(rep.get("x").is_none());
    }

    #[test]
    fn late_entrant_that_fades_is_dropped() {
        let r = [
            ranking(&["a", "b"]),
            ranking(&["n", "a", "b"]),
            ranking(&["a", "b", "n"]),
        ];
        let rep = topk_stability(&r, 1).unwrap();
        assert_eq!(rep.get("n").unwrap().class, Stability::Dropped);
        assert_eq!(rep.get("n").unwrap().ranks[0], None);
    }

    #[test]
    fn transient_in_and_out() {
        let r = [
            ranking(&["a", "b", "c"]),
            ranking(&["a", "c", "b"]),
            ranking(&["a", "b", "c"]),
        ];
        let rep = topk_stability(&r, 1).unwrap();
        assert_eq!(rep.entries.len(), 1);
        let rep = topk_stability(&r, 2).unwrap();
        assert_eq!(rep.get("c").unwrap().class, Stability::Transient);
    }

    #[test]
    fn stability_errors() {
        let r = [ranking(&["a", "b"]), ranking(&["a"])];
        assert!(topk_stability(&r, 3).is_err());
        assert!(topk_stability(&r, 0).is_err());
        assert!(topk_stability(&r[..1], 1).is_err());
        assert!(topk_stability(&r, 2).is_ok());
    }
}
