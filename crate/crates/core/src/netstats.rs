//! Per-publisher network activity of trackers, HTTPS adoption and the
//! distribution helpers (empirical CDF, nearest-rank percentiles) used to
//! report them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ingest::{
    classify_request, publisher_key, RequestClass, ResourceKind, Scheme, Snapshot, SuffixRules,
    TrackerList,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PublisherActivity {
    pub publisher: String,
    /// Distinct tracker eTLD+1s contacted.
    pub unique_trackers: usize,
    /// All tracker-classified requests.
    pub total_tracker_requests: usize,
    pub avg_requests_per_tracker: f64,
    /// Distinct full hostnames serving scripts from tracker domains.
    pub library_providers: usize,
}

/// Activity measures for every publisher with at least one tracker request.
pub fn publisher_activity(
    snapshot: &Snapshot,
    trackers: &TrackerList,
    rules: &SuffixRules,
) -> BTreeMap<String, PublisherActivity> {
    #[derive(Default)]
    struct Acc {
        trackers: BTreeSet<String>,
        total: usize,
        script_hosts: BTreeSet<String>,
    }

    let mut per_pub: BTreeMap<String, Acc> = BTreeMap::new();
    for r in &snapshot.records {
        let c = classify_request(r, trackers, rules);
        if c.class != RequestClass::ThirdPartyTracker {
            continue;
        }
        let acc = per_pub.entry(publisher_key(r, rules)).or_default();
        acc.total += 1;
        acc.trackers
            .insert(c.request_domain.expect("tracker requests have a domain"));
        if r.resource_kind == ResourceKind::Script {
            acc.script_hosts.insert(r.request_host.clone());
        }
    }

    per_pub
        .into_iter()
        .map(|(publisher, acc)| {
            let unique = acc.trackers.len();
            let activity = PublisherActivity {
                publisher: publisher.clone(),
                unique_trackers: unique,
                total_tracker_requests: acc.total,
                avg_requests_per_tracker: acc.total as f64 / unique as f64,
                library_providers: acc.script_hosts.len(),
            };
            (publisher, activity)
        })
        .collect()
}

/// The four activity panels, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Panel {
    UniqueTrackers,
    TotalRequests,
    AvgRequests,
    LibraryProviders,
}

impl Panel {
    pub const ALL: [Panel; 4] = [
        Panel::UniqueTrackers,
        Panel::TotalRequests,
        Panel::AvgRequests,
        Panel::LibraryProviders,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Panel::UniqueTrackers => "unique_trackers",
            Panel::TotalRequests => "total_requests",
            Panel::AvgRequests => "avg_requests",
            Panel::LibraryProviders => "library_providers",
        }
    }

    pub fn value(self, a: &PublisherActivity) -> f64 {
        match self {
            Panel::UniqueTrackers => a.unique_trackers as f64,
            Panel::TotalRequests => a.total_tracker_requests as f64,
            Panel::AvgRequests => a.avg_requests_per_tracker,
            Panel::LibraryProviders => a.library_providers as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HttpsAdoption {
    pub fraction: f64,
    pub https_publishers: usize,
    pub publishers: usize,
    /// Publishers without a first-party document request; their scheme was
    /// taken from their first record.
    pub flagged: Vec<String>,
}

/// Share of publishers whose own page (first-party document request) was
/// served over HTTPS.
pub fn https_adoption(snapshot: &Snapshot, rules: &SuffixRules) -> Result<HttpsAdoption> {
    // publisher -> (scheme of first-party document, scheme of first record)
    let mut seen: BTreeMap<String, (Option<Scheme>, Scheme)> = BTreeMap::new();
    for r in &snapshot.records {
        let key = publisher_key(r, rules);
        let entry = seen.entry(key.clone()).or_insert((None, r.scheme));
        if entry.0.is_none()
            && r.resource_kind == ResourceKind::Document
            && rules.etld1(&r.request_host).is_ok_and(|d| d == key)
        {
            entry.0 = Some(r.scheme);
        }
    }
    if seen.is_empty() {
        return Err(Error::Undefined(
            "HTTPS adoption of a snapshot without publishers".into(),
        ));
    }
    let mut https = 0;
    let mut flagged = Vec::new();
    for (publisher, (doc, first)) in &seen {
        let scheme = doc.unwrap_or_else(|| {
            flagged.push(publisher.clone());
            *first
        });
        https += usize::from(scheme == Scheme::Https);
    }
    Ok(HttpsAdoption {
        fraction: https as f64 / seen.len() as f64,
        https_publishers: https,
        publishers: seen.len(),
        flagged,
    })
}

/// Empirical CDF with duplicate values merged: strictly increasing values,
/// non-decreasing fractions ending at 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfSeries {
    pub points: Vec<(f64, f64)>,
}

impl CdfSeries {
    /// Fraction of observations `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.points.partition_point(|&(v, _)| v <= x) {
            0 => 0.0,
            k => self.points[k - 1].1,
        }
    }
}

pub fn cdf(values: &[f64]) -> Result<CdfSeries> {
    if values.is_empty() {
        return Err(Error::Undefined("CDF of an empty series".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("CDF input contains NaN".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut points: Vec<(f64, f64)> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let frac = (i + 1) as f64 / n;
        match points.last_mut() {
            Some(last) if last.0 == v => last.1 = frac,
            _ => points.push((v, frac)),
        }
    }
    Ok(CdfSeries { points })
}

/// Nearest-rank percentile, `q` in `(0, 100]`.
pub fn percentile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Undefined("percentile of an empty series".into()));
    }
    if !(q > 0.0 && q <= 100.0) {
        return Err(Error::InvalidInput(format!(
            "percentile {q} outside (0, 100]"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q / 100.0) * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

pub fn median(values: &[f64]) -> Result<f64> {
    percentile(values, 50.0)
}
