//! Crawl ingestion: logs, suffix rules, tracker lists and request
//! classification.

mod log;
mod suffix;
mod trackers;

use std::collections::{BTreeMap, BTreeSet};

pub use log::{parse_crawl_log, write_canonical_log, CrawlRecord, ParsedLog, ResourceKind, Scheme};
pub use suffix::{etld1, normalize_host, SuffixRules};
pub use trackers::{
    load_tracker_list, load_tracker_list_path, LoadedTrackers, OrgMap, TrackerList,
};

/// A dated crawl of a publisher list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub id: String,
    pub date_label: String,
    pub records: Vec<CrawlRecord>,
    pub tracker_list_version: String,
}

impl Snapshot {
    pub fn new(
        id: &str,
        date_label: &str,
        tracker_list_version: &str,
        records: Vec<CrawlRecord>,
    ) -> Self {
        Self {
            id: id.to_string(),
            date_label: date_label.to_string(),
            records,
            tracker_list_version: tracker_list_version.to_string(),
        }
    }

    /// Distinct publisher identities (eTLD+1 of the visited host).
    pub fn publishers(&self, rules: &SuffixRules) -> BTreeSet<String> {
        self.records
            .iter()
            .map(|r| publisher_key(r, rules))
            .collect()
    }

    /// Same snapshot restricted to records whose publisher satisfies `keep`.
    pub fn retain_publishers(&self, rules: &SuffixRules, keep: impl Fn(&str) -> bool) -> Snapshot {
        Snapshot {
            records: self
                .records
                .iter()
                .filter(|r| keep(&publisher_key(r, rules)))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

/// Publisher identity of a record: eTLD+1 of the visited host, falling back
/// to the raw host when it has none (IP literals, bare suffixes).
pub fn publisher_key(record: &CrawlRecord, rules: &SuffixRules) -> String {
    rules
        .etld1(&record.publisher_host)
        .unwrap_or_else(|_| record.publisher_host.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RequestClass {
    FirstParty,
    ThirdPartyTracker,
    ThirdPartyOther,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: RequestClass,
    /// Registrable domain of the request target, if it has one.
    pub request_domain: Option<String>,
    /// Set when either host had no registrable domain.
    pub anomalous: bool,
}

/// Three-way classification of a request relative to the page it was made
/// from. Matching is by eTLD+1 equality.
pub fn classify_request(
    record: &CrawlRecord,
    trackers: &TrackerList,
    rules: &SuffixRules,
) -> Classification {
    let (publisher, request) = match (
        rules.etld1(&record.publisher_host),
        rules.etld1(&record.request_host),
    ) {
        (Ok(p), Ok(r)) => (p, r),
        (_, request) => {
            return Classification {
                class: RequestClass::ThirdPartyOther,
                request_domain: request.ok(),
                anomalous: true,
            }
        }
    };
    let class = if publisher == request {
        RequestClass::FirstParty
    } else if trackers.contains(&request) {
        RequestClass::ThirdPartyTracker
    } else {
        RequestClass::ThirdPartyOther
    };
    Classification {
        class,
        request_domain: Some(request),
        anomalous: false,
    }
}

/// Per-class record counts for a snapshot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct ClassCounts {
    pub first_party: usize,
    pub third_party_tracker: usize,
    pub third_party_other: usize,
    pub anomalous: usize,
}

pub fn class_counts(
    snapshot: &Snapshot,
    trackers: &TrackerList,
    rules: &SuffixRules,
) -> ClassCounts {
    let mut counts = ClassCounts::default();
    for r in &snapshot.records {
        let c = classify_request(r, trackers, rules);
        match c.class {
            RequestClass::FirstParty => counts.first_party += 1,
            RequestClass::ThirdPartyTracker => counts.third_party_tracker += 1,
            RequestClass::ThirdPartyOther => counts.third_party_other += 1,
        }
        counts.anomalous += usize::from(c.anomalous);
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FilterReport {
    pub publishers_before: usize,
    pub publishers_retained: usize,
    pub records_before: usize,
    pub records_retained: usize,
}

/// Keeps only publishers that issued at least one tracker request.
pub fn filter_publishers(
    snapshot: &Snapshot,
    trackers: &TrackerList,
    rules: &SuffixRules,
) -> (Snapshot, FilterReport) {
    let mut has_tracker: BTreeMap<String, bool> = BTreeMap::new();
    for r in &snapshot.records {
        let hit = classify_request(r, trackers, rules).class == RequestClass::ThirdPartyTracker;
        *has_tracker.entry(publisher_key(r, rules)).or_default() |= hit;
    }
    let filtered =
        snapshot.retain_publishers(rules, |p| has_tracker.get(p).copied().unwrap_or(false));
    let report = FilterReport {
        publishers_before: has_tracker.len(),
        publishers_retained: has_tracker.values().filter(|&&v| v).count(),
        records_before: snapshot.records.len(),
        records_retained: filtered.records.len(),
    };
    (filtered, report)
}
