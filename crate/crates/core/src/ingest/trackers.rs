//! Tracker blocklists at registrable-domain granularity.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::Value;

use super::suffix::{normalize_host, SuffixRules};
use crate::{Error, Result};

/// Versioned set of tracker domains. Every entry is a lowercase eTLD+1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrackerList {
    pub version: String,
    domains: BTreeSet<String>,
}

impl TrackerList {
    /// Builds a list from raw entries, normalizing each to its eTLD+1.
    /// Entries that cannot be normalized are returned in the second slot.
    pub fn from_entries<I, S>(version: &str, entries: I, rules: &SuffixRules) -> (Self, Vec<String>)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut domains = BTreeSet::new();
        let mut rejected = Vec::new();
        for entry in entries {
            let entry = entry.as_ref();
            match normalize_host(entry).and_then(|h| rules.etld1(&h)) {
                Ok(d) => {
                    domains.insert(d);
                }
                Err(_) => rejected.push(entry.to_string()),
            }
        }
        (
            Self {
                version: version.to_string(),
                domains,
            },
            rejected,
        )
    }

    pub fn contains(&self, domain: &str) -> bool {
        self.domains.contains(domain)
    }

    pub fn domains(&self) -> &BTreeSet<String> {
        &self.domains
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }
}

/// Tracker domain to owning organization, used only for report labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrgMap(BTreeMap<String, String>);

impl OrgMap {
    pub fn get(&self, domain: &str) -> Option<&str> {
        self.0.get(domain).map(String::as_str)
    }

    pub fn insert(&mut self, domain: String, org: String) {
        self.0.insert(domain, org);
    }

    /// Entries from `other` override entries already present.
    pub fn extend(&mut self, other: OrgMap) {
        self.0.extend(other.0);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reads a `domain,organization` CSV (header optional).
    pub fn from_csv<R: std::io::Read>(reader: R, rules: &SuffixRules) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut map = OrgMap::default();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let (Some(domain), Some(org)) = (row.get(0), row.get(1)) else {
                return Err(Error::parse(
                    format!("organization map row {}", i + 1),
                    "expected domain,organization",
                ));
            };
            if i == 0 && domain.eq_ignore_ascii_case("domain") {
                continue;
            }
            if domain.is_empty() || domain.starts_with('#') {
                continue;
            }
            let domain = normalize_host(domain).and_then(|h| rules.etld1(&h))?;
            map.insert(domain, org.to_string());
        }
        Ok(map)
    }
}

/// Result of loading a tracker list file.
#[derive(Debug, Clone)]
pub struct LoadedTrackers {
    pub list: TrackerList,
    pub orgs: OrgMap,
    /// Raw entries that were not valid registrable hostnames.
    pub rejected: Vec<String>,
}

/// Loads a tracker list from text. JSON input (first non-blank character
/// `{`) is treated as a Disconnect-style services file and flattened;
/// anything else is one domain per line with `#` comments.
pub fn load_tracker_list(text: &str, version: &str, rules: &SuffixRules) -> Result<LoadedTrackers> {
    if text.trim_start().starts_with('{') {
        load_disconnect_json(text, version, rules)
    } else {
        let entries = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or_default().trim())
            .filter(|l| !l.is_empty());
        let (list, rejected) = TrackerList::from_entries(version, entries, rules);
        Ok(LoadedTrackers {
            list,
            orgs: OrgMap::default(),
            rejected,
        })
    }
}

pub fn load_tracker_list_path(
    path: impl AsRef<Path>,
    version: &str,
    rules: &SuffixRules,
) -> Result<LoadedTrackers> {
    load_tracker_list(&std::fs::read_to_string(path)?, version, rules)
}

// {"categories": {"Advertising": [{"Org": {"https://org/": ["a.com", ...], "dnt": "eff"}}]}}
fn load_disconnect_json(text: &str, version: &str, rules: &SuffixRules) -> Result<LoadedTrackers> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::parse("tracker list JSON", e))?;
    let categories = root
        .get("categories")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::parse("tracker list JSON", "missing \"categories\" object"))?;

    let mut raw: Vec<(String, String)> = Vec::new();
    for entries in categories.values() {
        let Some(entries) = entries.as_array() else {
            continue;
        };
        for entry in entries.iter().filter_map(Value::as_object) {
            for (org, sites) in entry {
                let Some(sites) = sites.as_object() else {
                    continue;
                };
                for domains in sites.values().filter_map(Value::as_array) {
                    for d in domains.iter().filter_map(Value::as_str) {
                        raw.push((d.to_string(), org.clone()));
                    }
                }
            }
        }
    }

    let (list, rejected) = TrackerList::from_entries(version, raw.iter().map(|(d, _)| d), rules);
    let mut orgs = OrgMap::default();
    for (d, org) in raw {
        if let Ok(d) = normalize_host(&d).and_then(|h| rules.etld1(&h)) {
            // first organization claiming a domain keeps it
            orgs.0.entry(d).or_insert(org);
        }
    }
    Ok(LoadedTrackers {
        list,
        orgs,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> SuffixRules {
        SuffixRules::parse("com\nnet\nco.uk\nuk").unwrap()
    }

    #[test]
    fn plain_text_list() {
        let text = "# header\nGoogle-Analytics.com\nstats.doubleclick.net  # inline\n\ngoogle-analytics.com\nco.uk\n";
        let loaded = load_tracker_list(text, "v1", &rules()).unwrap();
        let domains: Vec<_> = loaded.list.domains().iter().cloned().collect();
        assert_eq!(domains, vec!["doubleclick.net", "google-analytics.com"]);
        assert_eq!(loaded.rejected, vec!["co.uk"]);
        assert_eq!(loaded.list.version, "v1");
    }

    #[test]
    fn disconnect_json_is_flattened() {
        let json = r#"{
          "license": "x",
          "categories": {
            "Advertising": [
              {"Google": {"http://www.google.com/": ["doubleclick.net", "ads.google.com"], "dnt": "eff"}},
              {"Criteo": {"http://criteo.com/": ["criteo.com", "criteo.net"]}}
            ],
            "Analytics": [
              {"Google": {"http://www.google.com/": ["google-analytics.com"]}}
            ]
          }
        }"#;
        let loaded = load_tracker_list(json, "2017-09", &rules()).unwrap();
        let domains: Vec<_> = loaded.list.domains().iter().cloned().collect();
        assert_eq!(
            domains,
            vec![
                "criteo.com",
                "criteo.net",
                "doubleclick.net",
                "google-analytics.com",
                "google.com"
            ]
        );
        assert_eq!(loaded.orgs.get("criteo.net"), Some("Criteo"));
        assert_eq!(loaded.orgs.get("google.com"), Some("Google"));
    }

    #[test]
    fn malformed_json_fails() {
        assert!(load_tracker_list("{\"nope\": 1}", "v", &rules()).is_err());
        assert!(load_tracker_list("{not json", "v", &rules()).is_err());
    }

    #[test]
    fn org_csv() {
        let csv = "domain,organization\nwww.criteo.com,Criteo\ngoogle-analytics.com,Google\n";
        let orgs = OrgMap::from_csv(csv.as_bytes(), &rules()).unwrap();
        assert_eq!(orgs.len(), 2);
        assert_eq!(orgs.get("criteo.com"), Some("Criteo"));
    }
}
