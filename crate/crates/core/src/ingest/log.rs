//! JSON-Lines crawl logs.
//!
//! One object per request:
//! `{"snapshot":"Sep17","publisher":"<host>","request":"<absolute URL>","kind":"script"}`.
//! The `snapshot` field is optional; when present it must match the
//! snapshot being parsed.

use std::fmt;
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::suffix::normalize_host;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Http,
    Https,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Http => "http",
            Scheme::Https => "https",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceKind {
    Script,
    Image,
    Document,
    Xhr,
    Other,
}

impl ResourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResourceKind::Script => "script",
            ResourceKind::Image => "image",
            ResourceKind::Document => "document",
            ResourceKind::Xhr => "xhr",
            ResourceKind::Other => "other",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "script" => ResourceKind::Script,
            "image" => ResourceKind::Image,
            "document" => ResourceKind::Document,
            "xhr" => ResourceKind::Xhr,
            "other" => ResourceKind::Other,
            _ => return None,
        })
    }
}

/// One observed HTTP(S) request made while visiting a publisher page.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrawlRecord {
    pub snapshot_id: String,
    pub publisher_host: String,
    pub request_host: String,
    pub request_path: String,
    pub scheme: Scheme,
    pub resource_kind: ResourceKind,
}

impl CrawlRecord {
    pub fn request_url(&self) -> String {
        format!(
            "{}://{}{}",
            self.scheme.as_str(),
            self.request_host,
            self.request_path
        )
    }

    /// Canonical JSON line (without trailing newline).
    pub fn to_canonical_line(&self) -> String {
        let line = CanonicalLine {
            snapshot: &self.snapshot_id,
            publisher: &self.publisher_host,
            request: self.request_url(),
            kind: self.resource_kind.as_str(),
        };
        serde_json::to_string(&line).expect("string fields always serialize")
    }
}

impl fmt::Display for CrawlRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ({})",
            self.publisher_host,
            self.request_url(),
            self.resource_kind.as_str()
        )
    }
}

#[derive(Serialize)]
struct CanonicalLine<'a> {
    snapshot: &'a str,
    publisher: &'a str,
    request: String,
    kind: &'a str,
}

#[derive(Deserialize)]
struct RawLine {
    snapshot: Option<String>,
    publisher: String,
    request: String,
    kind: String,
}

/// Parsed log plus the bookkeeping for skipped lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedLog {
    pub records: Vec<CrawlRecord>,
    /// 1-based line numbers of malformed lines.
    pub malformed_lines: Vec<usize>,
}

impl ParsedLog {
    pub fn skipped(&self) -> usize {
        self.malformed_lines.len()
    }
}

fn parse_line(line: &[u8], snapshot_id: &str) -> std::result::Result<CrawlRecord, String> {
    let raw: RawLine = serde_json::from_slice(line).map_err(|e| e.to_string())?;
    if let Some(s) = &raw.snapshot {
        if s != snapshot_id {
            return Err(format!("snapshot {s:?} does not match {snapshot_id:?}"));
        }
    }
    let publisher_host = normalize_host(&raw.publisher).map_err(|e| e.to_string())?;
    let url = url::Url::parse(&raw.request).map_err(|e| e.to_string())?;
    let scheme = match url.scheme() {
        "http" => Scheme::Http,
        "https" => Scheme::Https,
        other => return Err(format!("unsupported scheme {other:?}")),
    };
    let request_host = normalize_host(url.host_str().ok_or("request URL has no host")?)
        .map_err(|e| e.to_string())?;
    let resource_kind =
        ResourceKind::parse(&raw.kind).ok_or_else(|| format!("unknown kind {:?}", raw.kind))?;
    Ok(CrawlRecord {
        snapshot_id: snapshot_id.to_string(),
        publisher_host,
        request_host,
        request_path: url.path().to_string(),
        scheme,
        resource_kind,
    })
}

/// Parses a JSON-Lines crawl log. Blank lines are ignored; malformed lines
/// are skipped and reported. More than half the non-blank lines being
/// malformed is treated as a wrong-format input and fails.
pub fn parse_crawl_log<R: BufRead>(mut reader: R, snapshot_id: &str) -> Result<ParsedLog> {
    let mut lines: Vec<(usize, Vec<u8>)> = Vec::new();
    let mut buf = Vec::new();
    let mut lineno = 0;
    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        lineno += 1;
        if buf.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        lines.push((lineno, std::mem::take(&mut buf)));
    }

    let parsed: Vec<(usize, std::result::Result<CrawlRecord, String>)> = lines
        .par_iter()
        .map(|(n, line)| (*n, parse_line(line, snapshot_id)))
        .collect();

    let total = parsed.len();
    let mut out = ParsedLog::default();
    for (n, res) in parsed {
        match res {
            Ok(r) => out.records.push(r),
            Err(_) => out.malformed_lines.push(n),
        }
    }
    if out.skipped() * 2 > total {
        return Err(Error::TooManyMalformed {
            malformed: out.skipped(),
            total,
        });
    }
    Ok(out)
}

/// Canonical JSON-Lines rendering; re-parsing it yields the same records.
pub fn write_canonical_log(records: &[CrawlRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_canonical_line());
        out.push('\n');
    }
    out
}
