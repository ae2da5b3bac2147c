//! Measurement analytics for third-party web tracking crawls.
//!
//! The crate turns browser-crawl request logs into publisher-tracker (PT)
//! bipartite graphs, tracker-tracker (TT) co-occurrence graphs and the metric
//! suites computed over them. It also compares TT edges against
//! cookie-synchronization ground truth and tracks rankings across snapshots.
//!
//! Module map:
//! - [`ingest`]: log parsing, public-suffix handling, tracker lists, request classification.
//! - [`netstats`]: per-publisher network activity, HTTPS adoption, CDFs.
//! - [`graph`]: undirected weighted graph plus LCC, centrality, coreness, clustering.
//! - [`ptgraph`]: publisher-tracker graph, summaries, correlations, rankings.
//! - [`ttgraph`]: tracker co-occurrence graph.
//! - [`csoverlap`]: cookie-sync ground truth loading and edge-set overlap.
//! - [`longitudinal`]: snapshot alignment, trends and top-k stability.

pub mod csoverlap;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod longitudinal;
pub mod netstats;
pub mod ptgraph;
pub mod ttgraph;

pub use error::{Error, ErrorKind, Result};
