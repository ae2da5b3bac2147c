//! Regenerates the bundled demo corpus:
//!
//! ```text
//! cargo run -p trackscope-cli --example gen_demo -- demo
//! ```
//!
//! Two crawls of about twenty publishers and fifteen trackers, with tracker
//! popularity shifting between them so that the stability legend has
//! something to show.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_160_518;

const PSL: &str = "\
// public suffix subset for the demo corpus
com
net
org
io
uk
co.uk
jp
*.kawasaki.jp
!city.kawasaki.jp
";

/// (tracker eTLD+1, request hosts, organization, inclusion probability per snapshot)
const TRACKERS: [(&str, &[&str], &str, [f64; 2]); 15] = [
    (
        "google-analytics.com",
        &["www.google-analytics.com", "ssl.google-analytics.com"],
        "Google",
        [0.9, 0.85],
    ),
    (
        "doubleclick.net",
        &["stats.g.doubleclick.net", "ad.doubleclick.net"],
        "Google",
        [0.8, 0.75],
    ),
    (
        "facebook.net",
        &["connect.facebook.net"],
        "Facebook",
        [0.6, 0.65],
    ),
    (
        "googlesyndication.com",
        &["pagead2.googlesyndication.com"],
        "Google",
        [0.5, 0.5],
    ),
    (
        "scorecardresearch.com",
        &["sb.scorecardresearch.com", "b.scorecardresearch.com"],
        "comScore",
        [0.55, 0.3],
    ),
    (
        "quantserve.com",
        &["pixel.quantserve.com", "secure.quantserve.com"],
        "Quantcast",
        [0.6, 0.15],
    ),
    ("demdex.net", &["dpm.demdex.net"], "Adobe", [0.1, 0.6]),
    (
        "criteo.com",
        &["static.criteo.com", "dis.criteo.com"],
        "Criteo",
        [0.3, 0.45],
    ),
    (
        "adnxs.com",
        &["ib.adnxs.com", "secure.adnxs.com"],
        "AppNexus",
        [0.4, 0.4],
    ),
    (
        "taboola.com",
        &["cdn.taboola.com", "trc.taboola.com"],
        "Taboola",
        [0.2, 0.3],
    ),
    (
        "outbrain.com",
        &["widgets.outbrain.com"],
        "Outbrain",
        [0.25, 0.2],
    ),
    (
        "hotjar.com",
        &["static.hotjar.com", "script.hotjar.com"],
        "Hotjar",
        [0.05, 0.35],
    ),
    ("nr-data.net", &["bam.nr-data.net"], "New Relic", [0.3, 0.3]),
    (
        "twitter.com",
        &["platform.twitter.com", "syndication.twitter.com"],
        "Twitter",
        [0.35, 0.25],
    ),
    (
        "amazon-adsystem.com",
        &["s.amazon-adsystem.com", "c.amazon-adsystem.com"],
        "Amazon",
        [0.2, 0.3],
    ),
];

const OTHER_THIRD_PARTIES: [&str; 3] = [
    "fonts.googleapis.com",
    "cdnjs.cloudflare.com",
    "ajax.example-cdn.io",
];

/// Cookie-sync pairs observed independently of the crawls.
const SYNC_PAIRS: [(&str, &str, f64); 14] = [
    ("doubleclick.net", "adnxs.com", 0.21),
    ("cm.g.doubleclick.net", "criteo.com", 0.14),
    ("dpm.demdex.net", "doubleclick.net", 0.09),
    ("adnxs.com", "criteo.com", 0.08),
    ("ib.adnxs.com", "amazon-adsystem.com", 0.06),
    ("quantserve.com", "doubleclick.net", 0.05),
    ("taboola.com", "adnxs.com", 0.04),
    ("outbrain.com", "criteo.com", 0.03),
    ("scorecardresearch.com", "quantserve.com", 0.03),
    ("demdex.net", "adnxs.com", 0.02),
    ("rubiconproject.com", "adnxs.com", 0.12),
    ("rubiconproject.com", "doubleclick.net", 0.07),
    ("pubmatic.com", "criteo.com", 0.04),
    ("criteo.com", "criteo.com", 0.01),
];

fn publishers() -> Vec<String> {
    let mut v: Vec<String> = [
        "dailyherald.com",
        "metroexpress.co.uk",
        "techpulse.io",
        "recipebox.com",
        "cityweather.org",
        "sportsdesk.net",
        "travelnotes.com",
        "financewire.com",
        "gamerhub.net",
        "healthline-news.com",
        "autotrader-blog.co.uk",
        "movienight.com",
        "localtimes.com",
        "shop.city.kawasaki.jp",
        "parentingdaily.org",
        "musicstream.io",
        "quietlibrary.org",
        "bargainbin.com",
        "scienceweekly.com",
        "petcorner.net",
        "fashionfeed.com",
        "oldforum.net",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    v.sort();
    v
}

fn line(out: &mut String, snap: &str, publisher: &str, url: &str, kind: &str) {
    writeln!(
        out,
        r#"{{"snapshot":"{snap}","publisher":"{publisher}","request":"{url}","kind":"{kind}"}}"#
    )
    .unwrap();
}

fn crawl(rng: &mut ChaCha8Rng, snap_index: usize, snap: &str) -> String {
    let https_rate = [0.45, 0.75][snap_index];
    let mut out = String::new();
    for (pi, publisher) in publishers().iter().enumerate() {
        // each crawl misses one publisher; quietlibrary.org embeds no trackers
        if (snap_index == 0 && publisher == "fashionfeed.com")
            || (snap_index == 1 && publisher == "oldforum.net")
        {
            continue;
        }
        let host = if snap_index == 1 && pi % 3 == 0 {
            publisher.clone()
        } else {
            format!("www.{publisher}")
        };
        let scheme = if rng.gen_bool(https_rate) {
            "https"
        } else {
            "http"
        };
        line(
            &mut out,
            snap,
            &host,
            &format!("{scheme}://{host}/"),
            "document",
        );
        for _ in 0..rng.gen_range(1..=2) {
            let k = ["image", "script"][rng.gen_range(0..2)];
            line(
                &mut out,
                snap,
                &host,
                &format!(
                    "{scheme}://static.{publisher}/a/{}.bin",
                    rng.gen_range(0..99)
                ),
                k,
            );
        }
        if rng.gen_bool(0.4) {
            let h = OTHER_THIRD_PARTIES.choose(rng).unwrap();
            line(
                &mut out,
                snap,
                &host,
                &format!("https://{h}/lib.js"),
                "script",
            );
        }
        if publisher == "quietlibrary.org" {
            continue;
        }
        let mut embedded = 0;
        for (_, hosts, _, p) in TRACKERS {
            if !rng.gen_bool(p[snap_index]) {
                continue;
            }
            embedded += 1;
            for _ in 0..rng.gen_range(1..=2) {
                let h = hosts.choose(rng).unwrap();
                let kind = ["script", "image", "xhr", "script"][rng.gen_range(0..4)];
                let s = if rng.gen_bool(0.8) { "https" } else { "http" };
                line(
                    &mut out,
                    snap,
                    &host,
                    &format!("{s}://{h}/t?id={}", rng.gen_range(0..9999)),
                    kind,
                );
            }
        }
        if embedded == 0 {
            let h = TRACKERS[0].1[0];
            line(
                &mut out,
                snap,
                &host,
                &format!("https://{h}/collect"),
                "image",
            );
        }
    }
    // a few lines a real crawler emits when something goes wrong
    out.push_str(
        "{\"publisher\":\"dailyherald.com\",\"request\":\"not a url\",\"kind\":\"script\"}\n",
    );
    out.push_str("{\"publisher\":\"dailyherald.com\",\"request\":\"ftp://files.example.com/x\",\"kind\":\"other\"}\n");
    out.push('\n');
    out
}

fn write(dir: &Path, rel: &str, text: &str) {
    let path = dir.join(rel);
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, text).unwrap();
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "demo".into()));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    write(&dir, "public_suffix_list.dat", PSL);

    let mut plain = String::from("# tracker list, plain text\n");
    for (domain, ..) in TRACKERS.iter().take(14) {
        plain.push_str(domain);
        plain.push('\n');
    }
    write(&dir, "lists/2016.txt", &plain);

    // later list in the nested services format, grouped by organization
    let mut by_org: Vec<(&str, Vec<&str>)> = Vec::new();
    for (domain, _, org, _) in TRACKERS {
        match by_org.iter_mut().find(|(o, _)| *o == org) {
            Some((_, v)) => v.push(domain),
            None => by_org.push((org, vec![domain])),
        }
    }
    let services: Vec<serde_json::Value> = by_org
        .iter()
        .map(|(org, domains)| {
            let url = format!("https://{}/", domains[0]);
            serde_json::json!({ *org: { url: domains } })
        })
        .collect();
    let list = serde_json::json!({"license": "demo", "categories": {"Advertising": services}});
    write(
        &dir,
        "lists/2018.json",
        &(serde_json::to_string_pretty(&list).unwrap() + "\n"),
    );

    let mut orgs = String::from("domain,organization\n");
    for (domain, _, org, _) in TRACKERS {
        writeln!(orgs, "{domain},{org}").unwrap();
    }
    write(&dir, "orgs.csv", &orgs);

    write(&dir, "logs/2016.jsonl", &crawl(&mut rng, 0, "2016"));
    write(&dir, "logs/2018.jsonl", &crawl(&mut rng, 1, "2018"));

    let mut cs = String::from("domain_a,domain_b,weight\n");
    for (a, b, w) in SYNC_PAIRS {
        writeln!(cs, "{a},{b},{w}").unwrap();
    }
    write(&dir, "cs/sync.csv", &cs);

    write(
        &dir,
        "demo.toml",
        r#"output_dir = "out"
suffix_rules = "public_suffix_list.dat"
org_map = "orgs.csv"
theta = 2
top_k = 5

[[snapshot]]
id = "2016"
date_label = "2016-05"
log = "logs/2016.jsonl"
tracker_list = "lists/2016.txt"
tracker_list_version = "plain-2016"

[[snapshot]]
id = "2018"
date_label = "2018-05"
log = "logs/2018.jsonl"
tracker_list = "lists/2018.json"
tracker_list_version = "services-2018"

[[cs]]
name = "sync"
path = "cs/sync.csv"
"#,
    );
}
