//! Public-suffix rules and registrable-domain (eTLD+1) extraction.
//!
//! Rules use the public-suffix-list text format: one rule per line, `//`
//! comments, `*.` wildcard prefixes and `!` exceptions. The implicit root
//! rule `*` is always in effect, so any hostname with at least two labels
//! has a registrable domain.

use std::collections::HashSet;

use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct SuffixRules {
    /// Plain rules such as `co.uk`.
    exact: HashSet<String>,
    /// Parents of wildcard rules: `*.ck` is stored as `ck`.
    wildcard: HashSet<String>,
    /// Exception rules without the `!` marker.
    exception: HashSet<String>,
}

impl SuffixRules {
    /// Rule set holding only the implicit `*` rule.
    pub fn root_only() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rules = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let rule = line.split_whitespace().next().unwrap_or_default();
            rules
                .insert(rule)
                .map_err(|msg| Error::parse(format!("suffix rules line {}", lineno + 1), msg))?;
        }
        Ok(rules)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn insert(&mut self, rule: &str) -> std::result::Result<(), String> {
        if rule == "*" {
            return Ok(());
        }
        if let Some(rest) = rule.strip_prefix('!') {
            let ascii = to_ascii(rest).ok_or_else(|| format!("bad exception rule {rule:?}"))?;
            if !ascii.contains('.') {
                return Err(format!("exception rule {rule:?} needs two labels"));
            }
            self.exception.insert(ascii);
        } else if let Some(rest) = rule.strip_prefix("*.") {
            let ascii = to_ascii(rest).ok_or_else(|| format!("bad wildcard rule {rule:?}"))?;
            self.wildcard.insert(ascii);
        } else {
            let ascii = to_ascii(rule).ok_or_else(|| format!("bad rule {rule:?}"))?;
            self.exact.insert(ascii);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // +1 for the implicit root rule
        self.exact.len() + self.wildcard.len() + self.exception.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of trailing labels of `labels` that form the public suffix.
    fn suffix_labels(&self, labels: &[&str]) -> usize {
        let n = labels.len();
        let joined = |from: usize| labels[from..].join(".");

        // Exception rules win over everything; the suffix is the rule minus
        // its leftmost label.
        for i in 0..n {
            if self.exception.contains(&joined(i)) {
                return n - i - 1;
            }
        }
        for i in 0..n {
            if self.exact.contains(&joined(i)) {
                return n - i;
            }
            if i + 1 < n && self.wildcard.contains(&joined(i + 1)) {
                return n - i;
            }
        }
        1
    }

    /// Public suffix of an already normalized host.
    pub fn public_suffix(&self, host: &str) -> Result<String> {
        let labels = split_labels(host)?;
        let k = self.suffix_labels(&labels);
        Ok(labels[labels.len() - k..].join("."))
    }

    /// Registrable domain: public suffix plus one label.
    pub fn etld1(&self, host: &str) -> Result<String> {
        let labels = split_labels(host)?;
        let k = self.suffix_labels(&labels);
        if k >= labels.len() {
            return Err(Error::UnregistrableHost(host.to_string()));
        }
        Ok(labels[labels.len() - k - 1..].join("."))
    }
}

fn split_labels(host: &str) -> Result<Vec<&str>> {
    let host = host.strip_suffix('.').unwrap_or(host);
    if host.is_empty() || host.parse::<std::net::IpAddr>().is_ok() {
        return Err(Error::InvalidHost(host.to_string()));
    }
    let labels: Vec<&str> = host.split('.').collect();
    if labels.iter().any(|l| l.is_empty()) {
        return Err(Error::InvalidHost(host.to_string()));
    }
    Ok(labels)
}

fn to_ascii(domain: &str) -> Option<String> {
    match url::Host::parse(domain).ok()? {
        url::Host::Domain(d) => Some(d),
        _ => None,
    }
}

/// Lowercase, punycode-encode and strip a trailing dot from a hostname.
///
/// Accepts a bare host or an absolute URL; IP literals are returned in
/// their canonical textual form.
pub fn normalize_host(raw: &str) -> Result<String> {
    let raw = raw.trim();
    let host = if raw.contains("://") {
        let url = url::Url::parse(raw).map_err(|_| Error::InvalidHost(raw.to_string()))?;
        url.host_str()
            .ok_or_else(|| Error::InvalidHost(raw.to_string()))?
            .to_string()
    } else {
        raw.to_string()
    };
    let host = host.strip_suffix('.').unwrap_or(&host);
    if host.is_empty() {
        return Err(Error::InvalidHost(raw.to_string()));
    }
    match url::Host::parse(host) {
        Ok(url::Host::Domain(d)) => Ok(d),
        Ok(url::Host::Ipv4(ip)) => Ok(ip.to_string()),
        Ok(url::Host::Ipv6(ip)) => Ok(ip.to_string()),
        Err(_) => Err(Error::InvalidHost(raw.to_string())),
    }
}

/// Registrable domain of `host` under `rules`.
pub fn etld1(host: &str, rules: &SuffixRules) -> Result<String> {
    rules.etld1(host)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const RULES: &str = "\
// comment
com
net
uk
co.uk
*.ck
!www.ck
jp
*.kawasaki.jp
!city.kawasaki.jp
";

    fn rules() -> SuffixRules {
        SuffixRules::parse(RULES).unwrap()
    }

    #[test]
    fn subdomains_collapse() {
        let r = rules();
        assert_eq!(r.etld1("subdomain1.domain.com").unwrap(), "domain.com");
        assert_eq!(r.etld1("subdomain2.domain.com").unwrap(), "domain.com");
        assert_eq!(r.etld1("domain.com").unwrap(), "domain.com");
    }

    #[test]
    fn multi_label_suffix() {
        let only_co_uk = SuffixRules::parse("co.uk").unwrap();
        assert_eq!(only_co_uk.etld1("a.b.co.uk").unwrap(), "b.co.uk");
        assert_eq!(rules().etld1("a.b.co.uk").unwrap(), "b.co.uk");
    }

    #[test]
    fn wildcard_and_exception() {
        let r = rules();
        assert_eq!(r.etld1("a.b.foo.ck").unwrap(), "b.foo.ck");
        assert_eq!(r.etld1("a.www.ck").unwrap(), "www.ck");
        assert_eq!(r.etld1("x.y.kawasaki.jp").unwrap(), "x.y.kawasaki.jp");
        assert_eq!(r.etld1("a.city.kawasaki.jp").unwrap(), "city.kawasaki.jp");
    }

    #[test]
    fn implicit_root_rule() {
        let r = SuffixRules::root_only();
        assert_eq!(r.etld1("a.b.example").unwrap(), "b.example");
        assert!(!r.is_empty());
    }

    #[test]
    fn bare_suffix_is_unregistrable() {
        let r = rules();
        assert!(matches!(r.etld1("co.uk"), Err(Error::UnregistrableHost(_))));
        assert!(matches!(r.etld1("com"), Err(Error::UnregistrableHost(_))));
        assert!(matches!(
            r.etld1("foo.ck"),
            Err(Error::UnregistrableHost(_))
        ));
    }

    #[test]
    fn invalid_hosts() {
        let r = rules();
        assert!(matches!(r.etld1(""), Err(Error::InvalidHost(_))));
        assert!(matches!(r.etld1("a..com"), Err(Error::InvalidHost(_))));
        assert!(matches!(r.etld1("10.0.0.1"), Err(Error::InvalidHost(_))));
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_host("WWW.CNN.com.").unwrap(), "www.cnn.com");
        assert_eq!(
            normalize_host("https://Sub.Example.org/path").unwrap(),
            "sub.example.org"
        );
        assert_eq!(normalize_host("bücher.de").unwrap(), "xn--bcher-kva.de");
        assert!(normalize_host("").is_err());
    }

    #[test]
    fn rules_accept_unicode() {
        let r = SuffixRules::parse("公司.cn\ncn").unwrap();
        let host = normalize_host("shop.example.公司.cn").unwrap();
        assert_eq!(r.etld1(&host).unwrap(), "example.xn--55qx5d.cn");
    }

    #[test]
    fn rejects_single_label_exception() {
        assert!(SuffixRules::parse("!ck").is_err());
    }

    proptest! {
        #[test]
        fn etld1_is_idempotent_suffix(
            labels in prop::collection::vec("[a-z0-9]{1,6}", 1..4),
            tail in prop::sample::select(vec!["com", "co.uk", "uk", "foo.ck", "www.ck",
                "kawasaki.jp", "city.kawasaki.jp", "example"]),
        ) {
            let r = rules();
            let host = format!("{}.{}", labels.join("."), tail);
            if let Ok(reg) = r.etld1(&host) {
                prop_assert!(host.ends_with(&reg));
                let dotted = format!(".{reg}");
                prop_assert!(host == reg || host.ends_with(&dotted));
                prop_assert_eq!(r.etld1(&reg).unwrap(), reg.clone());
            }
        }
    }
}
