//! `# key = value` header blocks that make every output file self-describing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use sterngerlach::config::{params_from_map, params_to_pairs, KEYS};
use sterngerlach::PhysicalParams;

pub const TOOL: &str = concat!("sgsim ", env!("CARGO_PKG_VERSION"));

/// Ordered key/value pairs of a resolved run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Header {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub settings: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str, params: &PhysicalParams) -> Self {
        Self {
            command: command.to_string(),
            params: params_to_pairs(params).into_iter().map(|(k, v)| (k.to_string(), fmt_f64(v))).collect(),
            settings: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.settings.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, columns: &str) -> String {
        let mut s = String::new();
        writeln!(s, "# tool = {TOOL}").unwrap();
        writeln!(s, "# command = {}", self.command).unwrap();
        for (k, v) in self.params.iter().chain(&self.settings) {
            writeln!(s, "# {k} = {v}").unwrap();
        }
        writeln!(s, "# columns = {columns}").unwrap();
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut h = Header::default();
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            let Some((k, v)) = rest.split_once('=') else { continue };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "tool" | "columns" | "file_t" => {}
                "command" => h.command = v.to_string(),
                _ if KEYS.contains(&k) => h.params.push((k.to_string(), v.to_string())),
                _ => h.settings.push((k.to_string(), v.to_string())),
            }
        }
        if h.command.is_empty() {
            bail!("no `# command = ...` line in header");
        }
        Ok(h)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn physical_params(&self) -> Result<PhysicalParams> {
        let mut map = BTreeMap::new();
        for (k, v) in &self.params {
            map.insert(k.clone(), v.parse::<f64>().with_context(|| format!("header value {k} = {v}"))?);
        }
        Ok(params_from_map(&map)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.settings.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.get(key).ok_or_else(|| anyhow!("header lacks `{key}`"))?;
        v.parse().with_context(|| format!("`{key} = {v}` is not a number"))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| v.parse().with_context(|| format!("`{key} = {v}` is not a number"))).transpose()
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.get(key).ok_or_else(|| anyhow!("header lacks `{key}`"))?;
        v.parse().with_context(|| format!("`{key} = {v}` is not an integer"))
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.get(key).ok_or_else(|| anyhow!("header lacks `{key}`"))?;
        parse_list(v)
    }
}

/// Shortest representation that parses back to the same f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

pub fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().with_context(|| format!("`{x}` is not a number"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = PhysicalParams::silver();
        let mut h = Header::new("entropy", &p);
        h.set("times", fmt_list(&[0.0, 1.5e-7, 2e-6]));
        h.set("points", 3);
        let text = h.render("t [s], A [1]") + "t,A\n1,2\n";
        let back = Header::parse(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.physical_params().unwrap(), p);
        assert_eq!(back.list("times").unwrap(), vec![0.0, 1.5e-7, 2e-6]);
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1 + 0.2, 1.0 / 3.0, 2.2752e-8, 6.62607015e-26, f64::MIN_POSITIVE] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
