//! Flat `key = value` reports and comma-separated tables.

use std::fmt::{self, Display};

use qdbell::correlator::Measured;

/// Ordered `key = value` lines.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn number(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, num(value));
    }

    /// `key` and `key_err`.
    pub fn measured(&mut self, key: &str, m: Measured) {
        self.number(key, m.value);
        self.number(format!("{key}_err"), m.sigma);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// A header row and data rows, rendered as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.header.len(), "row width must match header");
        self.rows.push(cells);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }
}

impl Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(f, "{}", r.join(","))?;
        }
        Ok(())
    }
}

/// Fixed six-decimal rendering, so reports are stable and diff-able.
pub fn num(x: f64) -> String {
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let mut r = Report::default();
        r.push("verdict", true);
        r.measured("f", Measured::new(0.9, 0.01));
        assert_eq!(r.to_string(), "verdict = true\nf = 0.900000\nf_err = 0.010000\n");
        assert_eq!(r.get("f_err"), Some("0.010000"));

        let mut t = Table::new(&["a", "b"]);
        t.row(vec!["1".into(), num(0.5)]);
        assert_eq!(t.to_string(), "a,b\n1,0.500000\n");
    }
}
