use std::fmt::Write as _;

use ipaths_core::{DirectedPath, ExactScore, WeightedDigraph};

/// How a command ended; the process exit code depends on this alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// yes, optimal, PASS
    Positive,
    /// no, FAIL
    Negative,
    /// unknown, budget exhausted, INCONCLUSIVE, or not provably optimal
    Undetermined,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Positive => 0,
            Outcome::Negative => 1,
            Outcome::Undetermined => 2,
        }
    }
}

/// Ordered `key: value` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    lines: Vec<(String, String)>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self {
            lines: Vec::new(),
            outcome: Outcome::Positive,
        };
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub(crate) fn insert(&mut self, index: usize, key: &str, value: impl ToString) {
        self.lines.insert(index.min(self.lines.len()), (key.to_string(), value.to_string()));
    }

    /// First value recorded under `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn lines(&self) -> &[(String, String)] {
        &self.lines
    }

    pub fn push_graph_stats(&mut self, g: &WeightedDigraph) {
        self.push("vertices", g.vertex_count());
        self.push("edges", g.edge_count());
        let census: Vec<String> = g.weight_census().iter().map(|(w, c)| format!("{w}x{c}")).collect();
        self.push("weights", census.join(" "));
    }

    /// Factored form, plus the certified base-2 logarithm when requested.
    pub fn push_score(&mut self, key: &str, s: &ExactScore, digits: Option<usize>) {
        self.push(key, s);
        if let Some(d) = digits {
            self.push(&format!("{key}_log2"), s.approx_decimal(d));
        }
    }

    pub fn push_paths<'a>(&mut self, paths: impl IntoIterator<Item = &'a DirectedPath>) {
        let paths: Vec<&DirectedPath> = paths.into_iter().collect();
        self.push("paths", paths.len());
        for p in paths {
            let ids: Vec<String> = p.edges().iter().map(|e| e.to_string()).collect();
            self.push("path", ids.join(" "));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            writeln!(out, "{k}: {v}").unwrap();
        }
        writeln!(out, "exit: {}", self.outcome.exit_code()).unwrap();
        out
    }
}
