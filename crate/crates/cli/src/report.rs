use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Aligned `key: value` lines for people.
    Text,
    /// `key=value` lines for scripts; keys and their order are stable.
    Lines,
}

/// An ordered list of facts about one command run.
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let width = self.entries.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{:width$}  {v}", format!("{k}:"), width = width + 1);
                }
            }
            Format::Lines => {
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k}={}", escape(v));
                }
            }
        }
        out
    }
}

/// Keeps every value on one line.
fn escape(v: &str) -> String {
    v.replace('\\', "\\\\").replace('\n', "\\n").replace('\r', "\\r")
}
