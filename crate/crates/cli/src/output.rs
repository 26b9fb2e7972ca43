use std::fmt::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct Precision {
    pub target_digits: u32,
    pub working_bits: u32,
    pub escalations: u32,
}

/// One command's output; `cells` feed text and CSV, `json` feeds JSON, with the same strings.
pub struct Report {
    pub command: String,
    pub precision: Precision,
    pub columns: Vec<String>,
    pub rows: Vec<(Vec<String>, Vec<bool>, Value)>,
    pub verdict: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn new(command: &str, precision: Precision, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            precision,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            verdict: true,
            failure: None,
        }
    }

    pub fn push(&mut self, cells: Vec<String>, certified: Vec<bool>, json: Value) {
        self.rows.push((cells, certified, json));
    }

    /// Marks the run failed; the first reason is kept.
    pub fn fail(&mut self, reason: String) {
        self.verdict = false;
        self.failure.get_or_insert(reason);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for (cells, _, _) in &self.rows {
            let line: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<&Value> = self.rows.iter().map(|(_, _, j)| j).collect();
        let doc = json!({
            "command": self.command,
            "precision": self.precision,
            "rows": rows,
            "verdict": if self.verdict { "pass" } else { "fail" },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    fn text(&self) -> String {
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|(cells, certified, _)| {
                cells
                    .iter()
                    .zip(certified)
                    .map(|(c, ok)| {
                        let c = group_thousands(c);
                        if *ok {
                            c
                        } else {
                            format!("{c}*")
                        }
                    })
                    .collect()
            })
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let p = &self.precision;
        let _ = writeln!(
            out,
            "# {}  (target {} digits, {} bits, {} escalations)",
            self.command, p.target_digits, p.working_bits, p.escalations
        );
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| if numeric(c) || c.is_empty() { format!("{c:>w$}") } else { format!("{c:<w$}") })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&self.columns));
        for row in &body {
            let _ = writeln!(out, "{}", line(row));
        }
        if self.rows.iter().any(|(_, c, _)| c.iter().any(|ok| !ok)) {
            let _ = writeln!(out, "* digits not certified");
        }
        let _ = writeln!(out, "verdict: {}", if self.verdict { "pass" } else { "fail" });
        out
    }
}

fn numeric(s: &str) -> bool {
    s.trim_end_matches('*').replace(',', "").parse::<f64>().is_ok()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Inserts `,` between groups of three integer digits of a plain decimal; other text is unchanged.
pub fn group_thousands(s: &str) -> String {
    let (sign, rest) = s.strip_prefix('-').map_or(("", s), |r| ("-", r));
    let (int, frac) = rest.split_once('.').map_or((rest, None), |(i, f)| (i, Some(f)));
    if int.len() <= 3
        || !int.bytes().all(|b| b.is_ascii_digit())
        || frac.is_some_and(|f| !f.bytes().all(|b| b.is_ascii_digit()))
    {
        return s.to_string();
    }
    let mut grouped = String::new();
    for (i, ch) in int.chars().enumerate() {
        if i > 0 && (int.len() - i) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(ch);
    }
    match frac {
        Some(f) => format!("{sign}{grouped}.{f}"),
        None => format!("{sign}{grouped}"),
    }
}
