use std::fmt::Write;
use std::time::Duration;

use super::machine::ReportDocument;
use crate::theorems::{Check, Report, Status};

fn status_text(r: &Report, color: bool) -> String {
    let word = r.status.name().to_uppercase();
    let word = if r.expected_failure {
        format!("{word} (EXPECTED-FAILURE)")
    } else {
        word
    };
    if !color {
        return word;
    }
    let code = match (r.status, r.expected_failure) {
        (Status::Verified, false) | (_, true) => "32",
        (Status::Refuted, _) => "31",
        _ => "33",
    };
    format!("\x1b[{code}m{word}\x1b[0m")
}

fn table(out: &mut String, rows: &[(&str, &Check)]) {
    let w_kind = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0).max(4);
    let w_name = rows.iter().map(|r| r.1.name.chars().count()).max().unwrap_or(0).max(5);
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let _ = writeln!(out, "  {}  {}  verdict  detail", pad("kind", w_kind), pad("check", w_name));
    for (kind, c) in rows {
        let _ = writeln!(
            out,
            "  {}  {}  {}  {}",
            pad(kind, w_kind),
            pad(&c.name, w_name),
            pad(c.verdict.name(), 7),
            c.detail.replace('\n', " ")
        );
    }
}

/// Aligned tables, one block per report. `timings` may be shorter than
/// the report list.
pub fn print_human(doc: &ReportDocument, timings: &[Duration], color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "monokit  seed={}  max_dim={}  max_pieces={}  probe_budget={}",
        doc.seed, doc.max_dim, doc.max_pieces, doc.probe_budget
    );
    for (i, r) in doc.reports.iter().enumerate() {
        let time = timings
            .get(i)
            .map_or(String::new(), |t| format!("  ({} ms)", t.as_millis()));
        let _ = writeln!(
            out,
            "\n[{}] {}  statement={}  status={}{time}",
            i + 1,
            r.label,
            r.statement,
            status_text(r, color)
        );
        let rows: Vec<(&str, &Check)> = r
            .hypotheses
            .iter()
            .map(|h| ("hypothesis", h))
            .chain(r.checks.iter().map(|c| ("check", c)))
            .collect();
        if !rows.is_empty() {
            table(&mut out, &rows);
        }
        if let Some(l) = &r.lhs {
            let _ = writeln!(out, "  lhs = {l}");
        }
        if let Some(rh) = &r.rhs {
            let _ = writeln!(out, "  rhs = {rh}");
        }
        if let Some(c) = &r.conclusion {
            let _ = writeln!(
                out,
                "  lhs ≃ rhs: {}  (closures equal: {}, relative interiors equal: {})",
                if c.holds { "holds" } else { "fails" },
                c.closure_equal,
                c.rint_equal
            );
        }
        if !r.witnesses.is_empty() {
            let w: Vec<String> = r.witnesses.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(out, "  witnesses: {}", w.join(" "));
        }
    }
    out
}
