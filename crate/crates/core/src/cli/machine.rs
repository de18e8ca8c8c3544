//! Line-oriented `key=value` report format and its parser.
//!
//! ```text
//! monokit-report/1
//! seed=0
//! max_dim=6
//! ...
//! reports=1
//! report.0.statement=composite_range
//! report.0.hypothesis.0.name=A monotone
//! report.0.lhs.piece.0.lines=(0,1)
//! ```
//!
//! Keys never contain `=`; values are escaped so that each record fits on
//! one line (`\\` and `\n`). Timing is deliberately absent so that output
//! depends only on the input, the seed and the caps.

use std::collections::HashMap;
use std::fmt::Write;

use crate::analysis::SimeqVerdict;
use crate::error::{Error, Result};
use crate::exact_la::{parse_rational, Vector};
use crate::polyhedra::{Polyhedron, PolySet, VRep};
use crate::theorems::{Check, Report, StatementId, Status, Verdict};

pub const MACHINE_HEADER: &str = "monokit-report/1";

/// Reports of one run plus the settings that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportDocument {
    pub seed: u64,
    pub max_dim: usize,
    pub max_pieces: usize,
    pub probe_budget: usize,
    pub reports: Vec<Report>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

fn unescape(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn vector_list(vs: &[Vector]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn parse_vector(s: &str) -> Result<Vector> {
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Input(format!("malformed vector {s:?}")))?;
    if inner.is_empty() {
        return Ok(Vector::zeros(0));
    }
    inner
        .split(',')
        .map(|x| parse_rational(x).ok_or_else(|| Error::Input(format!("malformed rational {x:?}"))))
        .collect()
}

pub(crate) fn parse_vector_list(s: &str) -> Result<Vec<Vector>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(parse_vector).collect()
}

struct Out(String);

impl Out {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key}={}", escape(&value.to_string()));
    }

    fn checks(&mut self, prefix: &str, list: &[Check]) {
        self.kv(&format!("{prefix}.count"), list.len());
        for (i, c) in list.iter().enumerate() {
            self.kv(&format!("{prefix}.{i}.name"), &c.name);
            self.kv(&format!("{prefix}.{i}.verdict"), c.verdict.name());
            self.kv(&format!("{prefix}.{i}.detail"), &c.detail);
        }
    }

    fn set(&mut self, prefix: &str, s: &Option<PolySet>) {
        let Some(s) = s else {
            self.kv(&format!("{prefix}.dim"), "-");
            return;
        };
        self.kv(&format!("{prefix}.dim"), s.dim());
        self.kv(&format!("{prefix}.pieces"), s.pieces().len());
        for (i, p) in s.pieces().iter().enumerate() {
            let v = p.vrep();
            self.kv(&format!("{prefix}.piece.{i}.vertices"), vector_list(&v.vertices));
            self.kv(&format!("{prefix}.piece.{i}.rays"), vector_list(&v.rays));
            self.kv(&format!("{prefix}.piece.{i}.lines"), vector_list(&v.lines));
        }
    }
}

/// Renders the machine format.
pub fn print_machine(doc: &ReportDocument) -> String {
    let mut o = Out(format!("{MACHINE_HEADER}\n"));
    o.kv("seed", doc.seed);
    o.kv("max_dim", doc.max_dim);
    o.kv("max_pieces", doc.max_pieces);
    o.kv("probe_budget", doc.probe_budget);
    o.kv("reports", doc.reports.len());
    for (i, r) in doc.reports.iter().enumerate() {
        let p = format!("report.{i}");
        o.kv(&format!("{p}.statement"), r.statement.name());
        o.kv(&format!("{p}.label"), &r.label);
        o.kv(&format!("{p}.seed"), r.seed);
        o.kv(&format!("{p}.status"), r.status.name());
        o.kv(&format!("{p}.expected_failure"), r.expected_failure);
        o.checks(&format!("{p}.hypothesis"), &r.hypotheses);
        o.checks(&format!("{p}.check"), &r.checks);
        o.set(&format!("{p}.lhs"), &r.lhs);
        o.set(&format!("{p}.rhs"), &r.rhs);
        match &r.conclusion {
            None => o.kv(&format!("{p}.conclusion"), "-"),
            Some(c) => {
                o.kv(&format!("{p}.conclusion"), "present");
                o.kv(&format!("{p}.conclusion.holds"), c.holds);
                o.kv(&format!("{p}.conclusion.closure_equal"), c.closure_equal);
                o.kv(&format!("{p}.conclusion.rint_equal"), c.rint_equal);
                let w = c.witness.as_ref().map_or("-".to_string(), |w| w.to_string());
                o.kv(&format!("{p}.conclusion.witness"), w);
            }
        }
        o.kv(&format!("{p}.witnesses"), vector_list(&r.witnesses));
    }
    o.0
}

struct Fields(HashMap<String, String>);

impl Fields {
    fn get(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::Input(format!("missing key {key}")))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let s = self.get(key)?;
        s.parse()
            .map_err(|_| Error::Input(format!("malformed value {s:?} for {key}")))
    }

    fn checks(&self, prefix: &str) -> Result<Vec<Check>> {
        let n: usize = self.num(&format!("{prefix}.count"))?;
        (0..n)
            .map(|i| {
                let verdict = self.get(&format!("{prefix}.{i}.verdict"))?;
                Ok(Check {
                    name: self.get(&format!("{prefix}.{i}.name"))?.to_string(),
                    verdict: Verdict::from_name(verdict)
                        .ok_or_else(|| Error::Input(format!("unknown verdict {verdict}")))?,
                    detail: self.get(&format!("{prefix}.{i}.detail"))?.to_string(),
                })
            })
            .collect()
    }

    fn set(&self, prefix: &str) -> Result<Option<PolySet>> {
        if self.get(&format!("{prefix}.dim"))? == "-" {
            return Ok(None);
        }
        let dim: usize = self.num(&format!("{prefix}.dim"))?;
        let n: usize = self.num(&format!("{prefix}.pieces"))?;
        let mut pieces = Vec::new();
        for i in 0..n {
            let part = |k: &str| parse_vector_list(self.get(&format!("{prefix}.piece.{i}.{k}"))?);
            let v = VRep::new(dim, part("vertices")?, part("rays")?, part("lines")?);
            pieces.push(Polyhedron::from_v(v)?);
        }
        Ok(Some(PolySet::new(dim, pieces)?))
    }
}

/// Parses the output of [`print_machine`].
pub fn parse_machine(text: &str) -> Result<ReportDocument> {
    let mut lines = text.lines();
    if lines.next() != Some(MACHINE_HEADER) {
        return Err(Error::Input(format!("missing header {MACHINE_HEADER}")));
    }
    let mut map = HashMap::new();
    for line in lines {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("malformed line {line:?}")))?;
        map.insert(k.to_string(), unescape(v));
    }
    let f = Fields(map);
    let count: usize = f.num("reports")?;
    let mut reports = Vec::new();
    for i in 0..count {
        let p = format!("report.{i}");
        let stmt = f.get(&format!("{p}.statement"))?;
        let status = f.get(&format!("{p}.status"))?;
        let conclusion = if f.get(&format!("{p}.conclusion"))? == "-" {
            None
        } else {
            let w = f.get(&format!("{p}.conclusion.witness"))?;
            Some(SimeqVerdict {
                holds: f.num(&format!("{p}.conclusion.holds"))?,
                closure_equal: f.num(&format!("{p}.conclusion.closure_equal"))?,
                rint_equal: f.num(&format!("{p}.conclusion.rint_equal"))?,
                witness: if w == "-" { None } else { Some(parse_vector(w)?) },
            })
        };
        reports.push(Report {
            statement: StatementId::from_name(stmt).ok_or_else(|| Error::Input(format!("unknown statement {stmt}")))?,
            label: f.get(&format!("{p}.label"))?.to_string(),
            seed: f.num(&format!("{p}.seed"))?,
            hypotheses: f.checks(&format!("{p}.hypothesis"))?,
            checks: f.checks(&format!("{p}.check"))?,
            lhs: f.set(&format!("{p}.lhs"))?,
            rhs: f.set(&format!("{p}.rhs"))?,
            conclusion,
            witnesses: parse_vector_list(f.get(&format!("{p}.witnesses"))?)?,
            status: Status::from_name(status).ok_or_else(|| Error::Input(format!("unknown status {status}")))?,
            expected_failure: f.num(&format!("{p}.expected_failure"))?,
        });
    }
    Ok(ReportDocument {
        seed: f.num("seed")?,
        max_dim: f.num("max_dim")?,
        max_pieces: f.num("max_pieces")?,
        probe_budget: f.num("probe_budget")?,
        reports,
    })
}
