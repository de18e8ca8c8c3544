//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and returns text so the page needs no
//! glue beyond the generated module. Errors come back as text starting with
//! `error:`.

use wasm_bindgen::prelude::*;

use monokit::analysis::{check_3star, check_maximal, check_monotone};
use monokit::cli::{elaborate, emit_polygons, exit_code, parse_scenario, print_human, run_task, ClipBox, ReportDocument};
use monokit::exact_la::{parse_rational, Matrix, Vector};
use monokit::limits::limits;
use monokit::operators::{normal_cone_operator, Operator, ScenarioOptions};
use monokit::polyhedra::Polyhedron;

fn rationals(text: &str) -> Result<Vec<monokit::exact_la::Rational>, String> {
    text.split(',')
        .map(|t| parse_rational(t).ok_or_else(|| format!("not a rational: {:?}", t.trim())))
        .collect()
}

fn matrix2(text: &str) -> Result<Matrix, String> {
    let e = rationals(text)?;
    if e.len() != 4 {
        return Err(format!("expected 4 entries of a 2x2 matrix, found {}", e.len()));
    }
    Matrix::new(2, 2, e).map_err(|e| e.to_string())
}

fn vector2(text: &str) -> Result<Vector, String> {
    let e = rationals(text)?;
    if e.len() != 2 {
        return Err(format!("expected 2 coordinates, found {}", e.len()));
    }
    Ok(Vector::new(e))
}

fn or_error(r: Result<String, String>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

/// Runs a scenario file and returns the human-readable report followed by
/// an `exit=<code>` line.
#[wasm_bindgen]
pub fn run_scenario(text: &str) -> String {
    or_error((|| {
        let file = parse_scenario(text).map_err(|d| d.to_string())?;
        let directives = elaborate(&file).map_err(|d| d.to_string())?;
        let opts = ScenarioOptions::default();
        let mut reports = Vec::new();
        for d in directives {
            let mut r = run_task(&d.task, &opts).map_err(|e| format!("{}: {e}", d.label))?;
            r.label = d.label;
            r.expected_failure = d.expected_failure;
            reports.push(r);
        }
        let caps = limits();
        let doc = ReportDocument {
            seed: opts.seed,
            max_dim: caps.max_dim,
            max_pieces: caps.max_pieces,
            probe_budget: opts.probe_budget,
            reports,
        };
        Ok(format!("{}exit={}\n", print_human(&doc, &[], false), exit_code(&doc.reports)))
    })())
}

/// Monotonicity, maximality and 3* verdicts for the linear map given by
/// four comma-separated entries (row major).
#[wasm_bindgen]
pub fn classify_matrix(entries: &str) -> String {
    or_error((|| {
        let op = Operator::from_matrix(&matrix2(entries)?).map_err(|e| e.to_string())?;
        let mono = check_monotone(&op).map_err(|e| e.to_string())?;
        let mut out = format!("monotone: {}\n", mono.monotone);
        if let Some(((x, u), (y, w))) = &mono.witness {
            out.push_str(&format!("  violated by ({x},{u}) and ({y},{w})\n"));
            return Ok(out);
        }
        let max = check_maximal(&op).map_err(|e| e.to_string())?;
        out.push_str(&format!("maximal: {}\n", max.maximal));
        let star = check_3star(&op, limits().probe_budget).map_err(|e| e.to_string())?;
        out.push_str(&format!("3*: {}\n", star.describe()));
        Ok(out)
    })())
}

/// Polygon records of `ran(A + N_C)` for a 2x2 matrix `A` and the box
/// `C = [lo, hi]`, clipped to `[-10, 10]²`.
#[wasm_bindgen]
pub fn sum_range_polygons(entries: &str, lo: &str, hi: &str) -> String {
    or_error((|| {
        let a = Operator::from_matrix(&matrix2(entries)?).map_err(|e| e.to_string())?;
        let c = Polyhedron::bounding_box(&vector2(lo)?, &vector2(hi)?).map_err(|e| e.to_string())?;
        let n = normal_cone_operator(&c).map_err(|e| e.to_string())?;
        let ran = a.op_sum(&n).and_then(|s| s.range()).map_err(|e| e.to_string())?;
        emit_polygons(&[("ran(A+N_C)".to_string(), ran)], &ClipBox::default()).map_err(|e| e.to_string())
    })())
}
