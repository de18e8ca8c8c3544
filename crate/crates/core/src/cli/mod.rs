//! Command-line front end: scenario files, built-in scenarios, report
//! rendering and polygon export.
//!
//! Exit codes: 0 when every report is verified (or fails as expected), 1 when
//! a report is refuted, 2 when a report is unknown or its hypotheses fail,
//! 3 on input errors.

mod eval;
mod human;
mod machine;
mod polygons;
mod syntax;


use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};

pub use eval::{elaborate, file_options, resolve_statement, Directive, FileOptions, Task, Value};
pub use human::print_human;
pub use machine::{parse_machine, print_machine, ReportDocument, MACHINE_HEADER};
pub use polygons::{ccw_order, emit_polygons, parse_polygons, ClipBox, PolygonRecord, DECIMAL_DIGITS, POLYGON_HEADER};
pub use syntax::{parse_scenario, Diagnostic, Pos, ScenarioFile};

use crate::analysis::{check_lemma2, rint_range_identity};
use crate::error::Error;
use crate::exact_la::{parse_rational, Vector};
use crate::limits::Limits;
use crate::operators::ScenarioOptions;
use crate::theorems::{
    builtin_scenarios, domain_probes, find_builtin, verify_composite_range, verify_displacement_range,
    verify_domain_description, verify_kt_range, verify_plain_sum_formula, verify_reflected_composition,
    verify_surjective_sum, Report, Status,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "monokit", version, about = "Exact range identities for polyhedral monotone operators")]
pub struct Flags {
    /// Scenario file to run.
    pub file: Option<PathBuf>,
    /// Run a built-in scenario (repeatable).
    #[arg(long = "builtin", value_name = "NAME")]
    pub builtins: Vec<String>,
    /// Print the built-in catalog and exit.
    #[arg(long)]
    pub list_builtins: bool,
    /// Write the 2-D sides of each report as polygon records.
    #[arg(long, value_name = "PATH")]
    pub emit_polygons: Option<PathBuf>,
    /// Clip box for unbounded pieces, `xmin,ymin,xmax,ymax`.
    #[arg(long, value_name = "BOX", allow_hyphen_values = true)]
    pub clip_box: Option<String>,
    /// Report format.
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
    /// Seed for sampled probes (overrides `option seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest allowed ambient dimension.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Largest allowed number of pieces per set or graph.
    #[arg(long)]
    pub max_pieces: Option<usize>,
    /// Number of probes for non-exact checks.
    #[arg(long)]
    pub probe_budget: Option<usize>,
}

/// Exit code for a finished list of reports.
pub fn exit_code(reports: &[Report]) -> i32 {
    let mut code = EXIT_OK;
    for r in reports {
        let c = match (r.status, r.expected_failure) {
            (Status::Verified, true) => EXIT_REFUTED,
            (_, true) | (Status::Verified, false) => EXIT_OK,
            (Status::Refuted, false) => EXIT_REFUTED,
            (Status::Unknown | Status::HypothesisFailed, false) => EXIT_INCONCLUSIVE,
        };
        // a refutation outranks an inconclusive run
        code = match (code, c) {
            (EXIT_REFUTED, _) | (_, EXIT_REFUTED) => EXIT_REFUTED,
            (a, b) => a.max(b),
        };
    }
    code
}

/// Runs one resolved directive.
pub fn run_task(task: &Task, opts: &ScenarioOptions) -> crate::Result<Report> {
    match task {
        Task::Composite(s) => {
            let mut s = s.clone();
            s.options = opts.clone();
            verify_composite_range(&s)
        }
        Task::SurjectiveSum(a, b) => verify_surjective_sum(a, b, opts),
        Task::DomainDescription(m) => {
            let probes = domain_probes(m, opts.probe_budget)?;
            verify_domain_description(m, &probes, opts)
        }
        Task::Displacement(a, b, mode) => verify_displacement_range(a, b, mode, opts),
        Task::KuhnTucker(a, b, l, v) => verify_kt_range(a, b, l, *v, opts),
        Task::Reflected(a, b) => verify_reflected_composition(a, b, opts),
        Task::HullSandwich(c, d) => check_lemma2(c, d),
        Task::RintIdentity(m) => rint_range_identity(m),
        Task::PlainSum(a, b) => verify_plain_sum_formula(a, b, opts),
    }
}

fn parse_clip_box(s: &str) -> Option<ClipBox> {
    let xs: Vec<_> = s.split(',').map(parse_rational).collect::<Option<_>>()?;
    if xs.len() != 4 || xs[0] >= xs[2] || xs[1] >= xs[3] {
        return None;
    }
    Some(ClipBox {
        lo: Vector::new(vec![xs[0].clone(), xs[1].clone()]),
        hi: Vector::new(vec![xs[2].clone(), xs[3].clone()]),
    })
}

struct Job {
    label: String,
    expected_failure: bool,
    task: Work,
}

enum Work {
    Builtin(crate::theorems::Builtin),
    Task(Task),
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::DimensionMismatch { .. } => EXIT_INPUT,
        Error::Resource(_) | Error::Precondition(_) => EXIT_INCONCLUSIVE,
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let flags = match Flags::try_parse_from(args) {
        Ok(f) => f,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    run(&flags, out, err)
}

/// Runs parsed flags.
pub fn run(flags: &Flags, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if flags.list_builtins {
        let width = builtin_scenarios().iter().map(|b| b.name.len()).max().unwrap_or(0);
        for b in builtin_scenarios() {
            let _ = writeln!(out, "{:width$}  {}", b.name, b.description);
        }
        return EXIT_OK;
    }
    if flags.file.is_none() && flags.builtins.is_empty() {
        let _ = writeln!(err, "error: nothing to run; pass a scenario file or --builtin NAME");
        return EXIT_INPUT;
    }
    let clip = match &flags.clip_box {
        None => ClipBox::default(),
        Some(s) => match parse_clip_box(s) {
            Some(b) => b,
            None => {
                let _ = writeln!(err, "error: malformed clip box {s:?}, expected xmin,ymin,xmax,ymax");
                return EXIT_INPUT;
            }
        },
    };

    let mut jobs = Vec::new();
    for name in &flags.builtins {
        match find_builtin(name) {
            Ok(b) => jobs.push(Job {
                label: b.name.to_string(),
                expected_failure: b.expected_failure,
                task: Work::Builtin(b),
            }),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
        }
    }

    let mut file_opts = FileOptions::default();
    let mut file = None;
    if let Some(path) = &flags.file {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return EXIT_INPUT;
            }
        };
        let parsed = match parse_scenario(&text).and_then(|f| file_options(&f).map(|o| (f, o))) {
            Ok(p) => p,
            Err(d) => {
                let _ = writeln!(err, "{}: {d}", path.display());
                return EXIT_INPUT;
            }
        };
        file_opts = parsed.1;
        file = Some((path.clone(), parsed.0));
    }

    let defaults = Limits::default();
    let limits = Limits {
        max_dim: flags.max_dim.or(file_opts.max_dim).unwrap_or(defaults.max_dim),
        max_pieces: flags.max_pieces.or(file_opts.max_pieces).unwrap_or(defaults.max_pieces),
        probe_budget: flags.probe_budget.or(file_opts.probe_budget).unwrap_or(defaults.probe_budget),
        ..defaults
    };
    let opts = ScenarioOptions {
        probe_budget: limits.probe_budget,
        chain_samples: file_opts.chain_samples.unwrap_or(ScenarioOptions::default().chain_samples),
        seed: flags.seed.or(file_opts.seed).unwrap_or(0),
    };

    let outcome = limits.scoped(|| -> Result<(Vec<Report>, Vec<Duration>), (i32, String)> {
        if let Some((path, f)) = &file {
            let directives = elaborate(f).map_err(|d| (EXIT_INPUT, format!("{}: {d}", path.display())))?;
            for d in directives {
                jobs.push(Job {
                    label: d.label,
                    expected_failure: d.expected_failure,
                    task: Work::Task(d.task),
                });
            }
        }
        let mut reports = Vec::new();
        let mut timings = Vec::new();
        for job in &jobs {
            let start = Instant::now();
            let r = match &job.task {
                Work::Builtin(b) => b.run(&opts),
                Work::Task(t) => run_task(t, &opts),
            };
            let mut r = r.map_err(|e| (error_code(&e), format!("{}: {e}", job.label)))?;
            r.label = job.label.clone();
            r.expected_failure = job.expected_failure;
            timings.push(start.elapsed());
            reports.push(r);
        }
        Ok((reports, timings))
    });
    let (reports, timings) = match outcome {
        Ok(x) => x,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return code;
        }
    };

    let doc = ReportDocument {
        seed: opts.seed,
        max_dim: limits.max_dim,
        max_pieces: limits.max_pieces,
        probe_budget: limits.probe_budget,
        reports,
    };
    let text = match flags.format {
        Format::Machine => print_machine(&doc),
        Format::Human => {
            let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
            print_human(&doc, &timings, color)
        }
    };
    let _ = out.write_all(text.as_bytes());

    if let Some(path) = &flags.emit_polygons {
        let mut sets = Vec::new();
        for r in &doc.reports {
            for (side, s) in [("lhs", &r.lhs), ("rhs", &r.rhs)] {
                if let Some(s) = s.as_ref().filter(|s| s.dim() == 2) {
                    sets.push((format!("{}.{side}", r.label), s.clone()));
                }
            }
        }
        let written = emit_polygons(&sets, &clip).and_then(|t| {
            std::fs::write(path, t).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
        });
        if let Err(e) = written {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    }
    exit_code(&doc.reports)
}
