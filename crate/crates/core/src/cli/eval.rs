//! Elaboration of a parsed scenario file into operators, sets and directives.

use std::collections::HashMap;

use num::{Signed, ToPrimitive};

use super::syntax::{Arg, Diagnostic, Expr, ExprKind, Item, Pos, ScenarioFile};
use crate::error::Error;
use crate::exact_la::{format_rational, Matrix, Rational, Subspace, Vector};
use crate::operators::{
    dr_displacement, kuhn_tucker, normal_cone_operator, product_operator, sandwich, staircase, LinearRelation,
    Operator, Scenario,
};
use crate::polyhedra::{HRep, Polyhedron, PolySet, VRep};
use crate::theorems::{KtVariant, StatementId, WMode};

#[derive(Clone, Debug)]
pub enum Value {
    Number(Rational),
    Str(String),
    List(Vec<Value>),
    Matrix(Matrix),
    Relation(LinearRelation),
    Set(PolySet),
    Op(Operator),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Number(_) => "number",
            Value::Str(_) => "string",
            Value::List(_) => "list",
            Value::Matrix(_) => "matrix",
            Value::Relation(_) => "linear relation",
            Value::Set(_) => "set",
            Value::Op(_) => "operator",
        }
    }
}

/// Scenario-level options; `None` leaves the default or command-line value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FileOptions {
    pub seed: Option<u64>,
    pub max_dim: Option<usize>,
    pub max_pieces: Option<usize>,
    pub probe_budget: Option<usize>,
    pub chain_samples: Option<usize>,
}

/// The arguments of one `verify` directive, resolved.
#[derive(Clone, Debug)]
pub enum Task {
    Composite(Scenario),
    SurjectiveSum(Operator, Operator),
    DomainDescription(Operator),
    Displacement(Operator, Operator, WMode),
    KuhnTucker(Operator, Operator, LinearRelation, KtVariant),
    Reflected(Operator, Operator),
    HullSandwich(PolySet, PolySet),
    RintIdentity(Operator),
    PlainSum(Operator, Operator),
}

#[derive(Clone, Debug)]
pub struct Directive {
    pub pos: Pos,
    pub label: String,
    pub expected_failure: bool,
    pub task: Task,
}

fn at<T>(pos: Pos, r: crate::Result<T>) -> Result<T, Diagnostic> {
    r.map_err(|e| {
        let msg = match e {
            Error::Input(m) => m,
            other => other.to_string(),
        };
        Diagnostic::new(pos, msg)
    })
}

/// Maps a statement name or its numbered alias to a statement.
pub fn resolve_statement(name: &str) -> Option<StatementId> {
    let alias = match name {
        "theorem1" => "composite_range",
        "corollary1" => "surjective_sum",
        "example9" => "domain_description",
        "theorem2" => "displacement_range",
        "kt_range" => "kt_range_ii",
        "example2" => "reflected_composition",
        "lemma2" => "hull_sandwich",
        "rint_identity" => "rint_range_identity",
        other => other,
    };
    StatementId::from_name(alias)
}

struct Call<'a> {
    ctor: &'a str,
    pos: Pos,
    positional: Vec<(Value, Pos)>,
    keyword: Vec<(String, Value, Pos)>,
}

impl<'a> Call<'a> {
    fn arity(&self, lo: usize, hi: usize) -> Result<(), Diagnostic> {
        let n = self.positional.len();
        if n < lo || n > hi {
            let want = if lo == hi {
                format!("{lo}")
            } else if hi == usize::MAX {
                format!("at least {lo}")
            } else {
                format!("{lo} to {hi}")
            };
            return Err(Diagnostic::new(
                self.pos,
                format!("{} takes {want} positional arguments, got {n}", self.ctor),
            ));
        }
        Ok(())
    }

    fn allow_keys(&self, keys: &[&str]) -> Result<(), Diagnostic> {
        for (k, _, p) in &self.keyword {
            if !keys.contains(&k.as_str()) {
                return Err(Diagnostic::new(*p, format!("{} has no argument `{k}`", self.ctor)));
            }
        }
        Ok(())
    }

    fn key(&self, k: &str) -> Option<&(String, Value, Pos)> {
        self.keyword.iter().find(|(name, _, _)| name == k)
    }

    fn arg(&self, i: usize) -> (&Value, Pos) {
        let (v, p) = &self.positional[i];
        (v, *p)
    }
}

fn expect_kind(v: &Value, pos: Pos, want: &str) -> Diagnostic {
    Diagnostic::new(pos, format!("expected {want}, found {}", v.kind()))
}

fn number(v: &Value, pos: Pos) -> Result<Rational, Diagnostic> {
    match v {
        Value::Number(r) => Ok(r.clone()),
        _ => Err(expect_kind(v, pos, "a number")),
    }
}

fn count(v: &Value, pos: Pos) -> Result<usize, Diagnostic> {
    let r = number(v, pos)?;
    if !r.is_integer() || r.is_negative() {
        return Err(Diagnostic::new(pos, format!("expected a nonnegative integer, found {}", format_rational(&r))));
    }
    r.to_integer()
        .to_usize()
        .ok_or_else(|| Diagnostic::new(pos, "integer out of range"))
}

fn vector(v: &Value, pos: Pos) -> Result<Vector, Diagnostic> {
    match v {
        Value::List(xs) => xs.iter().map(|x| number(x, pos)).collect(),
        Value::Number(r) => Ok(Vector::new(vec![r.clone()])),
        _ => Err(expect_kind(v, pos, "a vector")),
    }
}

fn vectors(v: &Value, pos: Pos) -> Result<Vec<Vector>, Diagnostic> {
    match v {
        Value::List(xs) => xs.iter().map(|x| vector(x, pos)).collect(),
        _ => Err(expect_kind(v, pos, "a list of vectors")),
    }
}

fn same_dims(vs: &[Vector], dim: usize, pos: Pos, what: &str) -> Result<(), Diagnostic> {
    for x in vs {
        if x.dim() != dim {
            return Err(Diagnostic::new(
                pos,
                format!("dimension mismatch in {what}: expected {dim}, found {}", x.dim()),
            ));
        }
    }
    Ok(())
}

fn matrix(v: &Value, pos: Pos) -> Result<Matrix, Diagnostic> {
    match v {
        Value::Matrix(m) => Ok(m.clone()),
        Value::Number(r) => Ok(Matrix::new(1, 1, vec![r.clone()]).expect("1x1")),
        _ => Err(expect_kind(v, pos, "a matrix")),
    }
}

fn relation(v: &Value, pos: Pos) -> Result<LinearRelation, Diagnostic> {
    match v {
        Value::Relation(l) => Ok(l.clone()),
        Value::Matrix(_) | Value::Number(_) => Ok(LinearRelation::from_matrix(&matrix(v, pos)?)),
        _ => Err(expect_kind(v, pos, "a linear relation or matrix")),
    }
}

fn operator(v: &Value, pos: Pos) -> Result<Operator, Diagnostic> {
    match v {
        Value::Op(o) => Ok(o.clone()),
        Value::Matrix(_) | Value::Number(_) => at(pos, Operator::from_matrix(&matrix(v, pos)?)),
        Value::Relation(l) => at(pos, l.to_operator()),
        _ => Err(expect_kind(v, pos, "an operator")),
    }
}

fn set(v: &Value, pos: Pos) -> Result<PolySet, Diagnostic> {
    match v {
        Value::Set(s) => Ok(s.clone()),
        _ => Err(expect_kind(v, pos, "a set")),
    }
}

fn polyhedron(v: &Value, pos: Pos) -> Result<Polyhedron, Diagnostic> {
    let s = set(v, pos)?;
    match s.pieces() {
        [p] => Ok(p.clone()),
        [] => Ok(Polyhedron::empty(s.dim())),
        _ => Err(Diagnostic::new(pos, "expected a convex set, found a union of several pieces")),
    }
}

fn word(v: &Value, pos: Pos) -> Result<String, Diagnostic> {
    match v {
        Value::Str(s) => Ok(s.clone()),
        _ => Err(expect_kind(v, pos, "a word")),
    }
}

/// Rows `[a_1, …, a_n, b]` of an H-description.
fn halfspace_rows(v: &Value, pos: Pos, n: usize) -> Result<Vec<(Vector, Rational)>, Diagnostic> {
    let rows = vectors(v, pos)?;
    same_dims(&rows, n + 1, pos, "constraint row (coefficients then right-hand side)")?;
    Ok(rows
        .into_iter()
        .map(|r| (r.slice(0, n), r[n].clone()))
        .collect())
}

fn construct(c: &Call) -> Result<Value, Diagnostic> {
    let pos = c.pos;
    let ops = |from: usize| -> Result<Vec<Operator>, Diagnostic> {
        c.positional[from..].iter().map(|(v, p)| operator(v, *p)).collect()
    };
    let v = match c.ctor {
        "matrix" => {
            c.arity(3, 3)?;
            c.allow_keys(&[])?;
            let (r, rp) = c.arg(0);
            let (k, kp) = c.arg(1);
            let (rows, cols) = (count(r, rp)?, count(k, kp)?);
            let (e, ep) = c.arg(2);
            let entries = vector(e, ep)?;
            if entries.dim() != rows * cols {
                return Err(Diagnostic::new(
                    ep,
                    format!("dimension mismatch in matrix entries: expected {}, found {}", rows * cols, entries.dim()),
                ));
            }
            Value::Matrix(at(pos, Matrix::new(rows, cols, entries.into_entries()))?)
        }
        "identity_matrix" => {
            c.arity(1, 1)?;
            let (n, np) = c.arg(0);
            Value::Matrix(Matrix::identity(count(n, np)?))
        }
        "polyhedron_h" => {
            c.arity(1, 2)?;
            c.allow_keys(&["le", "ge", "eq"])?;
            let (n, np) = c.arg(0);
            let n = count(n, np)?;
            let mut h = HRep::new(n);
            let mut add = |v: &Value, p: Pos, kind: &str| -> Result<(), Diagnostic> {
                for (a, b) in halfspace_rows(v, p, n)? {
                    h = match kind {
                        "le" => h.clone().le(a, b),
                        "ge" => h.clone().ge(a, b),
                        _ => h.clone().eq(a, b),
                    };
                }
                Ok(())
            };
            if c.positional.len() == 2 {
                let (v, p) = c.arg(1);
                add(v, p, "le")?;
            }
            for (k, v, p) in &c.keyword {
                add(v, *p, k)?;
            }
            Value::Set(PolySet::single(at(pos, Polyhedron::from_h(h))?))
        }
        "polyhedron_v" => {
            c.arity(2, 4)?;
            c.allow_keys(&["rays", "lines"])?;
            let (n, np) = c.arg(0);
            let n = count(n, np)?;
            let mut parts = vec![Vec::new(), Vec::new(), Vec::new()];
            for (i, (v, p)) in c.positional[1..].iter().enumerate() {
                parts[i] = vectors(v, *p)?;
            }
            for (k, v, p) in &c.keyword {
                parts[if k == "rays" { 1 } else { 2 }] = vectors(v, *p)?;
            }
            for part in &parts {
                same_dims(part, n, pos, "polyhedron_v generator")?;
            }
            if parts[0].is_empty() {
                return Err(Diagnostic::new(pos, "polyhedron_v needs at least one vertex"));
            }
            let [vs, rs, ls]: [Vec<Vector>; 3] = parts.try_into().expect("three parts");
            Value::Set(PolySet::single(at(pos, Polyhedron::from_v(VRep::new(n, vs, rs, ls)))?))
        }
        "box" => {
            c.arity(2, 2)?;
            let (lo, lp) = c.arg(0);
            let (hi, hp) = c.arg(1);
            let (lo, hi) = (vector(lo, lp)?, vector(hi, hp)?);
            Value::Set(PolySet::single(at(pos, Polyhedron::bounding_box(&lo, &hi))?))
        }
        "point" => {
            c.arity(1, 1)?;
            let (p, pp) = c.arg(0);
            Value::Set(PolySet::single(Polyhedron::point(vector(p, pp)?)))
        }
        "subspace" => {
            c.arity(2, 2)?;
            let (n, np) = c.arg(0);
            let n = count(n, np)?;
            let (b, bp) = c.arg(1);
            let basis = vectors(b, bp)?;
            same_dims(&basis, n, bp, "subspace basis")?;
            Value::Set(PolySet::single(Polyhedron::subspace(&Subspace::new(n, basis))))
        }
        "whole_space" => {
            c.arity(1, 1)?;
            let (n, np) = c.arg(0);
            Value::Set(PolySet::full(count(n, np)?))
        }
        "union" => {
            c.arity(1, usize::MAX)?;
            let mut acc = set(c.arg(0).0, c.arg(0).1)?;
            for (v, p) in &c.positional[1..] {
                acc = at(*p, acc.union(&set(v, *p)?))?;
            }
            Value::Set(acc)
        }
        "domain" | "range" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            let op = operator(v, p)?;
            Value::Set(at(pos, if c.ctor == "domain" { op.domain() } else { op.range() })?)
        }
        "normal_cone" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            Value::Op(at(pos, normal_cone_operator(&polyhedron(v, p)?))?)
        }
        "staircase" => {
            c.arity(1, 1)?;
            c.allow_keys(&["head", "tail"])?;
            let (v, p) = c.arg(0);
            let pts = vectors(v, p)?;
            let dir = |k: &str| -> Result<Option<Vector>, Diagnostic> {
                c.key(k).map(|(_, v, p)| vector(v, *p)).transpose()
            };
            Value::Op(at(pos, staircase(&pts, dir("head")?, dir("tail")?))?)
        }
        "graph" => {
            c.arity(3, usize::MAX)?;
            let (a, ap) = c.arg(0);
            let (b, bp) = c.arg(1);
            let (n, m) = (count(a, ap)?, count(b, bp)?);
            let mut pieces = Vec::new();
            for (v, p) in &c.positional[2..] {
                let s = set(v, *p)?;
                if s.dim() != n + m {
                    return Err(Diagnostic::new(
                        *p,
                        format!("dimension mismatch in graph piece: expected {}, found {}", n + m, s.dim()),
                    ));
                }
                pieces.extend(s.pieces().iter().cloned());
            }
            Value::Op(at(pos, Operator::from_pieces(n, m, pieces))?)
        }
        "linear" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            Value::Op(at(pos, Operator::from_matrix(&matrix(v, p)?))?)
        }
        "identity" | "zero" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            let n = count(v, p)?;
            Value::Op(at(pos, if c.ctor == "identity" { Operator::identity(n) } else { Operator::zero(n) })?)
        }
        "linear_relation" => {
            if c.positional.len() == 1 {
                let (v, p) = c.arg(0);
                Value::Relation(LinearRelation::from_matrix(&matrix(v, p)?))
            } else {
                c.arity(3, 3)?;
                let (a, ap) = c.arg(0);
                let (b, bp) = c.arg(1);
                let (n, m) = (count(a, ap)?, count(b, bp)?);
                let (g, gp) = c.arg(2);
                let basis = vectors(g, gp)?;
                same_dims(&basis, n + m, gp, "linear relation graph basis")?;
                Value::Relation(at(pos, LinearRelation::new(n, m, Subspace::new(n + m, basis)))?)
            }
        }
        "identity_relation" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            Value::Relation(LinearRelation::identity(count(v, p)?))
        }
        "adjoint" => {
            c.arity(1, 1)?;
            let (v, p) = c.arg(0);
            Value::Relation(relation(v, p)?.adjoint())
        }
        "inverse" => {
            c.arity(1, 1)?;
            Value::Op(ops(0)?[0].inverse())
        }
        "sum" => {
            c.arity(1, usize::MAX)?;
            let all = ops(0)?;
            let mut acc = all[0].clone();
            for (o, (_, p)) in all[1..].iter().zip(&c.positional[1..]) {
                acc = at(*p, acc.op_sum(o))?;
            }
            Value::Op(acc)
        }
        "scale" => {
            c.arity(2, 2)?;
            let (s, sp) = c.arg(0);
            let s = number(s, sp)?;
            Value::Op(at(pos, ops(1)?[0].scale(&s))?)
        }
        "compose" => {
            // compose(B, A) = B∘A
            c.arity(2, 2)?;
            let o = ops(0)?;
            Value::Op(at(pos, o[1].then(&o[0]))?)
        }
        "sandwich" => {
            c.arity(2, 2)?;
            let (l, lp) = c.arg(0);
            let l = relation(l, lp)?;
            Value::Op(at(pos, sandwich(&l, &ops(1)?[0]))?)
        }
        "kuhn_tucker" => {
            c.arity(3, 3)?;
            let o = c.positional[..2]
                .iter()
                .map(|(v, p)| operator(v, *p))
                .collect::<Result<Vec<_>, _>>()?;
            let (l, lp) = c.arg(2);
            Value::Op(at(pos, kuhn_tucker(&o[0], &o[1], &relation(l, lp)?))?)
        }
        "resolvent" | "reflected_resolvent" => {
            c.arity(1, 1)?;
            let o = &ops(0)?[0];
            Value::Op(at(pos, if c.ctor == "resolvent" { o.resolvent() } else { o.reflected_resolvent() })?)
        }
        "displacement" => {
            c.arity(2, 2)?;
            let o = ops(0)?;
            Value::Op(at(pos, dr_displacement(&o[0], &o[1]))?.disp)
        }
        "product" => {
            c.arity(1, usize::MAX)?;
            Value::Op(at(pos, product_operator(&ops(0)?))?)
        }
        "congruence" => {
            c.arity(2, 2)?;
            let (s, sp) = c.arg(1);
            Value::Op(at(pos, ops(0)?[0].congruence_transform(&matrix(s, sp)?))?)
        }
        other => return Err(Diagnostic::new(pos, format!("unknown constructor {other}"))),
    };
    Ok(v)
}

struct Env {
    names: HashMap<String, Value>,
}

impl Env {
    fn eval(&self, e: &Expr) -> Result<Value, Diagnostic> {
        match &e.kind {
            ExprKind::Number(r) => Ok(Value::Number(r.clone())),
            ExprKind::Str(s) => Ok(Value::Str(s.clone())),
            ExprKind::Name(n) => self
                .names
                .get(n)
                .cloned()
                .ok_or_else(|| Diagnostic::new(e.pos, format!("undefined name {n}"))),
            ExprKind::List(items) => Ok(Value::List(items.iter().map(|x| self.eval(x)).collect::<Result<_, _>>()?)),
            ExprKind::Call { ctor, args } => {
                let call = self.call(ctor, e.pos, args)?;
                construct(&call)
            }
        }
    }

    fn call<'a>(&self, ctor: &'a str, pos: Pos, args: &[Arg]) -> Result<Call<'a>, Diagnostic> {
        let mut call = Call {
            ctor,
            pos,
            positional: Vec::new(),
            keyword: Vec::new(),
        };
        for a in args {
            match &a.key {
                None => call.positional.push((self.eval(&a.value)?, a.value.pos)),
                Some(k) => {
                    let v = match (&a.value.kind, k.as_str()) {
                        (ExprKind::Name(w), "mode" | "variant" | "expect") => Value::Str(w.clone()),
                        _ => self.eval(&a.value)?,
                    };
                    if call.key(k).is_some() {
                        return Err(Diagnostic::new(a.value.pos, format!("argument `{k}` given twice")));
                    }
                    call.keyword.push((k.clone(), v, a.value.pos));
                }
            }
        }
        Ok(call)
    }
}

fn task(stmt: StatementId, c: &Call) -> Result<Task, Diagnostic> {
    let ops = |n: usize| -> Result<Vec<Operator>, Diagnostic> {
        c.arity(n, n)?;
        c.positional.iter().map(|(v, p)| operator(v, *p)).collect()
    };
    let t = match stmt {
        StatementId::CompositeRange => {
            c.allow_keys(&[])?;
            if c.positional.len() % 2 != 1 {
                return Err(Diagnostic::new(
                    c.pos,
                    "composite_range takes A followed by pairs L_k, B_k",
                ));
            }
            let (a, ap) = c.arg(0);
            let a = operator(a, ap)?;
            let mut couples = Vec::new();
            for pair in c.positional[1..].chunks(2) {
                couples.push((relation(&pair[0].0, pair[0].1)?, operator(&pair[1].0, pair[1].1)?));
            }
            Task::Composite(at(c.pos, Scenario::new(a, couples))?)
        }
        StatementId::SurjectiveSum => {
            let o = ops(2)?;
            Task::SurjectiveSum(o[0].clone(), o[1].clone())
        }
        StatementId::DomainDescription => Task::DomainDescription(ops(1)?.remove(0)),
        StatementId::DisplacementRange => {
            c.allow_keys(&["mode", "w"])?;
            let o = ops(2)?;
            let mode = match c.key("mode") {
                None => WMode::BothThreeStar,
                Some((_, v, p)) => match word(v, *p)?.as_str() {
                    "both-3star" | "i" => WMode::BothThreeStar,
                    "full-domain" | "ii" => WMode::FullDomainThreeStar,
                    "full-range" | "iii" => WMode::FullRangeThreeStar,
                    "custom" => {
                        let (_, w, wp) = c
                            .key("w")
                            .ok_or_else(|| Diagnostic::new(*p, "mode=custom needs w=<set>"))?;
                        WMode::Custom(set(w, *wp)?)
                    }
                    other => {
                        return Err(Diagnostic::new(
                            *p,
                            format!("expected mode both-3star, full-domain, full-range or custom, found {other}"),
                        ))
                    }
                },
            };
            Task::Displacement(o[0].clone(), o[1].clone(), mode)
        }
        StatementId::KuhnTuckerI | StatementId::KuhnTuckerII => {
            c.allow_keys(&["variant"])?;
            c.arity(3, 3)?;
            let a = operator(c.arg(0).0, c.arg(0).1)?;
            let b = operator(c.arg(1).0, c.arg(1).1)?;
            let l = relation(c.arg(2).0, c.arg(2).1)?;
            let mut variant = if stmt == StatementId::KuhnTuckerI { KtVariant::I } else { KtVariant::II };
            if let Some((_, v, p)) = c.key("variant") {
                variant = match word(v, *p)?.as_str() {
                    "i" => KtVariant::I,
                    "ii" => KtVariant::II,
                    other => return Err(Diagnostic::new(*p, format!("expected variant i or ii, found {other}"))),
                };
            }
            Task::KuhnTucker(a, b, l, variant)
        }
        StatementId::ReflectedComposition => {
            let o = ops(2)?;
            Task::Reflected(o[0].clone(), o[1].clone())
        }
        StatementId::HullSandwich => {
            c.arity(2, 2)?;
            let s = set(c.arg(0).0, c.arg(0).1)?;
            let t = set(c.arg(1).0, c.arg(1).1)?;
            if s.dim() != t.dim() {
                return Err(Diagnostic::new(
                    c.pos,
                    format!("dimension mismatch in hull_sandwich: expected {}, found {}", s.dim(), t.dim()),
                ));
            }
            Task::HullSandwich(s, t)
        }
        StatementId::RintRangeIdentity => Task::RintIdentity(ops(1)?.remove(0)),
        StatementId::PlainSumFormula => {
            let o = ops(2)?;
            Task::PlainSum(o[0].clone(), o[1].clone())
        }
    };
    Ok(t)
}

fn option_value(key: &str, v: &Value, pos: Pos, opts: &mut FileOptions) -> Result<(), Diagnostic> {
    let n = count(v, pos)?;
    match key {
        "seed" => opts.seed = Some(n as u64),
        "max_dim" => opts.max_dim = Some(n),
        "max_pieces" => opts.max_pieces = Some(n),
        "probe_budget" => opts.probe_budget = Some(n),
        "chain_samples" => opts.chain_samples = Some(n),
        other => return Err(Diagnostic::new(pos, format!("unknown option {other}"))),
    }
    Ok(())
}

/// Reads the `option` lines only.
pub fn file_options(file: &ScenarioFile) -> Result<FileOptions, Diagnostic> {
    let mut opts = FileOptions::default();
    let env = Env { names: HashMap::new() };
    for item in &file.items {
        if let Item::Option { key, value } = &item.item {
            option_value(key, &env.eval(value)?, value.pos, &mut opts)?;
        }
    }
    Ok(opts)
}

/// Evaluates declarations and resolves `verify` directives, in file order.
/// Resource caps are read from the current thread limits.
pub fn elaborate(file: &ScenarioFile) -> Result<Vec<Directive>, Diagnostic> {
    let mut env = Env { names: HashMap::new() };
    let mut out = Vec::new();
    for item in &file.items {
        match &item.item {
            Item::Let { name, expr } => {
                let v = env.eval(expr)?;
                env.names.insert(name.clone(), v);
            }
            Item::Verify { statement, args } => {
                let stmt = resolve_statement(statement)
                    .ok_or_else(|| Diagnostic::new(item.pos, format!("unknown statement {statement}")))?;
                let mut call = env.call(statement, item.pos, args)?;
                let mut label = format!("{statement}@{}", item.pos.line);
                let mut expected_failure = false;
                let mut rest = Vec::new();
                for (k, v, p) in call.keyword.drain(..) {
                    match k.as_str() {
                        "label" => label = word(&v, p)?,
                        "expect" => {
                            expected_failure = match word(&v, p)?.as_str() {
                                "failure" => true,
                                "success" => false,
                                other => {
                                    return Err(Diagnostic::new(p, format!("expected failure or success, found {other}")))
                                }
                            }
                        }
                        _ => rest.push((k, v, p)),
                    }
                }
                call.keyword = rest;
                out.push(Directive {
                    pos: item.pos,
                    label,
                    expected_failure,
                    task: task(stmt, &call)?,
                });
            }
            Item::Option { .. } => {}
        }
    }
    Ok(out)
}
