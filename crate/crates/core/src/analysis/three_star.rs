use std::cmp::Ordering;

use num::{One, Signed, Zero};

use super::monotone::check_monotone;
use super::quadratic::{minimize, pairing_matrix, QuadMin, Quadratic};
use super::{BoundStatus, ThreeStarTag, ThreeStarVerdict, ThreeStarWitness};
use crate::error::{check_dim, Error, Result};
use crate::exact_la::{frac, Rational, Vector};
use crate::operators::Operator;
use crate::polyhedra::{PolySet, VRep};

/// `inf_{(x,u) ∈ gra M} ⟨x − z, u − w⟩`, decided exactly piece by piece.
pub fn bh_inf_status(op: &Operator, z: &Vector, w: &Vector) -> Result<BoundStatus> {
    check_dim("bh_inf_status point", op.dim_in(), z.dim())?;
    check_dim("bh_inf_status value", op.dim_out(), w.dim())?;
    if op.dim_in() != op.dim_out() {
        return Err(Error::Precondition("the pairing needs a square operator".into()));
    }
    let n = op.dim_in();
    let quad = Quadratic {
        h: pairing_matrix(n),
        c: (-w).concat(&-z),
        k: z.dot(w),
    };
    let mut lower: Option<Rational> = None;
    let mut unknown = false;
    for piece in op.pieces() {
        match minimize(&quad, piece)? {
            QuadMin::Unbounded { point, dir } => return Ok(BoundStatus::Unbounded { point, dir }),
            QuadMin::Unknown => unknown = true,
            QuadMin::Min { value, .. } => {
                if lower.as_ref().is_none_or(|l| &value < l) {
                    lower = Some(value);
                }
            }
            QuadMin::Empty => {}
        }
    }
    if unknown {
        return Ok(BoundStatus::Unknown);
    }
    // an empty graph has infimum +∞; report it as the vacuous bound 0
    Ok(BoundStatus::Bounded {
        lower_bound: lower.unwrap_or_else(Rational::zero),
    })
}

fn cmp_vec(a: &Vector, b: &Vector) -> Ordering {
    a.entries().cmp(b.entries())
}

fn signed(v: &VRep) -> Vec<Vector> {
    let mut out = v.rays.clone();
    for l in &v.lines {
        out.push(l.clone());
        out.push(-l);
    }
    out
}

/// Vertices, pairwise midpoints, and vertex-plus-ray points of a set.
pub fn probe_points(s: &PolySet) -> Vec<Vector> {
    let mut out = Vec::new();
    let reduced: Vec<VRep> = s.pieces().iter().map(|p| p.reduced().vrep().clone()).collect();
    let verts: Vec<Vector> = reduced.iter().flat_map(|v| v.vertices.clone()).collect();
    out.extend(verts.iter().cloned());
    for (i, a) in verts.iter().enumerate() {
        for b in &verts[i + 1..] {
            out.push((a + b).scale(&frac(1, 2)));
        }
    }
    for v in &reduced {
        for x in &v.vertices {
            for r in signed(v) {
                out.push(x + &r);
            }
        }
    }
    out.sort_by(cmp_vec);
    out.dedup();
    out
}

/// Probe pairs in canonical order: along anti-diagonals of the product of
/// the sorted domain and range probe lists.
pub fn probe_pairs(op: &Operator, budget: usize) -> Result<Vec<(Vector, Vector)>> {
    let xs = probe_points(&op.domain()?);
    let us = probe_points(&op.range()?);
    let mut pairs = Vec::new();
    if xs.is_empty() || us.is_empty() {
        return Ok(pairs);
    }
    for s in 0..xs.len() + us.len() - 1 {
        for i in 0..=s.min(xs.len() - 1) {
            let j = s - i;
            if j < us.len() {
                if pairs.len() == budget {
                    return Ok(pairs);
                }
                pairs.push((xs[i].clone(), us[j].clone()));
            }
        }
    }
    Ok(pairs)
}

enum Extent {
    Finite(Rational, Vector),
    /// `base + t·dir` stays in the set and the functional grows along `dir`.
    Infinite(Vector, Vector),
}

/// `sup_{y ∈ s} f·y` over a nonempty set.
fn supremum(s: &PolySet, f: &Vector) -> Extent {
    let mut best: Option<(Rational, Vector)> = None;
    for p in s.pieces() {
        let v = p.reduced().vrep().clone();
        for r in signed(&v) {
            if f.dot(&r).is_positive() {
                return Extent::Infinite(v.vertices[0].clone(), r);
            }
        }
        for x in &v.vertices {
            let val = f.dot(x);
            if best.as_ref().is_none_or(|(b, _)| &val > b) {
                best = Some((val, x.clone()));
            }
        }
    }
    let (val, x) = best.expect("supremum over a nonempty set");
    Extent::Finite(val, x)
}

fn overshoot(gap: &Rational, rate: &Rational) -> Rational {
    if gap.is_negative() {
        Rational::zero()
    } else {
        (gap / rate).floor() + Rational::one()
    }
}

/// Decides the 3* property of a monotone operator. Returns `Ok(None)` when
/// it holds and a pair `(x, u)` with unbounded infimum otherwise.
///
/// Per piece `P`, the infimum over `P` of `⟨x − y, u − v⟩` is finite iff
/// `inf_P φ_d >= x·d_u + u·d_x` for every `d` in the zero set of the pairing
/// on the recession cone, where `φ_d(y, v) = y·d_u + v·d_x`. The zero set is
/// the union over faces `F` of the cone of `{d ∈ F : ⟨d, g⟩ = 0 ∀ g ∈ F}`.
fn exact_decision(op: &Operator) -> Result<Option<(Vector, Vector)>> {
    let n = op.dim_in();
    let dom = op.domain()?;
    let ran = op.range()?;
    if dom.is_empty() {
        return Ok(None);
    }
    let quad = Quadratic {
        h: pairing_matrix(n),
        c: Vector::zeros(2 * n),
        k: Rational::zero(),
    };
    for piece in op.pieces() {
        let p = piece.reduced();
        let pv = p.vrep().clone();
        if pv.rays.is_empty() && pv.lines.is_empty() {
            continue;
        }
        let rec = p.recession_cone()?;
        for face in rec.faces() {
            let fv = face.polyhedron.vrep();
            let mut h = crate::polyhedra::HRep::new(2 * n);
            for g in fv.rays.iter().chain(&fv.lines) {
                h = h.eq(quad.h.mul_vec(g), Rational::zero());
            }
            let zero_set = face.polyhedron.intersect_h(&h)?;
            for d in signed(zero_set.vrep()) {
                let (dx, du) = (d.slice(0, n), d.slice(n, 2 * n));
                let phi = du.concat(&dx);
                let drift = signed(&pv).into_iter().find(|r| phi.dot(r).is_negative());
                let x0 = dom.pieces()[0].vrep().vertices[0].clone();
                let u0 = ran.pieces()[0].vrep().vertices[0].clone();
                if drift.is_some() {
                    return Ok(Some((x0, u0)));
                }
                let inf = pv.vertices.iter().map(|y| phi.dot(y)).min().expect("vertex");
                let sx = supremum(&dom, &du);
                let su = supremum(&ran, &dx);
                let (x, u) = match (sx, su) {
                    (Extent::Finite(a, xa), Extent::Finite(b, ub)) => {
                        if a + b <= inf {
                            continue;
                        }
                        (xa, ub)
                    }
                    (Extent::Infinite(base, r), su) => {
                        let u = match su {
                            Extent::Finite(_, ub) => ub,
                            Extent::Infinite(ub, _) => ub,
                        };
                        let gap = &inf - base.dot(&du) - u.dot(&dx);
                        (base.axpy(&overshoot(&gap, &r.dot(&du)), &r), u)
                    }
                    (Extent::Finite(_, xa), Extent::Infinite(base, r)) => {
                        let gap = &inf - xa.dot(&du) - base.dot(&dx);
                        let u = base.axpy(&overshoot(&gap, &r.dot(&dx)), &r);
                        (xa, u)
                    }
                };
                return Ok(Some((x, u)));
            }
        }
    }
    Ok(None)
}

fn is_single_subspace(op: &Operator) -> bool {
    match op.pieces() {
        [p] => {
            let v = p.reduced();
            let v = v.vrep();
            v.rays.is_empty() && v.vertices.len() == 1
        }
        _ => false,
    }
}

pub fn check_3star(op: &Operator, probe_budget: usize) -> Result<ThreeStarVerdict> {
    if probe_budget == 0 {
        return Err(Error::Input("probe budget must be positive".into()));
    }
    if let Some((_, v)) = op
        .certs
        .three_star
        .lock()
        .expect("certificate cache")
        .iter()
        .find(|(b, _)| *b == probe_budget)
    {
        return Ok(v.clone());
    }
    if !check_monotone(op)?.monotone {
        return Err(Error::Precondition("3* is only checked for monotone operators".into()));
    }
    let verdict = decide_3star(op, probe_budget)?;
    op.certs
        .three_star
        .lock()
        .expect("certificate cache")
        .push((probe_budget, verdict.clone()));
    Ok(verdict)
}

fn decide_3star(op: &Operator, probe_budget: usize) -> Result<ThreeStarVerdict> {
    let pairs = probe_pairs(op, probe_budget)?;
    let probes_used = pairs.len();
    let refuted = |x: Vector, u: Vector, point: Vector, dir: Vector| ThreeStarVerdict {
        tag: ThreeStarTag::Refuted,
        witness: Some(ThreeStarWitness { x, u, point, dir }),
        probes_used,
        certified: true,
    };
    for (x, u) in pairs {
        if let BoundStatus::Unbounded { point, dir } = bh_inf_status(op, &x, &u)? {
            return Ok(refuted(x, u, point, dir));
        }
    }
    match exact_decision(op)? {
        None => Ok(ThreeStarVerdict {
            tag: if is_single_subspace(op) {
                ThreeStarTag::Proved
            } else {
                ThreeStarTag::ProbePassed
            },
            witness: None,
            probes_used,
            certified: true,
        }),
        Some((x, u)) => match bh_inf_status(op, &x, &u)? {
            BoundStatus::Unbounded { point, dir } => Ok(refuted(x, u, point, dir)),
            _ => Ok(ThreeStarVerdict {
                tag: ThreeStarTag::ProbePassed,
                witness: None,
                probes_used,
                certified: false,
            }),
        },
    }
}
