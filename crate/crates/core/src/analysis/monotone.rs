use num::{One, Signed, Zero};

use super::quadratic::{minimize, negative_along, pairing_matrix, psd_witness, QuadMin, Quadratic};
use super::{MaximalVerdict, MonotoneVerdict};
use crate::error::{Error, Result};
use crate::exact_la::{frac, Matrix, Rational, Vector};
use crate::operators::Operator;
use crate::polyhedra::{Polyhedron, PolySet};

fn require_square(op: &Operator) -> Result<usize> {
    if op.dim_in() != op.dim_out() {
        return Err(Error::Precondition(format!(
            "monotonicity needs a square operator, got {}→{}",
            op.dim_in(),
            op.dim_out()
        )));
    }
    Ok(op.dim_in())
}

/// `(a_x·b_u + a_u·b_x) / 2` for stacked vectors `(x, u)`.
fn pairing(n: usize, a: &Vector, b: &Vector) -> Rational {
    let s = a.slice(0, n).dot(&b.slice(n, 2 * n)) + a.slice(n, 2 * n).dot(&b.slice(0, n));
    s * frac(1, 2)
}

fn split(n: usize, y: &Vector) -> (Vector, Vector) {
    (y.slice(0, n), y.slice(n, 2 * n))
}

type Pair = ((Vector, Vector), (Vector, Vector));

/// Two points of one piece whose difference pairs negatively.
fn same_piece_witness(n: usize, p: &Polyhedron) -> Result<Option<Pair>> {
    let (_, dir) = p.affine_hull()?;
    let basis = dir.basis();
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, pairing(n, &basis[i], &basis[j]));
        }
    }
    let Some(e) = psd_witness(&gram) else {
        return Ok(None);
    };
    let mut d = Vector::zeros(2 * n);
    for (c, b) in e.iter().zip(basis) {
        d = d.axpy(c, b);
    }
    let a = p.rel_interior_point()?;
    // largest step that stays in the piece, capped at 1
    let mut t = Rational::one();
    for c in &p.hrep().inequalities {
        let rate = c.normal.dot(&d);
        if rate.is_negative() {
            let bound = c.slack(&a) / -rate;
            if bound < t {
                t = bound;
            }
        }
    }
    let b = a.axpy(&t, &d);
    Ok(Some((split(n, &a), split(n, &b))))
}

/// Points `a ∈ p`, `b ∈ q` with `⟨a - b, a - b⟩ < 0` in the pairing.
fn cross_piece_witness(n: usize, p: &Polyhedron, q: &Polyhedron) -> Result<Option<Pair>> {
    let diff = p.minkowski_sum(&q.neg())?;
    let dv = diff.vrep();
    if dv.lines.is_empty() {
        let gens: Vec<&Vector> = dv.vertices.iter().chain(&dv.rays).collect();
        let nonneg = gens
            .iter()
            .all(|a| gens.iter().all(|b| !pairing(n, a, b).is_negative()));
        if nonneg {
            return Ok(None);
        }
    }
    let quad = Quadratic {
        h: pairing_matrix(n),
        c: Vector::zeros(2 * n),
        k: Rational::zero(),
    };
    let d = match minimize(&quad, &diff)? {
        QuadMin::Min { value, point } if value.is_negative() => point,
        QuadMin::Unbounded { point, dir } => negative_along(&quad, &point, &dir),
        QuadMin::Unknown => {
            return Err(Error::Resource(
                "copositivity enumeration exceeded the branch cap".into(),
            ))
        }
        _ => return Ok(None),
    };
    let meet = p.intersect(&q.translate(&d))?;
    let a = meet.rel_interior_point()?;
    let b = &a - &d;
    Ok(Some((split(n, &a), split(n, &b))))
}

pub fn check_monotone(op: &Operator) -> Result<MonotoneVerdict> {
    if let Some(v) = op.certs.monotone.get() {
        return Ok(v.clone());
    }
    let n = require_square(op)?;
    let pieces = op.pieces();
    let mut witness = None;
    'search: for (i, p) in pieces.iter().enumerate() {
        if let Some(w) = same_piece_witness(n, p)? {
            witness = Some(w);
            break;
        }
        for q in &pieces[i + 1..] {
            if let Some(w) = cross_piece_witness(n, p, q)? {
                witness = Some(w);
                break 'search;
            }
        }
    }
    let verdict = MonotoneVerdict {
        monotone: witness.is_none(),
        witness,
    };
    let _ = op.certs.monotone.set(verdict.clone());
    Ok(verdict)
}

/// Minty's criterion: a monotone operator is maximal iff `ran(Id + M)` is
/// the whole space.
pub fn check_maximal(op: &Operator) -> Result<MaximalVerdict> {
    if let Some(v) = op.certs.maximal.get() {
        return Ok(v.clone());
    }
    let n = require_square(op)?;
    if !check_monotone(op)?.monotone {
        return Err(Error::Precondition("maximality is only decided for monotone operators".into()));
    }
    let mut sum = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        sum.set(i, i, num::one());
        sum.set(i, n + i, num::one());
    }
    let image = op.graph().linear_image(&sum)?;
    let cover = image.covers(&PolySet::full(n))?;
    let verdict = MaximalVerdict {
        maximal: cover.holds,
        witness: cover.witness,
    };
    let _ = op.certs.maximal.set(verdict.clone());
    Ok(verdict)
}
