use num::Signed;

use super::Operator;
use crate::error::{check_dim, Error, Result};
use crate::exact_la::Vector;
use crate::polyhedra::{Polyhedron, VRep};

/// `N_C`, one graph piece `F × N_F` per nonempty face `F` of `C`.
pub fn normal_cone_operator(c: &Polyhedron) -> Result<Operator> {
    if c.is_empty() {
        return Err(Error::Input("normal cone of an empty set".into()));
    }
    let n = c.dim();
    let h = c.hrep();
    let lines: Vec<Vector> = h.equalities.iter().map(|e| e.normal.clone()).collect();
    let mut pieces = Vec::new();
    for face in c.faces() {
        let rays = face
            .tight
            .iter()
            .map(|&i| -&h.inequalities[i].normal)
            .collect();
        let cone = Polyhedron::from_v(VRep::new(n, vec![Vector::zeros(n)], rays, lines.clone()))?;
        pieces.push(face.polyhedron.product(&cone.reduced()));
    }
    Operator::from_pieces(n, n, pieces)
}

/// A monotone chain in ℚ²: segments between consecutive `points`, an
/// optional ray from the first point along `head` and an optional ray from
/// the last point along `tail`. Vertical and horizontal pieces are allowed.
pub fn staircase(points: &[Vector], head: Option<Vector>, tail: Option<Vector>) -> Result<Operator> {
    let first = points
        .first()
        .ok_or_else(|| Error::Input("staircase needs at least one point".into()))?;
    for p in points {
        check_dim("staircase point", 2, p.dim())?;
    }
    let nonneg = |d: &Vector| !d[0].is_negative() && !d[1].is_negative() && !d.is_zero();
    for (i, w) in points.windows(2).enumerate() {
        if !nonneg(&(&w[1] - &w[0])) {
            return Err(Error::Input(format!(
                "staircase step {i} from {} to {} is not monotone",
                w[0], w[1]
            )));
        }
    }
    let mut pieces = Vec::new();
    if let Some(hd) = &head {
        check_dim("staircase head", 2, hd.dim())?;
        if !nonneg(&-hd) {
            return Err(Error::Input(format!("staircase head direction {hd} is not monotone")));
        }
        pieces.push(Polyhedron::from_v(VRep::new(2, vec![first.clone()], vec![hd.clone()], vec![]))?);
    }
    for w in points.windows(2) {
        pieces.push(Polyhedron::from_v(VRep::new(2, w.to_vec(), vec![], vec![]))?);
    }
    let last = points.last().expect("nonempty");
    if let Some(tl) = &tail {
        check_dim("staircase tail", 2, tl.dim())?;
        if !nonneg(tl) {
            return Err(Error::Input(format!("staircase tail direction {tl} is not monotone")));
        }
        pieces.push(Polyhedron::from_v(VRep::new(2, vec![last.clone()], vec![tl.clone()], vec![]))?);
    }
    if pieces.is_empty() {
        pieces.push(Polyhedron::point(first.clone()));
    }
    Operator::from_pieces(1, 1, pieces)
}

/// `(x_1, …, x_k) ↦ M_1 x_1 × … × M_k x_k`, coordinates ordered as
/// `(x_1, …, x_k, u_1, …, u_k)`.
pub fn product_operator(ops: &[Operator]) -> Result<Operator> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Input("product of no operators".into()))?;
    let mut acc = first.clone();
    for op in &ops[1..] {
        acc = product2(&acc, op)?;
    }
    Ok(acc)
}

fn product2(a: &Operator, b: &Operator) -> Result<Operator> {
    let (n1, m1, n2, m2) = (a.dim_in(), a.dim_out(), b.dim_in(), b.dim_out());
    // (x1, u1, x2, u2) → (x1, x2, u1, u2)
    let perm: Vec<usize> = (0..n1)
        .chain(n1 + n2..n1 + n2 + m1)
        .chain(n1..n1 + n2)
        .chain(n1 + n2 + m1..n1 + n2 + m1 + m2)
        .collect();
    let graph = a.graph().product(b.graph())?.permute(&perm);
    Operator::new(n1 + n2, m1 + m2, graph)
}
