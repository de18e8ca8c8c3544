//! Seeded generators of maximally monotone operators and composite
//! scenarios, used by the property suites and the CLI.

use rand::Rng;

use crate::error::Result;
use crate::exact_la::{rat, Matrix, Vector};
use crate::operators::{normal_cone_operator, product_operator, staircase, LinearRelation, Operator, Scenario};
use crate::polyhedra::{HRep, Polyhedron, VRep};

const PIECE_BUDGET: usize = 16;

fn nonneg_step<R: Rng + ?Sized>(rng: &mut R, hi: i64) -> Vector {
    loop {
        let d = Vector::from_ints(&[rng.gen_range(0..=hi), rng.gen_range(0..=hi)]);
        if !d.is_zero() {
            return d;
        }
    }
}

/// A maximal monotone curve in ℚ²: both ends are rays, so `x + u` sweeps
/// all of ℚ along the chain.
pub fn random_staircase<R: Rng + ?Sized>(rng: &mut R) -> Result<Operator> {
    let mut points = vec![Vector::from_ints(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)])];
    for _ in 0..rng.gen_range(0..=2) {
        let step = nonneg_step(rng, 2);
        points.push(points.last().expect("nonempty") + &step);
    }
    let head = -&nonneg_step(rng, 1);
    let tail = nonneg_step(rng, 1);
    staircase(&points, Some(head), Some(tail))
}

fn random_interval<R: Rng + ?Sized>(rng: &mut R) -> Result<Polyhedron> {
    let a = rng.gen_range(-2..=2);
    let h = match rng.gen_range(0..4) {
        0 => HRep::new(1).eq(Vector::from_ints(&[1]), rat(a)),
        1 => HRep::new(1).ge(Vector::from_ints(&[1]), rat(a)),
        2 => HRep::new(1),
        _ => HRep::new(1)
            .ge(Vector::from_ints(&[1]), rat(a))
            .le(Vector::from_ints(&[1]), rat(a + rng.gen_range(1..=3))),
    };
    Polyhedron::from_h(h)
}

fn random_planar_set<R: Rng + ?Sized>(rng: &mut R) -> Result<Polyhedron> {
    let o = Vector::from_ints(&[rng.gen_range(-1..=1), rng.gen_range(-1..=1)]);
    match rng.gen_range(0..3) {
        0 => {
            let hi = &o + &Vector::from_ints(&[rng.gen_range(0..=2), rng.gen_range(0..=2)]);
            Polyhedron::bounding_box(&o, &hi)
        }
        1 => {
            let a = &o + &nonneg_step(rng, 2);
            let b = &o + &Vector::from_ints(&[rng.gen_range(-2..=0), rng.gen_range(1..=2)]);
            Polyhedron::from_v(VRep::new(2, vec![o, a, b], vec![], vec![]))
        }
        _ => {
            let r = Vector::from_ints(&[1, rng.gen_range(-1..=1)]);
            let s = Vector::from_ints(&[rng.gen_range(-1..=0), 1]);
            Polyhedron::from_v(VRep::new(2, vec![o], vec![r, s], vec![]))
        }
    }
}

/// `S + K` with `S = BᵀB` positive semidefinite and `K` skew (if allowed).
pub fn random_monotone_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, skew: bool) -> Matrix {
    let b = Matrix::new(n, n, (0..n * n).map(|_| rat(rng.gen_range(-1..=1))).collect()).expect("square");
    let mut m = b.transpose().mul(&b).expect("square");
    if skew {
        for i in 0..n {
            for j in i + 1..n {
                let k = rat(rng.gen_range(-2..=2));
                m.set(i, j, m.get(i, j) + &k);
                m.set(j, i, m.get(j, i) - &k);
            }
        }
    }
    m
}

/// Integer matrix with determinant ±1.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, rat(rng.gen_range(-1..=1)));
            upper.set(j, i, rat(rng.gen_range(-1..=1)));
        }
        if rng.gen_bool(0.3) {
            upper.set(i, i, rat(-1));
        }
    }
    lower.mul(&upper).expect("square")
}

fn random_block<R: Rng + ?Sized>(rng: &mut R, dim: usize, skew: bool) -> Result<Operator> {
    match (dim, rng.gen_range(0..3)) {
        (1, 0) => random_staircase(rng),
        (1, 1) => normal_cone_operator(&random_interval(rng)?),
        (2, 0) | (2, 1) => normal_cone_operator(&random_planar_set(rng)?),
        (n, _) => Operator::from_matrix(&random_monotone_matrix(rng, n, skew)),
    }
}

fn assemble<R: Rng + ?Sized>(rng: &mut R, dim: usize, skew: bool) -> Result<Operator> {
    loop {
        let mut blocks = Vec::new();
        let mut left = dim;
        while left > 0 {
            let d = if left >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
            blocks.push(random_block(rng, d, skew)?);
            left -= d;
        }
        let pieces: usize = blocks.iter().map(|b| b.pieces().len()).product();
        if pieces > PIECE_BUDGET {
            continue;
        }
        let op = product_operator(&blocks)?;
        if rng.gen_bool(0.5) {
            return op.congruence_transform(&random_unimodular(rng, dim));
        }
        return Ok(op);
    }
}

/// Product of staircases, normal cones and monotone matrices, optionally
/// transformed by a unimodular congruence.
pub fn random_maximal_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<Operator> {
    assemble(rng, dim, true)
}

/// As [`random_maximal_operator`] without skew parts: every block is a
/// subdifferential, hence 3*.
pub fn random_subdifferential<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<Operator> {
    assemble(rng, dim, false)
}

/// `A + Σ L_k*∘B_k∘L_k` with full-domain monotone `A`, one or two couples,
/// integer `L_k`, and subdifferential `B_k`.
pub fn random_composite_scenario<R: Rng + ?Sized>(rng: &mut R) -> Result<Scenario> {
    let n = rng.gen_range(1..=2);
    let a = Operator::from_matrix(&random_monotone_matrix(rng, n, true))?;
    let mut couples = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let m = rng.gen_range(1..=2);
        let l = Matrix::new(m, n, (0..m * n).map(|_| rat(rng.gen_range(-1..=1))).collect())?;
        couples.push((LinearRelation::from_matrix(&l), random_subdifferential(rng, m)?));
    }
    Scenario::new(a, couples)
}
