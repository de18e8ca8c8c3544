//! Exact minimization of a quadratic function over a polyhedron.
//!
//! A quadratic `f(y) = yᵀHy + c·y + k` is bounded below on a nonempty
//! polyhedron `P` iff (a) `H` is copositive on the recession cone `K` of `P`
//! and (b) `(2Hx + c)·d >= 0` for every `x ∈ P` and every `d ∈ K` with
//! `dᵀHd = 0`; when bounded the minimum is attained. Condition (a) is decided
//! by a support enumeration over the generators of `K`, (b) by splitting the
//! zero set of the form along the faces of `K`, and the minimum value by
//! the stationarity conditions on each face of `P`.

use num::{Integer, One, Signed, Zero};

use crate::error::Result;
use crate::exact_la::{frac, rat, solve_linear, Matrix, Rational, Vector};
use crate::limits::limits;
use crate::polyhedra::{HRep, Polyhedron};

#[derive(Clone, Debug)]
pub struct Quadratic {
    pub h: Matrix,
    pub c: Vector,
    pub k: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadMin {
    Empty,
    Min { value: Rational, point: Vector },
    /// `f(point + t·dir)` strictly decreases along `t = 0, 1, 10, 100, …`.
    Unbounded { point: Vector, dir: Vector },
    Unknown,
}

impl Quadratic {
    pub fn eval(&self, y: &Vector) -> Rational {
        self.form(y, y) + self.c.dot(y) + &self.k
    }

    /// Symmetric bilinear form `aᵀHb`.
    pub fn form(&self, a: &Vector, b: &Vector) -> Rational {
        a.dot(&self.h.mul_vec(b))
    }

    /// Directional slope `(2Hx + c)·d`.
    pub fn slope(&self, x: &Vector, d: &Vector) -> Rational {
        rat(2) * self.form(x, d) + self.c.dot(d)
    }

    /// Rescales `d` so that `t ↦ f(x + t d)` strictly decreases for `t >= 0`
    /// sampled at `0, 1, 10, 100`.
    fn certify(&self, x: Vector, d: Vector) -> QuadMin {
        let a = self.form(&d, &d);
        let b = self.slope(&x, &d);
        let dir = if a.is_negative() && b.is_positive() {
            let s = (b / -a).floor() + Rational::one();
            d.scale(&s)
        } else {
            d
        };
        QuadMin::Unbounded { point: x, dir }
    }
}

/// Returns `x` with `xᵀMx < 0`, or `None` when `M` is positive semidefinite.
pub fn psd_witness(m: &Matrix) -> Option<Vector> {
    let n = m.rows();
    if n == 0 {
        return None;
    }
    if let Some(i) = (0..n).find(|&i| m.get(i, i).is_negative()) {
        return Some(Vector::unit(n, i));
    }
    if let Some(i) = (0..n).find(|&i| m.get(i, i).is_positive()) {
        let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let piv = m.get(i, i).clone();
        let mut s = Matrix::zeros(n - 1, n - 1);
        for (a, &ra) in rest.iter().enumerate() {
            for (b, &rb) in rest.iter().enumerate() {
                s.set(a, b, m.get(ra, rb) - m.get(ra, i) * m.get(i, rb) / &piv);
            }
        }
        let y = psd_witness(&s)?;
        let mut x = Vector::zeros(n);
        let mut acc = Rational::zero();
        for (a, &ra) in rest.iter().enumerate() {
            x[ra] = y[a].clone();
            acc += m.get(i, ra) * &y[a];
        }
        x[i] = -acc / piv;
        return Some(x);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !m.get(i, j).is_zero() {
                let mut x = Vector::unit(n, i);
                x[j] = if m.get(i, j).is_positive() { rat(-1) } else { rat(1) };
                return Some(x);
            }
        }
    }
    None
}

enum Copositivity {
    Yes,
    Witness(Vector),
    Unknown,
}

/// Copositivity of the form on `cone(gens)`; `opposite[i]` names a
/// generator equal to `-gens[i]`, if any.
fn copositive(q: &Quadratic, gens: &[Vector], opposite: &[Option<usize>]) -> Copositivity {
    let k = gens.len();
    if k == 0 {
        return Copositivity::Yes;
    }
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, q.form(&gens[i], &gens[j]));
        }
    }
    if gram.entries().iter().all(|x| !x.is_negative()) {
        return Copositivity::Yes;
    }
    if psd_witness(&gram).is_none() {
        return Copositivity::Yes;
    }
    // a minimizer of μᵀGμ on the simplex with minimal support solves
    // G_S μ = λ 1, Σμ = 1 with a nonsingular system
    let mut budget = limits().max_branches;
    let combine = |support: &[usize], mu: &Vector| -> Vector {
        let mut d = Vector::zeros(gens[0].dim());
        for (a, &i) in support.iter().enumerate() {
            d = d.axpy(&mu[a], &gens[i]);
        }
        d
    };
    for size in 1..=k {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if budget == 0 {
                return Copositivity::Unknown;
            }
            budget -= 1;
            let clash = subset
                .iter()
                .any(|&i| opposite[i].is_some_and(|o| subset.contains(&o)));
            if !clash {
                let s = size + 1;
                let mut sys = Matrix::zeros(s, s);
                for (a, &i) in subset.iter().enumerate() {
                    for (b, &j) in subset.iter().enumerate() {
                        sys.set(a, b, gram.get(i, j).clone());
                    }
                    sys.set(a, size, rat(-1));
                    sys.set(size, a, rat(1));
                }
                let mut rhs = Vector::zeros(s);
                rhs[size] = rat(1);
                if let Ok(Some((sol, ker))) = solve_linear(&sys, &rhs) {
                    if ker.dim() == 0
                        && sol[size].is_negative()
                        && (0..size).all(|a| sol[a].is_positive())
                    {
                        return Copositivity::Witness(combine(&subset, &sol.slice(0, size)));
                    }
                }
            }
            // next subset in lexicographic order
            let mut i = size;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if subset[i] < k - size + i {
                    subset[i] += 1;
                    for j in i + 1..size {
                        subset[j] = subset[j - 1] + 1;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    Copositivity::Yes
}

fn signed_generators(rays: &[Vector], lines: &[Vector]) -> (Vec<Vector>, Vec<Option<usize>>) {
    let mut gens: Vec<Vector> = rays.to_vec();
    let mut opp = vec![None; rays.len()];
    for l in lines {
        let i = gens.len();
        gens.push(l.clone());
        gens.push(-l);
        opp.push(Some(i + 1));
        opp.push(Some(i));
    }
    (gens, opp)
}

/// `⌊a / b⌋ + 1` for `b > 0`: a step that pushes `a − t b` below zero.
fn overshoot(a: &Rational, b: &Rational) -> Rational {
    if a.is_negative() {
        Rational::zero()
    } else {
        (a / b).floor() + Rational::one()
    }
}

pub fn minimize(q: &Quadratic, p: &Polyhedron) -> Result<QuadMin> {
    if p.is_empty() {
        return Ok(QuadMin::Empty);
    }
    let p = p.reduced();
    let v = p.vrep().clone();
    let x0 = v.vertices[0].clone();

    let (gens, opp) = signed_generators(&v.rays, &v.lines);
    match copositive(q, &gens, &opp) {
        Copositivity::Witness(d) => return Ok(q.certify(x0, d)),
        Copositivity::Unknown => return Ok(QuadMin::Unknown),
        Copositivity::Yes => {}
    }

    if !gens.is_empty() {
        let rec = p.recession_cone()?;
        for face in rec.faces() {
            let fv = face.polyhedron.vrep();
            let mut h = HRep::new(p.dim());
            for g in fv.rays.iter().chain(&fv.lines) {
                h = h.eq(q.h.mul_vec(g), Rational::zero());
            }
            let zero_set = face.polyhedron.intersect_h(&h)?;
            let zv = zero_set.vrep();
            let (dirs, _) = signed_generators(&zv.rays, &zv.lines);
            for d in &dirs {
                for x in &v.vertices {
                    if q.slope(x, d).is_negative() {
                        return Ok(q.certify(x.clone(), d.clone()));
                    }
                }
                let (pr, _) = signed_generators(&v.rays, &v.lines);
                for r in &pr {
                    let rate = rat(2) * q.form(r, d);
                    if rate.is_negative() {
                        let t = overshoot(&q.slope(&x0, d), &-rate);
                        let x = x0.axpy(&t, r);
                        return Ok(q.certify(x, d.clone()));
                    }
                }
            }
        }
    }

    let mut best: Option<(Rational, Vector)> = None;
    for face in p.faces() {
        let (_, dir) = face.polyhedron.affine_hull()?;
        let mut h = HRep::new(p.dim());
        for e in dir.basis() {
            h = h.eq(q.h.mul_vec(e).scale(&rat(2)), -q.c.dot(e));
        }
        let stationary = face.polyhedron.intersect_h(&h)?;
        if let Some(y) = stationary.vrep().vertices.first() {
            let val = q.eval(y);
            if best.as_ref().is_none_or(|(b, _)| &val < b) {
                best = Some((val, y.clone()));
            }
        }
    }
    let (value, point) = best.expect("a bounded quadratic attains its minimum");
    Ok(QuadMin::Min { value, point })
}

/// The pairing form `(x, u) ↦ x·u` on ℚⁿ × ℚⁿ, as a symmetric matrix.
pub fn pairing_matrix(n: usize) -> Matrix {
    let mut h = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        h.set(i, n + i, frac(1, 2));
        h.set(n + i, i, frac(1, 2));
    }
    h
}

/// Smallest `t` among `1, 2, 4, …` with `f(x + t d) < 0`.
pub(crate) fn negative_along(q: &Quadratic, x: &Vector, d: &Vector) -> Vector {
    let mut t = Rational::one();
    loop {
        let y = x.axpy(&t, d);
        if q.eval(&y).is_negative() {
            return y;
        }
        t = t * rat(2);
        debug_assert!(t.numer().is_odd() || t < rat(1 << 40), "descent direction did not go negative");
    }
}
