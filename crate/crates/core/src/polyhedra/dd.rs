//! Double description conversion between H- and V-representations.
//!
//! Both directions reduce to enumerating the generators of a polyhedral cone
//! `{y : A y >= 0, E y = 0}`. Equalities are eliminated up front by
//! parametrizing their kernel; the remaining inequalities are added one at a
//! time, combining adjacent rays across the new hyperplane. Adjacency uses
//! the combinatorial zero-set test, which is exact because the ray list is
//! kept minimal throughout.

use num::{Signed, Zero};

use super::{Constraint, HRep, VRep};
use crate::exact_la::{kernel, solve_linear, Matrix, Rational, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vector,
    zeros: Bits,
}

/// Generators of a polyhedral cone: `cone(rays) + span(lines)`.
#[derive(Clone, Debug, Default)]
pub(crate) struct ConeGenerators {
    pub lines: Vec<Vector>,
    pub rays: Vec<Vector>,
}

/// Generators of `{y in ℚ^dim : a·y >= 0 for a in ineqs, e·y = 0 for e in eqs}`.
pub(crate) fn cone_generators(dim: usize, ineqs: &[Vector], eqs: &[Vector]) -> ConeGenerators {
    let param = if eqs.is_empty() {
        Subspace::full(dim)
    } else {
        kernel(&Matrix::from_rows(dim, eqs))
    };
    let basis = param.basis();
    let k = basis.len();
    if k == 0 {
        return ConeGenerators::default();
    }
    let reduced: Vec<Vector> = ineqs
        .iter()
        .map(|a| basis.iter().map(|b| a.dot(b)).collect())
        .collect();
    let local = dd_free(k, &reduced);
    let lift = |t: &Vector| -> Vector {
        let mut y = Vector::zeros(dim);
        for (c, b) in t.iter().zip(basis) {
            if !c.is_zero() {
                y = y.axpy(c, b);
            }
        }
        y.primitive()
    };
    ConeGenerators {
        lines: local.lines.iter().map(lift).collect(),
        rays: local.rays.iter().map(lift).collect(),
    }
}

/// Double description for `{t in ℚ^k : h·t >= 0}` with no equalities.
fn dd_free(k: usize, ineqs: &[Vector]) -> ConeGenerators {
    let m = ineqs.len();
    let mut lines: Vec<Vector> = (0..k).map(|i| Vector::unit(k, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (i, h) in ineqs.iter().enumerate() {
        if h.is_zero() {
            for r in &mut rays {
                r.zeros.insert(i);
            }
            continue;
        }
        if let Some(j) = lines.iter().position(|l| !h.dot(l).is_zero()) {
            let mut pivot = lines.remove(j);
            let mut hp = h.dot(&pivot);
            if hp.is_negative() {
                pivot = -&pivot;
                hp = -hp;
            }
            for l in &mut lines {
                let c = h.dot(l);
                if !c.is_zero() {
                    *l = l.axpy(&(-c / &hp), &pivot).primitive();
                }
            }
            for r in &mut rays {
                let c = h.dot(&r.v);
                if !c.is_zero() {
                    r.v = r.v.axpy(&(-c / &hp), &pivot).primitive();
                }
                r.zeros.insert(i);
            }
            let mut zeros = Bits::new(m);
            for p in 0..i {
                zeros.insert(p);
            }
            rays.push(Ray {
                v: pivot.primitive(),
                zeros,
            });
            continue;
        }

        let values: Vec<Rational> = rays.iter().map(|r| h.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| values[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| values[r].is_negative()).collect();
        if neg.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        // rank bound: adjacent rays share at least (k - lines - 2) tight constraints
        let needed = (k - lines.len()).saturating_sub(2);
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if common.count() < needed {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != n)
                    .all(|o| !common.is_subset(&rays[o].zeros));
                if !adjacent {
                    continue;
                }
                let v = rays[n]
                    .v
                    .scale(&values[p])
                    .axpy(&(-values[n].clone()), &rays[p].v)
                    .primitive();
                let mut zeros = common;
                zeros.insert(i);
                created.push(Ray { v, zeros });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + created.len());
        for (mut r, val) in rays.into_iter().zip(values) {
            if val.is_negative() {
                continue;
            }
            if val.is_zero() {
                r.zeros.insert(i);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    ConeGenerators {
        lines,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

/// Minimal generators of `{x : A x >= b, E x = e}`.
pub(crate) fn h_to_v(h: &HRep) -> VRep {
    let n = h.dim;
    let (particular, param) = if h.equalities.is_empty() {
        (Vector::zeros(n), Subspace::full(n))
    } else {
        let a = Matrix::from_rows(n, &h.equalities.iter().map(|c| c.normal.clone()).collect::<Vec<_>>());
        let b: Vector = h.equalities.iter().map(|c| c.offset.clone()).collect();
        match solve_linear(&a, &b).expect("shapes agree") {
            Some(sol) => sol,
            None => return VRep::empty(n),
        }
    };
    let basis = param.basis();
    let k = basis.len();
    // homogenized over (t, s): x = p + K t / s, s >= 0
    let mut cone_ineqs = Vec::with_capacity(h.inequalities.len() + 1);
    cone_ineqs.push(Vector::unit(k + 1, k));
    for c in &h.inequalities {
        let mut row: Vec<Rational> = basis.iter().map(|b| c.normal.dot(b)).collect();
        row.push(c.normal.dot(&particular) - &c.offset);
        cone_ineqs.push(Vector::new(row));
    }
    let gens = cone_generators(k + 1, &cone_ineqs, &[]);
    let embed = |t: &Vector| -> Vector {
        let mut y = Vector::zeros(n);
        for (c, b) in t.iter().zip(basis) {
            if !c.is_zero() {
                y = y.axpy(c, b);
            }
        }
        y
    };
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for g in &gens.rays {
        let s = &g[k];
        let t = g.slice(0, k);
        if s.is_positive() {
            vertices.push(&particular + &embed(&t.scale(&s.recip())));
        } else {
            rays.push(embed(&t));
        }
    }
    if vertices.is_empty() {
        return VRep::empty(n);
    }
    let lines = gens.lines.iter().map(|g| embed(&g.slice(0, k))).collect();
    VRep {
        dim: n,
        vertices,
        rays,
        lines,
    }
}

/// Minimal H-representation of `conv(V) + cone(R) + span(L)`.
pub(crate) fn v_to_h(v: &VRep) -> HRep {
    let n = v.dim;
    if v.vertices.is_empty() {
        return HRep::empty(n);
    }
    // dual cone over (a, c): a·x + c >= 0 valid on the polyhedron
    let one = Vector::new(vec![Rational::from_integer(1.into())]);
    let zero = Vector::zeros(1);
    let mut ineqs: Vec<Vector> = v.vertices.iter().map(|p| p.concat(&one)).collect();
    ineqs.extend(v.rays.iter().map(|r| r.concat(&zero)));
    let eqs: Vec<Vector> = v.lines.iter().map(|l| l.concat(&zero)).collect();
    let gens = cone_generators(n + 1, &ineqs, &eqs);
    let split = |g: &Vector| -> Constraint {
        Constraint {
            normal: g.slice(0, n),
            offset: -g[n].clone(),
        }
    };
    let equalities = gens.lines.iter().map(split).collect();
    let inequalities = gens
        .rays
        .iter()
        .map(split)
        .filter(|c| v.vertices.iter().any(|p| c.normal.dot(p) == c.offset))
        .collect();
    HRep {
        dim: n,
        inequalities,
        equalities,
    }
}
