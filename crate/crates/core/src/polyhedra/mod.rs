//! Closed convex polyhedra in ℚⁿ and finite unions of them.
//!
//! A [`Polyhedron`] always carries its generators (V-representation); the
//! inequality description is derived by double description on first use and
//! cached. Cached H-representations are canonical: equalities in RREF,
//! inequalities facet-defining, reduced modulo the equalities, scaled to
//! primitive integers and sorted. In particular no inequality is an implicit
//! equality, which is what relative-interior membership relies on.

mod dd;
mod faces;
mod polyset;

pub use faces::Face;
pub use polyset::{CoverVerdict, PolySet};

use std::fmt;
use std::sync::OnceLock;

use num::{One, Signed, Zero};
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::exact_la::{frac, rat, rref, Matrix, Rational, Subspace, Vector};
use crate::limits::limits;

/// `⟨normal, x⟩ >= offset` (inequality) or `⟨normal, x⟩ = offset` (equality).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub normal: Vector,
    pub offset: Rational,
}

impl Constraint {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        Constraint { normal, offset }
    }

    pub fn slack(&self, x: &Vector) -> Rational {
        self.normal.dot(x) - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<Constraint>,
    pub equalities: Vec<Constraint>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    /// The canonical empty set `0 >= 1`.
    pub fn empty(dim: usize) -> Self {
        HRep {
            dim,
            inequalities: vec![Constraint::new(Vector::zeros(dim), Rational::one())],
            equalities: Vec::new(),
        }
    }

    pub fn ge(mut self, normal: Vector, offset: Rational) -> Self {
        self.inequalities.push(Constraint::new(normal, offset));
        self
    }

    pub fn le(self, normal: Vector, offset: Rational) -> Self {
        self.ge(-&normal, -offset)
    }

    pub fn eq(mut self, normal: Vector, offset: Rational) -> Self {
        self.equalities.push(Constraint::new(normal, offset));
        self
    }

    pub fn extend(&mut self, other: &HRep) {
        self.inequalities.extend(other.inequalities.iter().cloned());
        self.equalities.extend(other.equalities.iter().cloned());
    }

    fn validate(&self) -> Result<()> {
        for c in self.inequalities.iter().chain(&self.equalities) {
            check_dim("constraint normal", self.dim, c.normal.dim())?;
        }
        Ok(())
    }

    /// Lifts the constraints into ℚ^`total`, coordinate `i` going to
    /// `positions[i]`.
    pub fn lift(&self, total: usize, positions: &[usize]) -> HRep {
        let map = |c: &Constraint| {
            let mut n = Vector::zeros(total);
            for (i, &p) in positions.iter().enumerate() {
                n[p] = c.normal[i].clone();
            }
            Constraint::new(n, c.offset.clone())
        };
        HRep {
            dim: total,
            inequalities: self.inequalities.iter().map(map).collect(),
            equalities: self.equalities.iter().map(map).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

impl VRep {
    pub fn empty(dim: usize) -> Self {
        VRep {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn new(dim: usize, vertices: Vec<Vector>, rays: Vec<Vector>, lines: Vec<Vector>) -> Self {
        VRep {
            dim,
            vertices,
            rays,
            lines,
        }
    }

    fn validate(&self) -> Result<()> {
        for g in self.vertices.iter().chain(&self.rays).chain(&self.lines) {
            check_dim("generator", self.dim, g.dim())?;
        }
        Ok(())
    }

    pub fn map(&self, m: &Matrix) -> VRep {
        VRep {
            dim: m.rows(),
            vertices: self.vertices.iter().map(|v| m.mul_vec(v)).collect(),
            rays: self.rays.iter().map(|v| m.mul_vec(v)).collect(),
            lines: self.lines.iter().map(|v| m.mul_vec(v)).collect(),
        }
    }
}

fn canonical_h(h: HRep) -> HRep {
    let n = h.dim;
    let rows: Vec<Vector> = h
        .equalities
        .iter()
        .map(|c| c.normal.concat(&Vector::new(vec![c.offset.clone()])))
        .collect();
    let (rows, pivots) = rref(&rows, n + 1);
    if pivots.last() == Some(&n) {
        return HRep::empty(n);
    }
    let equalities: Vec<Constraint> = rows
        .iter()
        .map(|r| Constraint::new(r.slice(0, n), r[n].clone()))
        .collect();
    let mut inequalities = Vec::new();
    for c in h.inequalities {
        let mut full = c.normal.concat(&Vector::new(vec![c.offset]));
        for (row, &p) in rows.iter().zip(&pivots) {
            if !full[p].is_zero() {
                let f = -full[p].clone();
                full = full.axpy(&f, row);
            }
        }
        let full = full.primitive();
        let normal = full.slice(0, n);
        let offset = full[n].clone();
        if normal.is_zero() {
            if offset.is_positive() {
                return HRep::empty(n);
            }
            continue;
        }
        inequalities.push(Constraint::new(normal, offset));
    }
    inequalities.sort();
    inequalities.dedup();
    HRep {
        dim: n,
        inequalities,
        equalities,
    }
}

fn canonical_v(v: VRep) -> VRep {
    let n = v.dim;
    if v.vertices.is_empty() {
        return VRep::empty(n);
    }
    let (lines, pivots) = rref(&v.lines, n);
    let reduce = |x: &Vector| -> Vector {
        let mut x = x.clone();
        for (l, &p) in lines.iter().zip(&pivots) {
            if !x[p].is_zero() {
                let f = -x[p].clone();
                x = x.axpy(&f, l);
            }
        }
        x
    };
    let mut vertices: Vec<Vector> = v.vertices.iter().map(reduce).collect();
    vertices.sort();
    vertices.dedup();
    let mut rays: Vec<Vector> = v
        .rays
        .iter()
        .map(|r| reduce(r).primitive())
        .filter(|r| !r.is_zero())
        .collect();
    rays.sort();
    rays.dedup();
    VRep {
        dim: n,
        vertices,
        rays,
        lines,
    }
}

/// Membership mode for [`Polyhedron::contains`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The closed set, boundary included.
    Closed,
    /// Interior relative to the affine hull.
    RelativeInterior,
}

/// Closed convex polyhedron with a cached dual description.
#[derive(Clone)]
pub struct Polyhedron {
    dim: usize,
    v: VRep,
    v_minimal: bool,
    h: OnceLock<HRep>,
}

fn check_cap(dim: usize) -> Result<()> {
    let cap = limits().max_ambient;
    if dim > cap {
        return Err(Error::Resource(format!(
            "polyhedron ambient dimension {dim} exceeds cap {cap}"
        )));
    }
    Ok(())
}

impl Polyhedron {
    pub fn from_h(h: HRep) -> Result<Self> {
        h.validate()?;
        check_cap(h.dim)?;
        let v = canonical_v(dd::h_to_v(&h));
        Ok(Polyhedron {
            dim: h.dim,
            v,
            v_minimal: true,
            h: OnceLock::new(),
        })
    }

    pub fn from_v(v: VRep) -> Result<Self> {
        v.validate()?;
        check_cap(v.dim)?;
        Ok(Polyhedron {
            dim: v.dim,
            v: canonical_v(v),
            v_minimal: false,
            h: OnceLock::new(),
        })
    }

    /// Both descriptions supplied by the caller, who guarantees they agree
    /// and that `h` has no implicit equalities.
    pub(crate) fn from_parts(v: VRep, h: HRep, v_minimal: bool) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(canonical_h(h));
        Polyhedron {
            dim: v.dim,
            v: canonical_v(v),
            v_minimal,
            h: cell,
        }
    }

    pub fn full(dim: usize) -> Self {
        let lines = (0..dim).map(|i| Vector::unit(dim, i)).collect();
        Self::from_parts(
            VRep::new(dim, vec![Vector::zeros(dim)], vec![], lines),
            HRep::new(dim),
            true,
        )
    }

    pub fn empty(dim: usize) -> Self {
        Self::from_parts(VRep::empty(dim), HRep::empty(dim), true)
    }

    pub fn point(p: Vector) -> Self {
        let n = p.dim();
        let mut h = HRep::new(n);
        for i in 0..n {
            h = h.eq(Vector::unit(n, i), p[i].clone());
        }
        Self::from_parts(VRep::new(n, vec![p], vec![], vec![]), h, true)
    }

    /// The affine subspace `base + dir`.
    pub fn affine(base: Vector, dir: &Subspace) -> Self {
        let n = base.dim();
        let mut h = HRep::new(n);
        for c in crate::exact_la::orthogonal_complement(dir).basis() {
            h = h.eq(c.clone(), c.dot(&base));
        }
        Self::from_parts(
            VRep::new(n, vec![base], vec![], dir.basis().to_vec()),
            h,
            true,
        )
    }

    pub fn subspace(dir: &Subspace) -> Self {
        Self::affine(Vector::zeros(dir.ambient_dim()), dir)
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn bounding_box(lo: &Vector, hi: &Vector) -> Result<Self> {
        check_dim("box corners", lo.dim(), hi.dim())?;
        let n = lo.dim();
        let mut h = HRep::new(n);
        for i in 0..n {
            h = h
                .ge(Vector::unit(n, i), lo[i].clone())
                .le(Vector::unit(n, i), hi[i].clone());
        }
        Self::from_h(h)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vrep(&self) -> &VRep {
        &self.v
    }

    pub fn hrep(&self) -> &HRep {
        self.h
            .get_or_init(|| canonical_h(dd::v_to_h(&self.v)))
    }

    pub fn is_empty(&self) -> bool {
        self.v.vertices.is_empty()
    }

    /// Same set with an irredundant generator list.
    pub fn reduced(&self) -> Polyhedron {
        if self.v_minimal {
            return self.clone();
        }
        let h = self.hrep().clone();
        let v = canonical_v(dd::h_to_v(&h));
        Polyhedron::from_parts(v, h, true)
    }

    /// Ensures both descriptions are present.
    pub fn dd_convert(&self) -> Polyhedron {
        let p = self.reduced();
        p.hrep();
        p
    }

    pub fn is_bounded(&self) -> bool {
        self.v.rays.is_empty() && self.v.lines.is_empty()
    }

    pub fn contains(&self, x: &Vector, mode: Membership) -> bool {
        if x.dim() != self.dim || self.is_empty() {
            return false;
        }
        let h = self.hrep();
        if h.equalities.iter().any(|c| !c.slack(x).is_zero()) {
            return false;
        }
        h.inequalities.iter().all(|c| {
            let s = c.slack(x);
            match mode {
                Membership::Closed => !s.is_negative(),
                Membership::RelativeInterior => s.is_positive(),
            }
        })
    }

    /// A strictly positive combination of all generators.
    pub fn rel_interior_point(&self) -> Result<Vector> {
        if self.is_empty() {
            return Err(Error::Input("relative interior of an empty polyhedron".into()));
        }
        let v = &self.v;
        let mut p = Vector::sum(self.dim, &v.vertices)
            .scale(&frac(1, v.vertices.len() as i64));
        if !v.rays.is_empty() {
            let r = Vector::sum(self.dim, &v.rays).scale(&frac(1, 2 * v.rays.len() as i64));
            p = &p + &r;
        }
        Ok(p)
    }

    pub fn affine_hull(&self) -> Result<(Vector, Subspace)> {
        if self.is_empty() {
            return Err(Error::Input("affine hull of an empty polyhedron".into()));
        }
        let base = self.v.vertices[0].clone();
        let mut dirs: Vec<Vector> = self.v.vertices[1..].iter().map(|p| p - &base).collect();
        dirs.extend(self.v.rays.iter().cloned());
        dirs.extend(self.v.lines.iter().cloned());
        Ok((base, Subspace::new(self.dim, dirs)))
    }

    /// Dimension of the affine hull; `None` for the empty set.
    pub fn affine_dim(&self) -> Option<usize> {
        self.affine_hull().ok().map(|(_, d)| d.dim())
    }

    pub fn recession_cone(&self) -> Result<Polyhedron> {
        if self.is_empty() {
            return Err(Error::Input("recession cone of an empty polyhedron".into()));
        }
        Polyhedron::from_v(VRep::new(
            self.dim,
            vec![Vector::zeros(self.dim)],
            self.v.rays.clone(),
            self.v.lines.clone(),
        ))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim("intersect", self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut h = self.hrep().clone();
        h.extend(other.hrep());
        Polyhedron::from_h(h)
    }

    pub fn intersect_h(&self, extra: &HRep) -> Result<Polyhedron> {
        check_dim("intersect", self.dim, extra.dim)?;
        if self.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut h = self.hrep().clone();
        h.extend(extra);
        Polyhedron::from_h(h)
    }

    pub fn linear_image(&self, m: &Matrix) -> Result<Polyhedron> {
        check_dim("linear_image", self.dim, m.cols())?;
        if self.is_empty() {
            return Ok(Polyhedron::empty(m.rows()));
        }
        Polyhedron::from_v(self.v.map(m))
    }

    pub fn translate(&self, t: &Vector) -> Polyhedron {
        let mut v = self.v.clone();
        for p in &mut v.vertices {
            *p = &*p + t;
        }
        Polyhedron {
            dim: self.dim,
            v: canonical_v(v),
            v_minimal: self.v_minimal,
            h: OnceLock::new(),
        }
    }

    pub fn neg(&self) -> Polyhedron {
        let m = Matrix::identity(self.dim).scale(&rat(-1));
        self.linear_image(&m).expect("square map")
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim("minkowski_sum", self.dim, other.dim)?;
        if self.is_empty() || other.is_empty() {
            return Err(Error::Input("Minkowski sum with an empty polyhedron".into()));
        }
        let (a, b) = (&self.v, &other.v);
        let mut vertices = Vec::with_capacity(a.vertices.len() * b.vertices.len());
        for p in &a.vertices {
            for q in &b.vertices {
                vertices.push(p + q);
            }
        }
        let rays = a.rays.iter().chain(&b.rays).cloned().collect();
        let lines = a.lines.iter().chain(&b.lines).cloned().collect();
        Polyhedron::from_v(VRep::new(self.dim, vertices, rays, lines)).map(|p| p.reduced())
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let (n, m) = (self.dim, other.dim);
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(n + m);
        }
        let zn = Vector::zeros(n);
        let zm = Vector::zeros(m);
        let (a, b) = (&self.v, &other.v);
        let mut vertices = Vec::new();
        for p in &a.vertices {
            for q in &b.vertices {
                vertices.push(p.concat(q));
            }
        }
        let rays = a
            .rays
            .iter()
            .map(|r| r.concat(&zm))
            .chain(b.rays.iter().map(|r| zn.concat(r)))
            .collect();
        let lines = a
            .lines
            .iter()
            .map(|r| r.concat(&zm))
            .chain(b.lines.iter().map(|r| zn.concat(r)))
            .collect();
        let left: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..n + m).collect();
        let mut h = self.hrep().lift(n + m, &left);
        h.extend(&other.hrep().lift(n + m, &right));
        Polyhedron::from_parts(
            VRep::new(n + m, vertices, rays, lines),
            h,
            self.v_minimal && other.v_minimal,
        )
    }

    /// Moves coordinate `i` to position `perm[i]`; both descriptions are
    /// carried over without recomputation.
    pub fn permute(&self, perm: &[usize]) -> Polyhedron {
        let n = self.dim;
        assert_eq!(perm.len(), n, "permutation length");
        let move_vec = |x: &Vector| {
            let mut y = Vector::zeros(n);
            for (i, &p) in perm.iter().enumerate() {
                y[p] = x[i].clone();
            }
            y
        };
        let v = VRep::new(
            n,
            self.v.vertices.iter().map(move_vec).collect(),
            self.v.rays.iter().map(move_vec).collect(),
            self.v.lines.iter().map(move_vec).collect(),
        );
        Polyhedron::from_parts(v, self.hrep().lift(n, perm), self.v_minimal)
    }

    /// Every generator of `self` satisfies every constraint of `other`.
    pub fn is_subset_of(&self, other: &Polyhedron) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() || self.dim != other.dim {
            return false;
        }
        let h = other.hrep();
        let v = &self.v;
        v.vertices.iter().all(|p| other.contains(p, Membership::Closed))
            && v.rays.iter().all(|r| {
                h.equalities.iter().all(|c| c.normal.dot(r).is_zero())
                    && h.inequalities.iter().all(|c| !c.normal.dot(r).is_negative())
            })
            && v.lines.iter().all(|l| {
                h.equalities
                    .iter()
                    .chain(&h.inequalities)
                    .all(|c| c.normal.dot(l).is_zero())
            })
    }

    pub fn same_set(&self, other: &Polyhedron) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// A random point: positive convex weights on the vertices plus small
    /// nonnegative ray and arbitrary line multiples.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vector> {
        if self.is_empty() {
            return Err(Error::Input("sampling from an empty polyhedron".into()));
        }
        let v = &self.v;
        let weights: Vec<i64> = v.vertices.iter().map(|_| rng.gen_range(0..=4)).collect();
        let total: i64 = weights.iter().sum();
        let mut p = if total == 0 {
            v.vertices[rng.gen_range(0..v.vertices.len())].clone()
        } else {
            let mut acc = Vector::zeros(self.dim);
            for (w, q) in weights.iter().zip(&v.vertices) {
                acc = acc.axpy(&frac(*w, total), q);
            }
            acc
        };
        for r in &v.rays {
            p = p.axpy(&frac(rng.gen_range(0..=6), 2), r);
        }
        for l in &v.lines {
            p = p.axpy(&frac(rng.gen_range(-6..=6), 2), l);
        }
        Ok(p)
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[Vector]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        if self.is_empty() {
            return write!(f, "empty({})", self.dim);
        }
        write!(
            f,
            "V[vertices={} rays={} lines={}]",
            list(&self.v.vertices),
            list(&self.v.rays),
            list(&self.v.lines)
        )
    }
}

/// Coordinate selection matrix: picks `coords` out of ℚ^`dim`.
pub fn selector(dim: usize, coords: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(coords.len(), dim);
    for (i, &c) in coords.iter().enumerate() {
        m.set(i, c, Rational::one());
    }
    m
}
