use std::fmt;

use num::Signed;

use super::{Constraint, HRep, Membership, Polyhedron, VRep};
use crate::error::{check_dim, Error, Result};
use crate::exact_la::{frac, Matrix, Vector};
use crate::limits::limits;

/// Finite union of closed convex polyhedra of a common dimension.
#[derive(Clone)]
pub struct PolySet {
    dim: usize,
    pieces: Vec<Polyhedron>,
}

/// Outcome of a set comparison. `witness` lies in the part that breaks the
/// relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverVerdict {
    pub holds: bool,
    pub witness: Option<Vector>,
}

impl CoverVerdict {
    fn yes() -> Self {
        CoverVerdict {
            holds: true,
            witness: None,
        }
    }

    fn no(w: Vector) -> Self {
        CoverVerdict {
            holds: false,
            witness: Some(w),
        }
    }
}

/// `closed ∩ {x : normal·x > offset for each strict}`
struct Region {
    closed: Polyhedron,
    strict: Vec<Constraint>,
}

impl PolySet {
    /// Empty pieces are dropped; exceeding the piece cap is a resource error.
    pub fn new(dim: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        let mut kept: Vec<Polyhedron> = Vec::new();
        for p in pieces {
            check_dim("polyset piece", dim, p.dim())?;
            if p.is_empty() || kept.iter().any(|q| q.vrep() == p.vrep()) {
                continue;
            }
            kept.push(p);
        }
        let mut s = PolySet { dim, pieces: kept };
        let cap = limits().max_pieces;
        if s.pieces.len() > cap {
            s = s.simplify();
            if s.pieces.len() > cap {
                return Err(Error::Resource(format!(
                    "{} pieces exceed the cap of {cap}",
                    s.pieces.len()
                )));
            }
        }
        Ok(s)
    }

    pub fn empty(dim: usize) -> Self {
        PolySet {
            dim,
            pieces: Vec::new(),
        }
    }

    pub fn single(p: Polyhedron) -> Self {
        let dim = p.dim();
        PolySet::new(dim, vec![p]).expect("one piece")
    }

    pub fn full(dim: usize) -> Self {
        PolySet::single(Polyhedron::full(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn union(&self, other: &PolySet) -> Result<PolySet> {
        check_dim("union", self.dim, other.dim)?;
        let mut p = self.pieces.clone();
        p.extend(other.pieces.iter().cloned());
        PolySet::new(self.dim, p)
    }

    pub fn intersect(&self, other: &PolySet) -> Result<PolySet> {
        check_dim("intersect", self.dim, other.dim)?;
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                out.push(a.intersect(b)?);
            }
        }
        Ok(PolySet::new(self.dim, out)?.simplify())
    }

    pub fn intersect_polyhedron(&self, p: &Polyhedron) -> Result<PolySet> {
        self.intersect(&PolySet::single(p.clone()))
    }

    /// Pairwise sums; empty when either operand is empty.
    pub fn minkowski_sum(&self, other: &PolySet) -> Result<PolySet> {
        check_dim("minkowski_sum", self.dim, other.dim)?;
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                out.push(a.minkowski_sum(b)?);
            }
        }
        Ok(PolySet::new(self.dim, out)?.simplify())
    }

    pub fn linear_image(&self, m: &Matrix) -> Result<PolySet> {
        check_dim("linear_image", self.dim, m.cols())?;
        let out = self
            .pieces
            .iter()
            .map(|p| p.linear_image(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolySet::new(m.rows(), out)?.simplify())
    }

    pub fn translate(&self, t: &Vector) -> PolySet {
        PolySet {
            dim: self.dim,
            pieces: self.pieces.iter().map(|p| p.translate(t)).collect(),
        }
    }

    pub fn neg(&self) -> PolySet {
        PolySet {
            dim: self.dim,
            pieces: self.pieces.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn permute(&self, perm: &[usize]) -> PolySet {
        PolySet {
            dim: self.dim,
            pieces: self.pieces.iter().map(|p| p.permute(perm)).collect(),
        }
    }

    pub fn product(&self, other: &PolySet) -> Result<PolySet> {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                out.push(a.product(b));
            }
        }
        PolySet::new(self.dim + other.dim, out)
    }

    pub fn contains_point(&self, x: &Vector) -> bool {
        self.pieces.iter().any(|p| p.contains(x, Membership::Closed))
    }

    /// Closed convex hull of the union. `None` when empty.
    pub fn convex_hull(&self) -> Option<Polyhedron> {
        if self.is_empty() {
            return None;
        }
        let mut v = VRep::empty(self.dim);
        for p in &self.pieces {
            v.vertices.extend(p.vrep().vertices.iter().cloned());
            v.rays.extend(p.vrep().rays.iter().cloned());
            v.lines.extend(p.vrep().lines.iter().cloned());
        }
        Some(Polyhedron::from_v(v).expect("dimensions agree").reduced())
    }

    /// Drops pieces contained in another piece.
    pub fn simplify(&self) -> PolySet {
        let mut keep: Vec<Polyhedron> = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let covered = self.pieces.iter().enumerate().any(|(j, q)| {
                j != i && p.is_subset_of(q) && (!q.is_subset_of(p) || j < i)
            });
            if !covered {
                keep.push(p.clone());
            }
        }
        PolySet {
            dim: self.dim,
            pieces: keep,
        }
    }

    /// Decides `other ⊆ self`. The witness is a point of `other \ self`.
    pub fn covers(&self, other: &PolySet) -> Result<CoverVerdict> {
        check_dim("covers", self.dim, other.dim)?;
        let mut budget = limits().max_branches;
        for q in &other.pieces {
            let mut regions = vec![Region {
                closed: q.clone(),
                strict: Vec::new(),
            }];
            for p in &self.pieces {
                let mut next = Vec::new();
                for r in &regions {
                    subtract(r, p, &mut next, &mut budget)?;
                }
                regions = next;
                if regions.is_empty() {
                    break;
                }
            }
            if let Some(r) = regions.first() {
                return Ok(CoverVerdict::no(uncovered_point(r, &self.pieces)?));
            }
        }
        Ok(CoverVerdict::yes())
    }

    pub fn covers_polyhedron(&self, p: &Polyhedron) -> Result<CoverVerdict> {
        self.covers(&PolySet::single(p.clone()))
    }

    /// Set equality; the witness lies in the symmetric difference.
    pub fn equal(&self, other: &PolySet) -> Result<CoverVerdict> {
        let a = self.covers(other)?;
        if !a.holds {
            return Ok(a);
        }
        other.covers(self)
    }
}

/// A point of a leftover region outside every piece. Pieces meet the
/// region in lower dimension only, so a moment curve through its relative
/// interior avoids them for all but finitely many parameters.
fn uncovered_point(r: &Region, pieces: &[Polyhedron]) -> Result<Vector> {
    let c = r.closed.rel_interior_point()?;
    let (_, dir) = r.closed.affine_hull()?;
    let good = |x: &Vector| {
        r.closed.contains(x, Membership::RelativeInterior)
            && r.strict.iter().all(|s| s.slack(x).is_positive())
            && !pieces.iter().any(|p| p.contains(x, Membership::Closed))
    };
    if good(&c) {
        return Ok(c);
    }
    for m in 2..10_000 {
        let t = frac(1, m);
        let mut x = c.clone();
        let mut tp = t.clone();
        for d in dir.basis() {
            x = x.axpy(&tp, d);
            tp = &tp * &t;
        }
        if good(&x) {
            return Ok(x);
        }
    }
    Err(Error::Resource("no witness found for an uncovered region".into()))
}

fn subtract(r: &Region, p: &Polyhedron, out: &mut Vec<Region>, budget: &mut usize) -> Result<()> {
    if p.is_empty() || r.closed.is_empty() {
        if !r.closed.is_empty() {
            out.push(Region {
                closed: r.closed.clone(),
                strict: r.strict.clone(),
            });
        }
        return Ok(());
    }
    if r.closed.is_subset_of(p) {
        return Ok(());
    }
    // A region is a convex set of full dimension in its affine hull, so a
    // closed piece meeting its closure in lower dimension cannot change
    // whether it is covered: any uncovered part is relatively open and has
    // positive measure. Keeping the region whole avoids needless splitting.
    let k = r.closed.affine_dim();
    if r.closed.intersect(p)?.affine_dim() < k {
        out.push(Region {
            closed: r.closed.clone(),
            strict: r.strict.clone(),
        });
        return Ok(());
    }
    let h = p.hrep();
    let n = p.dim();
    let mut satisfied = HRep::new(n);
    let mut violations: Vec<(HRep, Constraint)> = Vec::new();
    for c in &h.equalities {
        for flip in [false, true] {
            let (a, b) = if flip {
                (-&c.normal, -c.offset.clone())
            } else {
                (c.normal.clone(), c.offset.clone())
            };
            // a·x < b
            let mut branch = satisfied.clone();
            branch = branch.le(a.clone(), b.clone());
            violations.push((branch, Constraint::new(-&a, -b)));
        }
        satisfied = satisfied.eq(c.normal.clone(), c.offset.clone());
    }
    for c in &h.inequalities {
        let branch = satisfied.clone().le(c.normal.clone(), c.offset.clone());
        violations.push((branch, Constraint::new(-&c.normal, -c.offset.clone())));
        satisfied = satisfied.ge(c.normal.clone(), c.offset.clone());
    }
    for (extra, strict) in violations {
        let closed = r.closed.intersect_h(&extra)?;
        if closed.is_empty() {
            continue;
        }
        let x = closed.rel_interior_point()?;
        let mut all = r.strict.clone();
        all.push(strict);
        if all.iter().all(|c| c.slack(&x).is_positive()) {
            if *budget == 0 {
                return Err(Error::Resource("region splitting exceeded the branch cap".into()));
            }
            *budget -= 1;
            out.push(Region { closed, strict: all });
        }
    }
    Ok(())
}

/// Structural equality: same dimension and identical piece lists.
impl PartialEq for PolySet {
    fn eq(&self, other: &PolySet) -> bool {
        self.dim == other.dim
            && self.pieces.len() == other.pieces.len()
            && self.pieces.iter().zip(&other.pieces).all(|(a, b)| a.vrep() == b.vrep())
    }
}

impl fmt::Debug for PolySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PolySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
