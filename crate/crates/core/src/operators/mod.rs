//! Set-valued operators represented by their graphs.
//!
//! An [`Operator`] from ℚⁿ to ℚᵐ is a [`PolySet`] in ℚⁿ⁺ᵐ whose points are
//! the concatenations `(x, u)` with `u ∈ Mx`. Every construction below is a
//! graph construction: lift the graphs involved into a common coordinate
//! space, intersect, and project.

mod builders;
mod linear;
mod splitting;

pub use builders::{normal_cone_operator, product_operator, staircase};
pub use linear::LinearRelation;
pub use splitting::{dr_displacement, kuhn_tucker, DouglasRachford};

use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::analysis::{MaximalVerdict, MonotoneVerdict, ThreeStarVerdict};
use crate::error::{check_dim, Error, Result};
use crate::exact_la::{rat, Matrix, Rational, Vector};
use crate::limits::limits;
use crate::polyhedra::{selector, HRep, Polyhedron, PolySet};

#[derive(Default)]
pub(crate) struct Certificates {
    pub monotone: OnceLock<MonotoneVerdict>,
    pub maximal: OnceLock<MaximalVerdict>,
    pub three_star: Mutex<Vec<(usize, ThreeStarVerdict)>>,
}

/// Set-valued operator `ℚ^dim_in → 2^(ℚ^dim_out)` given by its graph.
#[derive(Clone)]
pub struct Operator {
    dim_in: usize,
    dim_out: usize,
    graph: PolySet,
    pub(crate) certs: Arc<Certificates>,
}

fn check_op_dim(d: usize) -> Result<()> {
    let cap = limits().max_dim;
    if d > cap {
        return Err(Error::Resource(format!(
            "operator dimension {d} exceeds cap {cap}"
        )));
    }
    Ok(())
}

fn seq(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

/// Lifts one piece of each set into ℚ^`total` at the given positions,
/// intersects them with `extra`, and maps every nonempty intersection by
/// `out`. Runs over all combinations of pieces.
pub(crate) fn combine(
    total: usize,
    blocks: &[(&PolySet, Vec<usize>)],
    extra: &HRep,
    out: &Matrix,
) -> Result<PolySet> {
    if blocks.iter().any(|(s, _)| s.is_empty()) {
        return Ok(PolySet::empty(out.rows()));
    }
    let lifted: Vec<Vec<HRep>> = blocks
        .iter()
        .map(|(s, pos)| s.pieces().iter().map(|p| p.hrep().lift(total, pos)).collect())
        .collect();
    let mut idx = vec![0usize; blocks.len()];
    let mut pieces = Vec::new();
    loop {
        let mut h = extra.clone();
        for (b, &i) in idx.iter().enumerate() {
            h.extend(&lifted[b][i]);
        }
        let p = Polyhedron::from_h(h)?;
        if !p.is_empty() {
            pieces.push(p.linear_image(out)?);
        }
        let mut b = 0;
        loop {
            if b == idx.len() {
                return Ok(PolySet::new(out.rows(), pieces)?.simplify());
            }
            idx[b] += 1;
            if idx[b] < lifted[b].len() {
                break;
            }
            idx[b] = 0;
            b += 1;
        }
    }
}

/// Matrix from `(row, col, value)` triples; repeated positions add up.
pub(crate) fn sparse_matrix(rows: usize, cols: usize, entries: &[(usize, usize, Rational)]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (r, c, v) in entries {
        let cur = m.get(*r, *c) + v;
        m.set(*r, *c, cur);
    }
    m
}

impl Operator {
    pub fn new(dim_in: usize, dim_out: usize, graph: PolySet) -> Result<Self> {
        check_dim("operator graph", dim_in + dim_out, graph.dim())?;
        check_op_dim(dim_in)?;
        check_op_dim(dim_out)?;
        Ok(Operator {
            dim_in,
            dim_out,
            graph,
            certs: Arc::default(),
        })
    }

    pub fn from_pieces(dim_in: usize, dim_out: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        Self::new(dim_in, dim_out, PolySet::new(dim_in + dim_out, pieces)?)
    }

    /// The single-valued linear map `x ↦ M x`.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        LinearRelation::from_matrix(m).to_operator()
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_matrix(&Matrix::identity(n))
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_matrix(&Matrix::zeros(n, n))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn graph(&self) -> &PolySet {
        &self.graph
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        self.graph.pieces()
    }

    fn input_selector(&self) -> Matrix {
        selector(self.dim_in + self.dim_out, &seq(0, self.dim_in))
    }

    fn output_selector(&self) -> Matrix {
        selector(self.dim_in + self.dim_out, &seq(self.dim_in, self.dim_out))
    }

    pub fn domain(&self) -> Result<PolySet> {
        self.graph.linear_image(&self.input_selector())
    }

    pub fn range(&self) -> Result<PolySet> {
        self.graph.linear_image(&self.output_selector())
    }

    pub fn graph_contains(&self, x: &Vector, u: &Vector) -> bool {
        x.dim() == self.dim_in && u.dim() == self.dim_out && self.graph.contains_point(&x.concat(u))
    }

    /// The value set `M x`; empty outside the domain.
    pub fn apply(&self, x: &Vector) -> Result<PolySet> {
        check_dim("apply", self.dim_in, x.dim())?;
        let total = self.dim_in + self.dim_out;
        let mut h = HRep::new(total);
        for i in 0..self.dim_in {
            h = h.eq(Vector::unit(total, i), x[i].clone());
        }
        let sel = self.output_selector();
        let mut out = Vec::new();
        for p in self.pieces() {
            let slice = p.intersect_h(&h)?;
            if !slice.is_empty() {
                out.push(slice.linear_image(&sel)?);
            }
        }
        PolySet::new(self.dim_out, out)
    }

    /// `M(S) = ∪_{x ∈ S} M x`.
    pub fn image_of_set(&self, s: &PolySet) -> Result<PolySet> {
        check_dim("image_of_set", self.dim_in, s.dim())?;
        let total = self.dim_in + self.dim_out;
        combine(
            total,
            &[(&self.graph, seq(0, total)), (s, seq(0, self.dim_in))],
            &HRep::new(total),
            &self.output_selector(),
        )
    }

    /// Graph with the two blocks swapped.
    pub fn inverse(&self) -> Operator {
        let (n, m) = (self.dim_in, self.dim_out);
        let perm: Vec<usize> = (0..n).map(|i| m + i).chain(0..m).collect();
        Operator {
            dim_in: m,
            dim_out: n,
            graph: self.graph.permute(&perm),
            certs: Arc::default(),
        }
    }

    /// `x ↦ c · M x`.
    pub fn scale(&self, c: &Rational) -> Result<Operator> {
        let (n, m) = (self.dim_in, self.dim_out);
        let mut entries: Vec<(usize, usize, Rational)> = (0..n).map(|i| (i, i, rat(1))).collect();
        entries.extend((0..m).map(|j| (n + j, n + j, c.clone())));
        let map = sparse_matrix(n + m, n + m, &entries);
        Operator::new(n, m, self.graph.linear_image(&map)?)
    }

    /// `x ↦ M x + N x`.
    pub fn op_sum(&self, other: &Operator) -> Result<Operator> {
        check_dim("op_sum (input)", self.dim_in, other.dim_in)?;
        check_dim("op_sum (output)", self.dim_out, other.dim_out)?;
        let (n, m) = (self.dim_in, self.dim_out);
        // coordinates (x, u, v)
        let total = n + 2 * m;
        let mut entries: Vec<(usize, usize, Rational)> = (0..n).map(|i| (i, i, rat(1))).collect();
        for j in 0..m {
            entries.push((n + j, n + j, rat(1)));
            entries.push((n + j, n + m + j, rat(1)));
        }
        let out = sparse_matrix(n + m, total, &entries);
        let v_pos: Vec<usize> = seq(0, n).into_iter().chain(seq(n + m, m)).collect();
        let graph = combine(
            total,
            &[(&self.graph, seq(0, n + m)), (&other.graph, v_pos)],
            &HRep::new(total),
            &out,
        )?;
        Operator::new(n, m, graph)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.op_sum(&other.scale(&rat(-1))?)
    }

    /// `Σ c_i M_i`.
    pub fn linear_combination(terms: &[(Rational, &Operator)]) -> Result<Operator> {
        let (c0, first) = terms
            .first()
            .ok_or_else(|| Error::Input("empty linear combination".into()))?;
        let mut acc = first.scale(c0)?;
        for (c, op) in &terms[1..] {
            acc = acc.op_sum(&op.scale(c)?)?;
        }
        Ok(acc)
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &Operator) -> Result<Operator> {
        check_dim("composition", self.dim_out, next.dim_in)?;
        let (n, m, k) = (self.dim_in, self.dim_out, next.dim_out);
        // coordinates (x, y, z)
        let total = n + m + k;
        let out = selector(total, &seq(0, n).into_iter().chain(seq(n + m, k)).collect::<Vec<_>>());
        let graph = combine(
            total,
            &[(&self.graph, seq(0, n + m)), (&next.graph, seq(n, m + k))],
            &HRep::new(total),
            &out,
        )?;
        Operator::new(n, k, graph)
    }

    /// `J_M = (Id + M)⁻¹`, as the image of the graph under `(x, u) ↦ (x + u, x)`.
    pub fn resolvent(&self) -> Result<Operator> {
        check_dim("resolvent", self.dim_in, self.dim_out)?;
        let n = self.dim_in;
        let mut entries = Vec::new();
        for i in 0..n {
            entries.push((i, i, rat(1)));
            entries.push((i, n + i, rat(1)));
            entries.push((n + i, i, rat(1)));
        }
        let map = sparse_matrix(2 * n, 2 * n, &entries);
        Operator::new(n, n, self.graph.linear_image(&map)?)
    }

    /// `R_M = 2 J_M − Id`.
    pub fn reflected_resolvent(&self) -> Result<Operator> {
        let id = Operator::identity(self.dim_in)?;
        Operator::linear_combination(&[(rat(2), &self.resolvent()?), (rat(-1), &id)])
    }

    /// Graph `{(S x, S⁻ᵀ u)}`; preserves the monotone pairing.
    pub fn congruence_transform(&self, s: &Matrix) -> Result<Operator> {
        check_dim("congruence_transform (input)", self.dim_in, s.cols())?;
        check_dim("congruence_transform (output)", self.dim_out, s.cols())?;
        let inv = s
            .inverse()
            .ok_or_else(|| Error::Input("congruence by a singular matrix".into()))?;
        let map = s.block_diag(&inv.transpose());
        Operator::new(self.dim_in, self.dim_out, self.graph.linear_image(&map)?)
    }

    /// The same operator with graph piece `i` deleted.
    pub fn remove_piece(&self, i: usize) -> Result<Operator> {
        if i >= self.pieces().len() {
            return Err(Error::Input(format!(
                "piece {i} out of range ({} pieces)",
                self.pieces().len()
            )));
        }
        let mut pieces = self.pieces().to_vec();
        pieces.remove(i);
        Operator::from_pieces(self.dim_in, self.dim_out, pieces)
    }

    /// Exact graph equality.
    pub fn same_graph(&self, other: &Operator) -> Result<bool> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Ok(false);
        }
        Ok(self.graph.equal(&other.graph)?.holds)
    }
}

/// `L* ∘ B ∘ L`.
pub fn sandwich(l: &LinearRelation, b: &Operator) -> Result<Operator> {
    check_dim("sandwich", l.dim_out(), b.dim_in())?;
    let lo = l.to_operator()?;
    lo.then(b)?.then(&l.adjoint().to_operator()?)
}

/// Data of a composite `A + Σ L_k* ∘ B_k ∘ L_k`.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub a: Operator,
    pub couples: Vec<(LinearRelation, Operator)>,
    pub options: ScenarioOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioOptions {
    pub probe_budget: usize,
    pub chain_samples: usize,
    pub seed: u64,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions {
            probe_budget: limits().probe_budget,
            chain_samples: 100,
            seed: 0,
        }
    }
}

impl Scenario {
    pub fn new(a: Operator, couples: Vec<(LinearRelation, Operator)>) -> Result<Self> {
        check_dim("scenario operator A", a.dim_in(), a.dim_out())?;
        for (l, b) in &couples {
            check_dim("scenario L_k input", a.dim_in(), l.dim_in())?;
            check_dim("scenario B_k input", l.dim_out(), b.dim_in())?;
            check_dim("scenario B_k output", b.dim_in(), b.dim_out())?;
        }
        Ok(Scenario {
            a,
            couples,
            options: ScenarioOptions::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim_in()
    }

    /// `A + Σ L_k* ∘ B_k ∘ L_k`.
    pub fn composite(&self) -> Result<Operator> {
        let mut acc = self.a.clone();
        for (l, b) in &self.couples {
            acc = acc.op_sum(&sandwich(l, b)?)?;
        }
        Ok(acc)
    }

    /// `D = ∩_k L_k⁻¹(dom B_k)`.
    pub fn d_set(&self) -> Result<PolySet> {
        let mut d = PolySet::full(self.dim());
        for (l, b) in &self.couples {
            let pre = l.to_operator()?.inverse().image_of_set(&b.domain()?)?;
            d = d.intersect(&pre)?;
        }
        Ok(d)
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "operator {}→{} with graph {}",
            self.dim_in, self.dim_out, self.graph
        )
    }
}
