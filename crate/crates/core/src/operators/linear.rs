use super::Operator;
use crate::error::{check_dim, Result};
use crate::exact_la::{orthogonal_complement, solve_linear, Matrix, Subspace, Vector};
use crate::polyhedra::{PolySet, Polyhedron};

/// A set-valued map whose graph is a linear subspace of ℚⁿ × ℚᵐ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRelation {
    dim_in: usize,
    dim_out: usize,
    graph: Subspace,
}

impl LinearRelation {
    pub fn new(dim_in: usize, dim_out: usize, graph: Subspace) -> Result<Self> {
        check_dim("linear relation graph", dim_in + dim_out, graph.ambient_dim())?;
        Ok(LinearRelation {
            dim_in,
            dim_out,
            graph,
        })
    }

    /// Graph spanned by `(e_i, M e_i)`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let basis = (0..cols)
            .map(|i| Vector::unit(cols, i).concat(&m.column(i)))
            .collect();
        LinearRelation {
            dim_in: cols,
            dim_out: rows,
            graph: Subspace::new(cols + rows, basis),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(&Matrix::identity(n))
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    /// `gra L* = {(v, u) : (u, −v) ∈ (gra L)^⊥}`.
    pub fn adjoint(&self) -> LinearRelation {
        let (n, m) = (self.dim_in, self.dim_out);
        let perp = orthogonal_complement(&self.graph);
        let basis = perp
            .basis()
            .iter()
            .map(|g| (-&g.slice(n, n + m)).concat(&g.slice(0, n)))
            .collect();
        LinearRelation {
            dim_in: m,
            dim_out: n,
            graph: Subspace::new(n + m, basis),
        }
    }

    /// The matrix of `L` when it is single-valued with full domain.
    pub fn as_matrix(&self) -> Option<Matrix> {
        let (n, m) = (self.dim_in, self.dim_out);
        if self.graph.dim() != n {
            return None;
        }
        // the graph basis is [I | M] exactly when the x-block has full rank
        let xs = Matrix::from_columns(n, &self.graph.basis().iter().map(|g| g.slice(0, n)).collect::<Vec<_>>());
        let ys = Matrix::from_columns(m, &self.graph.basis().iter().map(|g| g.slice(n, n + m)).collect::<Vec<_>>());
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            let (coef, ker) = solve_linear(&xs, &Vector::unit(n, i)).ok()??;
            if ker.dim() != 0 {
                return None;
            }
            cols.push(ys.mul_vec(&coef));
        }
        Some(Matrix::from_columns(m, &cols))
    }

    pub fn is_single_valued(&self) -> bool {
        let n = self.dim_in;
        // no graph vector of the form (0, y) with y ≠ 0
        self.graph.dim() == Subspace::new(n, self.graph.basis().iter().map(|g| g.slice(0, n)).collect()).dim()
    }

    pub fn to_operator(&self) -> Result<Operator> {
        let p = Polyhedron::subspace(&self.graph);
        Operator::new(self.dim_in, self.dim_out, PolySet::single(p))
    }

    /// `L x` as an affine subspace, or `None` outside the domain.
    pub fn apply(&self, x: &Vector) -> Option<(Vector, Subspace)> {
        let (n, m) = (self.dim_in, self.dim_out);
        let xs = Matrix::from_columns(n, &self.graph.basis().iter().map(|g| g.slice(0, n)).collect::<Vec<_>>());
        let ys = Matrix::from_columns(m, &self.graph.basis().iter().map(|g| g.slice(n, n + m)).collect::<Vec<_>>());
        let (coef, ker) = solve_linear(&xs, x).ok()??;
        let dirs = ker.basis().iter().map(|k| ys.mul_vec(k)).filter(|y| !y.is_zero()).collect();
        Some((ys.mul_vec(&coef), Subspace::new(m, dirs)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::rat;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vector {
        Vector::from_ints(x)
    }

    #[test]
    fn rotation_graph() {
        let l = LinearRelation::from_matrix(&Matrix::from_ints(2, 2, &[0, -1, 1, 0]));
        assert!(l.graph().contains(&v(&[1, 0, 0, 1])));
        assert!(l.graph().contains(&v(&[0, 1, -1, 0])));
        assert_eq!(l.graph().dim(), 2);
    }

    #[test]
    fn zero_map_graph() {
        let l = LinearRelation::from_matrix(&Matrix::zeros(2, 2));
        assert_eq!(l.graph(), &Subspace::new(4, vec![v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0])]));
    }

    #[test]
    fn adjoint_of_matrix_is_transpose() {
        let m = Matrix::from_ints(2, 3, &[1, 2, 0, -1, 3, 4]);
        let adj = LinearRelation::from_matrix(&m).adjoint();
        assert_eq!(adj.as_matrix().unwrap(), m.transpose());
        // pairing identity on basis pairs
        let x = v(&[1, -2, 5]);
        let y = v(&[3, 7]);
        assert_eq!(x.dot(&m.transpose().mul_vec(&y)), m.mul_vec(&x).dot(&y));
    }

    #[test]
    fn adjoint_of_partial_relation() {
        let l = LinearRelation::new(2, 2, Subspace::new(4, vec![v(&[1, 0, 0, 0])])).unwrap();
        let adj = l.adjoint();
        // every v maps onto the vertical line {0} × ℚ
        let (base, dirs) = adj.apply(&v(&[3, -4])).unwrap();
        assert_eq!(base[0], rat(0));
        assert_eq!(dirs, Subspace::new(2, vec![v(&[0, 1])]));
        assert!(!adj.is_single_valued());
    }

    #[test]
    fn identity_is_self_adjoint() {
        let id = LinearRelation::identity(3);
        assert_eq!(id.adjoint(), id);
    }

    proptest! {
        #[test]
        fn adjoint_is_involution(n in 1usize..=3, m in 1usize..=3, entries in proptest::collection::vec(-3i64..=3, 18), k in 0usize..=6) {
            let total = n + m;
            let basis: Vec<Vector> = entries.chunks(total).take(k.min(entries.len() / total)).map(Vector::from_ints).collect();
            let l = LinearRelation::new(n, m, Subspace::new(total, basis)).unwrap();
            prop_assert_eq!(l.adjoint().adjoint(), l);
        }
    }
}
