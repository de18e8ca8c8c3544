use num::Zero;

use super::{kernel, rref, Matrix, Vector};
use crate::error::{Error, Result};

/// Linear subspace of ℚⁿ with a canonical (RREF) basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn new(ambient_dim: usize, spanning: Vec<Vector>) -> Self {
        let (basis, _) = rref(&spanning, ambient_dim);
        Subspace { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::new(
            ambient_dim,
            (0..ambient_dim).map(|i| Vector::unit(ambient_dim, i)).collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.clone());
        rref(&rows, self.ambient_dim).0.len() == self.basis.len()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::new(self.ambient_dim, all)
    }

    /// Orthogonal projection of `v` onto this subspace.
    pub fn project(&self, v: &Vector) -> Vector {
        if self.basis.is_empty() {
            return Vector::zeros(self.ambient_dim);
        }
        let k = self.basis.len();
        let gram = Matrix::new(
            k,
            k,
            (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| self.basis[i].dot(&self.basis[j]))
                .collect(),
        )
        .expect("gram shape");
        let rhs: Vector = self.basis.iter().map(|b| b.dot(v)).collect();
        let coeffs = gram.inverse().expect("basis is independent").mul_vec(&rhs);
        let mut out = Vector::zeros(self.ambient_dim);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.axpy(c, b);
            }
        }
        out
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient_dim, &self.basis)
    }
}

/// `S^⊥` with respect to the standard scalar product.
pub fn orthogonal_complement(s: &Subspace) -> Subspace {
    kernel(&s.as_matrix())
}

/// Affine hull of a finite point set: a base point (the first input point)
/// and the direction space spanned by the differences.
pub fn affine_hull_points(points: &[Vector]) -> Result<(Vector, Subspace)> {
    let base = points
        .first()
        .ok_or_else(|| Error::Input("affine hull of an empty point list".into()))?;
    let n = base.dim();
    let diffs = points[1..].iter().map(|p| p - base).collect();
    Ok((base.clone(), Subspace::new(n, diffs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dot_all_zero(a: &[Vector], b: &[Vector]) -> bool {
        a.iter().all(|x| b.iter().all(|y| x.dot(y).is_zero()))
    }

    fn v(x: &[i64]) -> Vector {
        Vector::from_ints(x)
    }

    #[test]
    fn complement_examples() {
        let s = Subspace::new(2, vec![v(&[1, 0])]);
        assert_eq!(orthogonal_complement(&s), Subspace::new(2, vec![v(&[0, 1])]));
        assert_eq!(orthogonal_complement(&Subspace::zero(3)), Subspace::full(3));
        let s = Subspace::new(3, vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let c = orthogonal_complement(&s);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&v(&[1, -1, 0])));
    }

    #[test]
    fn affine_hull_examples() {
        let (b, d) = affine_hull_points(&[v(&[1, 1])]).unwrap();
        assert_eq!(b, v(&[1, 1]));
        assert_eq!(d.dim(), 0);
        let (_, d) = affine_hull_points(&[v(&[0, 0]), v(&[1, 0]), v(&[2, 0])]).unwrap();
        assert_eq!(d, Subspace::new(2, vec![v(&[1, 0])]));
        let (_, d) = affine_hull_points(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(d, Subspace::full(2));
        assert!(affine_hull_points(&[]).is_err());
    }

    #[test]
    fn projection() {
        let s = Subspace::new(2, vec![v(&[1, 1])]);
        assert_eq!(s.project(&v(&[2, 0])), v(&[1, 1]));
    }

    fn small_vectors(dim: usize, count: usize) -> impl Strategy<Value = Vec<Vector>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, dim), 0..=count)
            .prop_map(|rows| rows.iter().map(|r| Vector::from_ints(r)).collect())
    }

    proptest! {
        #[test]
        fn complement_is_involution((dim, vecs) in (1usize..=6).prop_flat_map(|d| (Just(d), small_vectors(d, 5)))) {
            let s = Subspace::new(dim, vecs);
            let c = orthogonal_complement(&s);
            prop_assert_eq!(c.dim() + s.dim(), dim);
            prop_assert!(dot_all_zero(s.basis(), c.basis()));
            let cc = orthogonal_complement(&c);
            prop_assert!(cc.contains_subspace(&s) && s.contains_subspace(&cc));
        }

        #[test]
        fn kernel_orthogonal_to_rows((dim, rows) in (1usize..=5).prop_flat_map(|d| (Just(d), small_vectors(d, 4)))) {
            let m = Matrix::from_rows(dim, &rows);
            let k = kernel(&m);
            prop_assert!(dot_all_zero(&rows, k.basis()));
        }

        #[test]
        fn solve_linear_kernel_shift(
            (dim, rows, x) in (1usize..=4).prop_flat_map(|d| (Just(d), small_vectors(d, 4), proptest::collection::vec(-3i64..=3, d)))
        ) {
            let m = Matrix::from_rows(dim, &rows);
            let b = m.mul_vec(&Vector::from_ints(&x));
            let (p, k) = crate::exact_la::solve_linear(&m, &b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&p), b.clone());
            for kv in k.basis() {
                prop_assert_eq!(m.mul_vec(&(&p + kv)), b.clone());
            }
        }
    }
}
