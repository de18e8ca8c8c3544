use std::fmt;

use num::{One, Zero};

use super::{Rational, Subspace, Vector};
use crate::error::{check_dim, Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Input(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::new(rows, cols, data.iter().map(|&x| super::rat(x)).collect())
            .expect("entry count")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.dim(), cols, "row length");
            data.extend(r.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vector]) -> Self {
        Self::from_rows(rows, cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(v.dim(), self.cols, "matrix-vector dimension");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim("matrix product", self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dim("matrix sum (rows)", self.rows, other.rows)?;
        check_dim("matrix sum (cols)", self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        rref(&self.row_vectors(), self.cols).1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vector> = (0..n)
            .map(|i| self.row(i).concat(&Vector::unit(n, i)))
            .collect();
        let (rows, pivots) = rref(&aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let data = rows.iter().flat_map(|r| r.entries()[n..].to_vec()).collect();
        Some(Matrix {
            rows: n,
            cols: n,
            data,
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let rows: Vec<Vector> = (0..self.rows)
            .map(|i| self.row(i).concat(&other.row(i)))
            .collect();
        Matrix::from_rows(self.cols + other.cols, &rows)
    }

    /// Vertical concatenation `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.row_vectors();
        rows.extend(other.row_vectors());
        Matrix::from_rows(self.cols, &rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with lexicographic pivot order.
///
/// Returns the nonzero reduced rows and their pivot columns.
pub fn rref(rows: &[Vector], cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        m[r] = m[r].scale(&inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = -m[i][c].clone();
                m[i] = m[i].axpy(&f, &m[r]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Solves `a x = b` exactly; `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Option<(Vector, Subspace)>> {
    check_dim("solve_linear", a.rows(), b.dim())?;
    let n = a.cols();
    let aug: Vec<Vector> = (0..a.rows())
        .map(|i| a.row(i).concat(&Vector::new(vec![b[i].clone()])))
        .collect();
    let (rows, pivots) = rref(&aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = Vector::zeros(n);
    for (row, &p) in rows.iter().zip(&pivots) {
        particular[p] = row[n].clone();
    }
    Ok(Some((particular, kernel(a))))
}

/// Exact null space `{x : a x = 0}`.
pub fn kernel(a: &Matrix) -> Subspace {
    let n = a.cols();
    let (rows, pivots) = rref(&a.row_vectors(), n);
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = Vector::zeros(n);
        v[free] = Rational::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    Subspace::new(n, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::rat;

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(2);
        let (x, k) = solve_linear(&a, &Vector::from_ints(&[3, 5])).unwrap().unwrap();
        assert_eq!(x, Vector::from_ints(&[3, 5]));
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn solve_underdetermined() {
        let a = Matrix::from_ints(1, 2, &[1, 1]);
        let (x, k) = solve_linear(&a, &Vector::from_ints(&[2])).unwrap().unwrap();
        assert_eq!(x, Vector::from_ints(&[2, 0]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&Vector::from_ints(&[1, -1])));
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::from_ints(2, 2, &[1, 0, 1, 0]);
        assert!(solve_linear(&a, &Vector::from_ints(&[0, 1])).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_error() {
        let a = Matrix::identity(2);
        assert!(matches!(
            solve_linear(&a, &Vector::from_ints(&[1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::identity(2)).dim(), 0);
        let full = kernel(&Matrix::zeros(1, 2));
        assert_eq!(full.dim(), 2);
        let k = kernel(&Matrix::from_ints(1, 2, &[1, 2]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&Vector::from_ints(&[2, -1])));
        assert_eq!(
            Matrix::from_ints(1, 2, &[1, 2]).mul_vec(&k.basis()[0]),
            Vector::from_ints(&[0])
        );
    }

    #[test]
    fn inverse_and_rank() {
        let m = Matrix::from_ints(2, 2, &[0, -1, 1, 0]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(Matrix::from_ints(2, 2, &[1, 2, 2, 4]).rank(), 1);
        assert!(Matrix::from_ints(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert_eq!(Matrix::identity(3).scale(&rat(2)).rank(), 3);
    }
}
