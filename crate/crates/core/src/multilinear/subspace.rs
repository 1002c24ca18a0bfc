//! Subspaces of coordinate spaces in canonical echelon form, and linear maps.

use super::matrix::{vec_axpy, vec_is_zero, zero_vec, Matrix, Vector};
use crate::field::{Field, Scalar};

/// A subspace of `k^m`, stored as the rows of its reduced row-echelon basis.
///
/// Two subspaces are equal exactly when their stored forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Self::span(field, ambient, &Matrix::identity(field, ambient).row_vecs())
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let (r, pivots) = Matrix::from_rows(field, ambient, vectors).rref();
        let rows = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace {
            field,
            ambient,
            rows,
            pivots,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after clearing the pivot coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let c = -&r[p];
                r = vec_axpy(&r, &c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Self::span(self.field, self.ambient, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // a ∈ self, b ∈ other with a − b = 0
        let k = self.dim();
        let mut cols: Vec<Vector> = self.rows.clone();
        cols.extend(other.rows.iter().map(|r| r.iter().map(|x| -x).collect()));
        if cols.is_empty() {
            return Self::zero(self.field, self.ambient);
        }
        let m = Matrix::from_cols(self.field, self.ambient, &cols);
        let vecs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|c| {
                let mut v = zero_vec(self.field, self.ambient);
                for (i, row) in self.rows.iter().enumerate().take(k) {
                    v = vec_axpy(&v, &c[i], row);
                }
                v
            })
            .collect();
        Self::span(self.field, self.ambient, &vecs)
    }

    /// Complement of `self` inside `outer`: the rows of `outer` whose pivots
    /// are not pivots of `self`.
    pub fn complement_in(&self, outer: &Subspace) -> Vec<Vector> {
        debug_assert!(outer.contains_subspace(self));
        outer
            .rows
            .iter()
            .zip(&outer.pivots)
            .filter(|(_, p)| !self.pivots.contains(p))
            .map(|(r, _)| r.clone())
            .collect()
    }

    pub fn image(&self, f: &Matrix) -> Subspace {
        let v: Vec<Vector> = self.rows.iter().map(|r| f.mul_vec(r)).collect();
        Self::span(self.field, f.rows, &v)
    }
}

/// A linear map between coordinate spaces, given by its matrix (columns are
/// images of basis vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        LinearMap { matrix }
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.mul_vec(v)
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel(&self) -> Subspace {
        let k = Subspace::span(self.matrix.field, self.domain_dim(), &self.matrix.kernel());
        debug_assert_eq!(k.dim() + self.rank(), self.domain_dim());
        k
    }

    pub fn image(&self) -> Subspace {
        Subspace::full(self.matrix.field, self.domain_dim()).image(&self.matrix)
    }

    /// `{v : f(v) ∈ s}`.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let field = self.matrix.field;
        let cols: Vec<Vector> = (0..self.domain_dim())
            .map(|j| s.reduce(&self.matrix.col(j)))
            .collect();
        let m = Matrix::from_cols(field, self.codomain_dim(), &cols);
        Subspace::span(field, self.domain_dim(), &m.kernel())
    }

    /// Some preimage of `target`, or `None`.
    pub fn solve(&self, target: &[Scalar]) -> Option<Vector> {
        self.matrix.solve(target)
    }
}
