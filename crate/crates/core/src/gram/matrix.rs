use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::poly::{Coeff, RealCoeff};

/// Dense symmetric matrix stored as its upper triangle.
///
/// Serializes as the full table of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<C> {
    n: usize,
    upper: Vec<C>,
}

impl<C: Coeff> SymMatrix<C> {
    pub fn zeros(n: usize) -> Self {
        SymMatrix { n, upper: vec![C::zero(); n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    /// Build from a function evaluated on `i ≤ j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                upper.push(f(i, j));
            }
        }
        SymMatrix { n, upper }
    }

    /// From a full row-major table; only the upper triangle is read.
    pub fn from_rows(rows: &[Vec<C>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self::from_fn(n, |i, j| rows[i][j].clone()))
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.upper[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn rows(&self) -> Vec<Vec<C>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SymMatrix<D> {
        SymMatrix { n: self.n, upper: self.upper.iter().map(f).collect() }
    }

    /// `self + λ·other`.
    pub fn axpy(&self, lambda: &C, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a.clone() + lambda.clone() * b.clone())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&C::one(), other)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// Frobenius inner product.
    pub fn inner(&self, other: &Self) -> C {
        let mut acc = C::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc = acc + self.get(i, j).clone() * other.get(i, j).clone();
            }
        }
        acc
    }
}

impl<C: Coeff + Serialize> Serialize for SymMatrix<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<C: RealCoeff> SymMatrix<C> {
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).as_f64())
    }
}

impl SymMatrix<f64> {
    /// Symmetrizes: entry `(i, j)` is the mean of `a[i,j]` and `a[j,i]`.
    pub fn from_dmatrix(a: &DMatrix<f64>) -> Self {
        Self::from_fn(a.nrows(), |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        crate::linalg::eigenvalues(&self.to_dmatrix()).as_slice().to_vec()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn numerical_rank(&self, rank_tol: f64) -> usize {
        crate::linalg::numerical_rank_of_values(&self.eigenvalues(), rank_tol)
    }

    /// `λ_min ≥ −psd_tol · max(1, λ_max)`.
    pub fn is_psd(&self, psd_tol: f64) -> bool {
        let ev = self.eigenvalues();
        let top = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        ev.first().map_or(true, |&l| l >= -psd_tol * top.max(1.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.upper
            .iter()
            .zip(&other.upper)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_indexing_is_symmetric() {
        let a = SymMatrix::from_fn(3, |i, j| (10 * i + j) as f64);
        assert_eq!(*a.get(2, 0), 2.0);
        assert_eq!(*a.get(0, 2), 2.0);
        assert_eq!(*a.get(2, 2), 22.0);
        assert_eq!(SymMatrix::from_dmatrix(&a.to_dmatrix()), a);
    }
}
