use nalgebra::{DMatrix, DVector};

use super::SdpError;
use crate::gram::GramSpace;
use crate::linalg::{lstsq, null_basis, range_basis, smat, svec};

/// Relative singular-value cutoff for directions that stay inside a face.
const FACE_NULL_TOL: f64 = 1e-4;

/// Affine space `{ base + Σ xᵢ Bᵢ }` of symmetric matrices.
#[derive(Clone, Debug)]
pub struct AffineSection {
    base: DMatrix<f64>,
    directions: Vec<DMatrix<f64>>,
    columns: DMatrix<f64>,
    /// Orthonormal basis of the direction span, in `svec` coordinates.
    span: DMatrix<f64>,
}

impl AffineSection {
    pub fn new(base: DMatrix<f64>, directions: Vec<DMatrix<f64>>) -> Result<Self, SdpError> {
        let n = base.nrows();
        if base.ncols() != n {
            return Err(SdpError::InvalidSection("base matrix is not square".into()));
        }
        for (i, d) in directions.iter().enumerate() {
            if d.nrows() != n || d.ncols() != n {
                return Err(SdpError::InvalidSection(format!("direction {i} has the wrong size")));
            }
        }
        let sym = |a: DMatrix<f64>| (&a + a.transpose()) * 0.5;
        let base = sym(base);
        let directions: Vec<_> = directions.into_iter().map(sym).collect();
        let columns = svec_columns(n, &directions);
        let span = range_basis(&columns, 1e-10);
        Ok(AffineSection { base, directions, columns, span })
    }

    pub fn from_gram_space(space: &GramSpace<f64>) -> Self {
        let base = space.particular().to_dmatrix();
        let directions = space.kernel_basis().iter().map(|b| b.to_dmatrix()).collect();
        AffineSection::new(base, directions).expect("gram spaces are square")
    }

    pub fn n(&self) -> usize {
        self.base.nrows()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn base(&self) -> &DMatrix<f64> {
        &self.base
    }

    pub fn directions(&self) -> &[DMatrix<f64>] {
        &self.directions
    }

    pub fn point(&self, x: &[f64]) -> DMatrix<f64> {
        let mut a = self.base.clone();
        for (d, xi) in self.directions.iter().zip(x) {
            a += d * *xi;
        }
        a
    }

    /// Least-squares coordinates of `a` (exact when `a` lies in the section).
    pub fn coordinates(&self, a: &DMatrix<f64>) -> Vec<f64> {
        self.linear_coordinates(&(a - &self.base))
    }

    /// Coordinates of a matrix in the span of the directions.
    pub fn linear_coordinates(&self, d: &DMatrix<f64>) -> Vec<f64> {
        lstsq(&self.columns, &svec(d)).iter().copied().collect()
    }

    /// Orthogonal projection onto the affine span.
    pub fn project(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        if self.span.ncols() == 0 {
            return self.base.clone();
        }
        let w = svec(&(a - &self.base));
        let c = self.span.transpose() * w;
        &self.base + smat(&(&self.span * c), self.n())
    }

    /// Distance from `a` to the affine span, in Frobenius norm.
    pub fn distance(&self, a: &DMatrix<f64>) -> f64 {
        (self.project(a) - a).norm()
    }

    /// Approximate restriction to the face `{ V Ã Vᵀ }` for `V` with orthonormal
    /// columns: directions `D̃` with `V D̃ Vᵀ` (nearly) in the direction span,
    /// anchored at `Vᵀ anchor V`.
    pub(crate) fn restrict(&self, v: &DMatrix<f64>, anchor: &DMatrix<f64>) -> AffineSection {
        let r = v.ncols();
        let q = &self.span;
        let dim = r * (r + 1) / 2;
        let mut e = DMatrix::zeros(self.n() * (self.n() + 1) / 2, dim);
        for k in 0..dim {
            let mut unit = DVector::zeros(dim);
            unit[k] = 1.0;
            let w = svec(&(v * smat(&unit, r) * v.transpose()));
            let along = q.transpose() * &w;
            e.set_column(k, &(w - q * along));
        }
        let null = null_basis(&e, FACE_NULL_TOL);
        let directions = (0..null.ncols()).map(|k| smat(&null.column(k).into_owned(), r)).collect();
        AffineSection::new(v.transpose() * anchor * v, directions).expect("square by construction")
    }
}

fn svec_columns(n: usize, directions: &[DMatrix<f64>]) -> DMatrix<f64> {
    let mut cols = DMatrix::zeros(n * (n + 1) / 2, directions.len());
    for (k, d) in directions.iter().enumerate() {
        cols.set_column(k, &svec(d));
    }
    cols
}
