//! Dense real symmetric helpers shared by the numerical modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn sym_eigen(a: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let sym = (a + a.transpose()) * 0.5;
    let e = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    let vals = DVector::from_iterator(n, idx.iter().map(|&i| e.eigenvalues[i]));
    let mut vecs = DMatrix::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vecs.set_column(k, &e.eigenvectors.column(i));
    }
    (vals, vecs)
}

pub fn eigenvalues(a: &DMatrix<f64>) -> DVector<f64> {
    sym_eigen(a).0
}

/// Number of eigenvalues with `|λ| > rel_tol · max|λ|`.
pub fn numerical_rank_of_values(vals: &[f64], rel_tol: f64) -> usize {
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    vals.iter().filter(|v| v.abs() > rel_tol * top).count()
}

#[cfg(test)]
pub fn numerical_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    numerical_rank_of_values(eigenvalues(a).as_slice(), rel_tol)
}

pub fn frobenius_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.component_mul(b).sum()
}

/// Symmetric vectorization with `√2` on off-diagonals, so `⟨A,B⟩ = svec(A)·svec(B)`.
pub fn svec(a: &DMatrix<f64>) -> DVector<f64> {
    let n = a.nrows();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    let r2 = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in i..n {
            v.push(if i == j { a[(i, i)] } else { r2 * 0.5 * (a[(i, j)] + a[(j, i)]) });
        }
    }
    DVector::from_vec(v)
}

pub fn smat(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    let r2 = std::f64::consts::SQRT_2;
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            if i == j {
                a[(i, i)] = v[k];
            } else {
                a[(i, j)] = v[k] / r2;
                a[(j, i)] = v[k] / r2;
            }
            k += 1;
        }
    }
    a
}

/// Orthonormal basis (columns) of the column space, by SVD with relative cutoff.
pub fn range_basis(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let top = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top > 0.0 && svd.singular_values[i] > rel_tol * top)
        .collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &u.column(i));
    }
    out
}

/// Orthonormal basis (columns) of the null space.
pub fn null_basis(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let gram = m.transpose() * m;
    let (vals, vecs) = sym_eigen(&gram);
    let top = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let keep: Vec<usize> = (0..n).filter(|&i| vals[i] <= rel_tol * rel_tol * top.max(f64::MIN_POSITIVE)).collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &vecs.column(i));
    }
    out
}

/// Minimum-norm least-squares solution of `m x = b`.
pub fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let rel_tol = 1e-13;
    if m.ncols() == 0 {
        return DVector::zeros(0);
    }
    let svd = m.clone().svd(true, true);
    let top = svd.singular_values.max();
    svd.solve(b, rel_tol * top.max(f64::MIN_POSITIVE))
        .unwrap_or_else(|_| DVector::zeros(m.ncols()))
}
