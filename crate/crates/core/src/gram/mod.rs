//! Gram spaces of polynomials and sum-of-squares certificates.

mod foursquare;
mod hurwitz;
mod matrix;
mod rational;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::config::Tolerances;
use crate::linalg;
use crate::poly::{Coeff, Monomial, PolyError, Polynomial, RealCoeff};
use crate::polytope::{half_polytope, newton_polytope, LatticePolytope, PolytopeError};

pub use foursquare::{four_squares, rational_four_squares};
pub use hurwitz::{hurwitz_form, hurwitz_sos};
pub use matrix::SymMatrix;
pub use rational::{ldl, rational_sos, rationalize, Ldl};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GramError {
    #[error("the zero polynomial has no Gram space")]
    ZeroPolynomial,
    #[error("monomial with exponent {exponent:?} is not a sum of two lattice points of P")]
    NewtonPolytopeViolation { exponent: Vec<u32> },
    #[error("matrix of size {got} for a Gram space of size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not positive semidefinite (smallest eigenvalue or pivot {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not a Gram matrix of the target polynomial (residual {residual:e})")]
    NotGramMatrix { residual: f64 },
    #[error("Hurwitz identity requires r in {{1, 2, 4, 8}}, got {0}")]
    UnsupportedHurwitz(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Affine space of Gram matrices `{A : m_Pᵀ A m_P = f}`.
#[derive(Clone, Debug)]
pub struct GramSpace<C> {
    polytope: LatticePolytope,
    monomials: Vec<Monomial>,
    target: Polynomial<C>,
    particular: SymMatrix<C>,
    kernel_basis: Vec<SymMatrix<C>>,
    /// Entry owned by each kernel direction; reading it off gives coordinates.
    kernel_entries: Vec<(usize, usize)>,
}

/// Gram space of `f` over the monomials of `P` (default: half the Newton polytope).
pub fn gram_space<C: Coeff>(
    f: &Polynomial<C>,
    polytope: Option<&LatticePolytope>,
) -> Result<GramSpace<C>, GramError> {
    if f.is_zero() {
        return Err(GramError::ZeroPolynomial);
    }
    let polytope = match polytope {
        Some(p) => p.clone(),
        None => half_polytope(&newton_polytope(f)?)?,
    };
    if polytope.ambient_dim() != f.nvars() {
        return Err(PolytopeError::DimensionMismatch {
            expected: f.nvars(),
            got: polytope.ambient_dim(),
        }
        .into());
    }
    let monomials = polytope.monomials()?;
    let n = monomials.len();

    let mut classes: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            classes.entry(monomials[i].mul(&monomials[j])).or_default().push((i, j));
        }
    }
    if let Some(m) = f.support().find(|m| !classes.contains_key(*m)) {
        return Err(GramError::NewtonPolytopeViolation { exponent: m.exps().to_vec() });
    }

    let weight = |(i, j): (usize, usize)| if i == j { 1 } else { 2 };
    let mut particular = SymMatrix::zeros(n);
    let mut kernel_basis = Vec::new();
    let mut kernel_entries = Vec::new();
    for (beta, entries) in &classes {
        let total: i64 = entries.iter().map(|&e| weight(e)).sum();
        let share = f.coeff(beta) / C::from_i64(total);
        for &(i, j) in entries {
            particular.set(i, j, share.clone());
        }
        if entries.len() < 2 {
            continue;
        }
        let pivot = entries.iter().position(|&(i, j)| i == j).unwrap_or(0);
        let (pi, pj) = entries[pivot];
        let w0 = weight(entries[pivot]);
        for (k, &(i, j)) in entries.iter().enumerate() {
            if k == pivot {
                continue;
            }
            let mut b = SymMatrix::zeros(n);
            b.set(i, j, C::one());
            b.set(pi, pj, -C::from_ratio(weight((i, j)), w0));
            kernel_basis.push(b);
            kernel_entries.push((i, j));
        }
    }
    Ok(GramSpace { polytope, monomials, target: f.clone(), particular, kernel_basis, kernel_entries })
}

impl<C: Coeff> GramSpace<C> {
    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    /// The monomial vector `m_P`, in the global order.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn target(&self) -> &Polynomial<C> {
        &self.target
    }

    pub fn particular(&self) -> &SymMatrix<C> {
        &self.particular
    }

    pub fn kernel_basis(&self) -> &[SymMatrix<C>] {
        &self.kernel_basis
    }

    /// Size `N` of the Gram matrices.
    pub fn n(&self) -> usize {
        self.monomials.len()
    }

    /// Dimension of the kernel space.
    pub fn m(&self) -> usize {
        self.kernel_basis.len()
    }

    /// `G₀ + Σ xᵢ Bᵢ`.
    pub fn point(&self, x: &[C]) -> Result<SymMatrix<C>, GramError> {
        if x.len() != self.m() {
            return Err(GramError::DimensionMismatch { expected: self.m(), got: x.len() });
        }
        let mut a = self.particular.clone();
        for (xi, b) in x.iter().zip(&self.kernel_basis) {
            if !xi.is_zero() {
                a = a.axpy(xi, b);
            }
        }
        Ok(a)
    }

    /// Kernel coordinates of a Gram matrix of the target.
    pub fn coordinates(&self, a: &SymMatrix<C>) -> Result<Vec<C>, GramError> {
        if a.n() != self.n() {
            return Err(GramError::DimensionMismatch { expected: self.n(), got: a.n() });
        }
        Ok(self
            .kernel_entries
            .iter()
            .map(|&(i, j)| a.get(i, j).clone() - self.particular.get(i, j).clone())
            .collect())
    }

    /// Same space with a different right-hand side.
    pub fn with_target(&self, f: &Polynomial<C>) -> Result<Self, GramError> {
        gram_space(f, Some(&self.polytope))
    }
}

impl<C: RealCoeff> GramSpace<C> {
    pub fn to_f64(&self) -> GramSpace<f64> {
        GramSpace {
            polytope: self.polytope.clone(),
            monomials: self.monomials.clone(),
            target: self.target.to_f64(),
            particular: self.particular.map(RealCoeff::as_f64),
            kernel_basis: self.kernel_basis.iter().map(|b| b.map(RealCoeff::as_f64)).collect(),
            kernel_entries: self.kernel_entries.clone(),
        }
    }
}

/// `m_Pᵀ A m_P`.
pub fn gram_apply<C: Coeff>(space: &GramSpace<C>, a: &SymMatrix<C>) -> Result<Polynomial<C>, GramError> {
    let n = space.n();
    if a.n() != n {
        return Err(GramError::DimensionMismatch { expected: n, got: a.n() });
    }
    let nvars = space.target.nvars();
    let mut out = Polynomial::zero(nvars);
    let two = C::from_i64(2);
    for i in 0..n {
        for j in i..n {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let c = if i == j { v.clone() } else { two.clone() * v.clone() };
            out.add_term(space.monomials[i].mul(&space.monomials[j]), c);
        }
    }
    Ok(out)
}

/// Linear form `m_Pᵀ v` for a coefficient vector over the space's monomials.
pub fn linear_form<C: Coeff>(monomials: &[Monomial], nvars: usize, v: &[C]) -> Polynomial<C> {
    let mut p = Polynomial::zero(nvars);
    for (m, c) in monomials.iter().zip(v) {
        p.add_term(m.clone(), c.clone());
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateMode {
    Real,
    Rational,
    Hermitian,
}

/// Polynomials `pᵢ` with `Σ pᵢ² = f` up to `residual` (max-norm).
#[derive(Clone, Debug, PartialEq)]
pub struct SosCertificate<C> {
    pub mode: CertificateMode,
    pub summands: Vec<Polynomial<C>>,
    pub residual: f64,
    pub source_rank: usize,
}

impl<C: Coeff> SosCertificate<C> {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `Σ pᵢ²`.
    pub fn expand(&self, nvars: usize) -> Polynomial<C> {
        self.summands.iter().fold(Polynomial::zero(nvars), |acc, p| {
            acc.checked_add(&p.square()).expect("summands share nvars")
        })
    }
}

impl<C: RealCoeff> SosCertificate<C> {
    /// Rows are the summands' coefficient vectors over `monomials`.
    pub fn coefficient_matrix(&self, monomials: &[Monomial]) -> DMatrix<f64> {
        DMatrix::from_fn(self.summands.len(), monomials.len(), |r, c| {
            self.summands[r].coeff(&monomials[c]).as_f64()
        })
    }
}

/// Factor a PSD Gram matrix as `CᵀC` and read off the summands.
pub fn extract_sos(
    space: &GramSpace<f64>,
    a: &SymMatrix<f64>,
    tol: &Tolerances,
) -> Result<SosCertificate<f64>, GramError> {
    let n = space.n();
    if a.n() != n {
        return Err(GramError::DimensionMismatch { expected: n, got: a.n() });
    }
    let (vals, vecs) = linalg::sym_eigen(&a.to_dmatrix());
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if lo < -tol.psd_tol * top.max(f64::MIN_POSITIVE) {
        return Err(GramError::NotPsd { min_eigenvalue: lo });
    }
    let nvars = space.target.nvars();
    let mut summands = Vec::new();
    for k in (0..n).rev() {
        if vals[k] <= tol.rank_tol * top {
            continue;
        }
        let s = vals[k].sqrt();
        let coeffs: Vec<f64> = (0..n).map(|i| s * vecs[(i, k)]).collect();
        summands.push(linear_form(&space.monomials, nvars, &coeffs));
    }
    let source_rank = summands.len();
    let mut cert = SosCertificate { mode: CertificateMode::Real, summands, residual: 0.0, source_rank };
    cert.residual = cert.expand(nvars).distance(&space.target)?;
    Ok(cert)
}

/// Gram space of `f` with rational coefficients, converted for numerical work.
pub fn float_space(space: &GramSpace<BigRational>) -> GramSpace<f64> {
    space.to_f64()
}
