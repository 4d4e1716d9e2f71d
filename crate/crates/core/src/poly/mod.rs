//! Sparse multivariate polynomials, binary forms and their roots.

mod binary;
mod monomial;
mod roots;
mod scalar;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

pub use binary::BinaryForm;
pub use monomial::{grlex_cmp, Monomial};
pub use roots::{roots, univariate_roots, Root, RootError, RootList};
pub use scalar::{format_rational, parse_rational, Coeff, RealCoeff};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("mixed scalar modes: {0}")]
    MixedScalarModes(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("binary form must be homogeneous of even positive degree in 2 variables: {0}")]
    NotBinaryForm(String),
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),
}

/// Sparse polynomial with coefficients in `C`, no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Monomial::var(nvars, i), C::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: C) -> Self {
        debug_assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::ExponentLength { expected: nvars, got: e.len() });
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> C {
        self.coeff(&Monomial::new(exps.to_vec()))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    fn check_nvars(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::NvarsMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_nvars(other)?;
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn square(&self) -> Self {
        self.checked_mul(self).expect("same nvars")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            out = out.checked_mul(self).expect("same nvars");
        }
        out
    }

    pub fn eval(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, got: point.len() });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Coefficient-wise conjugation (identity over the reals).
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.conj());
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(Coeff::magnitude).fold(0.0, f64::max)
    }

    /// Max-norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64, PolyError> {
        Ok(self.checked_sub(other)?.max_norm())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Substitute a polynomial for each variable.
    pub fn compose(&self, subs: &[Polynomial<C>]) -> Result<Polynomial<C>, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::PointLength { expected: self.nvars, got: subs.len() });
        }
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        for s in subs {
            if s.nvars != target {
                return Err(PolyError::NvarsMismatch { left: target, right: s.nvars });
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (s, &e) in subs.iter().zip(m.exps()) {
                for _ in 0..e {
                    t = t.checked_mul(s)?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c.clone() * C::from_i64(e as i64));
        }
        out
    }
}

impl<C: RealCoeff> Polynomial<C> {
    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map_coeffs(RealCoeff::as_f64)
    }

    pub fn to_complex(&self) -> Polynomial<Complex64> {
        self.map_coeffs(|c| Complex64::new(c.as_f64(), 0.0))
    }
}

impl Polynomial<Complex64> {
    /// `(p + p̄)/2` as a real polynomial.
    pub fn real_part(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.re)
    }

    /// `(p − p̄)/(2i)` as a real polynomial.
    pub fn imag_part(&self) -> Polynomial<f64> {
        self.map_coeffs(|c| c.im)
    }

    /// `p · p̄`.
    pub fn norm_squared(&self) -> Polynomial<Complex64> {
        self.checked_mul(&self.conjugate()).expect("same nvars")
    }
}

impl Polynomial<BigRational> {
    /// Build from `(exponents, numerator, denominator)` triples with small integers.
    pub fn from_int_ratios(nvars: usize, terms: &[(Vec<u32>, i64, i64)]) -> Result<Self, PolyError> {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, n, d)| (e.clone(), BigRational::from_ratio(*n, *d))),
        )
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

/// A polynomial read from JSON: either exact or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPolynomial {
    Rational(Polynomial<BigRational>),
    Float(Polynomial<f64>),
}

impl AnyPolynomial {
    pub fn nvars(&self) -> usize {
        match self {
            AnyPolynomial::Rational(p) => p.nvars(),
            AnyPolynomial::Float(p) => p.nvars(),
        }
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        match self {
            AnyPolynomial::Rational(p) => p.to_f64(),
            AnyPolynomial::Float(p) => p.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Polynomial<BigRational>> {
        match self {
            AnyPolynomial::Rational(p) => Some(p),
            AnyPolynomial::Float(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let f = Polynomial::from_terms(2, vec![(vec![2, 0], q(1, 1)), (vec![0, 2], q(1, 1))]).unwrap();
        let one = Polynomial::constant(2, BigRational::one());
        assert_eq!(f.checked_mul(&one).unwrap(), f);
    }

    #[test]
    fn eval_by_substitution() {
        let f = Polynomial::from_terms(2, vec![(vec![4, 0], 1.0), (vec![1, 3], 1.0)]).unwrap();
        assert_eq!(f.eval(&[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn exact_add_sub_round_trip() {
        let a = Polynomial::from_int_ratios(2, &[(vec![1, 0], 1, 3), (vec![0, 1], -7, 11)]).unwrap();
        let b = Polynomial::from_int_ratios(2, &[(vec![1, 0], 2, 9), (vec![1, 1], 5, 4)]).unwrap();
        assert_eq!(a.checked_add(&b).unwrap().checked_sub(&b).unwrap(), a);
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = Polynomial::from_terms(1, vec![(vec![1], 2.0), (vec![1], -2.0)]).unwrap();
        assert!(a.is_zero());
    }

    #[test]
    fn nvars_mismatch_is_reported() {
        let a = Polynomial::<f64>::var(2, 0);
        let b = Polynomial::<f64>::var(3, 0);
        assert_eq!(
            a.checked_add(&b).unwrap_err(),
            PolyError::NvarsMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn hermitian_square_of_x_plus_iy() {
        let p = Polynomial::from_terms(
            2,
            vec![(vec![1, 0], Complex64::new(1.0, 0.0)), (vec![0, 1], Complex64::new(0.0, 1.0))],
        )
        .unwrap();
        let expect = Polynomial::from_terms(
            2,
            vec![(vec![2, 0], Complex64::new(1.0, 0.0)), (vec![0, 2], Complex64::new(1.0, 0.0))],
        )
        .unwrap();
        assert!(p.norm_squared().distance(&expect).unwrap() < 1e-15);
        let re = p.real_part();
        let im = p.imag_part();
        let sum = re.square().checked_add(&im.square()).unwrap();
        assert!(sum.to_complex().distance(&expect).unwrap() < 1e-15);
    }

    #[test]
    fn conjugate_of_real_polynomial_is_itself() {
        let p = Polynomial::from_terms(2, vec![(vec![1, 1], Complex64::new(3.0, 0.0))]).unwrap();
        assert_eq!(p.conjugate(), p);
    }

    #[test]
    fn compose_and_derivative() {
        // f = x²y, substitute x -> x+y
        let f = Polynomial::from_terms(2, vec![(vec![2, 1], 1.0)]).unwrap();
        let x = Polynomial::<f64>::var(2, 0);
        let y = Polynomial::<f64>::var(2, 1);
        let g = f.compose(&[x.checked_add(&y).unwrap(), y.clone()]).unwrap();
        assert_eq!(g.coeff_of(&[1, 2]), 2.0);
        assert_eq!(f.derivative(0).coeff_of(&[1, 1]), 2.0);
    }
}
