//! Exact certificates from rational PSD Gram matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{gram_apply, linear_form, CertificateMode, GramError, GramSpace, SosCertificate, SymMatrix};
use crate::poly::RealCoeff;

use super::foursquare::rational_four_squares;

/// Outer-product form `A = Σ dₖ ℓₖ ℓₖᵀ` with `dₖ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ldl {
    pub pivots: Vec<BigRational>,
    pub columns: Vec<Vec<BigRational>>,
}

impl Ldl {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Exact symmetric elimination with diagonal pivoting; fails on any certificate
/// of indefiniteness (negative pivot, or zero pivot with a nonzero row).
pub fn ldl(a: &SymMatrix<BigRational>) -> Result<Ldl, GramError> {
    let n = a.n();
    let mut m = a.rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Ldl { pivots: Vec::new(), columns: Vec::new() };
    while !active.is_empty() {
        if let Some(&neg) = active.iter().find(|&&i| m[i][i].is_negative()) {
            return Err(GramError::NotPsd { min_eigenvalue: m[neg][neg].as_f64() });
        }
        let Some(pos) = active.iter().position(|&i| m[i][i].is_positive()) else {
            if active.iter().any(|&i| active.iter().any(|&j| !m[i][j].is_zero())) {
                return Err(GramError::NotPsd { min_eigenvalue: 0.0 });
            }
            break;
        };
        let p = active.remove(pos);
        let d = m[p][p].clone();
        let mut col = vec![BigRational::zero(); n];
        col[p] = BigRational::from_integer(BigInt::from(1));
        for &i in &active {
            col[i] = &m[i][p] / &d;
        }
        for &i in &active {
            for &j in &active {
                let delta = &col[i] * &m[p][j];
                m[i][j] -= delta;
            }
        }
        out.pivots.push(d);
        out.columns.push(col);
    }
    Ok(out)
}

/// Exact rational SOS certificate of length at most `4 · rank(A)`.
pub fn rational_sos(
    space: &GramSpace<BigRational>,
    a: &SymMatrix<BigRational>,
) -> Result<SosCertificate<BigRational>, GramError> {
    let image = gram_apply(space, a)?;
    if &image != space.target() {
        let residual = image.distance(space.target())?;
        return Err(GramError::NotGramMatrix { residual });
    }
    let fact = ldl(a)?;
    let nvars = space.target().nvars();
    let mut summands = Vec::new();
    for (d, col) in fact.pivots.iter().zip(&fact.columns) {
        let q = linear_form(space.monomials(), nvars, col);
        let parts = rational_four_squares(d).expect("pivots are positive");
        for r in parts.iter().filter(|r| !r.is_zero()) {
            summands.push(q.scale(r));
        }
    }
    let mut cert = SosCertificate {
        mode: CertificateMode::Rational,
        summands,
        residual: 0.0,
        source_rank: fact.rank(),
    };
    let back = cert.expand(nvars);
    if &back != space.target() {
        cert.residual = back.distance(space.target())?;
        return Err(GramError::NotGramMatrix { residual: cert.residual });
    }
    Ok(cert)
}

/// Best rational approximation with denominator at most `max_den`.
pub fn approximate(x: f64, max_den: u64) -> BigRational {
    if !x.is_finite() {
        return BigRational::zero();
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1.is_zero() {
        return BigRational::from_integer(BigInt::from(x.round() as i64));
    }
    BigRational::new(h1, k1)
}

/// Round a floating Gram matrix to an exact Gram matrix of the rational target
/// by rounding its kernel coordinates.
pub fn rationalize(
    space: &GramSpace<BigRational>,
    point: &SymMatrix<f64>,
    max_den: u64,
) -> Result<SymMatrix<BigRational>, GramError> {
    let float = space.to_f64();
    let coords = float.coordinates(point)?;
    let exact: Vec<BigRational> = coords.iter().map(|&x| approximate(x, max_den)).collect();
    space.point(&exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::gram_space;
    use crate::poly::{Coeff, Polynomial};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn diagonal_four_square_split() {
        let f = Polynomial::from_int_ratios(2, &[(vec![2, 0], 2, 1), (vec![0, 2], 1, 2)]).unwrap();
        let s = gram_space(&f, None).unwrap();
        let cert = rational_sos(&s, s.particular()).unwrap();
        assert_eq!(cert.residual, 0.0);
        assert_eq!(cert.len(), 4);
        let x = Polynomial::<BigRational>::var(2, 0);
        let y_half = Polynomial::<BigRational>::var(2, 1).scale(&q(1, 2));
        assert_eq!(cert.summands, vec![x.clone(), x, y_half.clone(), y_half]);
    }

    #[test]
    fn identity_gives_monomials() {
        let f = Polynomial::from_int_ratios(2, &[(vec![2, 0], 1, 1), (vec![0, 2], 1, 1)]).unwrap();
        let s = gram_space(&f, None).unwrap();
        let cert = rational_sos(&s, s.particular()).unwrap();
        assert_eq!(cert.summands, vec![Polynomial::var(2, 0), Polynomial::var(2, 1)]);
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = SymMatrix::from_rows(&[vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(1, 1)]]).unwrap();
        assert!(matches!(ldl(&a), Err(GramError::NotPsd { .. })));
        let b = SymMatrix::from_rows(&[vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]]).unwrap();
        assert!(matches!(ldl(&b), Err(GramError::NotPsd { .. })));
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(approximate(0.75, 100), q(3, 4));
        assert_eq!(approximate(std::f64::consts::PI, 1000), q(355, 113));
        assert_eq!(approximate(-2.5, 10), q(-5, 2));
    }
}
