//! Composition identities `(Σ xᵢ²)(Σ yᵢ²) = Σ zₖ²` from Cayley–Dickson algebras.

use num_rational::BigRational;

use super::{CertificateMode, GramError, SosCertificate};
use crate::poly::Polynomial;

type Vector = Vec<Polynomial<BigRational>>;

fn conj(a: &[Polynomial<BigRational>]) -> Vector {
    a.iter()
        .enumerate()
        .map(|(i, p)| if i == 0 { p.clone() } else { p.neg() })
        .collect()
}

fn add(a: &[Polynomial<BigRational>], b: &[Polynomial<BigRational>]) -> Vector {
    a.iter().zip(b).map(|(p, q)| p.checked_add(q).expect("same nvars")).collect()
}

fn sub(a: &[Polynomial<BigRational>], b: &[Polynomial<BigRational>]) -> Vector {
    a.iter().zip(b).map(|(p, q)| p.checked_sub(q).expect("same nvars")).collect()
}

/// `(p, q)(r, s) = (pr − s̄q, sp + qr̄)`.
fn product(a: &[Polynomial<BigRational>], b: &[Polynomial<BigRational>]) -> Vector {
    if a.len() == 1 {
        return vec![a[0].checked_mul(&b[0]).expect("same nvars")];
    }
    let h = a.len() / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);
    let first = sub(&product(p, r), &product(&conj(s), q));
    let second = add(&product(s, p), &product(q, &conj(r)));
    first.into_iter().chain(second).collect()
}

/// `(x₁² + … + x_r²)(y₁² + … + y_r²)` in variables `x₁…x_r, y₁…y_r`.
pub fn hurwitz_form(r: usize) -> Polynomial<BigRational> {
    let nv = 2 * r;
    let sq = |off: usize| {
        (0..r).fold(Polynomial::zero(nv), |acc, i| {
            acc.checked_add(&Polynomial::var(nv, off + i).square()).expect("same nvars")
        })
    };
    sq(0).checked_mul(&sq(r)).expect("same nvars")
}

/// Exact `r`-term certificate of `hurwitz_form(r)` for `r ∈ {1, 2, 4, 8}`.
pub fn hurwitz_sos(r: usize) -> Result<SosCertificate<BigRational>, GramError> {
    if ![1, 2, 4, 8].contains(&r) {
        return Err(GramError::UnsupportedHurwitz(r));
    }
    let nv = 2 * r;
    let x: Vector = (0..r).map(|i| Polynomial::var(nv, i)).collect();
    let y: Vector = (0..r).map(|i| Polynomial::var(nv, r + i)).collect();
    let summands = product(&x, &y);
    let cert = SosCertificate { mode: CertificateMode::Rational, summands, residual: 0.0, source_rank: r };
    let back = cert.expand(nv);
    let target = hurwitz_form(r);
    if back != target {
        return Err(GramError::NotGramMatrix { residual: back.distance(&target)? });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Coeff;

    #[test]
    fn complex_multiplication() {
        let c = hurwitz_sos(2).unwrap();
        let v = |i| Polynomial::<BigRational>::var(4, i);
        let z1 = v(0).checked_mul(&v(2)).unwrap().checked_sub(&v(1).checked_mul(&v(3)).unwrap()).unwrap();
        let z2 = v(1).checked_mul(&v(2)).unwrap().checked_add(&v(0).checked_mul(&v(3)).unwrap()).unwrap();
        assert_eq!(c.summands, vec![z1, z2]);
    }

    #[test]
    fn trivial_case() {
        let c = hurwitz_sos(1).unwrap();
        let xy = Polynomial::term(2, crate::poly::Monomial::new(vec![1, 1]), BigRational::from_i64(1));
        assert_eq!(c.summands, vec![xy]);
    }

    #[test]
    fn unsupported_sizes() {
        for r in [0, 3, 5, 16] {
            assert_eq!(hurwitz_sos(r).unwrap_err(), GramError::UnsupportedHurwitz(r));
        }
    }
}
