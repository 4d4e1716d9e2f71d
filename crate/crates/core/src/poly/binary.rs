use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Polynomial};

/// Homogeneous form of even degree `2d` in `(s, t)`.
///
/// `coeffs[k]` is the raw coefficient of `s^(2d−k) t^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryForm {
    coeffs: Vec<f64>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if coeffs.len() < 3 || coeffs.len() % 2 == 0 {
            return Err(PolyError::NotBinaryForm(format!(
                "{} coefficients give odd or zero degree",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::InvalidCoefficient("non-finite coefficient".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_polynomial(p: &Polynomial<f64>) -> Result<Self, PolyError> {
        if p.nvars() != 2 {
            return Err(PolyError::NotBinaryForm(format!("{} variables", p.nvars())));
        }
        if !p.is_homogeneous() {
            return Err(PolyError::NotBinaryForm("not homogeneous".into()));
        }
        let deg = p.total_degree().unwrap_or(0) as usize;
        if deg == 0 || deg % 2 == 1 {
            return Err(PolyError::NotBinaryForm(format!("degree {deg}")));
        }
        let coeffs = (0..=deg)
            .map(|k| p.coeff_of(&[(deg - k) as u32, k as u32]))
            .collect();
        Self::new(coeffs)
    }

    /// `lead · Π (s − u t)(s − ū t)` over the given roots.
    pub fn from_conjugate_pairs(lead: f64, roots: &[Complex64]) -> Result<Self, PolyError> {
        let mut c = vec![Complex64::new(lead, 0.0)];
        for u in roots {
            for r in [*u, u.conj()] {
                let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                for (k, ck) in c.iter().enumerate() {
                    next[k] += ck;
                    next[k + 1] -= ck * r;
                }
                c = next;
            }
        }
        Self::new(c.into_iter().map(|z| z.re).collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `d` for a form of degree `2d`.
    pub fn half_degree(&self) -> usize {
        self.degree() / 2
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        let n = self.degree() as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * s.powi(n - k as i32) * t.powi(k as i32))
            .sum()
    }

    pub fn to_polynomial(&self) -> Polynomial<f64> {
        let n = self.degree() as u32;
        let mut p = Polynomial::zero(2);
        for (k, &c) in self.coeffs.iter().enumerate() {
            p.add_term(Monomial::new(vec![n - k as u32, k as u32]), c);
        }
        p
    }
}
