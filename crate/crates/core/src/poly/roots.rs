use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::BinaryForm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("the zero form has no roots")]
    ZeroForm,
    #[error("root {re}{im:+}i has no conjugate partner")]
    Unpaired { re: f64, im: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of `f(s, 1)` together with the multiplicity of the factor `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootList {
    pub roots: Vec<Root>,
    pub roots_at_infinity: usize,
    /// Coefficient of the highest power of `s` actually present.
    pub leading: f64,
}

impl RootList {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum::<usize>() + self.roots_at_infinity
    }

    pub fn real_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.value.im == 0.0)
    }

    pub fn has_real_root(&self) -> bool {
        self.real_roots().next().is_some() || self.roots_at_infinity > 0
    }

    pub fn is_simple(&self) -> bool {
        self.roots_at_infinity <= 1 && self.roots.iter().all(|r| r.multiplicity == 1)
    }

    /// Roots in the open upper half plane, repeated by multiplicity, sorted by real part.
    pub fn upper_roots(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for r in self.roots.iter().filter(|r| r.value.im > 0.0) {
            out.extend(std::iter::repeat_n(r.value, r.multiplicity));
        }
        out
    }

    pub fn scale(&self) -> f64 {
        self.roots.iter().map(|r| r.value.norm()).fold(1.0, f64::max)
    }

    /// Smallest distance between two distinct roots (infinite if fewer than two).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                best = best.min((a.value - b.value).norm());
            }
        }
        best
    }

    /// Expand `leading · Π (s − u t)^mult · t^inf` back into a form.
    pub fn expand(&self) -> BinaryForm {
        let mut c = vec![Complex64::new(self.leading, 0.0)];
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
                for (k, ck) in c.iter().enumerate() {
                    next[k] += ck;
                    next[k + 1] -= ck * r.value;
                }
                c = next;
            }
        }
        c.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), self.roots_at_infinity));
        BinaryForm::new(c.into_iter().map(|z| z.re).collect()).expect("degree preserved")
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let mut best = horner(coeffs, z).0.norm();
    for _ in 0..8 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let val = horner(coeffs, next).0.norm();
        if !(val < best) {
            break;
        }
        best = val;
        z = next;
    }
    z
}

/// Eigenvalues of the companion matrix of `Σ coeffs[k] s^(n−k)`, with a
/// Durand–Kerner fallback when the Schur iteration does not converge.
fn companion_eigenvalues(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        // coefficient of s^i in the monic polynomial
        comp[(i, n - 1)] = -coeffs[n - i] / lead;
    }
    match Schur::try_new(comp, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => durand_kerner(coeffs),
    }
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let monic: Vec<f64> = coeffs.iter().map(|c| c / coeffs[0]).collect();
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
    for _ in 0..5_000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, _) = horner(&monic, z[i]);
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = p / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Complex roots of `Σ coeffs[k] s^(n−k)` (leading coefficient nonzero), via
/// companion-matrix eigenvalues and a few Newton steps.
pub fn univariate_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    companion_eigenvalues(coeffs)
        .into_iter()
        .map(|z| polish(coeffs, z))
        .collect()
}

/// Roots of a binary form, dehomogenized at `t = 1`, with conjugates paired.
pub fn roots(b: &BinaryForm) -> Result<RootList, RootError> {
    let c = b.coeffs();
    let first = c.iter().position(|&v| v != 0.0).ok_or(RootError::ZeroForm)?;
    let at_inf = first;
    let coeffs = &c[first..];
    let leading = coeffs[0];
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(RootList { roots: Vec::new(), roots_at_infinity: at_inf, leading });
    }

    let eig = companion_eigenvalues(coeffs);
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let pair_tol = 1e-7 * scale;

    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in eig {
        if z.im.abs() <= pair_tol {
            real.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    let mut used = vec![false; lower.len()];
    for u in &upper {
        let target = u.conj();
        let best = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()));
        match best {
            Some((k, l)) if (l - target).norm() <= pair_tol.max(1e-7 * u.norm()) => used[k] = true,
            _ => return Err(RootError::Unpaired { re: u.re, im: u.im }),
        }
    }
    if let Some(k) = used.iter().position(|&u| !u) {
        return Err(RootError::Unpaired { re: lower[k].re, im: lower[k].im });
    }

    let real: Vec<f64> = real
        .into_iter()
        .map(|x| polish(coeffs, Complex64::new(x, 0.0)).re)
        .collect();
    let upper: Vec<Complex64> = upper
        .into_iter()
        .map(|z| {
            let p = polish(coeffs, z);
            if p.im > pair_tol {
                p
            } else {
                z
            }
        })
        .collect();

    let cluster_tol = 1e-5 * scale;
    let mut roots = Vec::new();
    for (value, multiplicity) in cluster(
        real.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        cluster_tol,
    ) {
        roots.push(Root { value: Complex64::new(value.re, 0.0), multiplicity });
    }
    for (value, multiplicity) in cluster(upper, cluster_tol) {
        roots.push(Root { value, multiplicity });
        roots.push(Root { value: value.conj(), multiplicity });
    }
    roots.sort_by(|a, b| {
        a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(RootList { roots, roots_at_infinity: at_inf, leading })
}

fn cluster(mut zs: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    zs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in zs {
        match groups.iter_mut().find(|g| (g[0] - z).norm() <= tol) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            let mean = g.iter().sum::<Complex64>() / n as f64;
            (mean, n)
        })
        .collect()
}
