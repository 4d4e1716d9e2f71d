//! Rank-two Gram matrices of positive binary forms from root partitions.
//!
//! A factorization `f = g·h` with `deg g = deg h = d` gives the Gram matrix
//! `(g hᵀ + h gᵀ)/2` of rank at most two. Real PSD matrices come from
//! `h = ḡ`, real indefinite ones from real positive `g` and `h`.

use itertools::Itertools;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::gram::SymMatrix;
use crate::poly::{roots, BinaryForm, RootError};

#[derive(Debug, Error)]
pub enum BinaryError {
    #[error("the form has a real root and is not positive")]
    RealRoot,
    #[error("roots are not distinct (separation {separation:e})")]
    RepeatedRoot { separation: f64 },
    #[error("the form is negative definite")]
    NotPositive,
    #[error("expected a sextic, got degree {0}")]
    NotSextic(usize),
    #[error(transparent)]
    Roots(#[from] RootError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Psd,
    Real,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    /// Conjugation maps the block onto its complement.
    ConjugateSwapped,
    /// Conjugation preserves the block.
    ConjugateFixed,
    Complex,
}

/// A block of `d` root indices; the other block is its complement.
///
/// Roots are indexed as `2i ↦ uᵢ`, `2i+1 ↦ ūᵢ` over the upper-half-plane roots `uᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootPartition {
    pub block: Vec<usize>,
    pub kind: PartitionKind,
    pub mask: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankTwoGram {
    pub matrix: SymMatrix<f64>,
    pub partition: RootPartition,
    pub psd: bool,
    /// Coefficient vectors in the monomial basis `s^d, s^(d−1)t, …, t^d`.
    pub summands: [Vec<f64>; 2],
    /// `f = signs[0]·p₀² + signs[1]·p₁²`.
    pub signs: [f64; 2],
}

/// A complex symmetric rank-two Gram matrix `(g hᵀ + h gᵀ)/2`.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexRankTwo {
    pub re: SymMatrix<f64>,
    pub im: SymMatrix<f64>,
    pub partition: RootPartition,
    #[serde(skip)]
    pub factors: [Vec<Complex64>; 2],
}

impl ComplexRankTwo {
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(*self.re.get(i, j), *self.im.get(i, j))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counts {
    pub psd: usize,
    pub indefinite: usize,
    /// `½·C(2d, d)`, the number of complex rank-two Gram matrices.
    pub complex: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rank2Enumeration {
    pub degree: usize,
    pub roots: Vec<Complex64>,
    pub psd: Vec<RankTwoGram>,
    pub indefinite: Vec<RankTwoGram>,
    /// Partitions of kind [`PartitionKind::Complex`], only for [`Which::All`].
    pub complex: Vec<ComplexRankTwo>,
    pub counts: Counts,
}

/// Roots of a positive form with distinct roots, ordered `u₀, ū₀, u₁, ū₁, …`.
pub fn paired_roots(f: &BinaryForm) -> Result<Vec<Complex64>, BinaryError> {
    let list = roots(f)?;
    if list.has_real_root() {
        return Err(BinaryError::RealRoot);
    }
    if list.leading < 0.0 {
        return Err(BinaryError::NotPositive);
    }
    let separation = list.min_separation();
    if !list.is_simple() || separation <= 1e-6 * list.scale() {
        return Err(BinaryError::RepeatedRoot { separation: if list.is_simple() { separation } else { 0.0 } });
    }
    Ok(list.upper_roots().into_iter().flat_map(|u| [u, u.conj()]).collect())
}

/// Coefficients of `c · Π (s − u t)` in the basis `s^k, s^(k−1)t, …, t^k`.
pub fn factor_coefficients(c: Complex64, roots: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c];
    for u in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
        for (k, ck) in out.iter().enumerate() {
            next[k] += ck;
            next[k + 1] -= ck * u;
        }
        out = next;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn classify(mask: u64, d: usize) -> PartitionKind {
    let pairs = (0..d).map(|i| ((mask >> (2 * i)) & 1, (mask >> (2 * i + 1)) & 1));
    let bits: Vec<(u64, u64)> = pairs.collect();
    if bits.iter().all(|&(a, b)| a != b) {
        PartitionKind::ConjugateSwapped
    } else if bits.iter().all(|&(a, b)| a == b) {
        PartitionKind::ConjugateFixed
    } else {
        PartitionKind::Complex
    }
}

/// All rank-two Gram matrices of a positive binary form with distinct roots.
///
/// Partitions are listed by increasing bitmask over the paired root order;
/// the block always contains root 0, which removes the block/complement symmetry.
pub fn enumerate_rank2(f: &BinaryForm, which: Which) -> Result<Rank2Enumeration, BinaryError> {
    let roots = paired_roots(f)?;
    let d = f.half_degree();
    let lead = f.coeffs()[0];
    let sqrt_lead = Complex64::new(lead.sqrt(), 0.0);
    let mut psd = Vec::new();
    let mut indefinite = Vec::new();
    let mut complex = Vec::new();

    let masks = (0..2 * d)
        .combinations(d)
        .filter(|c| c[0] == 0)
        .map(|c| c.iter().fold(0u64, |m, &i| m | (1 << i)))
        .sorted();
    for mask in masks {
        let kind = classify(mask, d);
        let block: Vec<usize> = (0..2 * d).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..2 * d).filter(|i| mask >> i & 1 == 0).collect();
        let pick = |idx: &[usize]| idx.iter().map(|&i| roots[i]).collect::<Vec<_>>();
        let g = factor_coefficients(sqrt_lead, &pick(&block));
        let h = factor_coefficients(sqrt_lead, &pick(&rest));
        let partition = RootPartition { block, kind, mask };
        match kind {
            PartitionKind::ConjugateSwapped => {
                let re: Vec<f64> = g.iter().map(|z| z.re).collect();
                let im: Vec<f64> = g.iter().map(|z| z.im).collect();
                psd.push(real_gram(partition, [re, im], [1.0, 1.0]));
            }
            PartitionKind::ConjugateFixed if which != Which::Psd => {
                let p: Vec<f64> = g.iter().zip(&h).map(|(a, b)| (a.re + b.re) / 2.0).collect();
                let q: Vec<f64> = g.iter().zip(&h).map(|(a, b)| (a.re - b.re) / 2.0).collect();
                indefinite.push(real_gram(partition, [p, q], [1.0, -1.0]));
            }
            PartitionKind::Complex if which == Which::All => {
                complex.push(complex_gram(partition, g, h));
            }
            _ => {}
        }
    }
    let counts = Counts {
        psd: 1 << (d - 1),
        indefinite: if d % 2 == 0 { (binomial(d as u64, d as u64 / 2) / 2) as usize } else { 0 },
        complex: binomial(2 * d as u64, d as u64) / 2,
    };
    Ok(Rank2Enumeration { degree: f.degree(), roots, psd, indefinite, complex, counts })
}

fn real_gram(partition: RootPartition, summands: [Vec<f64>; 2], signs: [f64; 2]) -> RankTwoGram {
    let n = summands[0].len();
    let matrix = SymMatrix::from_fn(n, |i, j| {
        signs[0] * summands[0][i] * summands[0][j] + signs[1] * summands[1][i] * summands[1][j]
    });
    RankTwoGram { matrix, psd: signs[1] > 0.0, partition, summands, signs }
}

fn complex_gram(partition: RootPartition, g: Vec<Complex64>, h: Vec<Complex64>) -> ComplexRankTwo {
    let n = g.len();
    let entry = |i: usize, j: usize| (g[i] * h[j] + h[i] * g[j]) / 2.0;
    ComplexRankTwo {
        re: SymMatrix::from_fn(n, |i, j| entry(i, j).re),
        im: SymMatrix::from_fn(n, |i, j| entry(i, j).im),
        partition,
        factors: [g, h],
    }
}

/// Nodes of the determinantal quartic of a positive sextic.
#[derive(Clone, Debug, Serialize)]
pub struct KummerNodes {
    /// `(uᵢ² : uᵢ : 1 : 0)` in coordinates `(x : y : z : w)`, one per root.
    pub rank_three: Vec<[Complex64; 4]>,
    /// All ten rank-two Gram matrices, the real ones with zero imaginary part.
    pub rank_two: Vec<ComplexRankTwo>,
}

pub fn kummer_nodes(f: &BinaryForm) -> Result<KummerNodes, BinaryError> {
    if f.degree() != 6 {
        return Err(BinaryError::NotSextic(f.degree()));
    }
    let e = enumerate_rank2(f, Which::All)?;
    let one = Complex64::new(1.0, 0.0);
    let rank_three = e.roots.iter().map(|&u| [u * u, u, one, Complex64::new(0.0, 0.0)]).collect();
    let mut rank_two: Vec<ComplexRankTwo> = e
        .psd
        .iter()
        .chain(&e.indefinite)
        .map(|r| {
            let n = r.matrix.n();
            let lift = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
            ComplexRankTwo {
                re: r.matrix.clone(),
                im: SymMatrix::zeros(n),
                partition: r.partition.clone(),
                factors: [lift(&r.summands[0]), lift(&r.summands[1])],
            }
        })
        .chain(e.complex)
        .collect();
    rank_two.sort_by_key(|r| r.partition.mask);
    Ok(KummerNodes { rank_three, rank_two })
}
