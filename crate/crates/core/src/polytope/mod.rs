//! Lattice polytopes: Newton polytopes, lattice points, 2-normality, volume,
//! toric degree data and Pataki rank intervals.

mod hull;
mod lattice;
pub mod lp;
mod volume;

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{grlex_cmp, Coeff, Monomial, Polynomial};
pub use hull::Facet;
use hull::Hull;
pub use lattice::{lattice_index, Frame};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("the zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("point of dimension {got} in ambient dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer overflow in lattice computations")]
    Overflow,
    #[error("half polytope contains no lattice point")]
    NoLatticePoints,
    #[error("lattice point scan too large ({0} candidates)")]
    TooLarge(u128),
    #[error("empty rank interval for size {size} and parameter {parameter}")]
    EmptyInterval { size: usize, parameter: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

const MAX_SCAN: u128 = 50_000_000;

/// Lattice polytope with its vertices and all lattice points.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    hull: Hull,
    lattice_points: Vec<Vec<i64>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.lattice_points == other.lattice_points && self.vertices_sorted() == other.vertices_sorted()
    }
}

impl LatticePolytope {
    /// Convex hull of the given integer points.
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let n = points.first().ok_or(PolytopeError::Empty)?.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(PolytopeError::DimensionMismatch { expected: n, got: p.len() });
        }
        let hull = Hull::from_points(points)?;
        Self::with_hull(hull)
    }

    fn with_hull(hull: Hull) -> Result<Self, PolytopeError> {
        let lattice_points = enumerate_lattice_points(&hull)?;
        Ok(LatticePolytope { hull, lattice_points })
    }

    /// `d·Δ_n = conv{0, d·e₁, …, d·eₙ}` in `Zⁿ`.
    pub fn simplex(n: usize, d: i64) -> Result<Self, PolytopeError> {
        let mut pts = vec![vec![0; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = d;
            pts.push(e);
        }
        Self::from_points(&pts)
    }

    /// Exponents of forms of degree `d` in `nvars` variables: `conv{d·eᵢ}`.
    pub fn homogeneous_simplex(nvars: usize, d: i64) -> Result<Self, PolytopeError> {
        let pts: Vec<Vec<i64>> = (0..nvars)
            .map(|i| (0..nvars).map(|j| if i == j { d } else { 0 }).collect())
            .collect();
        Self::from_points(&pts)
    }

    /// Cartesian product.
    pub fn product(&self, other: &Self) -> Result<Self, PolytopeError> {
        let pts: Vec<Vec<i64>> = self
            .vertices()
            .iter()
            .cartesian_product(other.vertices())
            .map(|(a, b)| a.iter().chain(b).copied().collect())
            .collect();
        Self::from_points(&pts)
    }

    /// Cayley polytope of the segments `[0, dᵢ]`: `conv{(eᵢ, 0), (eᵢ, dᵢ)}`
    /// in `Z^(k−1) × Z` with `e₀ = 0`.
    pub fn cayley_segments(lengths: &[i64]) -> Result<Self, PolytopeError> {
        let k = lengths.len();
        if k == 0 {
            return Err(PolytopeError::Empty);
        }
        let mut pts = Vec::new();
        for (i, &d) in lengths.iter().enumerate() {
            let mut e = vec![0; k];
            if i > 0 {
                e[i - 1] = 1;
            }
            pts.push(e.clone());
            e[k - 1] = d;
            pts.push(e);
        }
        Self::from_points(&pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.hull.frame.ambient()
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.hull.vertices
    }

    fn vertices_sorted(&self) -> Vec<Vec<i64>> {
        let mut v = self.hull.vertices.clone();
        v.sort_by(|a, b| grlex_cmp(a, b));
        v
    }

    /// All lattice points, sorted in the global monomial order.
    pub fn lattice_points(&self) -> &[Vec<i64>] {
        &self.lattice_points
    }

    pub fn num_lattice_points(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.hull.facets
    }

    pub fn frame(&self) -> &Frame {
        &self.hull.frame
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.hull.contains(x)
    }

    /// Lattice points as monomials (all coordinates must be nonnegative).
    pub fn monomials(&self) -> Result<Vec<Monomial>, PolytopeError> {
        self.lattice_points
            .iter()
            .map(|p| {
                Monomial::from_i64(p).ok_or_else(|| {
                    PolytopeError::InvalidInput(format!("negative exponent in {p:?}"))
                })
            })
            .collect()
    }

    /// `k·P`.
    pub fn dilate(&self, k: i64) -> Result<Self, PolytopeError> {
        let verts: Vec<Vec<i64>> = self
            .hull
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * k).collect())
            .collect();
        if k == 0 {
            return Self::from_points(&verts);
        }
        Self::with_hull(Hull::from_vertices(verts)?)
    }

    /// Normalized volume relative to the lattice of the affine span.
    pub fn normalized_volume(&self) -> Result<u128, PolytopeError> {
        volume::normalized_volume(&self.hull, 0)
    }

    /// Normalized volume with the fan triangulation coned from vertex `apex`.
    pub fn normalized_volume_from(&self, apex: usize) -> Result<u128, PolytopeError> {
        volume::normalized_volume(&self.hull, apex)
    }

    /// Do the lattice points affinely generate the lattice of the affine span?
    pub fn is_spanning(&self) -> bool {
        let d = self.dim();
        if d == 0 {
            return true;
        }
        let f = &self.hull.frame;
        let o = f.coords(&self.lattice_points[0]);
        let rows: Vec<Vec<i64>> = self.lattice_points[1..]
            .iter()
            .map(|p| f.coords(p).iter().zip(&o).map(|(a, b)| a - b).collect())
            .collect();
        lattice_index(&rows, d) == Some(1)
    }

    /// Checks that every lattice point of `2P` is a sum of two lattice points of `P`.
    pub fn is_two_normal(&self) -> Result<TwoNormality, PolytopeError> {
        let doubled = self.dilate(2)?;
        let mut sums = HashSet::new();
        for (i, a) in self.lattice_points.iter().enumerate() {
            for b in &self.lattice_points[i..] {
                sums.insert(a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>());
            }
        }
        let witness = doubled.lattice_points.iter().find(|p| !sums.contains(*p)).cloned();
        Ok(TwoNormality { two_normal: witness.is_none(), witness })
    }
}

fn enumerate_lattice_points(hull: &Hull) -> Result<Vec<Vec<i64>>, PolytopeError> {
    let frame = &hull.frame;
    let d = frame.dim();
    let n = frame.ambient();
    if d == 0 {
        return Ok(vec![frame.origin().to_vec()]);
    }
    // pivot coordinates: d ambient columns on which the basis is invertible
    let basis = frame.basis();
    let mut pivots: Vec<usize> = Vec::new();
    for col in 0..n {
        let mut trial = pivots.clone();
        trial.push(col);
        if rank_of_columns(basis, &trial) == trial.len() {
            pivots = trial;
        }
        if pivots.len() == d {
            break;
        }
    }
    let square: Vec<Vec<i128>> = basis
        .iter()
        .map(|row| pivots.iter().map(|&c| row[c] as i128).collect())
        .collect();
    let det = lattice::det(square.clone());
    let adj = adjugate(&square);
    let origin = frame.origin();

    let ranges: Vec<(i64, i64)> = pivots
        .iter()
        .map(|&c| {
            let lo = hull.vertices.iter().map(|v| v[c]).min().expect("nonempty");
            let hi = hull.vertices.iter().map(|v| v[c]).max().expect("nonempty");
            (lo, hi)
        })
        .collect();
    let count: u128 = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();
    if count > MAX_SCAN {
        return Err(PolytopeError::TooLarge(count));
    }

    let mut out = Vec::new();
    for xs in ranges.iter().map(|&(lo, hi)| lo..=hi).multi_cartesian_product() {
        let diff: Vec<i128> = xs.iter().zip(&pivots).map(|(x, &c)| (*x - origin[c]) as i128).collect();
        let mut y = Vec::with_capacity(d);
        let mut integral = true;
        for j in 0..d {
            let w: i128 = (0..d).map(|i| diff[i] * adj[i][j]).sum();
            if w % det != 0 {
                integral = false;
                break;
            }
            y.push((w / det) as i64);
        }
        if integral && hull.facets.iter().all(|f| f.slack(&y) >= 0) {
            out.push(frame.lift(&y));
        }
    }
    out.sort_by(|a, b| grlex_cmp(a, b));
    Ok(out)
}

fn rank_of_columns(basis: &[Vec<i64>], cols: &[usize]) -> usize {
    let mut m: Vec<Vec<i128>> = basis
        .iter()
        .map(|row| cols.iter().map(|&c| row[c] as i128).collect())
        .collect();
    let (rows, ncols) = (m.len(), cols.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, p);
        for i in rank + 1..rows {
            let (a, b) = (m[rank][c], m[i][c]);
            for k in 0..ncols {
                m[i][k] = m[i][k] * a - m[rank][k] * b;
            }
        }
        rank += 1;
    }
    rank
}

/// `adj` with `A · adj = det(A) · I`.
fn adjugate(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = a
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, v)| *v).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = s * lattice::det(minor);
        }
    }
    adj
}

/// Result of the 2-normality check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoNormality {
    pub two_normal: bool,
    pub witness: Option<Vec<i64>>,
}

/// Newton polytope of a nonzero polynomial.
pub fn newton_polytope<C: Coeff>(f: &Polynomial<C>) -> Result<LatticePolytope, PolytopeError> {
    if f.is_zero() {
        return Err(PolytopeError::ZeroPolynomial);
    }
    let pts: Vec<Vec<i64>> = f.support().map(Monomial::to_i64).collect();
    LatticePolytope::from_points(&pts)
}

/// Integer hull of `Q/2`: the convex hull of `{p ∈ Zⁿ : 2p ∈ Q}`.
pub fn half_polytope(q: &LatticePolytope) -> Result<LatticePolytope, PolytopeError> {
    let pts: Vec<Vec<i64>> = q
        .lattice_points()
        .iter()
        .filter(|p| p.iter().all(|v| v % 2 == 0))
        .map(|p| p.iter().map(|v| v / 2).collect())
        .collect();
    if pts.is_empty() {
        return Err(PolytopeError::NoLatticePoints);
    }
    LatticePolytope::from_points(&pts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    MinimalDegree,
    AlmostMinimalDegree,
    Other,
    Degenerate,
}

/// Degree data of the toric variety of `P` and the predicted generic SOS length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToricProfile {
    #[serde(rename = "N")]
    pub lattice_points: usize,
    #[serde(rename = "n")]
    pub dim: usize,
    pub codim: i64,
    pub degree: u128,
    pub epsilon: i64,
    pub classification: Classification,
    pub predicted_generic_length: Option<usize>,
    pub spanning: bool,
    pub two_normal: bool,
}

pub fn toric_profile(p: &LatticePolytope) -> Result<ToricProfile, PolytopeError> {
    let n_pts = p.num_lattice_points();
    let dim = p.dim();
    let codim = n_pts as i64 - 1 - dim as i64;
    let degree = p.normalized_volume()?;
    let epsilon = degree as i64 - codim - 1;
    let spanning = p.is_spanning();
    let two_normal = p.is_two_normal()?.two_normal;
    let classification = if !spanning {
        Classification::Degenerate
    } else {
        match epsilon {
            0 => Classification::MinimalDegree,
            1 => Classification::AlmostMinimalDegree,
            _ => Classification::Other,
        }
    };
    let predicted_generic_length = match classification {
        _ if !two_normal => None,
        Classification::MinimalDegree => Some(dim + 1),
        Classification::AlmostMinimalDegree => Some(dim + 2),
        _ => None,
    };
    Ok(ToricProfile {
        lattice_points: n_pts,
        dim,
        codim,
        degree,
        epsilon,
        classification,
        predicted_generic_length,
        spanning,
        two_normal,
    })
}

/// Which quantity parametrizes a rank interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalConvention {
    /// `m` = dimension of the affine section of `Sym_N`.
    AffineDimension,
    /// `c` = real codimension of the affine section of `Herm_N`.
    Codimension,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankInterval {
    pub r_min: usize,
    pub r_max: usize,
    pub size: usize,
    pub parameter: usize,
    pub convention: IntervalConvention,
}

impl RankInterval {
    pub fn ranks(&self) -> std::ops::RangeInclusive<usize> {
        self.r_min..=self.r_max
    }

    pub fn contains(&self, r: usize) -> bool {
        self.ranks().contains(&r)
    }
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Ranks of extreme points of a generic `m`-dimensional section of `Sym_N⁺`.
pub fn pataki_interval(size: usize, m: usize) -> Result<RankInterval, PolytopeError> {
    let total = binom2(size + 1);
    if m > total {
        return Err(PolytopeError::InvalidInput(format!("m = {m} exceeds dim Sym_{size} = {total}")));
    }
    let r_min = (0..=size).find(|&r| m >= binom2(size - r + 1));
    let r_max = (0..=size).rev().find(|&r| binom2(r + 1) + m <= total);
    match (r_min, r_max) {
        (Some(lo), Some(hi)) if lo <= hi => Ok(RankInterval {
            r_min: lo,
            r_max: hi,
            size,
            parameter: m,
            convention: IntervalConvention::AffineDimension,
        }),
        _ => Err(PolytopeError::EmptyInterval { size, parameter: m }),
    }
}

/// Hermitian analogue, parametrized by the real codimension `c` in `Herm_N`.
pub fn hermitian_pataki_interval(size: usize, c: usize) -> Result<RankInterval, PolytopeError> {
    if c > size * size {
        return Err(PolytopeError::InvalidInput(format!("c = {c} exceeds dim Herm_{size}")));
    }
    let ok: Vec<usize> = (0..=size)
        .filter(|&r| (size - r) * (size - r) + c <= size * size && r * r <= c)
        .collect();
    match (ok.first(), ok.last()) {
        (Some(&lo), Some(&hi)) => Ok(RankInterval {
            r_min: lo,
            r_max: hi,
            size,
            parameter: c,
            convention: IntervalConvention::Codimension,
        }),
        _ => Err(PolytopeError::EmptyInterval { size, parameter: c }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_polytope_of_sparse_example() {
        // a + bx + cx² + dx²y + ex³y + fx⁴y²
        let f = Polynomial::from_terms(
            2,
            [[0, 0], [1, 0], [2, 0], [2, 1], [3, 1], [4, 2]]
                .iter()
                .map(|e| (e.to_vec(), 1.0)),
        )
        .unwrap();
        let p = newton_polytope(&f).unwrap();
        let mut v = p.vertices().to_vec();
        v.sort();
        assert_eq!(v, vec![vec![0, 0], vec![2, 0], vec![4, 2]]);
        let h = half_polytope(&p).unwrap();
        let mut hv = h.vertices().to_vec();
        hv.sort();
        assert_eq!(hv, vec![vec![0, 0], vec![1, 0], vec![2, 1]]);
    }

    #[test]
    fn constant_and_segment() {
        let c = newton_polytope(&Polynomial::constant(2, 3.0)).unwrap();
        assert_eq!(c.lattice_points(), &[vec![0, 0]]);
        assert_eq!(c.dim(), 0);
        let f = Polynomial::from_terms(2, vec![(vec![2, 0], 1.0), (vec![0, 2], 1.0)]).unwrap();
        let p = newton_polytope(&f).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.lattice_points(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert!(newton_polytope(&Polynomial::<f64>::zero(2)).is_err());
    }

    #[test]
    fn half_of_odd_segment() {
        let q = LatticePolytope::from_points(&[vec![0], vec![3]]).unwrap();
        let h = half_polytope(&q).unwrap();
        assert_eq!(h.lattice_points(), &[vec![0], vec![1]]);
    }

    #[test]
    fn lattice_points_sorted_grlex() {
        let p = LatticePolytope::homogeneous_simplex(2, 3).unwrap();
        assert_eq!(p.lattice_points(), &[vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
    }

    #[test]
    fn simplex_volumes() {
        assert_eq!(LatticePolytope::simplex(2, 3).unwrap().normalized_volume().unwrap(), 9);
        assert_eq!(LatticePolytope::simplex(3, 2).unwrap().normalized_volume().unwrap(), 8);
        assert_eq!(LatticePolytope::homogeneous_simplex(3, 3).unwrap().normalized_volume().unwrap(), 9);
    }

    #[test]
    fn pataki_fixtures() {
        let i = pataki_interval(4, 3).unwrap();
        assert_eq!((i.r_min, i.r_max), (2, 3));
        let i = pataki_interval(5, 0).unwrap();
        assert_eq!((i.r_min, i.r_max), (5, 5));
        assert_eq!(pataki_interval(6, 6).unwrap().r_max, 5);
        let h = hermitian_pataki_interval(12, 63).unwrap();
        assert_eq!((h.r_min, h.r_max), (3, 7));
        let h = hermitian_pataki_interval(13, 70).unwrap();
        assert_eq!((h.r_min, h.r_max), (4, 8));
        let h = hermitian_pataki_interval(5, 25).unwrap();
        assert_eq!((h.r_min, h.r_max), (5, 5));
        assert!(pataki_interval(3, 7).is_err());
    }
}
