//! Binary sextics: the Gram pencil, its Kummer quartic, the dual Kummer
//! surface and closed-form linear optimization over the Gram spectrahedron.
//!
//! The sextic is written `a₆s⁶ − 6a₅s⁵t + 15a₄s⁴t² − 20a₃s³t³ + 15a₂s²t⁴ − 6a₁st⁵ + a₀t⁶`
//! and its Gram matrices are parametrized by `(x, y, z)`. A dual point
//! `(X : Y : Z : W)` is the plane `Xx + Yy + Zz + Ww = 0`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::binary::{kummer_nodes, BinaryError};
use crate::gram::SymMatrix;
use crate::linalg;
use crate::poly::{BinaryForm, Coeff, Polynomial, RealCoeff};
use crate::sdp::{maximize, AffineSection, SdpError, SdpOptions, SdpStatus};

#[derive(Debug, Error)]
pub enum KummerError {
    #[error("expected a sextic, got degree {0}")]
    NotSextic(usize),
    #[error("F₂ vanishes at the objective direction; the critical values are not defined")]
    DegenerateDirection,
    #[error("F on the chart is not proportional to the determinant (residual {residual:e})")]
    NotProportional { residual: f64 },
    #[error("the Gram spectrahedron is empty")]
    Empty,
    #[error(transparent)]
    Binary(#[from] BinaryError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

/// Coefficients `a₀, …, a₆` in the signed-binomial convention.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SexticCoeffs<C = f64> {
    a: [C; 7],
}

/// `(−1)^k C(6, k)` for the monomial `s^(6−k) t^k`.
const SCALE: [i64; 7] = [1, -6, 15, -20, 15, -6, 1];

impl<C: Coeff> SexticCoeffs<C> {
    /// From `[a₀, a₁, …, a₆]`.
    pub fn new(a: [C; 7]) -> Self {
        SexticCoeffs { a }
    }

    /// From raw coefficients of `s⁶, s⁵t, …, t⁶`.
    pub fn from_raw(raw: [C; 7]) -> Self {
        let a = std::array::from_fn(|i| raw[6 - i].clone() / C::from_i64(SCALE[6 - i]));
        SexticCoeffs { a }
    }

    pub fn a(&self, i: usize) -> &C {
        &self.a[i]
    }

    /// Raw coefficients of `s⁶, s⁵t, …, t⁶`.
    pub fn to_raw(&self) -> [C; 7] {
        std::array::from_fn(|k| self.a[6 - k].clone() * C::from_i64(SCALE[k]))
    }
}

impl SexticCoeffs<f64> {
    pub fn from_form(f: &BinaryForm) -> Result<Self, KummerError> {
        let c = f.coeffs();
        if c.len() != 7 {
            return Err(KummerError::NotSextic(f.degree()));
        }
        Ok(Self::from_raw(std::array::from_fn(|k| c[k])))
    }

    pub fn to_form(&self) -> BinaryForm {
        BinaryForm::new(self.to_raw().to_vec()).expect("seven coefficients")
    }
}

impl<C: RealCoeff> SexticCoeffs<C> {
    pub fn to_f64(&self) -> SexticCoeffs<f64> {
        SexticCoeffs { a: std::array::from_fn(|i| self.a[i].as_f64()) }
    }
}

/// Constant part of the Gram pencil.
fn base_matrix<C: Coeff>(a: &SexticCoeffs<C>) -> SymMatrix<C> {
    let k = |c: i64, i: usize| C::from_i64(c) * a.a[i].clone();
    SymMatrix::from_rows(&[
        vec![k(1, 6), k(-3, 5), k(3, 4), k(-1, 3)],
        vec![k(-3, 5), k(9, 4), k(-9, 3), k(3, 2)],
        vec![k(3, 4), k(-9, 3), k(9, 2), k(-3, 1)],
        vec![k(-1, 3), k(3, 2), k(-3, 1), k(1, 0)],
    ])
    .expect("square")
}

/// Coefficient matrices of `x`, `y` and `z` in the pencil.
fn direction_matrices<C: Coeff>() -> [SymMatrix<C>; 3] {
    let unit = |entries: &[(usize, usize, i64)]| {
        let mut m = SymMatrix::zeros(4);
        for &(i, j, v) in entries {
            m.set(i, j, C::from_i64(v));
        }
        m
    };
    [
        unit(&[(1, 3, 1), (2, 2, -2)]),
        unit(&[(0, 3, -1), (1, 2, 1)]),
        unit(&[(0, 2, 1), (1, 1, -2)]),
    ]
}

/// The Gram matrix of the sextic at `(x, y, z)`.
pub fn gram_parametrization<C: Coeff>(a: &SexticCoeffs<C>, x: C, y: C, z: C) -> SymMatrix<C> {
    let [dx, dy, dz] = direction_matrices::<C>();
    base_matrix(a).axpy(&x, &dx).axpy(&y, &dy).axpy(&z, &dz)
}

/// `(x, y, z)` of a (possibly complex) Gram matrix of the sextic.
pub fn coordinates_of<C: Coeff>(a: &SexticCoeffs<C>, entry: impl Fn(usize, usize) -> C) -> [C; 3] {
    let three = C::from_i64(3);
    [
        entry(1, 3) - three.clone() * a.a[2].clone(),
        -entry(0, 3) - a.a[3].clone(),
        entry(0, 2) - three * a.a[4].clone(),
    ]
}

/// The Gram pencil as an affine section with coordinates `(x, y, z)`.
pub fn section(a: &SexticCoeffs<f64>) -> AffineSection {
    let dirs = direction_matrices::<f64>().iter().map(SymMatrix::to_dmatrix).collect();
    AffineSection::new(base_matrix(a).to_dmatrix(), dirs).expect("symmetric 4×4 pencil")
}

fn det4<C: Coeff>(m: &[[Polynomial<C>; 4]; 4]) -> Polynomial<C> {
    let nvars = m[0][0].nvars();
    let mut out = Polynomial::zero(nvars);
    for perm in itertools::Itertools::permutations(0..4usize, 4) {
        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut t = Polynomial::constant(nvars, C::one());
        for (row, &col) in perm.iter().enumerate() {
            t = t.checked_mul(&m[row][col]).expect("shared nvars");
        }
        out = if inversions % 2 == 0 { out.checked_add(&t) } else { out.checked_sub(&t) }.expect("shared nvars");
    }
    out
}

/// Determinant of the pencil with the constant part multiplied by `w`, in `(x, y, z, w)`.
pub fn homogenized_determinant<C: Coeff>(a: &SexticCoeffs<C>) -> Polynomial<C> {
    let base = base_matrix(a);
    let dirs = direction_matrices::<C>();
    let m: [[Polynomial<C>; 4]; 4] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut p = Polynomial::var(4, 3).scale(base.get(i, j));
            for (k, d) in dirs.iter().enumerate() {
                p = p.checked_add(&Polynomial::var(4, k).scale(d.get(i, j))).expect("4 vars");
            }
            p
        })
    });
    det4(&m)
}

/// Determinant of [`gram_parametrization`] with each of `x, y, z` replaced by a polynomial.
pub fn determinant_in<C: Coeff>(a: &SexticCoeffs<C>, subs: &[Polynomial<C>; 3]) -> Polynomial<C> {
    let nvars = subs[0].nvars();
    let one = Polynomial::constant(nvars, C::one());
    homogenized_determinant(a)
        .compose(&[subs[0].clone(), subs[1].clone(), subs[2].clone(), one])
        .expect("shared nvars")
}

/// The dual Kummer surface `F = W²F₂ + 2WF₁ + F₀`, each `Fᵢ` in `(X, Y, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualKummer<C = f64> {
    pub f2: Polynomial<C>,
    pub f1: Polynomial<C>,
    pub f0: Polynomial<C>,
}

pub fn dual_kummer<C: Coeff>(a: &SexticCoeffs<C>) -> DualKummer<C> {
    let a = &a.a;
    let q = |terms: &[(i64, usize, usize)]| {
        terms.iter().fold(C::zero(), |acc, &(k, i, j)| acc + C::from_i64(k) * a[i].clone() * a[j].clone())
    };
    let l = |k: i64, i: usize| C::from_i64(k) * a[i].clone();
    let poly = |terms: Vec<([u32; 3], C)>| {
        Polynomial::from_terms(3, terms.into_iter().map(|(e, c)| (e.to_vec(), c))).expect("3 vars")
    };

    let f2 = poly(vec![([0, 2, 0], C::from_i64(-1)), ([1, 0, 1], C::from_i64(4))]);
    let f1 = poly(vec![
        ([3, 0, 0], l(1, 0)),
        ([2, 1, 0], l(3, 1)),
        ([1, 2, 0], l(3, 2)),
        ([0, 3, 0], l(1, 3)),
        ([2, 0, 1], l(3, 2)),
        ([1, 1, 1], l(6, 3)),
        ([0, 2, 1], l(3, 4)),
        ([1, 0, 2], l(3, 4)),
        ([0, 1, 2], l(3, 5)),
        ([0, 0, 3], l(1, 6)),
    ]);
    let f0 = poly(vec![
        ([4, 0, 0], q(&[(9, 0, 2), (-9, 1, 1)])),
        ([3, 1, 0], q(&[(18, 0, 3), (-18, 1, 2)])),
        ([2, 2, 0], q(&[(15, 0, 4), (-6, 1, 3), (-9, 2, 2)])),
        ([1, 3, 0], q(&[(6, 0, 5), (-6, 2, 3)])),
        ([0, 4, 0], q(&[(1, 0, 6), (-1, 3, 3)])),
        ([3, 0, 1], q(&[(-6, 0, 4), (60, 1, 3), (-54, 2, 2)])),
        ([2, 1, 1], q(&[(-6, 0, 5), (72, 1, 4), (-66, 2, 3)])),
        ([1, 2, 1], q(&[(-2, 0, 6), (36, 1, 5), (-18, 2, 4), (-16, 3, 3)])),
        ([0, 3, 1], q(&[(6, 1, 6), (-6, 3, 4)])),
        ([0, 0, 4], q(&[(9, 4, 6), (-9, 5, 5)])),
        ([2, 0, 2], q(&[(1, 0, 6), (-18, 1, 5), (117, 2, 4), (-100, 3, 3)])),
        ([1, 1, 2], q(&[(-6, 1, 6), (72, 2, 5), (-66, 3, 4)])),
        ([0, 2, 2], q(&[(15, 2, 6), (-6, 3, 5), (-9, 4, 4)])),
        ([1, 0, 3], q(&[(-6, 2, 6), (60, 3, 5), (-54, 4, 4)])),
        ([0, 1, 3], q(&[(18, 3, 6), (-18, 4, 5)])),
    ]);
    DualKummer { f2, f1, f0 }
}

impl<C: Coeff> DualKummer<C> {
    /// `F` as a quartic in `(X, Y, Z, W)`.
    pub fn to_polynomial(&self) -> Polynomial<C> {
        let lift = |p: &Polynomial<C>, w: u32, k: i64| {
            let mut out = Polynomial::zero(4);
            for (m, c) in p.terms() {
                let e = m.exps();
                let t = Polynomial::from_terms(4, [(vec![e[0], e[1], e[2], w], c.clone() * C::from_i64(k))]);
                out = out.checked_add(&t.expect("4 vars")).expect("4 vars");
            }
            out
        };
        lift(&self.f2, 2, 1)
            .checked_add(&lift(&self.f1, 1, 2))
            .and_then(|p| p.checked_add(&lift(&self.f0, 0, 1)))
            .expect("4 vars")
    }

    /// `(F₂(c), F₁(c), F₀(c))`.
    pub fn at(&self, c: &[C; 3]) -> (C, C, C) {
        let e = |p: &Polynomial<C>| p.eval(c).expect("3 vars");
        (e(&self.f2), e(&self.f1), e(&self.f0))
    }
}

/// Result of comparing `F` on the chart `X − Y/5 − Z + W = 1` with the determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartCheck<C> {
    /// `F|chart = λ · det`.
    pub lambda: C,
    /// Max-norm of `F|chart − λ·det`, relative to `F|chart`.
    pub residual: f64,
}

/// Substitution `x = X+Y+Z+1`, `y = X+Y−Z−1/5`, `z = X−Y−3Z−1` and `W = 1 − X + Y/5 + Z`.
fn chart<C: Coeff>() -> ([Polynomial<C>; 3], Polynomial<C>) {
    let lin = |cx: i64, cy: i64, cz: i64, c0: C| {
        let mut terms = vec![
            (vec![1, 0, 0], C::from_i64(cx)),
            (vec![0, 1, 0], C::from_i64(cy)),
            (vec![0, 0, 1], C::from_i64(cz)),
        ];
        terms.push((vec![0, 0, 0], c0));
        Polynomial::from_terms(3, terms).expect("3 vars")
    };
    let subs = [
        lin(1, 1, 1, C::one()),
        lin(1, 1, -1, C::from_ratio(-1, 5)),
        lin(1, -1, -3, C::from_i64(-1)),
    ];
    let w = Polynomial::from_terms(
        3,
        [
            (vec![0, 0, 0], C::one()),
            (vec![1, 0, 0], C::from_i64(-1)),
            (vec![0, 1, 0], C::from_ratio(1, 5)),
            (vec![0, 0, 1], C::one()),
        ],
    )
    .expect("3 vars");
    (subs, w)
}

/// `F` restricted to the chart `X − Y/5 − Z + W = 1`, as a polynomial in `(X, Y, Z)`.
pub fn dual_on_chart<C: Coeff>(a: &SexticCoeffs<C>) -> Polynomial<C> {
    let (_, w) = chart::<C>();
    let vars = [Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2), w];
    dual_kummer(a).to_polynomial().compose(&vars).expect("3 vars")
}

/// The determinant of the pencil under the chart substitution, in `(X, Y, Z)`.
pub fn determinant_on_chart<C: Coeff>(a: &SexticCoeffs<C>) -> Polynomial<C> {
    determinant_in(a, &chart::<C>().0)
}

/// Checks that `F` on the chart is a nonzero multiple of the determinant.
///
/// Exact coefficient fields must match with zero residual.
pub fn chart_check<C: RealCoeff>(a: &SexticCoeffs<C>) -> Result<ChartCheck<C>, KummerError> {
    let lhs = dual_on_chart(a);
    let det = determinant_on_chart(a);
    let Some((m, d)) = det.terms().max_by(|x, y| x.1.magnitude().total_cmp(&y.1.magnitude())) else {
        return Err(KummerError::NotProportional { residual: f64::INFINITY });
    };
    let lambda = lhs.coeff(m) / d.clone();
    let diff = lhs.checked_sub(&det.scale(&lambda)).expect("3 vars");
    let scale = lhs.max_norm();
    let residual = if scale == 0.0 { f64::INFINITY } else { diff.max_norm() / scale };
    let ok = if C::EXACT { diff.is_zero() } else { residual < 1e-9 };
    if !ok || lambda.is_zero() {
        return Err(KummerError::NotProportional { residual });
    }
    Ok(ChartCheck { lambda, residual })
}

/// A rank-three critical point of `c·(x, y, z)` on the Kummer surface.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub w: f64,
    /// `c·(x, y, z) = −W`.
    pub value: f64,
    pub xyz: [f64; 3],
    pub matrix: SymMatrix<f64>,
    pub rank: usize,
    pub min_eigenvalue: f64,
    pub psd: bool,
    /// Residual of the first-order conditions after refinement.
    pub kkt_residual: f64,
}

/// One of the ten rank-two nodes with its objective value.
#[derive(Clone, Debug, Serialize)]
pub struct NodeCandidate {
    pub mask: u64,
    pub value: Complex64,
    pub xyz: [Complex64; 3],
    pub real: bool,
    pub psd: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OptimumSource {
    RankThree { index: usize },
    RankTwo { mask: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Optimum {
    pub value: f64,
    pub xyz: [f64; 3],
    pub matrix: SymMatrix<f64>,
    pub source: OptimumSource,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedForm {
    pub objective: [f64; 3],
    pub f2: f64,
    pub f1: f64,
    pub f0: f64,
    /// `F₁² − F₀F₂`; negative means the rank-three critical pair is complex.
    pub discriminant: f64,
    pub critical: Vec<CriticalPoint>,
    pub nodes: Vec<NodeCandidate>,
    pub maximum: Optimum,
    pub minimum: Optimum,
}

fn gradient(p: &Polynomial<f64>, at: &[f64]) -> Vec<f64> {
    (0..p.nvars()).map(|i| p.derivative(i).eval(at).expect("point length")).collect()
}

/// Gauss–Newton on `A(ξ)k = 0`, `kᵀAᵢk = μcᵢ`, `|k| = 1` from a starting `ξ`.
fn refine_critical(a: &SexticCoeffs<f64>, c: &[f64; 3], xyz: [f64; 3]) -> ([f64; 3], f64) {
    let base = base_matrix(a).to_dmatrix();
    let dirs: Vec<DMatrix<f64>> = direction_matrices::<f64>().iter().map(SymMatrix::to_dmatrix).collect();
    let pencil = |x: &[f64]| &base + &dirs[0] * x[0] + &dirs[1] * x[1] + &dirs[2] * x[2];

    let (vals, vecs) = linalg::sym_eigen(&pencil(&xyz));
    let low = (0..4).min_by(|&i, &j| vals[i].abs().total_cmp(&vals[j].abs())).expect("4 eigenvalues");
    let mut k: DVector<f64> = vecs.column(low).into_owned();
    let quad: Vec<f64> = dirs.iter().map(|d| k.dot(&(d * &k))).collect();
    let cc: f64 = c.iter().map(|v| v * v).sum();
    let mut mu = quad.iter().zip(c).map(|(q, ci)| q * ci).sum::<f64>() / cc;
    let mut x = xyz;

    let residual = |x: &[f64; 3], k: &DVector<f64>, mu: f64| {
        let mut r = DVector::zeros(8);
        r.rows_mut(0, 4).copy_from(&(pencil(x) * k));
        for i in 0..3 {
            r[4 + i] = k.dot(&(&dirs[i] * k)) - mu * c[i];
        }
        r[7] = k.dot(k) - 1.0;
        r
    };
    let mut r = residual(&x, &k, mu);
    for _ in 0..50 {
        let mut jac = DMatrix::zeros(8, 8);
        let a_x = pencil(&x);
        for i in 0..3 {
            jac.view_mut((0, i), (4, 1)).copy_from(&(&dirs[i] * &k));
            let g = (&dirs[i] * &k) * 2.0;
            jac.view_mut((4 + i, 3), (1, 4)).copy_from(&g.transpose());
            jac[(4 + i, 7)] = -c[i];
        }
        jac.view_mut((0, 3), (4, 4)).copy_from(&a_x);
        jac.view_mut((7, 3), (1, 4)).copy_from(&(&k * 2.0).transpose());
        let step = linalg::lstsq(&jac, &(-&r));
        let next_x = [x[0] + step[0], x[1] + step[1], x[2] + step[2]];
        let next_k = &k + step.rows(3, 4);
        let next_mu = mu + step[7];
        let next_r = residual(&next_x, &next_k, next_mu);
        if !(next_r.norm() < r.norm()) {
            break;
        }
        (x, k, mu, r) = (next_x, next_k, next_mu, next_r);
        if step.norm() < 1e-15 * (1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max)) {
            break;
        }
    }
    (x, r.norm())
}

/// Rank-three critical values from `F`, with rank-two nodes, and the optima among
/// the feasible candidates.
pub fn optimize_closed_form(
    a: &SexticCoeffs<f64>,
    c: [f64; 3],
    psd_tol: f64,
    rank_tol: f64,
) -> Result<ClosedForm, KummerError> {
    let dual = dual_kummer(a);
    let (f2, f1, f0) = dual.at(&c);
    let cc: f64 = c.iter().map(|v| v * v).sum();
    if f2.abs() <= 1e-12 * cc {
        return Err(KummerError::DegenerateDirection);
    }
    let discriminant = f1 * f1 - f0 * f2;
    let full = dual.to_polynomial();
    let mut critical = Vec::new();
    if discriminant >= 0.0 {
        let root = discriminant.sqrt();
        for sign in [1.0, -1.0] {
            let w = (-f1 + sign * root) / f2;
            let g = gradient(&full, &[c[0], c[1], c[2], w]);
            let start = [g[0] / g[3], g[1] / g[3], g[2] / g[3]];
            let (xyz, kkt_residual) = refine_critical(a, &c, start);
            let matrix = gram_parametrization(a, xyz[0], xyz[1], xyz[2]);
            let eig = matrix.eigenvalues();
            let top = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            critical.push(CriticalPoint {
                w,
                value: -w,
                xyz,
                rank: matrix.numerical_rank(rank_tol),
                min_eigenvalue: eig[0],
                psd: eig[0] >= -psd_tol * top,
                matrix,
                kkt_residual,
            });
        }
    }

    let complex_a = SexticCoeffs::new(std::array::from_fn(|i| Complex64::new(a.a[i], 0.0)));
    let mut nodes = Vec::new();
    let mut node_matrices = Vec::new();
    for r in kummer_nodes(&a.to_form())?.rank_two {
        let xyz = coordinates_of(&complex_a, |i, j| r.entry(i, j));
        let value: Complex64 = xyz.iter().zip(&c).map(|(v, ci)| v * ci).sum();
        let real = r.im.max_abs_diff(&SymMatrix::zeros(4)) == 0.0;
        let psd = real && r.re.is_psd(psd_tol);
        nodes.push(NodeCandidate { mask: r.partition.mask, value, xyz, real, psd });
        node_matrices.push(r.re);
    }

    let mut feasible: Vec<Optimum> = Vec::new();
    for (index, p) in critical.iter().enumerate().filter(|(_, p)| p.psd) {
        let value = p.xyz.iter().zip(&c).map(|(v, ci)| v * ci).sum();
        feasible.push(Optimum { value, xyz: p.xyz, matrix: p.matrix.clone(), source: OptimumSource::RankThree { index } });
    }
    for (n, m) in nodes.iter().zip(node_matrices).filter(|(n, _)| n.psd) {
        feasible.push(Optimum {
            value: n.value.re,
            xyz: n.xyz.map(|v| v.re),
            matrix: m,
            source: OptimumSource::RankTwo { mask: n.mask },
        });
    }
    let pick = |better: fn(f64, f64) -> bool| {
        feasible.iter().fold(None::<&Optimum>, |best, o| match best {
            Some(b) if !better(o.value, b.value) => Some(b),
            _ => Some(o),
        })
    };
    let maximum = pick(|u, v| u > v).ok_or(KummerError::Empty)?.clone();
    let minimum = pick(|u, v| u < v).ok_or(KummerError::Empty)?.clone();
    Ok(ClosedForm { objective: c, f2, f1, f0, discriminant, critical, nodes, maximum, minimum })
}

/// Triangle mesh with vertex coordinates.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    /// Writes the mesh as a named OBJ object; `offset` is the number of vertices already written.
    pub fn write_obj(&self, name: &str, offset: usize, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "o {name}")?;
        for v in &self.vertices {
            writeln!(out, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + offset + 1, f[1] + offset + 1, f[2] + offset + 1)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    /// Grid cells per axis.
    pub resolution: usize,
    /// Half-width of the cube `[−e, e]³` on the chart `W = 1` of the dual surface.
    pub dual_extent: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { resolution: 32, dual_extent: 2.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceSample {
    /// Bounding box of the spectrahedron, padded, as `[lo, hi]` per axis.
    pub bounds: [[f64; 2]; 3],
    /// The zero set of `λ_min`, the boundary of the spectrahedron.
    pub primal: Mesh,
    /// `{F(X, Y, Z, 1) = 0}`.
    pub dual: Mesh,
}

impl SurfaceSample {
    pub fn write_obj(&self, out: &mut impl Write) -> io::Result<()> {
        self.primal.write_obj("kummer", 0, out)?;
        self.dual.write_obj("dual_kummer", self.primal.vertices.len(), out)
    }
}

/// Cube corners by bit `(dx, dy, dz)` and the six tetrahedra around the main diagonal.
const TETRAHEDRA: [[usize; 4]; 6] = [[0, 1, 3, 7], [0, 3, 2, 7], [0, 2, 6, 7], [0, 6, 4, 7], [0, 4, 5, 7], [0, 5, 1, 7]];

/// Marching tetrahedra on `{φ = 0}`, with `φ > 0` inside; crossings are refined on each edge.
fn march(phi: impl Fn([f64; 3]) -> f64, bounds: [[f64; 2]; 3], res: usize) -> Mesh {
    let n = res + 1;
    let pos = |i: usize, j: usize, k: usize| {
        let t = |axis: usize, s: usize| bounds[axis][0] + (bounds[axis][1] - bounds[axis][0]) * s as f64 / res as f64;
        [t(0, i), t(1, j), t(2, k)]
    };
    let id = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut values = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                values[id(i, j, k)] = phi(pos(i, j, k));
            }
        }
    }
    let point = |g: usize| pos(g / (n * n), (g / n) % n, g % n);

    let mut mesh = Mesh::default();
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut crossing = |mesh: &mut Mesh, u: usize, v: usize| -> usize {
        let key = (u.min(v), u.max(v));
        *edges.entry(key).or_insert_with(|| {
            mesh.vertices.push(refine_crossing(&phi, point(key.0), point(key.1), values[key.0], values[key.1]));
            mesh.vertices.len() - 1
        })
    };
    for i in 0..res {
        for j in 0..res {
            for k in 0..res {
                let corner = |b: usize| id(i + (b >> 2 & 1), j + (b >> 1 & 1), k + (b & 1));
                for tet in TETRAHEDRA {
                    let g = tet.map(corner);
                    let inside: Vec<usize> = g.iter().copied().filter(|&v| values[v] > 0.0).collect();
                    let outside: Vec<usize> = g.iter().copied().filter(|&v| values[v] <= 0.0).collect();
                    let tris: Vec<[usize; 3]> = match (inside.len(), outside.len()) {
                        (1, 3) | (3, 1) => {
                            let (lone, rest) = if inside.len() == 1 { (inside[0], &outside) } else { (outside[0], &inside) };
                            vec![[crossing(&mut mesh, lone, rest[0]), crossing(&mut mesh, lone, rest[1]), crossing(&mut mesh, lone, rest[2])]]
                        }
                        (2, 2) => {
                            let p = crossing(&mut mesh, inside[0], outside[0]);
                            let q = crossing(&mut mesh, inside[0], outside[1]);
                            let r = crossing(&mut mesh, inside[1], outside[1]);
                            let s = crossing(&mut mesh, inside[1], outside[0]);
                            vec![[p, q, r], [p, r, s]]
                        }
                        _ => Vec::new(),
                    };
                    let centroid = |vs: &[usize]| {
                        let mut m = [0.0; 3];
                        for &v in vs {
                            let p = point(v);
                            (0..3).for_each(|a| m[a] += p[a] / vs.len() as f64);
                        }
                        m
                    };
                    let outward = sub(centroid(&outside), centroid(&inside));
                    for mut t in tris {
                        let [p, q, r] = t.map(|v| mesh.vertices[v]);
                        if dot(cross(sub(q, p), sub(r, p)), outward) < 0.0 {
                            t.swap(1, 2);
                        }
                        mesh.faces.push(t);
                    }
                }
            }
        }
    }
    mesh
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Illinois regula falsi for the sign change of `φ` on the segment `[p, q]`.
fn refine_crossing(phi: &impl Fn([f64; 3]) -> f64, p: [f64; 3], q: [f64; 3], fp: f64, fq: f64) -> [f64; 3] {
    let at = |t: f64| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])];
    let (mut lo, mut hi, mut flo, mut fhi) = (0.0, 1.0, fp, fq);
    let mut side = 0;
    let mut t = 0.5;
    for _ in 0..60 {
        t = if flo == fhi { 0.5 * (lo + hi) } else { (lo * fhi - hi * flo) / (fhi - flo) };
        let ft = phi(at(t));
        if ft == 0.0 || hi - lo < 1e-14 {
            break;
        }
        if (ft > 0.0) == (flo > 0.0) {
            lo = t;
            flo = ft;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            fhi = ft;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    at(t)
}

/// Bounding box of the spectrahedron from six linear optimizations.
pub fn bounding_box(a: &SexticCoeffs<f64>, opts: &SdpOptions) -> Result<[[f64; 2]; 3], KummerError> {
    let sec = section(a);
    let mut bounds = [[0.0; 2]; 3];
    for (axis, b) in bounds.iter_mut().enumerate() {
        for (side, sign) in [(1, 1.0), (0, -1.0)] {
            let mut c = [0.0; 3];
            c[axis] = sign;
            let sol = maximize(&sec, &c, opts)?;
            if sol.status == SdpStatus::Infeasible {
                return Err(KummerError::Empty);
            }
            b[side] = sign * sol.objective_value;
        }
    }
    Ok(bounds)
}

/// Samples the boundary of the Gram spectrahedron and the dual Kummer surface.
pub fn sample_surface(
    a: &SexticCoeffs<f64>,
    sample: &SampleOptions,
    opts: &SdpOptions,
) -> Result<SurfaceSample, KummerError> {
    let tight = bounding_box(a, opts)?;
    let bounds = tight.map(|[lo, hi]| {
        let pad = 0.05 * (hi - lo).max(1e-9);
        [lo - pad, hi + pad]
    });
    let sec = section(a);
    let lambda_min = |p: [f64; 3]| linalg::eigenvalues(&sec.point(&p))[0];
    let primal = march(lambda_min, bounds, sample.resolution);

    let f = dual_kummer(a).to_polynomial();
    let e = sample.dual_extent;
    let dual = march(|p| -f.eval(&[p[0], p[1], p[2], 1.0]).expect("4 vars"), [[-e, e]; 3], sample.resolution);
    Ok(SurfaceSample { bounds, primal, dual })
}
