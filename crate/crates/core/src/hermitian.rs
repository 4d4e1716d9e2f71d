//! Hermitian Gram matrices: conversions between real and Hermitian sums of
//! squares, Hermitian Gram spectrahedra via realification, and rank-one
//! matrices of positive binary forms.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::binary::{factor_coefficients, paired_roots, BinaryError, RootPartition};
use crate::config::Tolerances;
use crate::gram::{gram_space, linear_form, CertificateMode, GramError, GramSpace, SosCertificate, SymMatrix};
use crate::linalg;
use crate::poly::{BinaryForm, Polynomial};
use crate::polytope::LatticePolytope;
use crate::sdp::{self, AffineSection, SdpError, SdpOptions, SdpStatus};

#[derive(Debug, Error)]
pub enum HermitianError {
    #[error("s = {s} is outside 2..={max}")]
    SumSize { s: usize, max: u128 },
    #[error("brute force over conjugation flips supports at most {max} summands, got {got}")]
    TooManySummands { got: usize, max: usize },
    #[error("partition is not conjugate-swapped")]
    NotHermitianSquare,
    #[error("the Hermitian Gram spectrahedron is empty")]
    Infeasible,
    #[error(transparent)]
    Binary(#[from] BinaryError),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

/// Complex Hermitian matrix; the lower triangle is always the conjugate of the upper.
#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix {
    data: DMatrix<Complex64>,
}

impl HermMatrix {
    /// Builds from the upper triangle; diagonal imaginary parts are dropped.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = DMatrix::zeros(n, n);
        for i in 0..n {
            data[(i, i)] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..n {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v.conj();
            }
        }
        HermMatrix { data }
    }

    pub fn zeros(n: usize) -> Self {
        HermMatrix { data: DMatrix::zeros(n, n) }
    }

    /// `v v*`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_upper(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// `re + i·im` with `re` symmetric and `im` antisymmetric (only its upper triangle is read).
    pub fn from_parts(re: &SymMatrix<f64>, im: &DMatrix<f64>) -> Self {
        Self::from_upper(re.n(), |i, j| Complex64::new(*re.get(i, j), im[(i, j)]))
    }

    /// Reads the blocks `[[Re, −Im], [Im, Re]]` of a realification.
    pub fn from_realification(r: &DMatrix<f64>) -> Self {
        let n = r.nrows() / 2;
        Self::from_upper(n, |i, j| {
            let re = 0.5 * (r[(i, j)] + r[(n + i, n + j)]);
            let im = 0.5 * (r[(n + i, j)] - r[(i, n + j)]);
            Complex64::new(re, im)
        })
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// `(A + Ā)/2`.
    pub fn re(&self) -> SymMatrix<f64> {
        SymMatrix::from_fn(self.n(), |i, j| self.data[(i, j)].re)
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.data.map(|z| z.im)
    }

    pub fn conj(&self) -> Self {
        HermMatrix { data: self.data.map(|z| z.conj()) }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermMatrix { data: &self.data + &other.data }
    }

    pub fn scale(&self, c: f64) -> Self {
        HermMatrix { data: &self.data * Complex64::new(c, 0.0) }
    }

    /// `[[Re, −Im], [Im, Re]]`, real symmetric of size `2n`.
    pub fn realify(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = self.data[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.data.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn numerical_rank(&self, rank_tol: f64) -> usize {
        linalg::numerical_rank_of_values(&self.eigenvalues(), rank_tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.data - &other.data).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Applies `v ↦ A v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.data[(i, j)] * v[j]).sum()).collect()
    }
}

impl Serialize for HermMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..self.n()).map(|i| (0..self.n()).map(|j| f(&self.data[(i, j)])).collect()).collect()
        };
        let mut st = s.serialize_struct("HermMatrix", 2)?;
        st.serialize_field("re", &rows(|z| z.re))?;
        st.serialize_field("im", &rows(|z| z.im))?;
        st.end()
    }
}

/// Complex polynomials `pᵢ` with `Σ pᵢ p̄ᵢ = f` up to `residual`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermCertificate {
    pub summands: Vec<Polynomial<Complex64>>,
    pub residual: f64,
}

impl HermCertificate {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `Σ pᵢ p̄ᵢ`.
    pub fn expand(&self, nvars: usize) -> Polynomial<Complex64> {
        self.summands.iter().fold(Polynomial::zero(nvars), |acc, p| {
            acc.checked_add(&p.norm_squared()).expect("summands share nvars")
        })
    }

    /// Max-norm distance of the expansion from `f`, imaginary part included.
    pub fn verify(&self, f: &Polynomial<f64>) -> f64 {
        self.expand(f.nvars()).distance(&f.to_complex()).expect("same nvars")
    }
}

/// Pairs real squares as `(p₂ₖ₋₁ + i p₂ₖ)(p₂ₖ₋₁ − i p₂ₖ)`; an odd last summand stays real.
pub fn real_to_hermitian(cert: &SosCertificate<f64>) -> HermCertificate {
    let i = Complex64::new(0.0, 1.0);
    let summands: Vec<Polynomial<Complex64>> = cert
        .summands
        .chunks(2)
        .map(|pair| match pair {
            [p, q] => p.to_complex().checked_add(&q.to_complex().scale(&i)).expect("shared nvars"),
            [p] => p.to_complex(),
            _ => unreachable!("chunks of two"),
        })
        .collect();
    let mut out = HermCertificate { summands, residual: 0.0 };
    if let Some(p) = cert.summands.first() {
        let real = cert.expand(p.nvars());
        out.residual = cert.residual + out.expand(p.nvars()).distance(&real.to_complex()).expect("same nvars");
    }
    out
}

/// Splits each Hermitian square into `Re(p)² + Im(p)²`, dropping zero imaginary parts.
pub fn hermitian_to_real(cert: &HermCertificate) -> SosCertificate<f64> {
    let summands: Vec<Polynomial<f64>> = cert
        .summands
        .iter()
        .flat_map(|p| [p.real_part(), p.imag_part()])
        .filter(|p| !p.is_zero())
        .collect();
    let mut out = SosCertificate { mode: CertificateMode::Real, summands, residual: 0.0, source_rank: cert.len() };
    if let Some(p) = cert.summands.first() {
        let nvars = p.nvars();
        let herm = cert.expand(nvars);
        out.residual = cert.residual + out.expand(nvars).to_complex().distance(&herm).expect("same nvars");
    }
    out
}

/// Hermitian Gram matrices `{A ∈ Herm_N : m_Pᵀ A m_P = f}`: the real Gram space plus
/// an arbitrary antisymmetric imaginary part.
#[derive(Clone, Debug)]
pub struct HermGramSpace {
    real: GramSpace<f64>,
}

pub fn herm_gram_space(f: &Polynomial<f64>, polytope: Option<&LatticePolytope>) -> Result<HermGramSpace, GramError> {
    Ok(HermGramSpace { real: gram_space(f, polytope)? })
}

impl HermGramSpace {
    pub fn real(&self) -> &GramSpace<f64> {
        &self.real
    }

    pub fn n(&self) -> usize {
        self.real.n()
    }

    /// Real dimension of the affine space.
    pub fn dim(&self) -> usize {
        let n = self.n();
        self.real.m() + n * (n - 1) / 2
    }

    /// Real codimension in `Herm_N`, the number of monomials in `2P`.
    pub fn codimension(&self) -> usize {
        let n = self.n();
        n * n - self.dim()
    }

    fn skew_units(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    /// The realification as an affine section of `Sym_2N`: real kernel directions first,
    /// then one direction `i(E_ab − E_ba)` per pair `a < b`.
    pub fn section(&self) -> AffineSection {
        let n = self.n();
        let zero = DMatrix::zeros(n, n);
        let base = HermMatrix::from_parts(self.real.particular(), &zero).realify();
        let mut dirs: Vec<DMatrix<f64>> =
            self.real.kernel_basis().iter().map(|b| HermMatrix::from_parts(b, &zero).realify()).collect();
        for (a, b) in self.skew_units() {
            let mut im = DMatrix::zeros(n, n);
            im[(a, b)] = 1.0;
            im[(b, a)] = -1.0;
            dirs.push(HermMatrix::from_parts(&SymMatrix::zeros(n), &im).realify());
        }
        AffineSection::new(base, dirs).expect("realified directions are symmetric")
    }

    /// The Hermitian matrix at section coordinates.
    pub fn point(&self, x: &[f64]) -> HermMatrix {
        let m = self.real.m();
        let re = self.real.point(&x[..m]).expect("coordinate count");
        let mut im = DMatrix::zeros(self.n(), self.n());
        for (k, (a, b)) in self.skew_units().into_iter().enumerate() {
            im[(a, b)] = x[m + k];
            im[(b, a)] = -x[m + k];
        }
        HermMatrix::from_parts(&re, &im)
    }

    /// Summands `pₖ = m_Pᵀ vₖ` from `A = Σ vₖ vₖ*`.
    pub fn certificate(&self, a: &HermMatrix, tol: &Tolerances) -> HermCertificate {
        let e = SymmetricEigen::new(a.as_dmatrix().clone());
        let top = e.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let nvars = self.real.target().nvars();
        let mut order: Vec<usize> = (0..a.n()).collect();
        order.sort_by(|&i, &j| e.eigenvalues[j].total_cmp(&e.eigenvalues[i]));
        let summands: Vec<Polynomial<Complex64>> = order
            .into_iter()
            .filter(|&k| e.eigenvalues[k] > tol.rank_tol * top)
            .map(|k| {
                let s = e.eigenvalues[k].sqrt();
                let v: Vec<Complex64> = e.eigenvectors.column(k).iter().map(|z| z * s).collect();
                linear_form(self.real.monomials(), nvars, &v)
            })
            .collect();
        let mut cert = HermCertificate { summands, residual: 0.0 };
        cert.residual = cert.verify(self.real.target());
        cert
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HermSolution {
    pub matrix: HermMatrix,
    /// Complex rank, half the rank of the realification.
    pub rank: usize,
    pub realified_rank: usize,
    pub min_eigenvalue: f64,
    #[serde(skip)]
    pub certificate: HermCertificate,
}

fn herm_solution(space: &HermGramSpace, sol: sdp::SdpSolution, tol: &Tolerances) -> Result<HermSolution, HermitianError> {
    if sol.status == SdpStatus::Infeasible {
        return Err(HermitianError::Infeasible);
    }
    let matrix = space.point(&sol.coordinates);
    let rank = matrix.numerical_rank(tol.rank_tol);
    let certificate = space.certificate(&matrix, tol);
    Ok(HermSolution {
        min_eigenvalue: matrix.eigenvalues()[0],
        rank,
        realified_rank: sol.numerical_rank,
        matrix,
        certificate,
    })
}

/// A point of the Hermitian Gram spectrahedron.
pub fn herm_solve(space: &HermGramSpace, opts: &SdpOptions) -> Result<HermSolution, HermitianError> {
    let sol = sdp::feasibility(&space.section(), opts)?;
    herm_solution(space, sol, &opts.tolerances)
}

/// A low-rank point of the Hermitian Gram spectrahedron.
pub fn herm_minimize_rank(space: &HermGramSpace, trials: usize, opts: &SdpOptions) -> Result<HermSolution, HermitianError> {
    let sol = sdp::minimize_rank_section(&space.section(), trials, opts)?;
    herm_solution(space, sol, &opts.tolerances)
}

/// A rank-one Hermitian Gram matrix `v v*` of a positive binary form, `p = m_dᵀ v`.
#[derive(Clone, Debug, Serialize)]
pub struct HermRankOne {
    /// Bit `i` set means the factor uses `ūᵢ` instead of `uᵢ`.
    pub choice: u64,
    #[serde(skip)]
    pub factor: Vec<Complex64>,
    pub matrix: HermMatrix,
}

fn choice_roots(upper: &[Complex64], choice: u64) -> Vec<Complex64> {
    upper.iter().enumerate().map(|(i, u)| if choice >> i & 1 == 1 { u.conj() } else { *u }).collect()
}

fn upper_roots(f: &BinaryForm) -> Result<Vec<Complex64>, BinaryError> {
    Ok(paired_roots(f)?.into_iter().step_by(2).collect())
}

/// All `2^d` rank-one Hermitian Gram matrices, by increasing choice mask.
pub fn enumerate_herm_rank1(f: &BinaryForm) -> Result<Vec<HermRankOne>, HermitianError> {
    let upper = upper_roots(f)?;
    let lead = Complex64::new(f.coeffs()[0].sqrt(), 0.0);
    Ok((0..1u64 << upper.len())
        .map(|choice| {
            let factor = factor_coefficients(lead, &choice_roots(&upper, choice));
            HermRankOne { choice, matrix: HermMatrix::outer(&factor), factor }
        })
        .collect())
}

/// Choice mask of the Hermitian square behind a conjugate-swapped partition.
pub fn choice_from_partition(p: &RootPartition) -> Result<u64, HermitianError> {
    let d = p.block.len();
    let mut choice = 0;
    for i in 0..d {
        let (u, ubar) = (p.mask >> (2 * i) & 1, p.mask >> (2 * i + 1) & 1);
        if u == ubar {
            return Err(HermitianError::NotHermitianSquare);
        }
        choice |= ubar << i;
    }
    Ok(choice)
}

/// Degree of `gcd(p₁, …, p_s)`: pairs on which every choice agrees.
pub fn gcd_degree(choices: &[u64], d: usize) -> usize {
    (0..d)
        .filter(|&i| choices.windows(2).all(|w| (w[0] >> i & 1) == (w[1] >> i & 1)))
        .count()
}

/// `U` with `m_Pᵀ U = g · m_Qᵀ` for binary forms: column `j` holds `g · s^(e−j) t^j`.
pub fn face_embedding(g: &[Complex64], e: usize) -> DMatrix<Complex64> {
    let rows = g.len() + e;
    DMatrix::from_fn(rows, e + 1, |i, j| if i >= j && i - j < g.len() { g[i - j] } else { Complex64::new(0.0, 0.0) })
}

#[derive(Clone, Debug, Serialize)]
pub struct LowRankSum {
    pub members: Vec<HermRankOne>,
    pub sum: HermMatrix,
    pub rank: usize,
    /// `⌈log₂ s⌉ + 1`.
    pub bound: usize,
    pub gcd_degree: usize,
    /// `d + 1 − deg gcd`.
    pub gcd_bound: usize,
    /// Largest `|A conj(m_d(x))|` over roots `x` of the common factor.
    pub kernel_residual: f64,
}

/// `s` rank-one matrices whose sum has rank at most `⌈log₂ s⌉ + 1`, from a factorization
/// `f = g ḡ h` with `deg h = 2⌈log₂ s⌉`.
///
/// The pairs left in `h` are those with the largest imaginary parts.
pub fn low_rank_sum(f: &BinaryForm, s: usize, rank_tol: f64) -> Result<LowRankSum, HermitianError> {
    let upper = upper_roots(f)?;
    let d = upper.len();
    let max = 1u128 << d;
    if s < 2 || s as u128 > max {
        return Err(HermitianError::SumSize { s, max });
    }
    let e = (usize::BITS - (s - 1).leading_zeros()) as usize;
    let mut by_im: Vec<usize> = (0..d).collect();
    by_im.sort_by(|&i, &j| upper[j].im.total_cmp(&upper[i].im).then(i.cmp(&j)));
    let mut free = by_im[..e].to_vec();
    free.sort_unstable();
    let fixed: Vec<usize> = (0..d).filter(|i| !free.contains(i)).collect();

    let g = factor_coefficients(Complex64::new(1.0, 0.0), &fixed.iter().map(|&i| upper[i]).collect::<Vec<_>>());
    let u = face_embedding(&g, e);
    let lead = Complex64::new(f.coeffs()[0].sqrt(), 0.0);
    let mut members = Vec::with_capacity(s);
    let mut sum = HermMatrix::zeros(d + 1);
    for local in 0..s as u64 {
        let roots: Vec<Complex64> = free
            .iter()
            .enumerate()
            .map(|(k, &i)| if local >> k & 1 == 1 { upper[i].conj() } else { upper[i] })
            .collect();
        let w = nalgebra::DVector::from_vec(factor_coefficients(lead, &roots));
        let factor: Vec<Complex64> = (&u * w).iter().copied().collect();
        let choice = free.iter().enumerate().fold(0u64, |c, (k, &i)| c | ((local >> k & 1) << i));
        let matrix = HermMatrix::outer(&factor);
        sum = sum.add(&matrix);
        members.push(HermRankOne { choice, factor, matrix });
    }
    let choices: Vec<u64> = members.iter().map(|m| m.choice).collect();
    let gcd = gcd_degree(&choices, d);
    let kernel_residual = fixed
        .iter()
        .map(|&i| {
            let x = upper[i];
            let v: Vec<Complex64> = moment_vector(x, d).iter().map(|z| z.conj()).collect();
            sum.apply(&v).iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    Ok(LowRankSum {
        rank: sum.numerical_rank(rank_tol),
        bound: e + 1,
        gcd_degree: gcd,
        gcd_bound: d + 1 - gcd,
        kernel_residual,
        members,
        sum,
    })
}

/// Best conjugation flips for a sum of real rank-two matrices `Aₖ = Re(vₖ vₖ*)`.
#[derive(Clone, Debug, Serialize)]
pub struct FlipBound {
    /// Bit `k` set means `vₖ` is replaced by `v̄ₖ`.
    pub flips: u64,
    pub gcd_degree: usize,
    /// `2d + 2 − 2·deg gcd`.
    pub rank_bound: usize,
}

pub const MAX_FLIP_SUMMANDS: usize = 12;

/// Maximizes the common factor degree over all `2^s` conjugation choices.
pub fn best_conjugation(choices: &[u64], d: usize) -> Result<FlipBound, HermitianError> {
    let s = choices.len();
    if s > MAX_FLIP_SUMMANDS {
        return Err(HermitianError::TooManySummands { got: s, max: MAX_FLIP_SUMMANDS });
    }
    let all = (1u64 << d) - 1;
    let mut best = FlipBound { flips: 0, gcd_degree: 0, rank_bound: 2 * d + 2 };
    for flips in 0..1u64 << s {
        let flipped: Vec<u64> =
            choices.iter().enumerate().map(|(k, &c)| if flips >> k & 1 == 1 { c ^ all } else { c }).collect();
        let g = gcd_degree(&flipped, d);
        if flips == 0 || g > best.gcd_degree {
            best = FlipBound { flips, gcd_degree: g, rank_bound: 2 * d + 2 - 2 * g };
        }
    }
    Ok(best)
}

/// `m_dᵀ = (s^d, s^(d−1)t, …, t^d)` evaluated at `(x, 1)`.
pub fn moment_vector(x: Complex64, d: usize) -> Vec<Complex64> {
    (0..=d).map(|k| x.powu((d - k) as u32)).collect()
}
