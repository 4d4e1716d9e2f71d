//! Dense semidefinite programming over affine sections of `Sym_N⁺`.
//!
//! Feasibility runs a phase-1 problem `max t  s.t.  F(x) − tI ⪰ 0`. A zero
//! optimum triggers facial reduction onto the range of a relative-interior
//! point, so sections without a positive definite point are still handled.

mod ipm;
mod section;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::config::{Config, SolverConfig, Tolerances};
use crate::gram::{GramSpace, SymMatrix};
use crate::linalg::{frobenius_inner, lstsq, numerical_rank_of_values, sym_eigen};
use ipm::{DualProblem, IpmResult, IpmStatus};
pub use section::AffineSection;

/// Normalized phase-1 optimum separating interior from empty sections.
const PHASE1_TOL: f64 = 1e-7;
/// Relative eigenvalue cutoff for the range of a boundary point.
const RANGE_TOL: f64 = 1e-6;
const REWEIGHT_ROUNDS: usize = 6;
const KERNEL_ITER: usize = 50;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("the spectrahedron is empty")]
    Infeasible { certificate: SymMatrix<f64> },
    #[error("solver stopped after {iterations} iterations with relative gap {relative_gap:e}")]
    MaxIterations { iterations: usize, relative_gap: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("objective has length {found}, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("invalid section: {0}")]
    InvalidSection(String),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SdpOptions {
    pub solver: SolverConfig,
    pub tolerances: Tolerances,
    pub seed: u64,
}

impl From<&Config> for SdpOptions {
    fn from(c: &Config) -> Self {
        SdpOptions { solver: c.solver.clone(), tolerances: c.tolerances.clone(), seed: c.seed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Clone, Debug, Serialize)]
pub struct SdpSolution {
    pub point: SymMatrix<f64>,
    /// Coordinates of `point` in the section (kernel-basis coordinates for Gram spaces).
    pub coordinates: Vec<f64>,
    pub status: SdpStatus,
    /// `c·x` for linear objectives, the trace of `point` for rank minimization.
    pub objective_value: f64,
    pub numerical_rank: usize,
    /// Relative duality gap of the last interior-point solve.
    pub duality_gap: f64,
    pub iterations: usize,
    pub min_eigenvalue: f64,
    /// Whether the section meets the open cone of positive definite matrices.
    pub strictly_feasible: bool,
    /// Trace-one PSD matrix `X` with `⟨Bᵢ, X⟩ = 0` and `⟨base, X⟩ < 0` when infeasible.
    pub certificate: Option<SymMatrix<f64>>,
}

/// A Gram space with an optional linear objective over its kernel coordinates.
#[derive(Clone, Debug)]
pub struct SdpProblem<'a> {
    space: &'a GramSpace<f64>,
    objective: Option<Vec<f64>>,
}

impl<'a> SdpProblem<'a> {
    pub fn new(space: &'a GramSpace<f64>, objective: Option<Vec<f64>>) -> Result<Self, SdpError> {
        if let Some(c) = &objective {
            if c.len() != space.m() {
                return Err(SdpError::ObjectiveLength { expected: space.m(), found: c.len() });
            }
        }
        Ok(SdpProblem { space, objective })
    }

    pub fn solve(&self, opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
        match &self.objective {
            Some(c) => solve_linear(self.space, c, opts),
            None => solve_feasibility(self.space, opts),
        }
    }
}

pub fn solve_feasibility(space: &GramSpace<f64>, opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    feasibility(&AffineSection::from_gram_space(space), opts)
}

/// Maximizes `c·x` over the Gram spectrahedron.
pub fn solve_linear(space: &GramSpace<f64>, c: &[f64], opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    maximize(&AffineSection::from_gram_space(space), c, opts)
}

pub fn minimize_rank(space: &GramSpace<f64>, trials: usize, opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    minimize_rank_section(&AffineSection::from_gram_space(space), trials, opts)
}

/// Finds a point of `section ∩ Sym_N⁺` (positive definite when one exists),
/// or a certificate of emptiness.
pub fn feasibility(section: &AffineSection, opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    let p = phase1(section, &opts.solver)?;
    let status = if p.upper < -PHASE1_TOL {
        SdpStatus::Infeasible
    } else if p.lower > PHASE1_TOL || p.relative_gap <= 1e-6 {
        SdpStatus::Optimal
    } else {
        return Err(SdpError::MaxIterations { iterations: p.iterations, relative_gap: p.relative_gap });
    };
    let mut sol = finish(section, &section.point(&p.x), status, opts);
    if status == SdpStatus::Infeasible {
        sol.certificate = Some(SymMatrix::from_dmatrix(&p.certificate));
    }
    sol.strictly_feasible = p.lower > PHASE1_TOL;
    sol.iterations = p.iterations;
    sol.duality_gap = p.relative_gap;
    Ok(sol)
}

pub fn maximize(section: &AffineSection, c: &[f64], opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    if c.len() != section.dim() {
        return Err(SdpError::ObjectiveLength { expected: section.dim(), found: c.len() });
    }
    let (face, x0, mut iterations) = feasible_face(section, opts)?;
    let reduced = face.objective(section, c);
    let run = maximize_face(&face.section, &reduced, &x0, &opts.solver)?;
    iterations += run.iterations;
    let mut point = face.lift(&face.section.point(&run.x));
    let mut status = if run.converged { SdpStatus::Optimal } else { SdpStatus::MaxIterations };
    if !face.is_full() {
        // the face is only approximate; land back on the section exactly
        let polished = polish(section, &point, opts);
        if !polished.exact {
            status = SdpStatus::MaxIterations;
        }
        point = polished.matrix;
    }
    let mut sol = finish(section, &point, status, opts);
    sol.objective_value = dot(c, &sol.coordinates);
    sol.strictly_feasible = face.is_full();
    sol.iterations = iterations;
    sol.duality_gap = run.relative_gap;
    Ok(sol)
}

/// Lowest-rank point found by trace minimization, `trials` random linear
/// objectives and reweighted trace steps, each followed by low-rank polishing.
/// The rank is an upper bound on the minimum only.
pub fn minimize_rank_section(
    section: &AffineSection,
    trials: usize,
    opts: &SdpOptions,
) -> Result<SdpSolution, SdpError> {
    let (face, x0, mut iterations) = feasible_face(section, opts)?;
    let fs = &face.section;
    let mut best = polish(section, &face.lift(&fs.point(&x0)), opts);
    let mut best_gap = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut objectives: Vec<Vec<f64>> = Vec::with_capacity(trials + 1);
    objectives.push(fs.directions().iter().map(|d| -d.trace()).collect());
    for _ in 0..trials {
        objectives.push((0..fs.dim()).map(|_| StandardNormal.sample(&mut rng)).collect());
    }

    let consider = |x: &[f64], gap: f64, best: &mut Polished, best_gap: &mut f64| -> usize {
        let p = polish(section, &face.lift(&fs.point(x)), opts);
        let rank = p.rank;
        if p.exact && (p.rank < best.rank || !best.exact) {
            *best = p;
            *best_gap = gap;
        }
        rank
    };

    for c in &objectives {
        if best.exact && best.rank <= 1 {
            break;
        }
        let Ok(run) = maximize_face(fs, c, &x0, &opts.solver) else { continue };
        iterations += run.iterations;
        let mut rank = consider(&run.x, run.relative_gap, &mut best, &mut best_gap);
        // log-det reweighting: maximize −⟨(A + δI)⁻¹, A⟩ with shrinking δ
        let mut current = fs.point(&run.x);
        let mut stale = 0;
        for round in 0..REWEIGHT_ROUNDS {
            if rank <= 1 || (best.exact && best.rank <= 1) {
                break;
            }
            let (vals, _) = sym_eigen(&current);
            let top = vals[vals.len() - 1];
            let delta = (top * 0.1f64.powi(round as i32 + 1)).max(1e-9 * top);
            let k = fs.n();
            let Some(w) = (&current + DMatrix::identity(k, k) * delta).try_inverse() else { break };
            let c: Vec<f64> = fs.directions().iter().map(|d| -frobenius_inner(&w, d)).collect();
            let Ok(next) = maximize_face(fs, &c, &x0, &opts.solver) else { break };
            iterations += next.iterations;
            let r = consider(&next.x, next.relative_gap, &mut best, &mut best_gap);
            current = fs.point(&next.x);
            if r >= rank {
                stale += 1;
                if stale == 2 {
                    break;
                }
            } else {
                stale = 0;
            }
            rank = rank.min(r);
        }
    }

    let status = if best.exact { SdpStatus::Optimal } else { SdpStatus::MaxIterations };
    let mut sol = finish(section, &best.matrix, status, opts);
    sol.objective_value = sol.point.to_dmatrix().trace();
    sol.strictly_feasible = face.is_full();
    sol.iterations = iterations;
    sol.duality_gap = best_gap;
    Ok(sol)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn finish(section: &AffineSection, a: &DMatrix<f64>, status: SdpStatus, opts: &SdpOptions) -> SdpSolution {
    let coordinates = section.coordinates(a);
    let point = section.point(&coordinates);
    let (vals, _) = sym_eigen(&point);
    SdpSolution {
        numerical_rank: numerical_rank_of_values(vals.as_slice(), opts.tolerances.rank_tol),
        min_eigenvalue: vals.get(0).copied().unwrap_or(0.0),
        point: SymMatrix::from_dmatrix(&point),
        coordinates,
        status,
        objective_value: 0.0,
        duality_gap: 0.0,
        iterations: 0,
        strictly_feasible: false,
        certificate: None,
    }
}

/// A face `{ L Ã Lᵀ : Ã ∈ section }` of the cone, with `L` having orthonormal columns.
struct Face {
    lift: DMatrix<f64>,
    section: AffineSection,
    full: bool,
}

impl Face {
    fn is_full(&self) -> bool {
        self.full
    }

    fn lift(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        &self.lift * a * self.lift.transpose()
    }

    /// Pulls the linear objective `c·x` on the outer section back to face coordinates.
    fn objective(&self, outer: &AffineSection, c: &[f64]) -> Vec<f64> {
        self.section
            .directions()
            .iter()
            .map(|d| dot(c, &outer.linear_coordinates(&self.lift(d))))
            .collect()
    }
}

/// Phase 1 with facial reduction: a face containing the spectrahedron, with a
/// positive definite point of its section.
fn feasible_face(section: &AffineSection, opts: &SdpOptions) -> Result<(Face, Vec<f64>, usize), SdpError> {
    let n = section.n();
    let mut face = Face { lift: DMatrix::identity(n, n), section: section.clone(), full: true };
    let mut iterations = 0;
    let mut depth = 0;
    loop {
        let p = phase1(&face.section, &opts.solver)?;
        iterations += p.iterations;
        if p.lower > PHASE1_TOL {
            return Ok((face, p.x, iterations));
        }
        if p.upper < -PHASE1_TOL {
            if !face.full {
                return Err(SdpError::Numerical("facial reduction lost feasibility".into()));
            }
            return Err(SdpError::Infeasible { certificate: SymMatrix::from_dmatrix(&p.certificate) });
        }
        if depth == n {
            return Err(SdpError::Numerical("facial reduction did not terminate".into()));
        }
        depth += 1;
        if p.relative_gap > 1e-6 {
            return Err(SdpError::MaxIterations { iterations, relative_gap: p.relative_gap });
        }
        let a = face.section.point(&p.x);
        let (vals, vecs) = sym_eigen(&a);
        let k = face.section.n();
        let top = vals[k - 1];
        if top <= 0.0 {
            return Err(SdpError::Numerical("phase-1 point vanishes".into()));
        }
        let keep: Vec<usize> = (0..k).filter(|&i| vals[i] > RANGE_TOL * top).collect();
        if keep.len() == k {
            // thin but full-dimensional
            return Ok((face, p.x, iterations));
        }
        let mut v = DMatrix::zeros(k, keep.len());
        for (c, &i) in keep.iter().enumerate() {
            v.set_column(c, &vecs.column(i));
        }
        let reduced = face.section.restrict(&v, &a);
        face = Face { lift: &face.lift * v, section: reduced, full: false };
    }
}

struct Phase1 {
    x: Vec<f64>,
    /// Certified lower and upper bounds on the normalized optimum `t*`.
    lower: f64,
    upper: f64,
    certificate: DMatrix<f64>,
    iterations: usize,
    relative_gap: f64,
}

struct Scaling {
    s: f64,
    nu: Vec<f64>,
}

impl Scaling {
    fn of(section: &AffineSection) -> Self {
        let s = section.base().norm();
        let s = if s > 0.0 { s } else { 1.0 };
        let nu = section.directions().iter().map(|d| d.norm().max(f64::MIN_POSITIVE)).collect();
        Scaling { s, nu }
    }

    fn problem_data(&self, section: &AffineSection) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
        let c = section.base() / self.s;
        let a = section.directions().iter().zip(&self.nu).map(|(d, nu)| d * (-1.0 / nu)).collect();
        (c, a)
    }

    fn to_x(&self, y: &[f64]) -> Vec<f64> {
        y.iter().zip(&self.nu).map(|(yi, nu)| yi * self.s / nu).collect()
    }

    fn to_y(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.nu).map(|(xi, nu)| xi * nu / self.s).collect()
    }
}

fn phase1(section: &AffineSection, solver: &SolverConfig) -> Result<Phase1, SdpError> {
    let n = section.n();
    let m = section.dim();
    let scaling = Scaling::of(section);
    let (c, mut a) = scaling.problem_data(section);
    a.push(DMatrix::identity(n, n));
    let mut b = DVector::zeros(m + 1);
    b[m] = 1.0;
    let mut y0 = DVector::zeros(m + 1);
    y0[m] = sym_eigen(&c).0[0] - 1.0;
    let r = ipm::solve(&DualProblem { c: &c, a: &a, b: &b }, Some(&y0), solver);
    if !r.y.iter().all(|v| v.is_finite()) {
        return Err(SdpError::Numerical("phase-1 diverged".into()));
    }
    let x = scaling.to_x(&r.y.as_slice()[..m]);
    let t = r.y[m];
    // X is a trace-one PSD matrix, nearly orthogonal to the directions
    let cert = &r.x / r.x.trace();
    let upper = if r.primal_infeasibility < 1e-6 { frobenius_inner(&c, &cert) } else { f64::INFINITY };
    Ok(Phase1 {
        x,
        lower: t,
        upper: upper.max(t),
        certificate: cert,
        iterations: r.iterations,
        relative_gap: r.relative_gap,
    })
}

struct FaceRun {
    x: Vec<f64>,
    converged: bool,
    iterations: usize,
    relative_gap: f64,
}

fn maximize_face(section: &AffineSection, c: &[f64], x0: &[f64], solver: &SolverConfig) -> Result<FaceRun, SdpError> {
    let scaling = Scaling::of(section);
    let b: Vec<f64> = c.iter().zip(&scaling.nu).map(|(ci, nu)| ci * scaling.s / nu).collect();
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if section.dim() == 0 || norm_b == 0.0 {
        return Ok(FaceRun { x: x0.to_vec(), converged: true, iterations: 0, relative_gap: 0.0 });
    }
    let b = DVector::from_iterator(b.len(), b.into_iter().map(|v| v / norm_b));
    let (cm, a) = scaling.problem_data(section);
    let y0 = DVector::from_vec(scaling.to_y(x0));
    let r: IpmResult = ipm::solve(&DualProblem { c: &cm, a: &a, b: &b }, Some(&y0), solver);
    if !r.y.iter().all(|v| v.is_finite()) {
        return Err(SdpError::Numerical("objective solve diverged".into()));
    }
    let converged = r.status == IpmStatus::Converged
        || (r.relative_gap < 1e-7 && r.primal_infeasibility < 1e-7 && r.dual_infeasibility < 1e-7);
    Ok(FaceRun {
        x: scaling.to_x(r.y.as_slice()),
        converged,
        iterations: r.iterations,
        relative_gap: r.relative_gap,
    })
}

struct Polished {
    matrix: DMatrix<f64>,
    rank: usize,
    /// Whether `matrix` lies on the section and in the cone to working precision.
    exact: bool,
}

/// Gauss–Newton on `A(x) W = 0` over the section coordinates `x` and the
/// kernel `W` (moved along its orthogonal complement). Returns the refined
/// coordinates and an orthonormal kernel when the residual vanishes.
fn refine_kernel(section: &AffineSection, x0: &[f64], w0: &DMatrix<f64>) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let n = section.n();
    let r = w0.ncols();
    let m = section.dim();
    if r == 0 {
        return Some((x0.to_vec(), w0.clone()));
    }
    let mut x = x0.to_vec();
    let mut w = w0.clone();
    let mut best = f64::INFINITY;
    for _ in 0..KERNEL_ITER {
        let a = section.point(&x);
        let scale = a.norm().max(f64::MIN_POSITIVE);
        let res = &a * &w;
        let err = res.norm() / scale;
        if err < 1e-15 {
            break;
        }
        if err > 0.5 * best && best < 1e-12 {
            break;
        }
        best = best.min(err);
        let perp = complement(&w);
        let q = perp.ncols();
        let mut jac = DMatrix::zeros(n * r, m + q * r);
        for (i, b) in section.directions().iter().enumerate() {
            let col = b * &w;
            jac.set_column(i, &DVector::from_column_slice(col.as_slice()));
        }
        let ap = &a * &perp;
        for c in 0..r {
            for k in 0..q {
                // derivative in the direction perp[:, k] e_cᵀ
                let mut block = DMatrix::zeros(n, r);
                block.set_column(c, &ap.column(k));
                jac.set_column(m + c * q + k, &DVector::from_column_slice(block.as_slice()));
            }
        }
        let rhs = -DVector::from_column_slice(res.as_slice());
        let step = lstsq(&jac, &rhs);
        for i in 0..m {
            x[i] += step[i];
        }
        let mut moved = w.clone();
        for c in 0..r {
            for k in 0..q {
                let t = step[m + c * q + k];
                moved.column_mut(c).axpy(t, &perp.column(k), 1.0);
            }
        }
        w = moved.qr().q();
    }
    let a = section.point(&x);
    let err = (&a * &w).norm() / a.norm().max(f64::MIN_POSITIVE);
    (err < 1e-11).then_some((x, w))
}

/// Orthonormal basis of the orthogonal complement of the columns of `w`.
fn complement(w: &DMatrix<f64>) -> DMatrix<f64> {
    let n = w.nrows();
    let r = w.ncols();
    let (_, vecs) = sym_eigen(&(w * w.transpose()));
    vecs.columns(0, n - r).into_owned()
}

/// Tries successively smaller numerical ranks read off the spectrum of `a`.
fn polish(section: &AffineSection, a: &DMatrix<f64>, opts: &SdpOptions) -> Polished {
    let (vals, _) = sym_eigen(a);
    let n = vals.len();
    let rank = numerical_rank_of_values(vals.as_slice(), opts.tolerances.rank_tol);
    let top = vals[n - 1];
    let mut ks: Vec<usize> = [1e-3, 1e-4, 1e-5, 1e-6, 1e-7]
        .iter()
        .map(|t| vals.iter().filter(|&&v| v > t * top).count())
        .filter(|&k| k >= 1 && k < rank)
        .collect();
    ks.sort_unstable();
    ks.dedup();
    let (_, vecs) = sym_eigen(a);
    let x0 = section.coordinates(a);
    for k in ks {
        let w0 = vecs.columns(0, n - k).into_owned();
        if let Some((x, _)) = refine_kernel(section, &x0, &w0) {
            let p = section.point(&x);
            let (pv, _) = sym_eigen(&p);
            if pv[0] >= -opts.tolerances.psd_tol * pv[n - 1] {
                let rank = numerical_rank_of_values(pv.as_slice(), opts.tolerances.rank_tol);
                return Polished { rank, matrix: p, exact: true };
            }
        }
    }
    let p = section.project(a);
    let (pv, _) = sym_eigen(&p);
    let exact = pv[0] >= -opts.tolerances.psd_tol * pv[n - 1];
    Polished { rank: numerical_rank_of_values(pv.as_slice(), opts.tolerances.rank_tol), matrix: p, exact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{gram_apply, gram_space};
    use crate::poly::Polynomial;

    fn space(terms: &[(Vec<u32>, f64)], nvars: usize) -> GramSpace<f64> {
        let f = Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.clone(), *c))).unwrap();
        gram_space(&f, None).unwrap()
    }

    #[test]
    fn sum_of_two_squares_has_identity() {
        let s = space(&[(vec![2, 0], 1.0), (vec![0, 2], 1.0)], 2);
        let sol = solve_feasibility(&s, &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!(sol.point.max_abs_diff(&SymMatrix::identity(2)) < 1e-12);
        assert!(sol.strictly_feasible);
    }

    #[test]
    fn motzkin_is_infeasible() {
        let s = space(
            &[(vec![4, 2], 1.0), (vec![2, 4], 1.0), (vec![2, 2], -3.0), (vec![0, 0], 1.0)],
            2,
        );
        let sol = solve_feasibility(&s, &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
        let cert = sol.certificate.unwrap().to_dmatrix();
        assert!(sym_eigen(&cert).0[0] > -1e-9);
        for b in s.kernel_basis() {
            assert!(frobenius_inner(&b.to_dmatrix(), &cert).abs() < 1e-6);
        }
        assert!(frobenius_inner(&s.particular().to_dmatrix(), &cert) < 0.0);
    }

    #[test]
    fn perfect_square_reaches_rank_one() {
        let s = space(&[(vec![4, 0], 1.0), (vec![2, 2], 2.0), (vec![0, 4], 1.0)], 2);
        let sol = minimize_rank(&s, 4, &SdpOptions::default()).unwrap();
        assert_eq!(sol.numerical_rank, 1);
        let f = gram_apply(&s, &sol.point).unwrap();
        assert!(f.distance(s.target()).unwrap() < 1e-9);
    }

    #[test]
    fn objective_zero_returns_feasible_point() {
        let s = space(&[(vec![4, 0], 1.0), (vec![2, 2], 2.0), (vec![0, 4], 1.0)], 2);
        let sol = solve_linear(&s, &[0.0], &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!(sol.min_eigenvalue > 0.0);
    }

    #[test]
    fn linear_objective_reaches_segment_ends() {
        // x⁴ + 2x²y² + y⁴: A = [[1,0,a],[0,2−2a,0],[a,0,1]], a ∈ [−1, 1]
        let s = space(&[(vec![4, 0], 1.0), (vec![2, 2], 2.0), (vec![0, 4], 1.0)], 2);
        let opts = SdpOptions::default();
        let up = solve_linear(&s, &[1.0], &opts).unwrap();
        let down = solve_linear(&s, &[-1.0], &opts).unwrap();
        let a_up = *up.point.get(0, 2);
        let a_down = *down.point.get(0, 2);
        assert!((a_up.max(a_down) - 1.0).abs() < 1e-6);
        assert!((a_up.min(a_down) + 1.0).abs() < 1e-6);
    }
}
