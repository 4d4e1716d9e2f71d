//! Primal-dual interior-point method with Nesterov–Todd scaling and
//! Mehrotra predictor-corrector steps.
//!
//! Solves `max bᵀy  s.t.  Z = C − Σ yᵢ Aᵢ ⪰ 0` together with its dual
//! `min ⟨C, X⟩  s.t.  ⟨Aᵢ, X⟩ = bᵢ, X ⪰ 0`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::config::SolverConfig;
use crate::linalg::{frobenius_inner, sym_eigen};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum IpmStatus {
    Converged,
    MaxIterations,
    Stalled,
}

#[derive(Clone, Debug)]
pub(crate) struct IpmResult {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    pub status: IpmStatus,
    pub iterations: usize,
    pub relative_gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

pub(crate) struct DualProblem<'a> {
    pub c: &'a DMatrix<f64>,
    pub a: &'a [DMatrix<f64>],
    pub b: &'a DVector<f64>,
}

const FEAS_TOL: f64 = 1e-9;

impl DualProblem<'_> {
    fn op(&self, x: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|ai| frobenius_inner(ai, x)))
    }

    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.c.nrows();
        let mut out = DMatrix::zeros(n, n);
        for (ai, yi) in self.a.iter().zip(y.iter()) {
            out += ai * *yi;
        }
        out
    }
}

fn sym(a: DMatrix<f64>) -> DMatrix<f64> {
    (&a + a.transpose()) * 0.5
}

fn chol(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    Cholesky::new(a.clone()).map(|c| c.l())
}

/// Largest `α` with `D + α Δ ⪰ 0` for diagonal positive `D`.
fn max_step(d: &DVector<f64>, delta: &DMatrix<f64>) -> f64 {
    let n = d.len();
    let s = DMatrix::from_fn(n, n, |i, j| delta[(i, j)] / (d[i] * d[j]).sqrt());
    let lo = sym_eigen(&s).0[0];
    if lo >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lo
    }
}

pub(crate) fn solve(p: &DualProblem<'_>, y0: Option<&DVector<f64>>, opts: &SolverConfig) -> IpmResult {
    let n = p.c.nrows();
    let m = p.a.len();
    let nf = n as f64;
    let norm_c = p.c.norm();
    let norm_b = p.b.norm();

    let (mut y, mut z) = match y0 {
        Some(y0) => {
            let z0 = sym(p.c - p.adjoint(y0));
            if chol(&z0).is_some() && sym_eigen(&z0).0[0] > 1e-10 * (1.0 + norm_c) {
                (y0.clone(), z0)
            } else {
                default_dual(p, m, n)
            }
        }
        None => default_dual(p, m, n),
    };
    let xi = p
        .a
        .iter()
        .zip(p.b.iter())
        .map(|(ai, bi)| nf.sqrt() * (1.0 + bi.abs()) / (1.0 + ai.norm()))
        .fold(nf.sqrt().max(1.0), f64::max);
    let mut x = DMatrix::identity(n, n) * xi;

    let mut status = IpmStatus::MaxIterations;
    let mut iterations = 0;
    for it in 0..opts.max_iter {
        iterations = it;
        let rp = p.b - p.op(&x);
        let rd = sym(p.c - &z - p.adjoint(&y));
        let gap = frobenius_inner(&x, &z);
        let pobj = frobenius_inner(p.c, &x);
        let dobj = p.b.dot(&y);
        let rel_gap = gap / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = rd.norm() / (1.0 + norm_c);
        if rel_gap < opts.gap_tol && pinf < FEAS_TOL && dinf < FEAS_TOL {
            status = IpmStatus::Converged;
            break;
        }
        let mu = gap / nf;

        let (Some(lx), Some(lz)) = (chol(&x), chol(&z)) else {
            status = IpmStatus::Stalled;
            break;
        };
        let svd = (lz.transpose() * &lx).svd(true, true);
        let (Some(_u), Some(vt)) = (svd.u, svd.v_t) else {
            status = IpmStatus::Stalled;
            break;
        };
        let d = svd.singular_values.clone();
        if d.iter().any(|&v| !(v > 0.0)) {
            status = IpmStatus::Stalled;
            break;
        }
        let dinv_sqrt = DMatrix::from_diagonal(&d.map(|v| 1.0 / v.sqrt()));
        let g = &lx * vt.transpose() * &dinv_sqrt;

        let scaled: Vec<DMatrix<f64>> = p.a.iter().map(|ai| g.transpose() * ai * &g).collect();
        let rd_s = g.transpose() * &rd * &g;
        let mut schur = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = frobenius_inner(&scaled[i], &scaled[j]);
                schur[(i, j)] = v;
                schur[(j, i)] = v;
            }
        }
        let schur_chol = Cholesky::new(schur.clone()).or_else(|| {
            let reg = 1e-14 * schur.trace().max(1e-300);
            Cholesky::new(&schur + DMatrix::identity(m, m) * reg)
        });
        let Some(schur_chol) = schur_chol else {
            status = IpmStatus::Stalled;
            break;
        };

        let direction = |t: &DMatrix<f64>| -> (DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
            let diff = t - &rd_s;
            let rhs = &rp - DVector::from_iterator(m, scaled.iter().map(|ai| frobenius_inner(ai, &diff)));
            let dy = solve_chol(&schur_chol, &rhs);
            let mut dz_s = rd_s.clone();
            for (ai, v) in scaled.iter().zip(dy.iter()) {
                dz_s -= ai * *v;
            }
            let dx_s = sym(t - &dz_s);
            (dx_s, dy, sym(dz_s))
        };

        // predictor
        let t_aff = DMatrix::from_diagonal(&d.map(|v| -v));
        let (dx_a, _, dz_a) = direction(&t_aff);
        let ap = max_step(&d, &dx_a).min(1.0);
        let ad = max_step(&d, &dz_a).min(1.0);
        let dmat = DMatrix::from_diagonal(&d);
        let mu_aff = frobenius_inner(&(&dmat + &dx_a * ap), &(&dmat + &dz_a * ad)) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let corr = &dx_a * &dz_a + &dz_a * &dx_a;
        let t = DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { 2.0 * sigma * mu - 2.0 * d[i] * d[i] } else { 0.0 };
            (diag - corr[(i, j)]) / (d[i] + d[j])
        });
        let (dx_s, dy, dz_s) = direction(&t);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let alpha_p = (gamma * max_step(&d, &dx_s)).min(1.0);
        let alpha_d = (gamma * max_step(&d, &dz_s)).min(1.0);

        let dx = sym(&g * &dx_s * g.transpose());
        let dz = sym(&rd - p.adjoint(&dy));
        let x_next = &x + &dx * alpha_p;
        let z_next = &z + &dz * alpha_d;
        let step = alpha_p * dx.norm() + alpha_d * (dy.norm() + dz.norm());
        if chol(&x_next).is_none() || chol(&z_next).is_none() {
            status = IpmStatus::Stalled;
            break;
        }
        x = x_next;
        z = z_next;
        y += &dy * alpha_d;
        if step < opts.step_tol * (1.0 + x.norm() + y.norm()) {
            status = IpmStatus::Stalled;
            iterations = it + 1;
            break;
        }
        iterations = it + 1;
    }

    let gap = frobenius_inner(&x, &z);
    let pobj = frobenius_inner(p.c, &x);
    let dobj = p.b.dot(&y);
    IpmResult {
        primal_infeasibility: (p.b - p.op(&x)).norm() / (1.0 + norm_b),
        dual_infeasibility: sym(p.c - &z - p.adjoint(&y)).norm() / (1.0 + norm_c),
        relative_gap: gap / (1.0 + pobj.abs() + dobj.abs()),
        y,
        x,
        status,
        iterations,
    }
}

fn default_dual(p: &DualProblem<'_>, m: usize, n: usize) -> (DVector<f64>, DMatrix<f64>) {
    let nf = n as f64;
    let eta = p
        .a
        .iter()
        .map(|a| a.norm())
        .fold(nf.sqrt().max(p.c.norm()).max(1.0), f64::max);
    (DVector::zeros(m), DMatrix::identity(n, n) * eta)
}

fn solve_chol(c: &Cholesky<f64, Dyn>, rhs: &DVector<f64>) -> DVector<f64> {
    c.solve(rhs)
}
