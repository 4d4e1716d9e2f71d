use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sosgram::binary::{enumerate_rank2, Which};
use sosgram::gram::{
    gram_apply, gram_space, hurwitz_form, hurwitz_sos, rational_sos, rationalize, CertificateMode, SosCertificate,
    SymMatrix,
};
use sosgram::hermitian::{enumerate_herm_rank1, hermitian_to_real, low_rank_sum, real_to_hermitian};
use sosgram::kummer::{
    chart_check, coordinates_of, determinant_on_chart, dual_on_chart, homogenized_determinant, optimize_closed_form, section,
    SexticCoeffs,
};
use sosgram::poly::{univariate_roots, BinaryForm, Monomial, Polynomial};
use sosgram::polytope::{
    hermitian_pataki_interval, pataki_interval, toric_profile, Classification, LatticePolytope,
};
use sosgram::sdp::{maximize, minimize_rank, solve_feasibility, solve_linear, SdpOptions, SdpStatus};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const SEXTIC: [f64; 7] = [1.0, -2.0, 5.0, -4.0, 5.0, -2.0, 1.0];

fn within(elapsed: Duration, limit: Option<Duration>) -> Outcome {
    match limit {
        Some(l) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:.0?}")),
        _ => Ok(format!("{elapsed:.2?}")),
    }
}

fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> Polynomial<f64> {
    Polynomial::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
}

fn random_positive(rng: &mut ChaCha8Rng, d: usize) -> BinaryForm {
    let roots: Vec<Complex64> = (0..d)
        .map(|k| Complex64::new(-2.0 + 4.0 * k as f64 / d as f64 + rng.random_range(0.0..0.3), rng.random_range(0.4..1.5)))
        .collect();
    BinaryForm::from_conjugate_pairs(rng.random_range(0.5..2.0), &roots).unwrap()
}

fn random_square_sum(rng: &mut ChaCha8Rng, p: &LatticePolytope, terms: usize) -> Polynomial<f64> {
    let mons = p.monomials().unwrap();
    (0..terms).fold(Polynomial::zero(p.ambient_dim()), |acc, _| {
        let q = Polynomial::from_terms(
            p.ambient_dim(),
            mons.iter().map(|m| (m.exps().to_vec(), StandardNormal.sample(rng))),
        )
        .unwrap();
        acc.checked_add(&q.square()).unwrap()
    })
}

fn relative_residual(f: &Polynomial<f64>, a: &SymMatrix<f64>) -> f64 {
    let space = gram_space(f, None).unwrap();
    gram_apply(&space, a).unwrap().distance(f).unwrap() / f.max_norm()
}

fn displayed_matrix(sign: f64) -> DMatrix<f64> {
    let r5 = 5f64.sqrt();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            1.0, -1.0, (1.0 + sign * r5) / 2.0, 0.0,
            -1.0, 4.0 - sign * r5, -2.0, (1.0 - sign * r5) / 2.0,
            (1.0 + sign * r5) / 2.0, -2.0, 4.0 + sign * r5, -1.0,
            0.0, (1.0 - sign * r5) / 2.0, -1.0, 1.0,
        ],
    )
}

fn sextic_closed_form() -> Outcome {
    let start = Instant::now();
    let a = SexticCoeffs::from_raw(SEXTIC);
    let cf = optimize_closed_form(&a, [1.0, 0.0, -1.0], 1e-9, 1e-8).map_err(|e| e.to_string())?;
    let r5 = 5f64.sqrt();
    let mut ws: Vec<f64> = cf.critical.iter().map(|p| p.w).collect();
    ws.sort_by(f64::total_cmp);
    ensure!(ws.len() == 2, "expected two critical values, got {ws:?}");
    ensure!((ws[0] + r5).abs() < 1e-10 && (ws[1] - r5).abs() < 1e-10, "critical values {ws:?}");
    for sign in [1.0, -1.0] {
        let target = displayed_matrix(sign);
        let best = cf
            .critical
            .iter()
            .map(|p| (p.matrix.to_dmatrix() - &target).amax())
            .fold(f64::INFINITY, f64::min);
        ensure!(best < 1e-9, "no critical matrix within 1e-9 of the displayed one (closest {best:.2e})");
        ensure!(cf.critical.iter().any(|p| p.rank == 3), "critical matrices are not rank 3");
    }
    let sec = section(&a);
    let hi = maximize(&sec, &[1.0, 0.0, -1.0], &SdpOptions::default()).map_err(|e| e.to_string())?;
    ensure!((hi.objective_value - cf.maximum.value).abs() < 1e-6, "sdp max {} vs {}", hi.objective_value, cf.maximum.value);
    let space = gram_space(&BinaryForm::new(SEXTIC.to_vec()).unwrap().to_polynomial(), None).unwrap();
    let objective = |entry: &dyn Fn(usize, usize) -> f64| {
        let xyz = coordinates_of(&a, entry);
        xyz[0] - xyz[2]
    };
    let offset = objective(&|_, _| 0.0);
    let c: Vec<f64> = space.kernel_basis().iter().map(|b| objective(&|i, j| *b.get(i, j)) - offset).collect();
    let lin = solve_linear(&space, &c, &SdpOptions::default()).map_err(|e| e.to_string())?;
    let at = coordinates_of(&a, |i, j| *lin.point.get(i, j));
    ensure!((at[0] - at[2] - cf.maximum.value).abs() < 1e-6, "solve_linear optimum {} vs {}", at[0] - at[2], cf.maximum.value);
    let t = within(start.elapsed(), Some(Duration::from_secs(1)))?;
    Ok(format!("W = ±{:.12}, max {:.9}, {t}", ws[1], hi.objective_value))
}

fn chart_fixture() -> Outcome {
    let start = Instant::now();
    let exact = SexticCoeffs::from_raw(SEXTIC.map(|c| BigRational::from_integer(BigInt::from(c as i64))));
    let check = chart_check(&exact).map_err(|e| e.to_string())?;
    ensure!(check.lambda != BigRational::from_integer(0.into()), "zero multiplier");
    let a = SexticCoeffs::from_raw(SEXTIC);
    let lhs = dual_on_chart(&a);
    let det = determinant_on_chart(&a);
    let lambda = chart_check(&a).map_err(|e| e.to_string())?.lambda;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let l = lhs.eval(&p).unwrap();
        worst = worst.max((l - lambda * det.eval(&p).unwrap()).abs() / (1.0 + l.abs()));
    }
    ensure!(worst < 1e-9, "pointwise residual {worst:.2e}");
    let t = within(start.elapsed(), Some(Duration::from_secs(1)))?;
    Ok(format!("lambda = {}, pointwise residual {worst:.1e}, {t}", check.lambda))
}

fn rank_two_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut slowest = Duration::ZERO;
    for k in 0..20 {
        let f = random_positive(&mut rng, 3);
        let start = Instant::now();
        let e = enumerate_rank2(&f, Which::All).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure!(e.psd.len() == 4, "form {k}: {} PSD matrices", e.psd.len());
        ensure!(e.counts.complex == 10, "form {k}: complex count {}", e.counts.complex);
        let poly = f.to_polynomial();
        for r in &e.psd {
            ensure!(r.matrix.numerical_rank(1e-8) == 2, "form {k}: rank {}", r.matrix.numerical_rank(1e-8));
            let res = relative_residual(&poly, &r.matrix);
            ensure!(res < 1e-8, "form {k}: reconstruction residual {res:.2e}");
        }
    }
    let t = within(slowest, Some(Duration::from_secs(1)))?;
    Ok(format!("20 forms, slowest {t}"))
}

fn kummer_nodes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let forms = std::iter::once(BinaryForm::new(SEXTIC.to_vec()).unwrap()).chain((0..5).map(|_| random_positive(&mut rng, 3)));
    let mut worst = 0.0f64;
    for f in forms {
        let a = SexticCoeffs::from_form(&f).map_err(|e| e.to_string())?;
        let det = homogenized_determinant(&a).to_complex();
        let roots = univariate_roots(f.coeffs());
        ensure!(roots.len() == 6, "{} roots", roots.len());
        let zero = Complex64::new(0.0, 0.0);
        for u in roots {
            let p = [u * u, u, Complex64::new(1.0, 0.0), zero];
            let size = p.iter().map(|z| z.norm()).fold(1.0, f64::max).powi(4);
            worst = worst.max(det.eval(&p).unwrap().norm() / (size * det.max_norm()));
        }
    }
    ensure!(worst < 1e-8, "determinant at a node {worst:.2e}");
    Ok(format!("36 nodes, worst {worst:.1e}"))
}

fn pataki_fixtures() -> Outcome {
    let real = pataki_interval(4, 3).map_err(|e| e.to_string())?;
    ensure!(real.r_min == 2, "r_min {}", real.r_min);
    for (n, c, lo, hi) in [(12, 63, 3, 7), (13, 70, 4, 8)] {
        let h = hermitian_pataki_interval(n, c).map_err(|e| e.to_string())?;
        ensure!((h.r_min, h.r_max) == (lo, hi), "({n}, {c}) gives {}..{}", h.r_min, h.r_max);
    }
    Ok(format!("real (4,3) r_min 2; (12,63) 3..7; (13,70) 4..8; real r_max {}", real.r_max))
}

fn random_int_square_sum(rng: &mut ChaCha8Rng, p: &LatticePolytope, terms: usize) -> Polynomial<BigRational> {
    let mons = p.monomials().unwrap();
    (0..terms).fold(Polynomial::zero(p.ambient_dim()), |acc, _| {
        let q = Polynomial::from_int_ratios(
            p.ambient_dim(),
            &mons.iter().map(|m| (m.exps().to_vec(), rng.random_range(-3..=3), 1)).collect::<Vec<_>>(),
        )
        .unwrap();
        acc.checked_add(&q.square()).unwrap()
    })
}

fn rational_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = LatticePolytope::homogeneous_simplex(3, 2).unwrap();
    let opts = SdpOptions::default();
    let mut lengths = Vec::new();
    for _ in 0..3 {
        let f = random_int_square_sum(&mut rng, &p, 8);
        let space = gram_space(&f, None).map_err(|e| e.to_string())?;
        let sol = solve_feasibility(&space.to_f64(), &opts).map_err(|e| e.to_string())?;
        ensure!(sol.strictly_feasible, "random square sum is not interior");
        let a = rationalize(&space, &sol.point, 1000).map_err(|e| e.to_string())?;
        let cert = rational_sos(&space, &a).map_err(|e| e.to_string())?;
        ensure!(cert.mode == CertificateMode::Rational, "mode {:?}", cert.mode);
        let expanded = cert.summands.iter().fold(Polynomial::zero(3), |acc, s| acc.checked_add(&s.square()).unwrap());
        ensure!(expanded == f, "identity is not exact");
        ensure!(cert.len() <= 4 * cert.source_rank, "length {} for rank {}", cert.len(), cert.source_rank);
        lengths.push(format!("{}/{}", cert.len(), 4 * cert.source_rank));
    }
    Ok(format!("exact identities, length/bound {}", lengths.join(" ")))
}

fn segment_quartic() -> Polynomial<f64> {
    poly(
        3,
        &[
            (&[4, 0, 0], 1.0),
            (&[1, 3, 0], 1.0),
            (&[0, 4, 0], 1.0),
            (&[2, 1, 1], -3.0),
            (&[1, 2, 1], -4.0),
            (&[2, 0, 2], 2.0),
            (&[1, 0, 3], 1.0),
            (&[0, 1, 3], 1.0),
            (&[0, 0, 4], 1.0),
        ],
    )
}

fn segment_quartic_identity() -> Outcome {
    let f = segment_quartic();
    let roots: Vec<f64> = univariate_roots(&[1.0, 0.0, -4.0, -1.0])
        .iter()
        .filter(|r| r.im.abs() < 1e-12 && r.re < 0.0)
        .map(|r| r.re)
        .collect();
    ensure!(roots.len() == 2, "negative real roots {roots:?}");
    for &b in &roots {
        let p = poly(3, &[(&[2, 0, 0], 2.0), (&[0, 2, 0], b), (&[0, 1, 1], -1.0), (&[0, 0, 2], 2.0 + 1.0 / b)]);
        let q = poly(
            3,
            &[(&[1, 1, 0], 2.0), (&[0, 2, 0], -1.0 / b), (&[1, 0, 1], 2.0 / b), (&[0, 1, 1], b), (&[0, 0, 2], -1.0)],
        );
        let rhs = p.square().checked_sub(&q.square().scale(&b)).unwrap();
        let d = rhs.distance(&f.scale(&4.0)).unwrap();
        ensure!(d < 1e-8, "identity residual {d:.2e} at beta = {b}");
    }
    let space = gram_space(&f, None).map_err(|e| e.to_string())?;
    let opts = SdpOptions::default();
    let sol = solve_feasibility(&space, &opts).map_err(|e| e.to_string())?;
    ensure!(sol.status == SdpStatus::Optimal, "feasibility status {:?}", sol.status);
    let low = minimize_rank(&space, 6, &opts).map_err(|e| e.to_string())?;
    ensure!(low.numerical_rank == 2, "minimum rank found {}", low.numerical_rank);
    Ok(format!("beta in {roots:.6?}, feasible, rank {}", low.numerical_rank))
}

fn hermitian_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mons: Vec<Monomial> = LatticePolytope::homogeneous_simplex(3, 2).unwrap().monomials().unwrap();
    for k in 0..100 {
        let r: usize = rng.random_range(1..=6);
        let summands: Vec<Polynomial<f64>> = (0..r)
            .map(|_| Polynomial::from_terms(3, mons.iter().map(|m| (m.exps().to_vec(), StandardNormal.sample(&mut rng)))).unwrap())
            .collect();
        let cert = SosCertificate { mode: CertificateMode::Real, summands, residual: 0.0, source_rank: r };
        let f = cert.expand(3);
        let h = real_to_hermitian(&cert);
        let back = hermitian_to_real(&h).expand(3).distance(&f).unwrap() / f.max_norm();
        let herm = h.verify(&f) / f.max_norm();
        ensure!(back < 1e-9 && herm < 1e-9, "round trip {k}: residuals {back:.2e}, {herm:.2e}");
    }
    for d in 1..=6 {
        let f = random_positive(&mut rng, d);
        let n = enumerate_herm_rank1(&f).map_err(|e| e.to_string())?.len();
        ensure!(n == 1 << d, "degree {}: {n} rank-one matrices", 2 * d);
    }
    let f = random_positive(&mut rng, 6);
    let low = low_rank_sum(&f, 4, 1e-8).map_err(|e| e.to_string())?;
    let poly = f.to_polynomial();
    let mut total = SymMatrix::zeros(7);
    for m in &low.members {
        let a = m.matrix.re();
        ensure!(a.numerical_rank(1e-8) == 2 && a.is_psd(1e-9), "member is not a rank-2 PSD matrix");
        let res = relative_residual(&poly, &a);
        ensure!(res < 1e-8, "member residual {res:.2e}");
        total = total.add(&a);
    }
    ensure!(low.members.len() == 4, "{} members", low.members.len());
    let rank = total.numerical_rank(1e-8);
    ensure!(rank <= 6, "real sum has rank {rank}");
    Ok(format!("100 round trips, 2^d counts for d <= 6, four-member real sum rank {rank}"))
}

fn toric_lengths() -> Outcome {
    let classes: [(&str, LatticePolytope, Classification, usize); 5] = [
        ("3Δ1", LatticePolytope::homogeneous_simplex(2, 3).unwrap(), Classification::MinimalDegree, 2),
        ("2Δ2", LatticePolytope::homogeneous_simplex(3, 2).unwrap(), Classification::MinimalDegree, 3),
        ("Cayley(2,1,1)", LatticePolytope::cayley_segments(&[2, 1, 1]).unwrap(), Classification::MinimalDegree, 4),
        ("3Δ2", LatticePolytope::homogeneous_simplex(3, 3).unwrap(), Classification::AlmostMinimalDegree, 4),
        ("2Δ3", LatticePolytope::homogeneous_simplex(4, 2).unwrap(), Classification::AlmostMinimalDegree, 5),
    ];
    let opts = SdpOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for (name, p, class, length) in &classes {
        let t = toric_profile(p).map_err(|e| e.to_string())?;
        ensure!(t.classification == *class, "{name}: classified {:?}", t.classification);
        ensure!(t.predicted_generic_length == Some(*length), "{name}: predicted {:?}", t.predicted_generic_length);
        let mut hits = 0;
        let mut ranks = Vec::new();
        for _ in 0..10 {
            let f = random_square_sum(&mut rng, p, p.num_lattice_points());
            let space = gram_space(&f, Some(p)).map_err(|e| e.to_string())?;
            let rank = match minimize_rank(&space, 4, &opts) {
                Ok(sol) => sol.numerical_rank,
                Err(e) => {
                    eprintln!("  {name}: minimize_rank failed: {e}");
                    usize::MAX
                }
            };
            if rank <= *length {
                hits += 1;
            } else if rank != usize::MAX {
                eprintln!("  {name}: rank {rank} above predicted length {length}");
            }
            ranks.push(rank);
        }
        summary.push(format!("{name} {hits}/10"));
        if hits < 8 {
            failed.push(format!("{name}: {hits}/10 (ranks {ranks:?})"));
        }
    }
    ensure!(failed.is_empty(), "{}", failed.join("; "));
    Ok(summary.join(", "))
}

fn hurwitz_identities() -> Outcome {
    let start = Instant::now();
    for r in [1, 2, 4, 8] {
        let cert = hurwitz_sos(r).map_err(|e| e.to_string())?;
        ensure!(cert.len() == r, "r = {r}: {} summands", cert.len());
        ensure!(cert.expand(2 * r) == hurwitz_form(r), "r = {r}: identity is not exact");
    }
    let t = within(start.elapsed(), Some(Duration::from_secs(1)))?;
    Ok(format!("r = 1, 2, 4, 8 exact, {t}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed-form sextic optimization", sextic_closed_form),
        ("dual chart identity", chart_fixture),
        ("rank-two Gram counts", rank_two_counts),
        ("Kummer root nodes", kummer_nodes),
        ("Pataki intervals", pataki_fixtures),
        ("rational certificates", rational_pipeline),
        ("cubic-root quartic identity", segment_quartic_identity),
        ("Hermitian suite", hermitian_suite),
        ("toric length predictions", toric_lengths),
        ("Hurwitz identities", hurwitz_identities),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("[PASS] AC-{} {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] AC-{} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
