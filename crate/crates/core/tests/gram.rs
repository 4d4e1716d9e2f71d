use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sosgram::binary::{enumerate_rank2, Which};
use sosgram::config::Tolerances;
use sosgram::gram::{
    extract_sos, gram_apply, gram_space, hurwitz_form, hurwitz_sos, rational_sos, rationalize, CertificateMode,
    GramError, SymMatrix,
};
use sosgram::kummer::{gram_parametrization, SexticCoeffs};
use sosgram::poly::{BinaryForm, Polynomial};
use sosgram::polytope::LatticePolytope;
use sosgram::sdp::{minimize_rank, solve_feasibility, SdpOptions};

fn random_int_sos(rng: &mut ChaCha8Rng, p: &LatticePolytope, terms: usize) -> Polynomial<BigRational> {
    let mons = p.monomials().unwrap();
    let nvars = p.ambient_dim();
    (0..terms).fold(Polynomial::zero(nvars), |acc, _| {
        let q = Polynomial::from_int_ratios(
            nvars,
            &mons.iter().map(|m| (m.exps().to_vec(), rng.random_range(-3..=3), 1)).collect::<Vec<_>>(),
        )
        .unwrap();
        acc.checked_add(&q.square()).unwrap()
    })
}

/// Rank of the linear map `A ↦ m_Pᵀ A m_P` on upper-triangle coordinates.
fn gram_map_rank(p: &LatticePolytope) -> usize {
    let pts = p.lattice_points();
    let n = pts.len();
    let mut images: Vec<Vec<i64>> = Vec::new();
    let mut cols: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let s: Vec<i64> = pts[i].iter().zip(&pts[j]).map(|(a, b)| a + b).collect();
            if !images.contains(&s) {
                images.push(s.clone());
            }
            cols.push((i, images.iter().position(|t| t == &s).unwrap()));
        }
    }
    let m = DMatrix::from_fn(images.len(), cols.len(), |r, c| if cols[c].1 == r { 1.0 } else { 0.0 });
    m.rank(1e-9)
}

#[test]
fn kernel_dimension_matches_the_gram_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let polytopes = [
        LatticePolytope::homogeneous_simplex(3, 2).unwrap(),
        LatticePolytope::homogeneous_simplex(3, 3).unwrap(),
        LatticePolytope::homogeneous_simplex(2, 3).unwrap(),
        LatticePolytope::cayley_segments(&[2, 1, 1]).unwrap(),
        LatticePolytope::from_points(&[vec![0, 0], vec![2, 0], vec![0, 1], vec![2, 1]]).unwrap(),
    ];
    for p in &polytopes {
        let f = random_int_sos(&mut rng, p, 3);
        let space = gram_space(&f, Some(p)).unwrap();
        let n = space.n();
        let pts = p.lattice_points();
        let sums: BTreeSet<Vec<i64>> = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        assert_eq!(space.m(), n * (n + 1) / 2 - sums.len());
        assert_eq!(space.m(), n * (n + 1) / 2 - gram_map_rank(p));
        for b in space.kernel_basis() {
            assert_eq!(&gram_apply(&space, &space.particular().add(b)).unwrap(), space.target());
        }
        assert_eq!(&gram_apply(&space, space.particular()).unwrap(), space.target());
    }
}

#[test]
fn ternary_quartic_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = LatticePolytope::homogeneous_simplex(3, 2).unwrap();
    let f = random_int_sos(&mut rng, &p, 4);
    let space = gram_space(&f, None).unwrap();
    assert_eq!((space.n(), space.m()), (6, 6));
}

#[test]
fn midpoint_of_quartic_vertices_has_three_summands() {
    let f = BinaryForm::new(vec![1.0, -1.0, 3.0, 0.5, 2.0]).unwrap();
    let e = enumerate_rank2(&f, Which::Psd).unwrap();
    assert_eq!(e.psd.len(), 2);
    let mid = e.psd[0].matrix.add(&e.psd[1].matrix).scale(&0.5);
    let space = gram_space(&f.to_polynomial(), None).unwrap();
    let cert = extract_sos(&space, &mid, &Tolerances::default()).unwrap();
    assert_eq!(cert.len(), 3);
    assert_eq!(cert.source_rank, 3);
    assert!(cert.residual < 1e-10);
    for r in &e.psd {
        assert_eq!(extract_sos(&space, &r.matrix, &Tolerances::default()).unwrap().len(), 2);
    }
}

#[test]
fn sextic_rank_three_matrix_has_three_summands() {
    let a = SexticCoeffs::from_form(&BinaryForm::new(vec![1.0, -2.0, 5.0, -4.0, 5.0, -2.0, 1.0]).unwrap()).unwrap();
    let r5 = 5f64.sqrt();
    let m = gram_parametrization(&a, -(1.0 + r5) / 2.0, -0.2, -(1.0 - r5) / 2.0);
    let space = gram_space(&a.to_form().to_polynomial(), None).unwrap();
    let cert = extract_sos(&space, &m, &Tolerances::default()).unwrap();
    assert_eq!(cert.len(), 3);
    assert!(cert.residual < 1e-8);
    assert_eq!(cert.mode, CertificateMode::Real);
}

#[test]
fn extraction_round_trips_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = SdpOptions::default();
    for (nvars, d) in [(2, 4), (3, 2), (3, 3), (4, 2)] {
        let p = LatticePolytope::homogeneous_simplex(nvars, d).unwrap();
        let f = random_int_sos(&mut rng, &p, p.num_lattice_points()).to_f64();
        let space = gram_space(&f, None).unwrap();
        let sol = solve_feasibility(&space, &opts).unwrap();
        let cert = extract_sos(&space, &sol.point, &opts.tolerances).unwrap();
        assert_eq!(cert.len(), space.n());
        assert!(cert.expand(nvars).distance(&f).unwrap() < 1e-8 * f.max_norm());
        let low = minimize_rank(&space, 4, &opts).unwrap();
        let short = extract_sos(&space, &low.point, &opts.tolerances).unwrap();
        assert_eq!(short.len(), low.numerical_rank);
        assert!(short.residual < 1e-8 * f.max_norm());
    }
}

#[test]
fn rational_certificates_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = SdpOptions::default();
    let p = LatticePolytope::homogeneous_simplex(3, 2).unwrap();
    for _ in 0..5 {
        let f = random_int_sos(&mut rng, &p, 8);
        let space = gram_space(&f, None).unwrap();
        let sol = solve_feasibility(&space.to_f64(), &opts).unwrap();
        assert!(sol.strictly_feasible);
        let a = rationalize(&space, &sol.point, 1000).unwrap();
        assert_eq!(&gram_apply(&space, &a).unwrap(), &f);
        let cert = rational_sos(&space, &a).unwrap();
        assert_eq!(cert.mode, CertificateMode::Rational);
        assert_eq!(cert.residual, 0.0);
        assert_eq!(cert.expand(3), f);
        assert!(cert.len() <= 4 * cert.source_rank);
        assert_eq!(cert.source_rank, 6);
    }
}

#[test]
fn rounding_cannot_certify_the_irrational_segment() {
    let f = Polynomial::from_int_ratios(
        3,
        &[
            (vec![4, 0, 0], 1, 1),
            (vec![1, 3, 0], 1, 1),
            (vec![0, 4, 0], 1, 1),
            (vec![2, 1, 1], -3, 1),
            (vec![1, 2, 1], -4, 1),
            (vec![2, 0, 2], 2, 1),
            (vec![1, 0, 3], 1, 1),
            (vec![0, 1, 3], 1, 1),
            (vec![0, 0, 4], 1, 1),
        ],
    )
    .unwrap();
    let space = gram_space(&f, None).unwrap();
    let opts = SdpOptions::default();
    let sol = solve_feasibility(&space.to_f64(), &opts).unwrap();
    assert!(!sol.strictly_feasible);
    for digits in 1..=8 {
        let a = rationalize(&space, &sol.point, 10u64.pow(digits)).unwrap();
        assert!(matches!(rational_sos(&space, &a), Err(GramError::NotPsd { .. })));
    }
}

#[test]
fn non_gram_matrices_are_rejected() {
    let f = Polynomial::from_int_ratios(2, &[(vec![2, 0], 1, 1), (vec![0, 2], 1, 1)]).unwrap();
    let space = gram_space(&f, None).unwrap();
    let wrong = SymMatrix::identity(2).scale(&BigRational::from_integer(2.into()));
    assert!(matches!(rational_sos(&space, &wrong), Err(GramError::NotGramMatrix { .. })));
    let float = space.to_f64();
    assert!(matches!(
        extract_sos(&float, &SymMatrix::identity(3), &Tolerances::default()),
        Err(GramError::DimensionMismatch { .. })
    ));
    let indefinite = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(matches!(extract_sos(&float, &indefinite, &Tolerances::default()), Err(GramError::NotPsd { .. })));
}

#[test]
fn hurwitz_identities_are_exact() {
    for r in [1, 2, 4, 8] {
        let cert = hurwitz_sos(r).unwrap();
        assert_eq!(cert.len(), r);
        assert_eq!(cert.expand(2 * r), hurwitz_form(r));
        assert_eq!(cert.residual, 0.0);
        // each summand is bilinear in (x, y)
        for p in &cert.summands {
            for (m, _) in p.terms() {
                let e = m.exps();
                assert_eq!(e[..r].iter().sum::<u32>(), 1);
                assert_eq!(e[r..].iter().sum::<u32>(), 1);
            }
        }
    }
    for r in [3, 5, 16] {
        assert!(matches!(hurwitz_sos(r), Err(GramError::UnsupportedHurwitz(_))));
    }
}
