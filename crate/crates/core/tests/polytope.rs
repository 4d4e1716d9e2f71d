use proptest::prelude::*;
use sosgram::polytope::{
    half_polytope, lp::in_convex_hull, toric_profile, Classification, LatticePolytope,
};

fn profile(p: &LatticePolytope) -> (usize, usize, i64, u128, i64) {
    let t = toric_profile(p).unwrap();
    (t.lattice_points, t.dim, t.codim, t.degree, t.epsilon)
}

#[test]
fn binary_forms_are_minimal_degree() {
    for d in 1..=6 {
        let p = LatticePolytope::homogeneous_simplex(2, d).unwrap();
        let t = toric_profile(&p).unwrap();
        assert_eq!(profile(&p), (d as usize + 1, 1, d - 1, d as u128, 0));
        assert_eq!(t.classification, Classification::MinimalDegree);
        assert_eq!(t.predicted_generic_length, Some(2));
    }
}

#[test]
fn ternary_sextics_almost_minimal() {
    let p = LatticePolytope::homogeneous_simplex(3, 3).unwrap();
    let t = toric_profile(&p).unwrap();
    assert_eq!(profile(&p), (10, 2, 7, 9, 1));
    assert_eq!(t.classification, Classification::AlmostMinimalDegree);
    assert_eq!(t.predicted_generic_length, Some(4));
}

#[test]
fn quaternary_quartics_almost_minimal() {
    let p = LatticePolytope::homogeneous_simplex(4, 2).unwrap();
    let t = toric_profile(&p).unwrap();
    assert_eq!(profile(&p), (10, 3, 6, 8, 1));
    assert_eq!(t.predicted_generic_length, Some(5));
}

#[test]
fn veronese_surface_minimal() {
    let p = LatticePolytope::homogeneous_simplex(3, 2).unwrap();
    let t = toric_profile(&p).unwrap();
    assert_eq!(profile(&p), (6, 2, 3, 4, 0));
    assert_eq!(t.predicted_generic_length, Some(3));
}

#[test]
fn cayley_polytopes_are_scrolls() {
    let p = LatticePolytope::cayley_segments(&[1; 6]).unwrap();
    assert_eq!(profile(&p), (12, 6, 5, 6, 0));
    let q = LatticePolytope::cayley_segments(&[2, 1, 1, 1, 1, 1]).unwrap();
    assert_eq!(profile(&q), (13, 6, 6, 7, 0));
    assert_eq!(toric_profile(&q).unwrap().predicted_generic_length, Some(7));
    let sq = LatticePolytope::cayley_segments(&[1, 1]).unwrap();
    assert_eq!(profile(&sq), (4, 2, 1, 2, 0));
}

#[test]
fn product_of_simplex_and_segment_is_two_normal() {
    let d5 = LatticePolytope::simplex(5, 1).unwrap();
    let seg = LatticePolytope::simplex(1, 1).unwrap();
    let p = d5.product(&seg).unwrap();
    assert_eq!(p.num_lattice_points(), 12);
    assert!(p.is_two_normal().unwrap().two_normal);
}

#[test]
fn reeve_tetrahedron_is_not_two_normal() {
    let p = LatticePolytope::from_points(&[
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![1, 1, 2],
    ])
    .unwrap();
    assert_eq!(p.num_lattice_points(), 4);
    let t = p.is_two_normal().unwrap();
    assert!(!t.two_normal);
    assert_eq!(t.witness, Some(vec![1, 1, 1]));
    assert_eq!(toric_profile(&p).unwrap().predicted_generic_length, None);
}

#[test]
fn lattice_triangles_are_two_normal() {
    let p = LatticePolytope::from_points(&[vec![0, 0], vec![1, 2], vec![2, 1]]).unwrap();
    assert!(p.contains(&[1, 1]));
    assert!(p.is_two_normal().unwrap().two_normal);
}

#[test]
fn degenerate_when_lattice_points_do_not_span() {
    let p = LatticePolytope::from_points(&[vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
    assert!(p.is_spanning());
    let q = LatticePolytope::from_points(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]])
        .unwrap();
    assert!(!q.is_spanning());
    assert_eq!(toric_profile(&q).unwrap().classification, Classification::Degenerate);
}

fn small_points() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(0i64..3, n), 1..6))
}

fn brute_force_points(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = verts[0].len();
    let hi: Vec<i64> = (0..n).map(|i| verts.iter().map(|v| v[i]).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if in_convex_hull(verts, &cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= hi[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_points_match_lp_oracle(pts in small_points()) {
        let p = LatticePolytope::from_points(&pts).unwrap();
        let mut mine = p.lattice_points().to_vec();
        mine.sort();
        let mut oracle = brute_force_points(&pts);
        oracle.sort();
        prop_assert_eq!(mine, oracle);
        for v in p.vertices() {
            prop_assert!(p.lattice_points().contains(v));
        }
    }

    #[test]
    fn volume_is_triangulation_independent(pts in small_points()) {
        let p = LatticePolytope::from_points(&pts).unwrap();
        let v0 = p.normalized_volume().unwrap();
        for apex in 0..p.vertices().len() {
            prop_assert_eq!(p.normalized_volume_from(apex).unwrap(), v0);
        }
    }

    #[test]
    fn two_normality_agrees_with_pairwise_sums(pts in small_points()) {
        let p = LatticePolytope::from_points(&pts).unwrap();
        let doubled: Vec<Vec<i64>> = pts.iter().map(|v| v.iter().map(|x| 2 * x).collect()).collect();
        let two_p = brute_force_points(&doubled);
        let lp = p.lattice_points();
        let all = two_p.iter().all(|b| {
            lp.iter().any(|a| {
                let c: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                lp.contains(&c)
            })
        });
        prop_assert_eq!(p.is_two_normal().unwrap().two_normal, all);
    }

    #[test]
    fn doubling_half_polytope_covers_even_polytopes(pts in small_points()) {
        let even: Vec<Vec<i64>> = pts.iter().map(|v| v.iter().map(|x| 2 * x).collect()).collect();
        let q = LatticePolytope::from_points(&even).unwrap();
        let h = half_polytope(&q).unwrap();
        let twice = h.dilate(2).unwrap();
        for x in q.lattice_points() {
            prop_assert!(twice.contains(x));
        }
    }
}
