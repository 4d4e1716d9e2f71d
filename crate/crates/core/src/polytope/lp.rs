//! Exact feasibility for `A λ = b, λ ≥ 0` by phase-one simplex over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Returns a nonnegative solution of `a · λ = b` if one exists.
///
/// `a` is given column-wise: `cols[j]` is column `j`.
pub fn feasible_point(cols: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = b.len();
    let n = cols.len();
    // tableau rows: m constraints, columns: n originals + m artificials + rhs
    let width = n + m + 1;
    let mut t = vec![vec![BigRational::zero(); width]; m];
    for i in 0..m {
        let flip = b[i].is_negative();
        for (j, col) in cols.iter().enumerate() {
            t[i][j] = if flip { -col[i].clone() } else { col[i].clone() };
        }
        t[i][n + i] = BigRational::from_integer(BigInt::from(1));
        t[i][width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // objective: minimize sum of artificials, reduced costs over all columns
    loop {
        let mut cost = vec![BigRational::zero(); width];
        for j in 0..width {
            if (n..n + m).contains(&j) {
                continue;
            }
            let mut s = BigRational::zero();
            for i in 0..m {
                if basis[i] >= n {
                    s += &t[i][j];
                }
            }
            cost[j] = s;
        }
        // Bland: smallest index with positive reduced gain
        let entering = (0..n).find(|&j| cost[j].is_positive() && !basis.contains(&j));
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((k, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        pivot(&mut t, r, e);
        basis[r] = e;
    }

    let infeasible = (0..m).any(|i| basis[i] >= n && !t[i][width - 1].is_zero());
    if infeasible {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i == r || ti[c].is_zero() {
            continue;
        }
        let f = ti[c].clone();
        for (v, rv) in ti.iter_mut().zip(&row) {
            *v -= &f * rv;
        }
    }
}

/// Is `p` a convex combination of `points`?
pub fn in_convex_hull(points: &[Vec<i64>], p: &[i64]) -> bool {
    if points.is_empty() {
        return false;
    }
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let cols: Vec<Vec<BigRational>> = points
        .iter()
        .map(|pt| pt.iter().map(|&v| q(v)).chain(std::iter::once(q(1))).collect())
        .collect();
    let b: Vec<BigRational> = p.iter().map(|&v| q(v)).chain(std::iter::once(q(1))).collect();
    feasible_point(&cols, &b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_membership() {
        let tri = vec![vec![0, 0], vec![2, 0], vec![0, 2]];
        assert!(in_convex_hull(&tri, &[1, 1]));
        assert!(in_convex_hull(&tri, &[0, 0]));
        assert!(!in_convex_hull(&tri, &[2, 1]));
        assert!(!in_convex_hull(&tri, &[-1, 0]));
    }

    #[test]
    fn degenerate_segment_in_plane() {
        let seg = vec![vec![0, 0, 0], vec![2, 2, 2]];
        assert!(in_convex_hull(&seg, &[1, 1, 1]));
        assert!(!in_convex_hull(&seg, &[1, 1, 0]));
    }
}
