//! Integer linear algebra: lattice frames of affine spans, determinants, indices.

use num_integer::Integer;

use super::PolytopeError;

/// Unimodular coordinates on the lattice `aff(points) ∩ Zⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    origin: Vec<i64>,
    /// `d × n`; row `j` is the ambient image of the `j`-th frame unit vector.
    basis: Vec<Vec<i64>>,
    /// `n × d`; `y = (x − origin) · coord`.
    coord: Vec<Vec<i64>>,
}

fn checked(v: i128) -> Result<i64, PolytopeError> {
    i64::try_from(v).map_err(|_| PolytopeError::Overflow)
}

impl Frame {
    pub fn new(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let origin = points.first().ok_or(PolytopeError::Empty)?.clone();
        let n = origin.len();
        let mut m: Vec<Vec<i128>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| (*a - *b) as i128).collect())
            .collect();
        let mut u: Vec<Vec<i128>> = identity(n);
        let mut uinv: Vec<Vec<i128>> = identity(n);
        let mut c = 0;
        for r in 0..m.len() {
            if c == n {
                break;
            }
            for j in c + 1..n {
                while m[r][j] != 0 {
                    let q = Integer::div_floor(&m[r][c], &m[r][j]);
                    // column c -= q column j
                    for row in m.iter_mut().chain(u.iter_mut()) {
                        row[c] -= q * row[j];
                        row.swap(c, j);
                    }
                    // inverse: row j += q row c, then swap rows c, j
                    let rc = uinv[c].clone();
                    for (a, b) in uinv[j].iter_mut().zip(&rc) {
                        *a += q * b;
                    }
                    uinv.swap(c, j);
                    if m.iter().chain(u.iter()).flatten().any(|v| v.abs() > i64::MAX as i128) {
                        return Err(PolytopeError::Overflow);
                    }
                }
            }
            if m[r][c] != 0 {
                c += 1;
            }
        }
        let d = c;
        let basis = uinv[..d]
            .iter()
            .map(|row| row.iter().map(|&v| checked(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let coord = u
            .iter()
            .map(|row| row[..d].iter().map(|&v| checked(v)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Frame { origin, basis, coord })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Frame coordinates of an ambient point assumed to lie in the span.
    pub fn coords(&self, x: &[i64]) -> Vec<i64> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                x.iter()
                    .zip(&self.origin)
                    .zip(&self.coord)
                    .map(|((a, o), row)| (a - o) * row[j])
                    .sum()
            })
            .collect()
    }

    pub fn lift(&self, y: &[i64]) -> Vec<i64> {
        let mut x = self.origin.clone();
        for (yj, row) in y.iter().zip(&self.basis) {
            for (xi, b) in x.iter_mut().zip(row) {
                *xi += yj * b;
            }
        }
        x
    }

    /// Does the ambient point lie in the affine span?
    pub fn in_span(&self, x: &[i64]) -> bool {
        self.lift(&self.coords(x)) == x
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Normal to the hyperplane through `d` points of `Z^d` (generalized cross product).
pub fn normal(points: &[Vec<i64>]) -> Vec<i64> {
    let d = points[0].len();
    let rows: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| (*a - *b) as i128).collect())
        .collect();
    let mut a: Vec<i128> = (0..d)
        .map(|j| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                .collect();
            if j % 2 == 0 {
                det(minor)
            } else {
                -det(minor)
            }
        })
        .collect();
    let g = a.iter().fold(0i128, |g, v| g.gcd(v));
    if g > 1 {
        for v in a.iter_mut() {
            *v /= g;
        }
    }
    a.into_iter().map(|v| v as i64).collect()
}

/// Index of the lattice generated by `rows` inside `Z^d`, or `None` if they
/// do not span `Q^d`.
pub fn lattice_index(rows: &[Vec<i64>], d: usize) -> Option<u128> {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut index: u128 = 1;
    let mut r0 = 0;
    for c in 0..d {
        // gcd-reduce column c over rows r0..
        loop {
            let nz: Vec<usize> = (r0..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).expect("nonempty");
            for &i in &nz {
                if i != p {
                    let q = Integer::div_floor(&m[i][c], &m[p][c]);
                    let rp = m[p].clone();
                    for (a, b) in m[i].iter_mut().zip(&rp) {
                        *a -= q * b;
                    }
                }
            }
        }
        let Some(p) = (r0..m.len()).find(|&i| m[i][c] != 0) else {
            return None;
        };
        m.swap(r0, p);
        index *= m[r0][c].unsigned_abs();
        r0 += 1;
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_of_diagonal_segment() {
        let f = Frame::new(&[vec![0, 0], vec![2, 2], vec![1, 1]]).unwrap();
        assert_eq!(f.dim(), 1);
        let y = f.coords(&[2, 2]);
        assert_eq!(y[0].abs(), 2);
        assert_eq!(f.lift(&y), vec![2, 2]);
        assert!(f.in_span(&[5, 5]));
        assert!(!f.in_span(&[1, 0]));
    }

    #[test]
    fn frame_of_hyperplane_is_unimodular() {
        // x + y + z = 2
        let pts = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]];
        let f = Frame::new(&pts).unwrap();
        assert_eq!(f.dim(), 2);
        for p in [[1, 1, 0], [0, 1, 1], [1, 0, 1], [2, 0, 0]] {
            assert!(f.in_span(&p));
            assert_eq!(f.lift(&f.coords(&p)), p.to_vec());
        }
        assert!(!f.in_span(&[1, 0, 0]));
    }

    #[test]
    fn determinant_and_normal() {
        assert_eq!(det(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det(vec![vec![0, 1], vec![1, 0]]), -1);
        let n = normal(&[vec![0, 0], vec![2, 4]]);
        assert_eq!(n.iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn index_of_even_lattice() {
        assert_eq!(lattice_index(&[vec![2, 0], vec![0, 1]], 2), Some(2));
        assert_eq!(lattice_index(&[vec![2, 1], vec![1, 1]], 2), Some(1));
        assert_eq!(lattice_index(&[vec![1, 1]], 2), None);
    }
}
