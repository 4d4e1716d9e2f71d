//! Vertices and facets of lattice polytopes in lattice-frame coordinates.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::lattice::{normal, Frame};
use super::lp::in_convex_hull;
use super::PolytopeError;

/// Facet inequality `normal · y ≤ offset` in frame coordinates, `normal` primitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    pub fn slack(&self, y: &[i64]) -> i64 {
        self.offset - self.normal.iter().zip(y).map(|(a, b)| a * b).sum::<i64>()
    }
}

/// Convex hull data: frame of the affine span, vertices, facets.
#[derive(Clone, Debug)]
pub struct Hull {
    pub frame: Frame,
    /// Ambient vertex coordinates.
    pub vertices: Vec<Vec<i64>>,
    /// Frame coordinates of the vertices, same order.
    pub vertex_coords: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
}

impl Hull {
    /// Hull of arbitrary integer points; non-vertices are discarded by exact LP.
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if pts.is_empty() {
            return Err(PolytopeError::Empty);
        }
        let frame = Frame::new(&pts)?;
        let ys: Vec<Vec<i64>> = pts.iter().map(|p| frame.coords(p)).collect();
        let mut keep = Vec::new();
        for (i, y) in ys.iter().enumerate() {
            let others: Vec<Vec<i64>> = ys
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if !in_convex_hull(&others, y) {
                keep.push(i);
            }
        }
        let vertices = keep.iter().map(|&i| pts[i].clone()).collect();
        let vertex_coords = keep.iter().map(|&i| ys[i].clone()).collect();
        Ok(Self::assemble(frame, vertices, vertex_coords))
    }

    /// Hull of points known to be exactly the vertex set.
    pub fn from_vertices(vertices: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        if vertices.is_empty() {
            return Err(PolytopeError::Empty);
        }
        let frame = Frame::new(&vertices)?;
        let vertex_coords = vertices.iter().map(|p| frame.coords(p)).collect();
        Ok(Self::assemble(frame, vertices, vertex_coords))
    }

    fn assemble(frame: Frame, vertices: Vec<Vec<i64>>, vertex_coords: Vec<Vec<i64>>) -> Self {
        let facets = facets(&vertex_coords, frame.dim());
        Hull { frame, vertices, vertex_coords, facets }
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Membership of an ambient integer point.
    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.frame.ambient() || !self.frame.in_span(x) {
            return false;
        }
        let y = self.frame.coords(x);
        self.facets.iter().all(|f| f.slack(&y) >= 0)
    }

    /// Indices of vertices on a facet.
    pub fn facet_vertices(&self, f: &Facet) -> Vec<usize> {
        (0..self.vertex_coords.len())
            .filter(|&i| f.slack(&self.vertex_coords[i]) == 0)
            .collect()
    }
}

fn facets(ys: &[Vec<i64>], d: usize) -> Vec<Facet> {
    if d == 0 {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for combo in (0..ys.len()).combinations(d) {
        let pts: Vec<Vec<i64>> = combo.iter().map(|&i| ys[i].clone()).collect();
        let a = if d == 1 { vec![1] } else { normal(&pts) };
        if a.iter().all(|&v| v == 0) {
            continue;
        }
        let b: i64 = a.iter().zip(&pts[0]).map(|(x, y)| x * y).sum();
        let vals: Vec<i64> = ys
            .iter()
            .map(|y| a.iter().zip(y).map(|(x, z)| x * z).sum::<i64>() - b)
            .collect();
        if vals.iter().all(|&v| v <= 0) {
            out.insert(Facet { normal: a, offset: b });
        } else if vals.iter().all(|&v| v >= 0) {
            out.insert(Facet { normal: a.iter().map(|v| -v).collect(), offset: -b });
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_has_four_facets() {
        let h = Hull::from_points(&[
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![1, 1],
            vec![0, 0],
        ])
        .unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
        assert!(h.contains(&[1, 1]));
        assert!(!h.contains(&[2, 1]));
    }

    #[test]
    fn interior_points_are_dropped() {
        let h = Hull::from_points(&[vec![0], vec![3], vec![1], vec![2]]).unwrap();
        assert_eq!(h.vertices, vec![vec![0], vec![3]]);
        assert_eq!(h.facets.len(), 2);
    }
}
