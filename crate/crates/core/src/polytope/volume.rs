//! Normalized lattice volume by fan triangulation over facets.

use super::hull::Hull;
use super::PolytopeError;

/// `dim! · vol` relative to the lattice of the affine span, coning from vertex `apex`.
pub fn normalized_volume(hull: &Hull, apex: usize) -> Result<u128, PolytopeError> {
    let d = hull.dim();
    if d == 0 {
        return Ok(1);
    }
    if apex >= hull.vertices.len() {
        return Err(PolytopeError::InvalidInput(format!("apex index {apex} out of range")));
    }
    let top = &hull.vertex_coords[apex];
    let mut total: u128 = 0;
    for f in &hull.facets {
        let height = f.slack(top);
        if height == 0 {
            continue;
        }
        let verts: Vec<Vec<i64>> = hull
            .facet_vertices(f)
            .into_iter()
            .map(|i| hull.vertex_coords[i].clone())
            .collect();
        let sub = Hull::from_vertices(verts)?;
        total += height.unsigned_abs() as u128 * normalized_volume(&sub, 0)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_volume_two() {
        let h = Hull::from_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        for apex in 0..4 {
            assert_eq!(normalized_volume(&h, apex).unwrap(), 2);
        }
    }

    #[test]
    fn segment_length() {
        let h = Hull::from_points(&[vec![0, 0], vec![3, 3]]).unwrap();
        assert_eq!(normalized_volume(&h, 0).unwrap(), 3);
    }
}
