//! Poisson-disk Delaunay triangulations of the unit square.

use super::poisson::{poisson_disk, BRIDSON_ATTEMPTS};
use super::triangulate::delaunay;
use super::DatasetSpec;
use crate::error::DatasetError;
use crate::geometry::Point2;
use crate::mesh::PolygonalMesh;

/// Sampling radius at level 0, giving roughly 50 vertices.
pub const TRIANGLE_R0: f64 = 0.135;

/// Level `n`: Bridson sample with radius `r0 / 2^n`, seeded with equispaced
/// points on the square boundary, then Delaunay-triangulated.
pub fn gen_triangle(spec: &DatasetSpec, n: usize) -> Result<PolygonalMesh, DatasetError> {
    let r = TRIANGLE_R0 / 2f64.powi(n as i32);
    let mut rng = spec.level_rng(n);
    let seeds = boundary_points(r);
    let pts = poisson_disk(
        &mut rng,
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 1.0),
        r,
        &seeds,
        BRIDSON_ATTEMPTS,
    );
    delaunay(&pts)
}

/// Corners plus equispaced side points with spacing at least `r`.
fn boundary_points(r: f64) -> Vec<Point2> {
    let k = ((1.0 / r).floor() as usize).max(1);
    let s = |i: usize| i as f64 / k as f64;
    let mut v = Vec::with_capacity(4 * k);
    v.extend((0..k).map(|i| Point2::new(s(i), 0.0)));
    v.extend((0..k).map(|i| Point2::new(1.0, s(i))));
    v.extend((0..k).map(|i| Point2::new(1.0 - s(i), 1.0)));
    v.extend((0..k).map(|i| Point2::new(0.0, 1.0 - s(i))));
    v
}
