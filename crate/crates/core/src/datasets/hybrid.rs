//! Hybrid meshes: scaled copies of a deformed polygon scattered over the
//! square, the remainder filled by a refined constrained triangulation.

use rand::seq::SliceRandom;
use rand::Rng;

use super::poisson::{poisson_disk, BRIDSON_ATTEMPTS};
use super::shapes::{maze_polygon, star_polygon};
use super::triangulate::constrained_delaunay_refine;
use super::{DatasetKind, DatasetSpec};
use crate::error::DatasetError;
use crate::geometry::{point_segment_distance, segments_intersect, Point2, Polygon};
use crate::mesh::PolygonalMesh;

/// Area decrement per shrink step, as a fraction of `d_n`.
pub const SHRINK_FRACTION: f64 = 0.05;
/// Shrink steps tried before placement is declared failed.
pub const MAX_SHRINK_STEPS: usize = 20;
/// Required clearance between copies and from the boundary, relative to
/// the square root of the copy area.
pub const GAP_FRACTION: f64 = 0.1;
/// Minimum triangle angle requested from the refinement.
const MIN_ANGLE_DEG: f64 = 20.0;

/// Level `n` of the maze or star dataset.
pub fn gen_hybrid(spec: &DatasetSpec, n: usize) -> Result<PolygonalMesh, DatasetError> {
    let t = spec.t(n);
    let proto = match spec.kind {
        DatasetKind::Maze => maze_polygon(t)?,
        DatasetKind::Star => star_polygon(t)?,
        k => return Err(DatasetError::InvalidSpec(format!("{k} is not a hybrid dataset"))),
    };
    let count = spec.copies(n);
    let d_n = spec.d(n);
    let mut rng = spec.level_rng(n);

    let (lo, hi) = proto.bbox();
    let mid = (lo + hi) * 0.5;
    let half = (hi - lo) * 0.5;
    let proto_area = proto.area();

    for step in 0..MAX_SHRINK_STEPS {
        let d = d_n * (1.0 - SHRINK_FRACTION * step as f64);
        let scale = (d / proto_area).sqrt();
        let gap = GAP_FRACTION * d.sqrt();
        let ext = half * scale;
        let Some(centers) = place_centers(&mut rng, count, ext, gap) else {
            continue;
        };
        let copies: Vec<Polygon> = centers
            .iter()
            .map(|&c| Polygon::new_unchecked(proto.vertices().iter().map(|&v| c + (v - mid) * scale).collect()))
            .collect();
        if !copies_clear(&copies, gap) {
            continue;
        }
        let domain = Polygon::new_unchecked(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]);
        let tri = constrained_delaunay_refine(&domain, &copies, d, MIN_ANGLE_DEG)?;
        return Ok(tri.into_mesh(true));
    }
    Err(DatasetError::Placement { level: n, count })
}

/// `count` centers at mutual distance about `1/sqrt(2 count)` such that a
/// box of half-extent `ext` plus `gap` around each stays inside the square.
/// The Poisson radius is relaxed when the inset box is too small to hold
/// `count` samples.
fn place_centers<R: Rng>(rng: &mut R, count: usize, ext: Point2, gap: f64) -> Option<Vec<Point2>> {
    let lo = Point2::new(ext.x + gap, ext.y + gap);
    let hi = Point2::new(1.0 - ext.x - gap, 1.0 - ext.y - gap);
    if lo.x > hi.x || lo.y > hi.y {
        return None;
    }
    let mut r = 1.0 / (2.0 * count as f64).sqrt();
    for _ in 0..30 {
        let mut pts = poisson_disk(rng, lo, hi, r, &[], BRIDSON_ATTEMPTS);
        if pts.len() >= count {
            pts.shuffle(rng);
            pts.truncate(count);
            return Some(pts);
        }
        r *= 0.9;
    }
    None
}

/// True when every pair of copies is separated by at least `gap`.
fn copies_clear(copies: &[Polygon], gap: f64) -> bool {
    let boxes: Vec<(Point2, Point2)> = copies.iter().map(|p| p.bbox()).collect();
    for i in 0..copies.len() {
        for j in 0..i {
            let (a0, a1) = boxes[i];
            let (b0, b1) = boxes[j];
            if a0.x > b1.x + gap || b0.x > a1.x + gap || a0.y > b1.y + gap || b0.y > a1.y + gap {
                continue;
            }
            if !pair_clear(&copies[i], &copies[j], gap) {
                return false;
            }
        }
    }
    true
}

fn pair_clear(p: &Polygon, q: &Polygon, gap: f64) -> bool {
    if p.contains(q.vertex(0)) || q.contains(p.vertex(0)) {
        return false;
    }
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        for j in 0..q.len() {
            let (c, d) = q.edge(j);
            if segments_intersect(a, b, c, d)
                || point_segment_distance(a, c, d) < gap
                || point_segment_distance(c, a, b) < gap
            {
                return false;
            }
        }
    }
    true
}
