//! Deformable initial polygons of the hybrid datasets.

use std::f64::consts::PI;

use crate::error::DatasetError;
use crate::geometry::{Point2, Polygon};

/// Step by which the star projection factor is lowered.
pub const STAR_STEP: f64 = 0.01;

/// Ten-sided maze polygon in the unit box; its shortest edge has length
/// `0.25 - t/4`.
pub fn maze_polygon(t: f64) -> Result<Polygon, DatasetError> {
    check_t(t)?;
    let q = t / 4.0;
    let v = vec![
        Point2::new(0.0, 1.0),
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 0.75),
        Point2::new(0.5, 0.75),
        Point2::new(0.5, 0.5 + q),
        Point2::new(0.75 + q, 0.5 + q),
        Point2::new(0.75 + q, 0.25 - q),
        Point2::new(0.25 - q, 0.25 - q),
        Point2::new(0.25 - q, 1.0),
    ];
    Ok(Polygon::new(v)?)
}

/// Number of vertices of the star at deformation `t`.
pub fn star_vertex_count(t: f64) -> usize {
    8 * (1 + (10.0 * t).floor() as usize)
}

/// Regular polygon on the unit circle whose odd vertices are pulled towards
/// the origin until every tip angle drops below `(1 - t) pi / 3`.
pub fn star_polygon(t: f64) -> Result<Polygon, DatasetError> {
    check_t(t)?;
    let n = star_vertex_count(t);
    let limit = (1.0 - t) * PI / 3.0;
    let ring: Vec<Point2> = (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            Point2::new(a.cos(), a.sin())
        })
        .collect();
    let mut k = 0usize;
    loop {
        let s = 1.0 - STAR_STEP * k as f64;
        if s <= 1e-12 {
            return Err(DatasetError::StarProjection(t));
        }
        let v: Vec<Point2> = ring
            .iter()
            .enumerate()
            .map(|(i, &p)| if i % 2 == 1 { p * s } else { p })
            .collect();
        // All tips are congruent, checking vertex 0 suffices.
        if interior_angle(v[n - 1], v[0], v[1]) < limit {
            return Ok(Polygon::new(v)?);
        }
        k += 1;
    }
}

/// Angle at `b` inside a counter-clockwise loop `a -> b -> c`, in `(0, 2pi)`.
pub fn interior_angle(a: Point2, b: Point2, c: Point2) -> f64 {
    let u = c - b;
    let w = a - b;
    let ang = u.cross(w).atan2(u.dot(w));
    if ang < 0.0 {
        ang + 2.0 * PI
    } else {
        ang
    }
}

fn check_t(t: f64) -> Result<(), DatasetError> {
    if !(0.0..1.0).contains(&t) {
        return Err(DatasetError::InvalidSpec(format!("deformation t = {t} outside [0, 1)")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maze_published_vertices() {
        let p = maze_polygon(0.0).unwrap();
        assert_eq!(p.len(), 10);
        assert_eq!(p.vertex(5), Point2::new(0.5, 0.5));
        assert_eq!(p.vertex(9), Point2::new(0.25, 1.0));
        assert!(p.kernel().is_empty());
    }

    #[test]
    fn maze_shortest_edge_shrinks() {
        for &t in &[0.0, 0.3, 0.6, 0.95] {
            let p = maze_polygon(t).unwrap();
            let m = p.metrics();
            assert!((m.shortest_edge - (0.25 - t / 4.0)).abs() < 1e-14, "t={t}");
        }
        let a0 = maze_polygon(0.0).unwrap().area();
        let a1 = maze_polygon(0.95).unwrap().area();
        assert!(a1 < a0);
    }

    #[test]
    fn star_at_zero() {
        let p = star_polygon(0.0).unwrap();
        assert_eq!(p.len(), 8);
        let r: Vec<f64> = p.vertices().iter().map(|v| v.norm()).collect();
        let s = r[1];
        assert!(s < 1.0);
        for (i, ri) in r.iter().enumerate() {
            let want = if i % 2 == 0 { 1.0 } else { s };
            assert!((ri - want).abs() < 1e-14);
        }
        // First admissible factor: the previous step still violates the limit.
        let ang = interior_angle(p.vertex(7), p.vertex(0), p.vertex(1));
        assert!(ang < PI / 3.0);
        let prev = s + STAR_STEP;
        let a = Point2::new((2.0 * PI / 8.0).cos(), (2.0 * PI / 8.0).sin());
        let b = Point2::new(a.x, -a.y);
        let ang_prev = interior_angle(b * prev, Point2::new(1.0, 0.0), a * prev);
        assert!(ang_prev >= PI / 3.0);
    }

    #[test]
    fn star_deforms_up_to_max_t() {
        for n in 0..=10 {
            let t = n as f64 * 0.95 / 10.0;
            let p = star_polygon(t).unwrap();
            assert_eq!(p.len(), star_vertex_count(t));
            assert!(p.check().is_ok());
        }
        assert_eq!(star_vertex_count(0.95), 80);
    }

    #[test]
    fn rejects_t_out_of_range() {
        assert!(maze_polygon(1.0).is_err());
        assert!(star_polygon(-0.1).is_err());
    }
}
