//! Planar polygon primitives: measures, kernels, ear clipping and the
//! collinear grouping of boundary edges.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::GeometryError;

/// Default tolerance on the normalized cross product used to decide that
/// two consecutive edges lie on the same line.
pub const COLLINEAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + t * (o.x - self.x), self.y + t * (o.y - self.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `a b c` (positive when CCW).
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Signed shoelace area of a closed vertex loop.
pub fn signed_area(pts: &[Point2]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += pts[i].cross(pts[(i + 1) % n]);
    }
    0.5 * s
}

/// Area-weighted centroid of a closed CCW loop with nonzero area.
pub fn centroid(pts: &[Point2]) -> Point2 {
    let n = pts.len();
    // shift to the first vertex to limit cancellation
    let o = pts[0];
    let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let p = pts[i] - o;
        let q = pts[(i + 1) % n] - o;
        let w = p.cross(q);
        a += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    Point2::new(o.x + cx / (3.0 * a), o.y + cy / (3.0 * a))
}

/// Whether closed segments `p1 p2` and `q1 q2` share at least one point.
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point2, b: Point2, p: Point2, d: f64| {
        d == 0.0
            && p.x >= a.x.min(b.x)
            && p.x <= a.x.max(b.x)
            && p.y >= a.y.min(b.y)
            && p.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// Even-odd point-in-polygon test. Points on the boundary may go either way.
pub fn point_in_polygon(pts: &[Point2], p: Point2) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the closed segment `a b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Convex hull (Andrew's monotone chain), CCW, without collinear points.
pub fn convex_hull(pts: &[Point2]) -> Vec<Point2> {
    let mut p: Vec<Point2> = pts.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * p.len());
    for &q in &p {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    let lower = hull.len() + 1;
    for &q in p.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
            hull.pop();
        }
        hull.push(q);
    }
    hull.pop();
    hull
}

/// Measures of a polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonMetrics {
    pub area: f64,
    pub centroid: Point2,
    pub diameter: f64,
    pub shortest_edge: f64,
    pub longest_edge: f64,
}

/// A simple polygon stored as a counter-clockwise vertex loop.
///
/// Consecutive collinear vertices are allowed: on polygonal meshes they are
/// genuine vertices shared with neighbouring elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Builds a polygon and checks every invariant (finite coordinates, no
    /// consecutive duplicates, positive orientation, simple boundary).
    pub fn new(vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        let p = Self { vertices };
        p.check()?;
        Ok(p)
    }

    /// Builds a polygon without validation. Callers must guarantee the
    /// invariants of [`Polygon::new`].
    pub fn new_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        let v = &self.vertices;
        let n = v.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = v.iter().position(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        for i in 0..n {
            if v[i] == v[(i + 1) % n] {
                return Err(GeometryError::DuplicateVertex((i + 1) % n));
            }
        }
        let a = signed_area(v);
        if a <= 0.0 || !a.is_finite() {
            return Err(GeometryError::NonPositiveArea(a));
        }
        if let Some((i, j)) = self.find_self_intersection() {
            return Err(GeometryError::SelfIntersection(i, j));
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| {
            let (a, b) = self.edge(i);
            a.dist(b)
        })
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().sum()
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point2 {
        centroid(&self.vertices)
    }

    /// Maximum distance between two vertices, which for a polygon equals
    /// the diameter of the point set.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point2> = if self.len() > 64 {
            convex_hull(&self.vertices)
        } else {
            self.vertices.clone()
        };
        let mut d2: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = pts[i] - pts[j];
                d2 = d2.max(d.dot(d));
            }
        }
        d2.sqrt()
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn contains(&self, p: Point2) -> bool {
        point_in_polygon(&self.vertices, p)
    }

    pub fn metrics(&self) -> PolygonMetrics {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for l in self.edge_lengths() {
            lo = lo.min(l);
            hi = hi.max(l);
        }
        PolygonMetrics {
            area: self.area(),
            centroid: self.centroid(),
            diameter: self.diameter(),
            shortest_edge: lo,
            longest_edge: hi,
        }
    }

    /// Returns a pair of non-adjacent edges that intersect, if any.
    ///
    /// Adjacent edges only share their common vertex unless they fold back
    /// onto each other, which is also reported.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let v = &self.vertices;
        // folded-back consecutive edges (zero interior angle)
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            let c = v[(i + 2) % n];
            if orient(a, b, c) == 0.0 && (a - b).dot(c - b) > 0.0 {
                return Some((i, (i + 1) % n));
            }
        }
        let (lo, hi) = self.bbox();
        let cells = ((n as f64).sqrt().ceil() as usize).clamp(1, 256);
        let w = ((hi.x - lo.x) / cells as f64).max(f64::MIN_POSITIVE);
        let h = ((hi.y - lo.y) / cells as f64).max(f64::MIN_POSITIVE);
        let cell_of = |p: Point2| {
            let cx = (((p.x - lo.x) / w) as usize).min(cells - 1);
            let cy = (((p.y - lo.y) / h) as usize).min(cells - 1);
            (cx, cy)
        };
        let mut grid: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
        for i in 0..n {
            let (a, b) = self.edge(i);
            let (ax, ay) = cell_of(a);
            let (bx, by) = cell_of(b);
            for cx in ax.min(bx)..=ax.max(bx) {
                for cy in ay.min(by)..=ay.max(by) {
                    grid[cy * cells + cx].push(i);
                }
            }
        }
        let mut first: Option<(usize, usize)> = None;
        for bucket in &grid {
            for (s, &i) in bucket.iter().enumerate() {
                for &j in &bucket[s + 1..] {
                    let (i, j) = (i.min(j), i.max(j));
                    if j == i + 1 || (i == 0 && j == n - 1) {
                        continue;
                    }
                    let (a, b) = self.edge(i);
                    let (c, d) = self.edge(j);
                    if segments_intersect(a, b, c, d) && first.is_none_or(|f| (i, j) < f) {
                        first = Some((i, j));
                    }
                }
            }
        }
        first
    }

    pub fn is_convex(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| orient(self.vertex(i), self.vertex(i + 1), self.vertex(i + 2)) >= 0.0)
    }

    /// Kernel of the polygon: the set of points from which every boundary
    /// point is visible.
    pub fn kernel(&self) -> Kernel {
        polygon_kernel(self)
    }

    pub fn ear_clip(&self) -> Result<Vec<[usize; 3]>, GeometryError> {
        ear_clip(self)
    }

    pub fn collinear_submeshes(&self, tol: f64) -> SubMeshPartition {
        collinear_submeshes(self, tol)
    }
}

/// Kernel of a polygon as a convex vertex loop, plus its area.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    /// Empty when the polygon is not star-shaped.
    pub vertices: Vec<Point2>,
    pub area: f64,
}

impl Kernel {
    pub fn is_empty(&self) -> bool {
        self.area == 0.0
    }
}

/// Clips a convex loop against the half-plane on the left of `a -> b`.
fn clip_left(poly: &[Point2], a: Point2, b: Point2) -> Vec<Point2> {
    let d = b - a;
    let side = |p: Point2| d.cross(p - a);
    let mut out = Vec::with_capacity(poly.len() + 1);
    let n = poly.len();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let sp = side(p);
        let sq = side(q);
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

/// Kernel by successive clipping of the bounding box against the inner
/// half-plane of every edge.
pub fn polygon_kernel(poly: &Polygon) -> Kernel {
    let (lo, hi) = poly.bbox();
    let pad = (hi - lo).norm();
    let mut k = vec![
        Point2::new(lo.x - pad, lo.y - pad),
        Point2::new(hi.x + pad, lo.y - pad),
        Point2::new(hi.x + pad, hi.y + pad),
        Point2::new(lo.x - pad, hi.y + pad),
    ];
    let area = poly.area();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        k = clip_left(&k, a, b);
        if k.len() < 3 {
            return Kernel { vertices: Vec::new(), area: 0.0 };
        }
    }
    let ka = signed_area(&k);
    if ka <= 1e-12 * area {
        return Kernel { vertices: Vec::new(), area: 0.0 };
    }
    Kernel { vertices: k, area: ka.min(area) }
}

fn in_closed_triangle(p: Point2, a: Point2, b: Point2, c: Point2, tol: f64) -> bool {
    orient(a, b, p) >= -tol && orient(b, c, p) >= -tol && orient(c, a, p) >= -tol
}

/// Ear clipping triangulation of a simple CCW polygon.
///
/// Returned triangles index the polygon vertices and are CCW. Vertices with
/// a straight angle never become ear tips; they are dropped once no proper
/// ear remains, so they may end up in the interior of a triangle edge.
pub fn ear_clip(poly: &Polygon) -> Result<Vec<[usize; 3]>, GeometryError> {
    let pts = poly.vertices();
    let n = pts.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    let scale = poly.diameter().powi(2);
    let tol = 1e-13 * scale;
    let mut ring: Vec<usize> = (0..n).collect();
    let mut tris = Vec::with_capacity(n - 2);
    let mut cursor = 0usize;
    while ring.len() > 3 {
        let m = ring.len();
        let turn = |i: usize| {
            let a = pts[ring[(i + m - 1) % m]];
            let b = pts[ring[i]];
            let c = pts[ring[(i + 1) % m]];
            orient(a, b, c)
        };
        let turns: Vec<f64> = (0..m).map(turn).collect();
        // only non-convex vertices can block an ear of a simple polygon
        let blockers: Vec<usize> = (0..m).filter(|&i| turns[i] <= tol).collect();
        let mut ear = None;
        for s in 0..m {
            let i = (cursor + s) % m;
            if turns[i] <= tol {
                continue;
            }
            let ia = (i + m - 1) % m;
            let ic = (i + 1) % m;
            let (a, b, c) = (pts[ring[ia]], pts[ring[i]], pts[ring[ic]]);
            let blocked = blockers.iter().any(|&j| {
                if j == ia || j == i || j == ic {
                    return false;
                }
                let p = pts[ring[j]];
                p != a && p != b && p != c && in_closed_triangle(p, a, b, c, tol)
            });
            if !blocked {
                ear = Some(i);
                break;
            }
        }
        match ear {
            Some(i) => {
                tris.push([ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]]);
                ring.remove(i);
                cursor = i % ring.len();
            }
            None => {
                // zero-area ears: straight-angle vertices are removed last
                let straight = (0..m).find(|&i| {
                    let a = pts[ring[(i + m - 1) % m]];
                    let b = pts[ring[i]];
                    let c = pts[ring[(i + 1) % m]];
                    turns[i].abs() <= tol && (a - b).dot(c - b) < 0.0
                });
                match straight {
                    Some(i) => {
                        ring.remove(i);
                        cursor = i % ring.len();
                    }
                    None => return Err(GeometryError::NoEar { vertex: ring[cursor % m] }),
                }
            }
        }
    }
    let (a, b, c) = (pts[ring[0]], pts[ring[1]], pts[ring[2]]);
    if orient(a, b, c) > tol {
        tris.push([ring[0], ring[1], ring[2]]);
    }
    Ok(tris)
}

/// Maximal runs of consecutive collinear boundary edges, taken cyclically.
#[derive(Debug, Clone, PartialEq)]
pub struct SubMeshPartition {
    /// Each group lists edge indices in boundary order.
    pub groups: Vec<Vec<usize>>,
}

impl SubMeshPartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Groups boundary edges lying on a common line. `tol` bounds the
/// normalized cross product of consecutive edge directions.
pub fn collinear_submeshes(poly: &Polygon, tol: f64) -> SubMeshPartition {
    let n = poly.len();
    let dir = |i: usize| {
        let (a, b) = poly.edge(i);
        b - a
    };
    // edge i continues the line of edge i-1
    let continues = |i: usize| {
        let d0 = dir((i + n - 1) % n);
        let d1 = dir(i);
        let c = d0.cross(d1) / (d0.norm() * d1.norm());
        c.abs() <= tol && d0.dot(d1) > 0.0
    };
    let Some(start) = (0..n).find(|&i| !continues(i)) else {
        return SubMeshPartition { groups: vec![(0..n).collect()] };
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        let i = (start + s) % n;
        if s == 0 || !continues(i) {
            groups.push(vec![i]);
        } else {
            groups.last_mut().expect("group started").push(i);
        }
    }
    SubMeshPartition { groups }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(f64, f64)]) -> Polygon {
        Polygon::new(c.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn unit_square() -> Polygon {
        poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    fn maze0() -> Polygon {
        poly(&[
            (0.0, 1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.75),
            (0.5, 0.75),
            (0.5, 0.5),
            (0.75, 0.5),
            (0.75, 0.25),
            (0.25, 0.25),
            (0.25, 1.0),
        ])
    }

    #[test]
    fn square_metrics() {
        let m = unit_square().metrics();
        assert_eq!(m.area, 1.0);
        assert_eq!(m.centroid, Point2::new(0.5, 0.5));
        assert!((m.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!((m.shortest_edge, m.longest_edge), (1.0, 1.0));
    }

    #[test]
    fn equilateral_metrics() {
        let t = poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)]);
        let m = t.metrics();
        assert!((m.area - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((m.diameter - 1.0).abs() < 1e-15);
    }

    #[test]
    fn maze_area_matches_independent_shoelace() {
        // shoelace written out over the published vertex list
        let v = [
            (0.0, 1.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.75),
            (0.5, 0.75),
            (0.5, 0.5),
            (0.75, 0.5),
            (0.75, 0.25),
            (0.25, 0.25),
            (0.25, 1.0),
        ];
        let mut s = 0.0;
        for i in 0..10 {
            let (x0, y0) = v[i];
            let (x1, y1) = v[(i + 1) % 10];
            s += (x0 + x1) * (y1 - y0);
        }
        let oracle: f64 = 0.5 * s;
        assert!((maze0().area() - oracle).abs() < 1e-15);
    }

    #[test]
    fn degenerate_polygons_are_rejected() {
        let flat = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ]);
        assert!(matches!(flat, Err(GeometryError::NonPositiveArea(_))));
        let cw = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 0.0),
        ]);
        assert!(matches!(cw, Err(GeometryError::NonPositiveArea(_))));
        let dup = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert_eq!(dup, Err(GeometryError::DuplicateVertex(2)));
        let bowtie = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 2.0),
            Point2::new(1.0, -1.0),
            Point2::new(0.0, 2.0),
        ]);
        assert!(matches!(bowtie, Err(GeometryError::SelfIntersection(..))));
    }

    #[test]
    fn kernel_of_convex_is_itself() {
        let k = unit_square().kernel();
        assert!((k.area - 1.0).abs() < 1e-14);
    }

    #[test]
    fn maze_is_not_star_shaped() {
        assert_eq!(maze0().kernel().area, 0.0);
    }

    #[test]
    fn l_shape_kernel_is_unit_square() {
        let l = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let k = l.kernel();
        assert!((k.area - 1.0).abs() < 1e-14);
        for p in &k.vertices {
            assert!(p.x > -1e-12 && p.x < 1.0 + 1e-12 && p.y > -1e-12 && p.y < 1.0 + 1e-12);
        }
    }

    #[test]
    fn ear_clip_basic_cases() {
        let t = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(t.ear_clip().unwrap(), vec![[0, 1, 2]]);
        let sq = unit_square().ear_clip().unwrap();
        assert_eq!(sq.len(), 2);
        let v = unit_square();
        for tri in sq {
            let a = orient(v.vertex(tri[0]), v.vertex(tri[1]), v.vertex(tri[2])) / 2.0;
            assert!((a - 0.5).abs() < 1e-15);
        }
        let maze = maze0();
        let tris = maze.ear_clip().unwrap();
        assert_eq!(tris.len(), 8);
        let s: f64 = tris
            .iter()
            .map(|t| orient(maze.vertex(t[0]), maze.vertex(t[1]), maze.vertex(t[2])) / 2.0)
            .sum();
        assert!((s - maze.area()).abs() <= 1e-12 * maze.area());
    }

    #[test]
    fn ear_clip_with_collinear_vertices() {
        // top bar of a jenga base mesh with two inserted bottom vertices
        let bar = poly(&[(0.0, 0.75), (0.25, 0.75), (0.5, 0.75), (1.0, 0.75), (1.0, 1.0), (0.0, 1.0)]);
        let tris = bar.ear_clip().unwrap();
        let s: f64 = tris
            .iter()
            .map(|t| orient(bar.vertex(t[0]), bar.vertex(t[1]), bar.vertex(t[2])) / 2.0)
            .sum();
        assert!((s - 0.25).abs() < 1e-15);
        assert!(tris
            .iter()
            .all(|t| orient(bar.vertex(t[0]), bar.vertex(t[1]), bar.vertex(t[2])) > 0.0));
    }

    #[test]
    fn submesh_grouping() {
        assert_eq!(unit_square().collinear_submeshes(COLLINEAR_TOL).len(), 4);
        let bar = poly(&[(0.0, 0.75), (0.25, 0.75), (0.5, 0.75), (1.0, 0.75), (1.0, 1.0), (0.0, 1.0)]);
        let g = bar.collinear_submeshes(COLLINEAR_TOL);
        assert_eq!(g.len(), 4);
        assert_eq!(g.groups.iter().map(Vec::len).max(), Some(3));
        let hex: Vec<Point2> = (0..6)
            .map(|i| {
                let a = i as f64 * std::f64::consts::PI / 3.0;
                Point2::new(a.cos(), a.sin())
            })
            .collect();
        assert_eq!(Polygon::new(hex).unwrap().collinear_submeshes(COLLINEAR_TOL).len(), 6);
    }

    #[test]
    fn hull_of_square_with_interior_point() {
        let h = convex_hull(&[
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 0.5),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(0.5, 0.0),
        ]);
        assert_eq!(h.len(), 4);
        assert!((signed_area(&h) - 1.0).abs() < 1e-15);
    }
}
