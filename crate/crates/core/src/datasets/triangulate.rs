//! Delaunay and refined constrained Delaunay triangulations backed by
//! `spade`, converted to [`PolygonalMesh`] form.

use std::collections::HashSet;

use spade::handles::FixedVertexHandle;
use spade::{
    AngleLimit, ConstrainedDelaunayTriangulation, DelaunayTriangulation, Point2 as SPoint,
    RefinementParameters, Triangulation as _,
};

use crate::error::DatasetError;
use crate::geometry::{orient, Point2, Polygon};
use crate::mesh::PolygonalMesh;

type Cdt = ConstrainedDelaunayTriangulation<SPoint<f64>>;

/// Refined triangulation of a domain with polygonal holes.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub vertices: Vec<Point2>,
    /// Counter-clockwise triangles covering the domain minus the holes.
    pub triangles: Vec<[usize; 3]>,
    /// Boundary loop of each hole, including vertices inserted on its edges.
    pub holes: Vec<Vec<usize>>,
    /// False when the Steiner point cap stopped the refinement early.
    pub refinement_complete: bool,
}

impl Triangulation {
    /// Mesh whose elements are the triangles followed by the holes, with
    /// unused vertices dropped.
    pub fn into_mesh(self, holes_as_elements: bool) -> PolygonalMesh {
        let mut elements: Vec<Vec<usize>> = self.triangles.iter().map(|t| t.to_vec()).collect();
        if holes_as_elements {
            elements.extend(self.holes);
        }
        compact(self.vertices, elements)
    }
}

/// Drops vertices not referenced by any element, keeping relative order.
pub(crate) fn compact(vertices: Vec<Point2>, mut elements: Vec<Vec<usize>>) -> PolygonalMesh {
    let mut remap = vec![usize::MAX; vertices.len()];
    for el in &elements {
        for &v in el {
            remap[v] = 0;
        }
    }
    let mut kept = Vec::new();
    for (i, p) in vertices.into_iter().enumerate() {
        if remap[i] == 0 {
            remap[i] = kept.len();
            kept.push(p);
        }
    }
    for el in &mut elements {
        for v in el.iter_mut() {
            *v = remap[*v];
        }
    }
    PolygonalMesh::new(kept, elements)
}

fn to_sp(p: Point2) -> SPoint<f64> {
    SPoint::new(p.x, p.y)
}

fn ccw(tri: [usize; 3], pts: &[Point2]) -> [usize; 3] {
    if orient(pts[tri[0]], pts[tri[1]], pts[tri[2]]) < 0.0 {
        [tri[0], tri[2], tri[1]]
    } else {
        tri
    }
}

/// Unconstrained Delaunay triangulation of a point set.
pub fn delaunay(points: &[Point2]) -> Result<PolygonalMesh, DatasetError> {
    let dt = DelaunayTriangulation::<SPoint<f64>>::bulk_load_stable(
        points.iter().copied().map(to_sp).collect(),
    )
    .map_err(|e| DatasetError::Triangulation(format!("{e:?}")))?;
    let verts: Vec<Point2> = dt.vertices().map(|v| Point2::new(v.position().x, v.position().y)).collect();
    let tris: Vec<Vec<usize>> = dt
        .inner_faces()
        .map(|f| ccw(f.vertices().map(|v| v.fix().index()), &verts).to_vec())
        .collect();
    Ok(compact(verts, tris))
}

/// Steiner point budget: generous relative to what the area bound needs.
fn steiner_cap(n_input: usize, domain_area: f64, max_area: f64) -> usize {
    let by_area = (domain_area / max_area).ceil().min(1e8) as usize;
    20 * by_area + 20 * n_input + 1000
}

/// Conforming triangulation of `domain` minus `holes`, refined towards
/// `min_angle_deg` and `max_area`. Hole edges may be split but never moved.
pub fn constrained_delaunay_refine(
    domain: &Polygon,
    holes: &[Polygon],
    max_area: f64,
    min_angle_deg: f64,
) -> Result<Triangulation, DatasetError> {
    if !(max_area > 0.0) || !(0.0..=60.0).contains(&min_angle_deg) {
        return Err(DatasetError::InvalidSpec(format!(
            "refinement parameters max_area = {max_area}, min_angle = {min_angle_deg}"
        )));
    }
    let mut pts: Vec<SPoint<f64>> = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut loops: Vec<Vec<usize>> = Vec::new();
    for poly in std::iter::once(domain).chain(holes) {
        let base = pts.len();
        let n = poly.len();
        pts.extend(poly.vertices().iter().copied().map(to_sp));
        edges.extend((0..n).map(|i| [base + i, base + (i + 1) % n]));
        loops.push((base..base + n).collect());
    }
    let n_input = pts.len();
    let mut cdt = Cdt::bulk_load_cdt(pts, edges).map_err(|e| DatasetError::Triangulation(format!("{e:?}")))?;
    if cdt.num_vertices() != n_input {
        return Err(DatasetError::Triangulation("duplicate input vertices".into()));
    }

    let params = RefinementParameters::<f64>::new()
        .with_angle_limit(AngleLimit::from_deg(min_angle_deg))
        .with_max_allowed_area(max_area)
        .exclude_outer_faces(true)
        .with_max_additional_vertices(steiner_cap(n_input, domain.area(), max_area));
    let result = cdt.refine(params);
    let excluded: HashSet<usize> = result.excluded_faces.iter().map(|f| f.index()).collect();

    let vertices: Vec<Point2> = cdt.vertices().map(|v| Point2::new(v.position().x, v.position().y)).collect();
    let triangles: Vec<[usize; 3]> = cdt
        .inner_faces()
        .filter(|f| !excluded.contains(&f.fix().index()))
        .map(|f| ccw(f.vertices().map(|v| v.fix().index()), &vertices))
        .collect();

    let mut hole_loops = Vec::with_capacity(holes.len());
    for lp in &loops[1..] {
        let mut out = Vec::new();
        for i in 0..lp.len() {
            walk_constraint(&cdt, lp[i], lp[(i + 1) % lp.len()], &mut out)?;
        }
        hole_loops.push(out);
    }

    Ok(Triangulation {
        vertices,
        triangles,
        holes: hole_loops,
        refinement_complete: result.refinement_complete,
    })
}

/// Appends the vertices of the split input segment `a -> b`, excluding `b`.
fn walk_constraint(cdt: &Cdt, a: usize, b: usize, out: &mut Vec<usize>) -> Result<(), DatasetError> {
    let pos = |i: usize| {
        let p = cdt.vertex(FixedVertexHandle::from_index(i)).position();
        Point2::new(p.x, p.y)
    };
    let target = pos(b);
    let dir = target - pos(a);
    let dir = dir * (1.0 / dir.norm());
    let mut cur = a;
    let mut steps = 0;
    while cur != b {
        out.push(cur);
        let v = cdt.vertex(FixedVertexHandle::from_index(cur));
        let mut best: Option<(f64, usize)> = None;
        for e in v.out_edges() {
            if !e.is_constraint_edge() {
                continue;
            }
            let to = e.to().fix().index();
            let d = pos(to) - pos(cur);
            let c = d.dot(dir) / d.norm();
            if best.is_none_or(|(bc, _)| c > bc) {
                best = Some((c, to));
            }
        }
        match best {
            Some((c, to)) if c > 1.0 - 1e-8 => cur = to,
            _ => return Err(DatasetError::Triangulation(format!("lost input segment {a} -> {b}"))),
        }
        steps += 1;
        if steps > cdt.num_vertices() {
            return Err(DatasetError::Triangulation(format!("cycle along input segment {a} -> {b}")));
        }
    }
    Ok(())
}
