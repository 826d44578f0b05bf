//! Polygonal meshes of the unit square: container, conformity checks,
//! scaling statistics and OFF input/output.

mod off;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{Point2, Polygon};

pub use off::{read_mesh, read_off, write_mesh, write_off};

/// Distance under which a point counts as lying on the boundary of the unit
/// square.
const BOUNDARY_TOL: f64 = 1e-12;

/// Vertices plus elements given as counter-clockwise vertex index loops.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalMesh {
    pub vertices: Vec<Point2>,
    pub elements: Vec<Vec<usize>>,
}

/// Undirected mesh segment keyed by its sorted vertex pair.
pub type Segment = (usize, usize);

pub fn segment_key(a: usize, b: usize) -> Segment {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PolygonalMesh {
    pub fn new(vertices: Vec<Point2>, elements: Vec<Vec<usize>>) -> Self {
        Self { vertices, elements }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Geometry of element `e`. No validation is performed.
    pub fn element_polygon(&self, e: usize) -> Polygon {
        Polygon::new_unchecked(self.elements[e].iter().map(|&i| self.vertices[i]).collect())
    }

    /// For every segment, the elements using it in loop order.
    pub fn segment_owners(&self) -> BTreeMap<Segment, Vec<(usize, bool)>> {
        let mut map: BTreeMap<Segment, Vec<(usize, bool)>> = BTreeMap::new();
        for (e, el) in self.elements.iter().enumerate() {
            let n = el.len();
            for i in 0..n {
                let (a, b) = (el[i], el[(i + 1) % n]);
                map.entry(segment_key(a, b)).or_default().push((e, a < b));
            }
        }
        map
    }

    /// Segments used by exactly one element.
    pub fn boundary_segments(&self) -> Vec<Segment> {
        self.segment_owners()
            .into_iter()
            .filter(|(_, owners)| owners.len() == 1)
            .map(|(s, _)| s)
            .collect()
    }

    /// Marks the vertices lying on a boundary segment.
    pub fn boundary_vertex_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for (a, b) in self.boundary_segments() {
            flags[a] = true;
            flags[b] = true;
        }
        flags
    }

    pub fn total_area(&self) -> f64 {
        (0..self.n_elements()).map(|e| self.element_polygon(e).signed_area()).sum()
    }

    /// Structural and geometric violations; an empty list means the mesh is valid.
    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    pub fn stats(&self) -> MeshStats {
        mesh_stats(self)
    }
}

/// One problem found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyMesh,
    BadIndex { element: usize, index: usize },
    UnusedVertex(usize),
    InvalidElement { element: usize, reason: crate::GeometryError },
    /// Segment used by more than two elements or twice in the same direction.
    Overlap { segment: Segment },
    /// Segment used by a single element but not lying on the domain boundary.
    NonConforming { segment: Segment },
    /// Element areas do not add up to the domain area.
    AreaMismatch { total: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyMesh => write!(f, "mesh has no elements"),
            Violation::BadIndex { element, index } => {
                write!(f, "element {element} references missing vertex {index}")
            }
            Violation::UnusedVertex(v) => write!(f, "vertex {v} is not used by any element"),
            Violation::InvalidElement { element, reason } => write!(f, "element {element}: {reason}"),
            Violation::Overlap { segment } => {
                write!(f, "segment {segment:?} is shared inconsistently (overlap)")
            }
            Violation::NonConforming { segment } => {
                write!(f, "segment {segment:?} has one neighbour but is not on the domain boundary")
            }
            Violation::AreaMismatch { total } => {
                write!(f, "element areas sum to {total}, expected 1 (gap or overlap)")
            }
        }
    }
}

fn on_unit_square_side(a: Point2, b: Point2) -> bool {
    let side = |u: f64, v: f64, c: f64| (u - c).abs() <= BOUNDARY_TOL && (v - c).abs() <= BOUNDARY_TOL;
    side(a.x, b.x, 0.0) || side(a.x, b.x, 1.0) || side(a.y, b.y, 0.0) || side(a.y, b.y, 1.0)
}

/// Checks element validity, segment-wise conformity and coverage of the
/// unit square.
pub fn validate(m: &PolygonalMesh) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.elements.is_empty() {
        out.push(Violation::EmptyMesh);
        return out;
    }
    let nv = m.vertices.len();
    let mut used = vec![false; nv];
    let mut indices_ok = true;
    for (e, el) in m.elements.iter().enumerate() {
        for &i in el {
            if i >= nv {
                out.push(Violation::BadIndex { element: e, index: i });
                indices_ok = false;
            } else {
                used[i] = true;
            }
        }
    }
    if !indices_ok {
        return out;
    }
    out.extend(used.iter().enumerate().filter(|(_, &u)| !u).map(|(v, _)| Violation::UnusedVertex(v)));
    for e in 0..m.n_elements() {
        if let Err(reason) = m.element_polygon(e).check() {
            out.push(Violation::InvalidElement { element: e, reason });
        }
    }
    for (seg, owners) in m.segment_owners() {
        match owners.as_slice() {
            [_] => {
                if !on_unit_square_side(m.vertices[seg.0], m.vertices[seg.1]) {
                    out.push(Violation::NonConforming { segment: seg });
                }
            }
            [(_, d0), (_, d1)] if d0 != d1 => {}
            _ => out.push(Violation::Overlap { segment: seg }),
        }
    }
    let total = m.total_area();
    if (total - 1.0).abs() > 1e-9 {
        out.push(Violation::AreaMismatch { total });
    }
    out
}

/// Mesh size and the max/min ratios of element areas and edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub h: f64,
    pub a_ratio: f64,
    pub e_ratio: f64,
    pub n_vertices: usize,
    pub n_elements: usize,
}

pub fn mesh_stats(m: &PolygonalMesh) -> MeshStats {
    let (mut h, mut amin, mut amax, mut emin, mut emax) =
        (0.0f64, f64::INFINITY, 0.0f64, f64::INFINITY, 0.0f64);
    for e in 0..m.n_elements() {
        let p = m.element_polygon(e);
        let met = p.metrics();
        h = h.max(met.diameter);
        amin = amin.min(met.area);
        amax = amax.max(met.area);
        emin = emin.min(met.shortest_edge);
        emax = emax.max(met.longest_edge);
    }
    MeshStats {
        h,
        a_ratio: amax / amin,
        e_ratio: emax / emin,
        n_vertices: m.n_vertices(),
        n_elements: m.n_elements(),
    }
}
