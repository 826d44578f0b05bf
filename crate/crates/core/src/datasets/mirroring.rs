//! Base meshes of the jenga, slices and ulike families and the mirroring
//! step that tiles four half-size copies into the unit square.

use std::collections::HashMap;

use super::DatasetSpec;
use crate::geometry::Point2;
use crate::mesh::PolygonalMesh;

/// Vertex pool deduplicating exact coordinates.
#[derive(Default)]
struct Builder {
    vertices: Vec<Point2>,
    index: HashMap<(u64, u64), usize>,
    elements: Vec<Vec<usize>>,
}

fn key(p: Point2) -> (u64, u64) {
    // Fold -0.0 onto 0.0 so both hash alike.
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

impl Builder {
    fn vertex(&mut self, p: Point2) -> usize {
        let n = self.vertices.len();
        let id = *self.index.entry(key(p)).or_insert(n);
        if id == n {
            self.vertices.push(p);
        }
        id
    }

    fn element(&mut self, pts: &[Point2]) {
        let el = pts.iter().map(|&p| self.vertex(p)).collect();
        self.elements.push(el);
    }

    fn finish(self) -> PolygonalMesh {
        PolygonalMesh::new(self.vertices, self.elements)
    }
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Jenga base mesh after `m` halvings: two bars, the right square and
/// `m + 1` rectangles over `(0, 1/2) x (1/4, 3/4)` with x-breaks
/// `0, 2^-(m+1), ..., 1/4, 1/2`.
pub fn jenga_base(m: usize) -> PolygonalMesh {
    let mut xs = vec![0.0];
    xs.extend((1..=m + 1).rev().map(|j| 0.5f64.powi(j as i32)));
    let mut b = Builder::default();

    let mut top = vec![p(0.0, 0.75)];
    top.extend(xs[1..].iter().map(|&x| p(x, 0.75)));
    top.extend([p(1.0, 0.75), p(1.0, 1.0), p(0.0, 1.0)]);
    b.element(&top);

    let mut bottom = vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.25)];
    bottom.extend(xs[1..].iter().rev().map(|&x| p(x, 0.25)));
    bottom.push(p(0.0, 0.25));
    b.element(&bottom);

    b.element(&[p(0.5, 0.25), p(1.0, 0.25), p(1.0, 0.75), p(0.5, 0.75)]);
    for w in xs.windows(2) {
        b.element(&[p(w[0], 0.25), p(w[1], 0.25), p(w[1], 0.75), p(w[0], 0.75)]);
    }
    b.finish()
}

/// Slices base mesh: quadrilaterals fanned between the chords from (0,0)
/// and (1,1) to the anti-diagonal points `(2^-i, 1 - 2^-i)` and
/// `(1 - 2^-i, 2^-i)`, `i = 1..=m+2`, closed by the corners (0,1), (1,0).
pub fn slices_base(m: usize) -> PolygonalMesh {
    let o = p(0.0, 0.0);
    let q = p(1.0, 1.0);
    let upper = |i: usize| {
        let s = 0.5f64.powi(i as i32);
        p(s, 1.0 - s)
    };
    let lower = |i: usize| {
        let s = 0.5f64.powi(i as i32);
        p(1.0 - s, s)
    };
    let last = m + 2;
    let mut b = Builder::default();
    for i in 1..last {
        b.element(&[o, upper(i), q, upper(i + 1)]);
    }
    b.element(&[o, upper(last), q, p(0.0, 1.0)]);
    for i in 1..last {
        b.element(&[o, lower(i + 1), q, lower(i)]);
    }
    b.element(&[o, p(1.0, 0.0), q, lower(last)]);
    b.finish()
}

/// Ulike base mesh with `2^m` nested U-shaped polylines at offsets
/// `b_j = j / (2 (2^m + 1))`: channel octagons between consecutive
/// polylines, an inner rectangle, and an outer U whose bottom edge carries
/// the points `(b_j, 0)`, `(1 - b_j, 0)`.
pub fn ulike_base(m: usize) -> PolygonalMesh {
    let count = 1usize << m;
    let off = |j: usize| 0.5 * j as f64 / (count as f64 + 1.0);
    let mut b = Builder::default();

    let b1 = off(1);
    let mut outer = vec![p(0.0, 1.0), p(0.0, 0.0)];
    outer.extend((1..=count).map(|j| p(off(j), 0.0)));
    outer.extend((1..=count).rev().map(|j| p(1.0 - off(j), 0.0)));
    outer.extend([p(1.0, 0.0), p(1.0, 1.0), p(1.0 - b1, 1.0), p(1.0 - b1, b1), p(b1, b1), p(b1, 1.0)]);
    b.element(&outer);

    for j in 1..count {
        let (u, v) = (off(j), off(j + 1));
        b.element(&[
            p(u, 1.0),
            p(u, u),
            p(1.0 - u, u),
            p(1.0 - u, 1.0),
            p(1.0 - v, 1.0),
            p(1.0 - v, v),
            p(v, v),
            p(v, 1.0),
        ]);
    }
    let c = off(count);
    b.element(&[p(c, c), p(1.0 - c, c), p(1.0 - c, 1.0), p(c, 1.0)]);
    b.finish()
}

/// Four copies of `m` translated by (0,0), (1,0), (1,1), (0,1) and scaled
/// by 1/2, with coincident vertices merged. Element edges on the two seams
/// are split at any seam vertex they pass over, so the result conforms
/// even when opposite sides of `m` carry different vertices.
pub fn mirror_mesh(m: &PolygonalMesh) -> PolygonalMesh {
    let mut b = Builder::default();
    b.vertices.reserve(4 * m.n_vertices());
    b.elements.reserve(4 * m.n_elements());
    for (ox, oy) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
        let local: Vec<usize> = m
            .vertices
            .iter()
            .map(|v| b.vertex(p((v.x + ox) * 0.5, (v.y + oy) * 0.5)))
            .collect();
        for el in &m.elements {
            b.elements.push(el.iter().map(|&i| local[i]).collect());
        }
    }
    let mut out = b.finish();
    split_seams(&mut out);
    out
}

/// Inserts seam vertices lying strictly inside element edges on x = 1/2 or
/// y = 1/2.
fn split_seams(m: &mut PolygonalMesh) {
    // Seam vertices sorted along the seam.
    let mut vert: Vec<(f64, usize)> = Vec::new();
    let mut horiz: Vec<(f64, usize)> = Vec::new();
    for (i, v) in m.vertices.iter().enumerate() {
        if v.x == 0.5 {
            vert.push((v.y, i));
        }
        if v.y == 0.5 {
            horiz.push((v.x, i));
        }
    }
    vert.sort_by(|a, b| a.0.total_cmp(&b.0));
    horiz.sort_by(|a, b| a.0.total_cmp(&b.0));

    let verts = &m.vertices;
    for el in &mut m.elements {
        let n = el.len();
        let mut out: Vec<usize> = Vec::with_capacity(n);
        let mut changed = false;
        for i in 0..n {
            let (a, c) = (el[i], el[(i + 1) % n]);
            out.push(a);
            let (pa, pc) = (verts[a], verts[c]);
            let seam = if pa.x == 0.5 && pc.x == 0.5 {
                Some((&vert, pa.y, pc.y))
            } else if pa.y == 0.5 && pc.y == 0.5 {
                Some((&horiz, pa.x, pc.x))
            } else {
                None
            };
            if let Some((list, s0, s1)) = seam {
                let (lo, hi) = if s0 < s1 { (s0, s1) } else { (s1, s0) };
                let start = list.partition_point(|e| e.0 <= lo);
                let end = list.partition_point(|e| e.0 < hi);
                if start < end {
                    changed = true;
                    if s0 < s1 {
                        out.extend(list[start..end].iter().map(|e| e.1));
                    } else {
                        out.extend(list[start..end].iter().rev().map(|e| e.1));
                    }
                }
            }
        }
        if changed {
            *el = out;
        }
    }
}

/// Applies [`mirror_mesh`] `times` times.
pub fn mirror_times(base: PolygonalMesh, times: usize) -> PolygonalMesh {
    (0..times).fold(base, |m, _| mirror_mesh(&m))
}

pub fn gen_jenga(spec: &DatasetSpec, n: usize) -> PolygonalMesh {
    mirror_times(jenga_base(spec.steps(n)), n)
}

pub fn gen_slices(spec: &DatasetSpec, n: usize) -> PolygonalMesh {
    mirror_times(slices_base(spec.steps(n)), n)
}

pub fn gen_ulike(spec: &DatasetSpec, n: usize) -> PolygonalMesh {
    mirror_times(ulike_base(spec.steps(n)), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PolygonalMesh {
        PolygonalMesh::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], vec![vec![0, 1, 2, 3]])
    }

    #[test]
    fn mirror_single_square() {
        let m = mirror_mesh(&unit_square());
        assert_eq!(m.n_elements(), 4);
        assert_eq!(m.n_vertices(), 9);
        assert!(m.validate().is_empty());
        for e in 0..4 {
            assert!((m.element_polygon(e).area() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn mirror_merge_count() {
        // Merges happen exactly on the seams: each shared seam vertex is
        // counted once per extra copy touching it.
        let base = jenga_base(2);
        let m = mirror_mesh(&base);
        assert!(m.n_vertices() < 4 * base.n_vertices());
        let on = |v: &Point2, x: f64| (v.x == x) as usize;
        let left = base.vertices.iter().map(|v| on(v, 0.0)).sum::<usize>();
        let bottom = base.vertices.iter().filter(|v| v.y == 0.0).count();
        // Vertical seam merges `left` vertices twice, horizontal seam merges
        // `bottom` vertices twice, the center was merged three times but
        // counted four times above.
        assert_eq!(m.n_vertices(), 4 * base.n_vertices() - 2 * left - 2 * bottom + 1);
    }

    #[test]
    fn mirror_inserts_t_junctions() {
        // Right side split at y = 0.5, left side not: copies meet with a
        // hanging vertex that must be inserted into the neighbor.
        let m = PolygonalMesh::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.5), p(1.0, 1.0), p(0.0, 1.0)],
            vec![vec![0, 1, 2, 3, 4]],
        );
        let mm = mirror_mesh(&m);
        assert!(mm.validate().is_empty(), "{:?}", mm.validate());
    }

    #[test]
    fn mirror_preserves_ratios() {
        for base in [jenga_base(3), slices_base(3), ulike_base(3)] {
            let s0 = base.stats();
            let s1 = mirror_mesh(&base).stats();
            assert!((s0.a_ratio - s1.a_ratio).abs() <= 1e-12 * s0.a_ratio);
            assert!((s0.e_ratio - s1.e_ratio).abs() <= 1e-12 * s0.e_ratio);
            assert!((s1.h - s0.h / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn jenga_base_zero() {
        let m = jenga_base(0);
        assert_eq!(m.n_elements(), 4);
        assert!(m.validate().is_empty());
        for e in 0..4 {
            assert!((m.element_polygon(e).area() - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn jenga_area_ratio_doubles() {
        for k in 0..8 {
            let m = jenga_base(k);
            assert!(m.validate().is_empty());
            assert_eq!(m.n_elements(), k + 4);
            let s = m.stats();
            assert!((s.a_ratio - 2f64.powi(k as i32)).abs() < 1e-9);
            // Bar sides have length 1/4, so the leftmost width only wins from k = 1.
            assert!((s.e_ratio - 2f64.powi(k.max(1) as i32 + 1)).abs() < 1e-9);
        }
    }

    #[test]
    fn slices_structure() {
        for k in 0..6 {
            let m = slices_base(k);
            assert!(m.validate().is_empty(), "{k}: {:?}", m.validate());
            assert_eq!(m.n_elements(), 2 * (k + 2));
            let s = m.stats();
            assert!((s.a_ratio - 2f64.powi(k as i32)).abs() < 1e-9);
            assert!(s.e_ratio <= 2f64.sqrt() + 1e-12);
        }
        // Two inner triangles with a straight angle at the center.
        let m = slices_base(0);
        assert!((m.element_polygon(0).area() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ulike_structure() {
        for k in 0..6 {
            let m = ulike_base(k);
            assert!(m.validate().is_empty(), "{k}: {:?}", m.validate());
            let count = 1usize << k;
            assert_eq!(m.n_elements(), count + 1);
            let e = 0.5 / (count as f64 + 1.0);
            let s = m.stats();
            assert!((s.e_ratio - 1.0 / e).abs() < 1e-9);
            let outer = m.element_polygon(0).area();
            assert!((outer - (3.0 * e - 2.0 * e * e)).abs() < 1e-14);
            let inner = m.element_polygon(count).area();
            assert!((inner - 2.0 * e * (0.5 + e)).abs() < 1e-14);
        }
    }

    #[test]
    fn mirrored_levels_validate() {
        let spec = DatasetSpec::default();
        for n in 0..4 {
            for m in [gen_jenga(&spec, n), gen_slices(&spec, n), gen_ulike(&spec, n)] {
                assert!(m.validate().is_empty(), "level {n}");
            }
        }
    }
}
