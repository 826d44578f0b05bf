//! Independent oracles shared by the integration tests and the acceptance
//! report: brute-force visibility, Monte-Carlo integration and pointwise
//! projector evaluation.

#![allow(dead_code)]

use std::f64::consts::PI;

use polyvem::basis::{polygon_quadrature, BasisKind};
use polyvem::vem::{build_element, interpolate, ElementOptions, StabKind};
use polyvem::{Point2, Polygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Star-shaped around `center` by construction, usually non-convex.
pub fn radial_polygon(rng: &mut impl Rng, n: usize, center: Point2, scale: f64) -> Polygon {
    // jittered even spacing keeps every angular gap below pi
    let ang: Vec<f64> = (0..n).map(|i| 2.0 * PI * (i as f64 + 0.8 * rng.random::<f64>()) / n as f64).collect();
    let pts = ang
        .iter()
        .map(|&a| {
            let r = scale * rng.random_range(0.3..1.0);
            Point2::new(center.x + r * a.cos(), center.y + r * a.sin())
        })
        .collect();
    Polygon::new(pts).expect("radial polygon is simple")
}

/// x-monotone polygon between a low and a high chain; deep teeth make it
/// frequently not star-shaped.
pub fn monotone_polygon(rng: &mut impl Rng, n: usize) -> Polygon {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    let mut pts: Vec<Point2> = xs.iter().map(|&x| Point2::new(x, rng.random_range(0.0..0.45))).collect();
    pts.extend(xs.iter().rev().map(|&x| Point2::new(x, rng.random_range(0.55..1.0))));
    Polygon::new(pts).expect("monotone polygon is simple")
}

/// Half of the polygons radial, half monotone.
pub fn random_polygons(seed: u64, count: usize) -> Vec<Polygon> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.random_range(4..14);
            if i % 2 == 0 {
                radial_polygon(&mut r, n, Point2::new(0.5, 0.5), 0.5)
            } else {
                monotone_polygon(&mut r, n)
            }
        })
        .collect()
}

/// Even-odd crossing test.
pub fn inside(pts: &[Point2], p: Point2) -> bool {
    let n = pts.len();
    let mut c = false;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y) {
            c = !c;
        }
    }
    c
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn proper_cross(p: Point2, q: Point2, a: Point2, b: Point2) -> bool {
    let d1 = cross(p, q, a);
    let d2 = cross(p, q, b);
    let d3 = cross(a, b, p);
    let d4 = cross(a, b, q);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// `p` sees the whole boundary iff it is inside and the segment to every
/// edge midpoint crosses no other edge: a point behind some edge can only
/// reach that edge's midpoint from the exterior.
pub fn sees_everything(poly: &Polygon, p: Point2) -> bool {
    let v = poly.vertices();
    let n = v.len();
    if !inside(v, p) {
        return false;
    }
    (0..n).all(|e| {
        let m = v[e].lerp(v[(e + 1) % n], 0.5);
        (0..n).filter(|&f| f != e).all(|f| !proper_cross(p, m, v[f], v[(f + 1) % n]))
    })
}

fn in_convex(loop_: &[Point2], p: Point2) -> bool {
    let n = loop_.len();
    n >= 3 && (0..n).all(|i| cross(loop_[i], loop_[(i + 1) % n], p) >= 0.0)
}

pub struct KernelOracle {
    pub polygons: usize,
    pub samples: usize,
    pub mismatches: usize,
    pub in_kernel: usize,
    pub empty_kernels: usize,
}

/// Compares kernel membership with brute-force visibility on uniform
/// samples of each polygon's bounding box.
pub fn kernel_vs_visibility(seed: u64, polygons: usize, samples: usize) -> KernelOracle {
    let mut r = rng(seed ^ 0x5151);
    let mut out = KernelOracle { polygons, samples: 0, mismatches: 0, in_kernel: 0, empty_kernels: 0 };
    for poly in random_polygons(seed, polygons) {
        let ker = poly.kernel();
        if ker.is_empty() {
            out.empty_kernels += 1;
        }
        let (lo, hi) = poly.bbox();
        for _ in 0..samples {
            let p = Point2::new(r.random_range(lo.x..hi.x), r.random_range(lo.y..hi.y));
            let a = !ker.is_empty() && in_convex(&ker.vertices, p);
            let b = sees_everything(&poly, p);
            out.samples += 1;
            out.in_kernel += a as usize;
            out.mismatches += (a != b) as usize;
        }
    }
    out
}

pub struct McCase {
    pub quadrature: f64,
    pub monte_carlo: f64,
    pub sigma: f64,
}

impl McCase {
    pub fn within(&self, k: f64) -> bool {
        (self.quadrature - self.monte_carlo).abs() <= k * self.sigma
    }
}

/// Degree-4 polynomial integrals by polygon quadrature against plain
/// Monte-Carlo over the bounding box.
pub fn quadrature_vs_monte_carlo(seed: u64, polygons: usize, samples: usize) -> Vec<McCase> {
    let mut r = rng(seed ^ 0xACE);
    random_polygons(seed, polygons)
        .into_iter()
        .map(|poly| {
            let c: Vec<f64> = (0..15).map(|_| r.random_range(-1.0..1.0)).collect();
            let f = |p: Point2| {
                let mut s = 0.0;
                let mut i = 0;
                for d in 0..=4 {
                    for a in 0..=d {
                        s += c[i] * p.x.powi(a) * p.y.powi(d - a);
                        i += 1;
                    }
                }
                s
            };
            let quadrature = polygon_quadrature(&poly, 4).unwrap().integrate(f);
            let (lo, hi) = poly.bbox();
            let box_area = (hi.x - lo.x) * (hi.y - lo.y);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..samples {
                let p = Point2::new(r.random_range(lo.x..hi.x), r.random_range(lo.y..hi.y));
                let v = if inside(poly.vertices(), p) { f(p) } else { 0.0 };
                s1 += v;
                s2 += v * v;
            }
            let n = samples as f64;
            let mean = s1 / n;
            let var = (s2 / n - mean * mean).max(0.0);
            McCase { quadrature, monte_carlo: box_area * mean, sigma: box_area * (var / n).sqrt() }
        })
        .collect()
}

/// Largest relative pointwise error of Π∇q and Π⁰q against q over random
/// (polygon, k, q ∈ P_k, basis) triples.
pub fn projector_preservation(seed: u64, cases: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for i in 0..cases {
        let n = r.random_range(3..12);
        let scale = 10f64.powf(r.random_range(-2.0..0.0));
        let center = Point2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let poly = if i % 3 == 2 {
            let m = monotone_polygon(&mut r, n);
            Polygon::new(m.vertices().iter().map(|v| Point2::new(center.x + scale * v.x, center.y + scale * v.y)).collect())
                .unwrap()
        } else {
            radial_polygon(&mut r, n, center, scale)
        };
        let k = r.random_range(1..=3);
        let basis = if r.random::<bool>() { BasisKind::Ortho } else { BasisKind::Monomial };
        let coef: Vec<f64> = (0..(k + 1) * (k + 2) / 2).map(|_| r.random_range(-1.0..1.0)).collect();
        let q = |p: Point2| {
            let (x, y) = ((p.x - center.x) / scale, (p.y - center.y) / scale);
            let mut s = 0.0;
            let mut j = 0;
            for d in 0..=k as i32 {
                for a in 0..=d {
                    s += coef[j] * x.powi(a) * y.powi(d - a);
                    j += 1;
                }
            }
            s
        };
        let (m, _) = build_element(&poly, &ElementOptions::new(k, basis, StabKind::Dd)).unwrap();
        let dofs = interpolate(&poly, &m.layout, &q, 2 * k).unwrap();
        let pn = &m.pi_nabla_star * &dofs;
        let p0 = &m.pi0_star * &dofs;
        let rule = polygon_quadrature(&poly, 6).unwrap();
        let qmax = rule.nodes.iter().map(|&x| q(x).abs()).fold(1e-300, f64::max);
        for &x in &rule.nodes {
            let b = m.basis.eval(x);
            let vn: f64 = b.iter().zip(pn.iter()).map(|(a, c)| a * c).sum();
            let v0: f64 = b.iter().zip(p0.iter()).map(|(a, c)| a * c).sum();
            worst = worst.max((vn - q(x)).abs() / qmax).max((v0 - q(x)).abs() / qmax);
        }
    }
    worst
}
