//! Gauss rules on intervals, triangles and polygons.

use std::sync::OnceLock;

use crate::error::BasisError;
use crate::geometry::{Point2, Polygon};

/// One-dimensional rule on the reference interval [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Planar rule: nodes in physical coordinates with physical weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuadratureRule {
    pub nodes: Vec<Point2>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Point2) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for m in 2..=n {
        let m = m as f64;
        let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = if (1.0 - x * x).abs() < 1e-300 {
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (p0 - x * p1) / (1.0 - x * x)
    };
    (p1, d)
}

fn compute_gauss_legendre(n: usize) -> QuadratureRule1D {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    QuadratureRule1D { nodes, weights }
}

const CACHED: usize = 40;

/// `n`-point Gauss-Legendre rule, exact to degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> QuadratureRule1D {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
    static TABLE: OnceLock<Vec<QuadratureRule1D>> = OnceLock::new();
    if n <= CACHED {
        let t = TABLE.get_or_init(|| (1..=CACHED).map(compute_gauss_legendre).collect());
        return t[n - 1].clone();
    }
    compute_gauss_legendre(n)
}

/// `n`-point Gauss-Lobatto rule, endpoints included, exact to degree `2n - 3`.
pub fn gauss_lobatto(n: usize) -> Result<QuadratureRule1D, BasisError> {
    if n < 2 {
        return Err(BasisError::TooFewPoints(n));
    }
    let m = n - 1;
    let mf = m as f64;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[m] = 1.0;
    // interior nodes are the roots of P'_{n-1}
    for i in 1..m {
        let mut x = -(std::f64::consts::PI * i as f64 / mf).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            let ddp = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
    }
    for i in 1..n.div_ceil(2) {
        // enforce exact symmetry
        let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[n - 1 - i] = s;
    }
    if n % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre(m, x);
            2.0 / (mf * (mf + 1.0) * p * p)
        })
        .collect();
    Ok(QuadratureRule1D { nodes, weights })
}

/// Rule on the triangle `a b c` exact for polynomials of total degree
/// `degree`, from a collapsed tensor Gauss rule.
pub fn triangle_rule(a: Point2, b: Point2, c: Point2, degree: usize, out: &mut QuadratureRule) {
    let n = (degree + 2).div_ceil(2);
    let g = gauss_legendre(n);
    let area2 = (b - a).cross(c - a);
    for i in 0..n {
        let u = 0.5 * (g.nodes[i] + 1.0);
        let wu = 0.5 * g.weights[i];
        for j in 0..n {
            let v = 0.5 * (g.nodes[j] + 1.0);
            let wv = 0.5 * g.weights[j];
            // (u, v) in the unit square -> (1-u) a + u (1-v) b + u v c
            let p = a * (1.0 - u) + b * (u * (1.0 - v)) + c * (u * v);
            out.nodes.push(p);
            out.weights.push(wu * wv * u * area2);
        }
    }
}

/// Rule on a polygon exact for bivariate polynomials of total degree
/// `degree`, built on an ear-clipping triangulation.
pub fn polygon_quadrature(p: &Polygon, degree: usize) -> Result<QuadratureRule, BasisError> {
    let tris = p.ear_clip()?;
    let mut rule = QuadratureRule::default();
    let per = (degree + 2).div_ceil(2).pow(2);
    rule.nodes.reserve(per * tris.len());
    rule.weights.reserve(per * tris.len());
    for t in tris {
        triangle_rule(p.vertex(t[0]), p.vertex(t[1]), p.vertex(t[2]), degree, &mut rule);
    }
    Ok(rule)
}
