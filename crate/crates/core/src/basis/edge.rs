//! Polynomials along an edge.

use crate::geometry::Point2;

use super::quadrature::legendre;

/// Legendre polynomials `L_0..L_k` mapped to the segment `a b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBasis {
    pub k: usize,
    pub a: Point2,
    pub b: Point2,
}

impl EdgeBasis {
    pub fn new(k: usize, a: Point2, b: Point2) -> Self {
        Self { k, a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Point at reference coordinate `s` in [-1, 1].
    pub fn point(&self, s: f64) -> Point2 {
        self.a.lerp(self.b, 0.5 * (s + 1.0))
    }

    /// Values of all members at reference coordinate `s`.
    pub fn eval(&self, s: f64) -> Vec<f64> {
        (0..=self.k).map(|i| legendre(i, s).0).collect()
    }
}

/// Matrix `d[q][j] = l_j'(s_q)` of derivatives (in the reference
/// coordinate) of the Lagrange polynomials through `nodes`.
pub fn lagrange_derivatives(nodes: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    // barycentric weights
    let w: Vec<f64> = (0..n)
        .map(|j| {
            1.0 / (0..n)
                .filter(|&m| m != j)
                .map(|m| nodes[j] - nodes[m])
                .product::<f64>()
        })
        .collect();
    let mut d = vec![vec![0.0; n]; n];
    for q in 0..n {
        for j in 0..n {
            if j != q {
                d[q][j] = (w[j] / w[q]) / (nodes[q] - nodes[j]);
            }
        }
        d[q][q] = -(0..n).filter(|&j| j != q).map(|j| d[q][j]).sum::<f64>();
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::{gauss_legendre, gauss_lobatto};

    #[test]
    fn legendre_members_are_orthogonal_on_edges() {
        let e = EdgeBasis::new(5, Point2::new(0.2, 0.1), Point2::new(0.9, 0.6));
        let g = gauss_legendre(8);
        let jac = 0.5 * e.length();
        for i in 0..=5 {
            for j in 0..=5 {
                let v = g.integrate(|s| e.eval(s)[i] * e.eval(s)[j]) * jac;
                if i == j {
                    assert!((v - 2.0 / (2 * i + 1) as f64 * jac).abs() < 1e-13);
                } else {
                    assert!(v.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lagrange_derivatives_of_quadratic() {
        let r = gauss_lobatto(3).unwrap();
        let d = lagrange_derivatives(&r.nodes);
        // interpolate s^2: values 1, 0, 1; derivative 2 s
        for (q, &s) in r.nodes.iter().enumerate() {
            let v = d[q][0] + d[q][2];
            assert!((v - 2.0 * s).abs() < 1e-14);
        }
    }
}
