//! Model problems `-Δu = f` with known solutions.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::geometry::Point2;

pub type ScalarFn = Arc<dyn Fn(Point2) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Point2) -> [f64; 2] + Send + Sync>;

/// Exact solution, its gradient and the matching forcing. Dirichlet data is
/// the trace of `u`.
#[derive(Clone)]
pub struct ModelProblem {
    pub name: String,
    pub u: ScalarFn,
    pub grad: VectorFn,
    pub f: ScalarFn,
}

impl std::fmt::Debug for ModelProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelProblem").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Bivariate polynomial as a list of `c x^a y^b` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    pub terms: Vec<(u32, u32, f64)>,
}

impl Poly2 {
    pub fn eval(&self, p: Point2) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c * p.x.powi(a as i32) * p.y.powi(b as i32)).sum()
    }

    pub fn grad(&self, p: Point2) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(a, b, c) in &self.terms {
            if a > 0 {
                g[0] += c * a as f64 * p.x.powi(a as i32 - 1) * p.y.powi(b as i32);
            }
            if b > 0 {
                g[1] += c * b as f64 * p.x.powi(a as i32) * p.y.powi(b as i32 - 1);
            }
        }
        g
    }

    pub fn laplacian(&self) -> Poly2 {
        let mut terms = Vec::new();
        for &(a, b, c) in &self.terms {
            if a >= 2 {
                terms.push((a - 2, b, c * (a * (a - 1)) as f64));
            }
            if b >= 2 {
                terms.push((a, b - 2, c * (b * (b - 1)) as f64));
            }
        }
        Poly2 { terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|&(a, b, _)| a + b).max().unwrap_or(0)
    }
}

impl ModelProblem {
    /// `u = sin(πx) sin(πy) / (2π²)`, `f = sin(πx) sin(πy)`, zero on the
    /// boundary of the unit square.
    pub fn sin_sin() -> Self {
        let s = 1.0 / (2.0 * PI * PI);
        Self {
            name: "sin_sin".into(),
            u: Arc::new(move |p| s * (PI * p.x).sin() * (PI * p.y).sin()),
            grad: Arc::new(move |p| {
                [
                    s * PI * (PI * p.x).cos() * (PI * p.y).sin(),
                    s * PI * (PI * p.x).sin() * (PI * p.y).cos(),
                ]
            }),
            f: Arc::new(|p| (PI * p.x).sin() * (PI * p.y).sin()),
        }
    }

    pub fn polynomial(q: Poly2) -> Self {
        let lap = q.laplacian();
        let (qu, qg) = (q.clone(), q.clone());
        Self {
            name: format!("poly{}", q.degree()),
            u: Arc::new(move |p| qu.eval(p)),
            grad: Arc::new(move |p| qg.grad(p)),
            f: Arc::new(move |p| -lap.eval(p)),
        }
    }

    /// A full polynomial of degree `k` with nonzero coefficients in every
    /// degree.
    pub fn patch(k: usize) -> Self {
        let mut terms = vec![(0, 0, 0.5), (1, 0, 1.0), (0, 1, -2.0)];
        if k >= 2 {
            terms.extend([(2, 0, 1.5), (1, 1, -1.0), (0, 2, 0.75)]);
        }
        if k >= 3 {
            terms.extend([(3, 0, 1.0), (2, 1, 0.5), (1, 2, -2.0), (0, 3, 1.0 / 3.0)]);
        }
        Self::polynomial(Poly2 { terms })
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(Poly2 { terms: vec![(0, 0, c)] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_fd(pb: &ModelProblem) {
        let h = 1e-3;
        for &(x, y) in &[(0.3, 0.4), (0.71, 0.12), (0.5, 0.5)] {
            let p = Point2::new(x, y);
            let u = |dx: f64, dy: f64| (pb.u)(Point2::new(x + dx, y + dy));
            let lap = (u(h, 0.0) + u(-h, 0.0) + u(0.0, h) + u(0.0, -h) - 4.0 * u(0.0, 0.0)) / (h * h);
            assert!((-lap - (pb.f)(p)).abs() < 1e-6 * (1.0 + (pb.f)(p).abs()), "{}", pb.name);
            let e = 1e-6;
            let g = (pb.grad)(p);
            assert!((g[0] - (u(e, 0.0) - u(-e, 0.0)) / (2.0 * e)).abs() < 1e-7);
            assert!((g[1] - (u(0.0, e) - u(0.0, -e)) / (2.0 * e)).abs() < 1e-7);
        }
    }

    #[test]
    fn forcing_matches_finite_differences() {
        check_fd(&ModelProblem::sin_sin());
        for k in 1..=3 {
            check_fd(&ModelProblem::patch(k));
        }
    }

    #[test]
    fn sin_sin_vanishes_on_boundary() {
        let pb = ModelProblem::sin_sin();
        for t in [0.0, 0.25, 0.9] {
            for p in [Point2::new(t, 0.0), Point2::new(0.0, t), Point2::new(1.0, t), Point2::new(t, 1.0)] {
                assert!((pb.u)(p).abs() < 1e-17);
            }
        }
    }
}
