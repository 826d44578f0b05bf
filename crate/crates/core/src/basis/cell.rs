//! Polynomial bases on a polygon: scaled monomials and their
//! orthonormalized counterpart.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::quadrature::polygon_quadrature;
use crate::error::BasisError;
use crate::geometry::{Point2, Polygon};

/// Which polynomial basis spans `P_k` on each element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Scaled monomials `((x - x_P) / h_P)^a ((y - y_P) / h_P)^b`.
    Monomial,
    /// L2-orthonormal basis obtained from the scaled monomials.
    #[default]
    Ortho,
}

/// Dimension of `P_k` in two variables; zero for negative `k`.
pub const fn poly_dim(k: i64) -> usize {
    if k < 0 {
        0
    } else {
        ((k + 1) * (k + 2) / 2) as usize
    }
}

/// Exponents `(a, b)` of the monomials of degree `<= k`, graded by degree
/// and, inside a degree, by decreasing power of `x`.
pub fn exponents(k: usize) -> Vec<(u32, u32)> {
    let mut e = Vec::with_capacity(poly_dim(k as i64));
    for d in 0..=k as u32 {
        for b in 0..=d {
            e.push((d - b, b));
        }
    }
    e
}

/// Position of `x^a y^b` in the order of [`exponents`].
pub const fn monomial_index(a: u32, b: u32) -> usize {
    let d = (a + b) as usize;
    d * (d + 1) / 2 + b as usize
}

/// Basis of `P_k(P)`: `p_i = sum_j L[i, j] m_j` with `m_j` the scaled
/// monomials and `L` lower triangular (the identity for monomials).
#[derive(Debug, Clone, PartialEq)]
pub struct CellBasis {
    k: usize,
    kind: BasisKind,
    center: Point2,
    h: f64,
    exps: Vec<(u32, u32)>,
    l: DMatrix<f64>,
}

impl CellBasis {
    pub fn scaled_monomials(k: usize, center: Point2, h: f64) -> Self {
        let n = poly_dim(k as i64);
        Self {
            k,
            kind: BasisKind::Monomial,
            center,
            h,
            exps: exponents(k),
            l: DMatrix::identity(n, n),
        }
    }

    /// Basis of the requested kind centred at the centroid of `p` and
    /// scaled by its diameter.
    pub fn new(p: &Polygon, k: usize, kind: BasisKind) -> Result<Self, BasisError> {
        match kind {
            BasisKind::Monomial => Ok(Self::scaled_monomials(k, p.centroid(), p.diameter())),
            BasisKind::Ortho => Self::orthonormalize(p, k),
        }
    }

    /// Gram-Schmidt on the scaled monomials, carried out as two Cholesky
    /// passes on the Gram matrix.
    pub fn orthonormalize(p: &Polygon, k: usize) -> Result<Self, BasisError> {
        let mono = Self::scaled_monomials(k, p.centroid(), p.diameter());
        let rule = polygon_quadrature(p, 2 * k)?;
        let n = mono.dim();
        let mut gram = DMatrix::<f64>::zeros(n, n);
        let mut m = vec![0.0; n];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            mono.monomials_into(x, &mut m);
            for i in 0..n {
                for j in 0..=i {
                    gram[(i, j)] += w * m[i] * m[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                gram[(j, i)] = gram[(i, j)];
            }
        }
        let mut l = DMatrix::<f64>::identity(n, n);
        for _ in 0..2 {
            let g = &l * &gram * l.transpose();
            let g = 0.5 * (&g + g.transpose());
            let chol = g.cholesky().ok_or(BasisError::SingularGram)?;
            let r = chol.l();
            let rinv = r
                .solve_lower_triangular(&DMatrix::identity(n, n))
                .ok_or(BasisError::SingularGram)?;
            l = rinv * l;
        }
        let check = &l * &gram * l.transpose() - DMatrix::<f64>::identity(n, n);
        if !(check.amax() <= 1e-8) {
            return Err(BasisError::SingularGram);
        }
        // exact zeros above the diagonal
        for i in 0..n {
            for j in i + 1..n {
                l[(i, j)] = 0.0;
            }
        }
        Ok(Self { kind: BasisKind::Ortho, l, ..mono })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[(u32, u32)] {
        &self.exps
    }

    /// Change of basis from scaled monomials: row `i` holds the monomial
    /// coefficients of `p_i`.
    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.l
    }

    fn scaled(&self, x: Point2) -> (f64, f64) {
        ((x.x - self.center.x) / self.h, (x.y - self.center.y) / self.h)
    }

    pub fn monomials_into(&self, x: Point2, out: &mut [f64]) {
        let (sx, sy) = self.scaled(x);
        let mut idx = 0;
        for d in 0..=self.k {
            if d == 0 {
                out[0] = 1.0;
                idx = 1;
                continue;
            }
            // degree d from degree d-1: multiply by x, then the last one by y
            let prev = idx - d;
            for j in 0..d {
                out[idx + j] = out[prev + j] * sx;
            }
            out[idx + d] = out[prev + d - 1] * sy;
            idx += d + 1;
        }
    }

    pub fn monomials(&self, x: Point2) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        self.monomials_into(x, &mut v);
        v
    }

    /// Gradients of the scaled monomials.
    pub fn monomial_grads(&self, x: Point2) -> Vec<[f64; 2]> {
        let (sx, sy) = self.scaled(x);
        let pw = |v: f64, e: u32| if e == 0 { 1.0 } else { v.powi(e as i32) };
        self.exps
            .iter()
            .map(|&(a, b)| {
                let gx = if a == 0 { 0.0 } else { a as f64 * pw(sx, a - 1) * pw(sy, b) / self.h };
                let gy = if b == 0 { 0.0 } else { b as f64 * pw(sx, a) * pw(sy, b - 1) / self.h };
                [gx, gy]
            })
            .collect()
    }

    fn apply(&self, m: &[f64]) -> Vec<f64> {
        if self.kind == BasisKind::Monomial {
            return m.to_vec();
        }
        let n = self.dim();
        (0..n).map(|i| (0..=i).map(|j| self.l[(i, j)] * m[j]).sum()).collect()
    }

    pub fn eval(&self, x: Point2) -> Vec<f64> {
        self.apply(&self.monomials(x))
    }

    pub fn grad(&self, x: Point2) -> Vec<[f64; 2]> {
        let g = self.monomial_grads(x);
        let gx: Vec<f64> = g.iter().map(|v| v[0]).collect();
        let gy: Vec<f64> = g.iter().map(|v| v[1]).collect();
        self.apply(&gx).into_iter().zip(self.apply(&gy)).map(|(a, b)| [a, b]).collect()
    }

    /// Coefficients of `Δp_i` in the scaled monomials of degree `<= k - 2`
    /// (one row per basis function).
    pub fn laplacian_coeffs(&self) -> DMatrix<f64> {
        let n = self.dim();
        let nm = poly_dim(self.k as i64 - 2);
        let mut lap = DMatrix::<f64>::zeros(n, nm);
        let h2 = self.h * self.h;
        for i in 0..n {
            for (j, &(a, b)) in self.exps.iter().enumerate() {
                let c = self.l[(i, j)];
                if c == 0.0 {
                    continue;
                }
                if a >= 2 {
                    lap[(i, monomial_index(a - 2, b))] += c * (a * (a - 1)) as f64 / h2;
                }
                if b >= 2 {
                    lap[(i, monomial_index(a, b - 2))] += c * (b * (b - 1)) as f64 / h2;
                }
            }
        }
        lap
    }
}
