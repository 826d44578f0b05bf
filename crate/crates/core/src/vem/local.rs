//! Element-level virtual element machinery: degrees of freedom, projector
//! matrices, stabilization, local stiffness and load.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::basis::{
    exponents, gauss_lobatto, lagrange_derivatives, poly_dim, polygon_quadrature, BasisKind, CellBasis,
    QuadratureRule,
};
use crate::error::{BasisError, VemError};
use crate::geometry::{Point2, Polygon};

/// Stabilization term of the local bilinear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabKind {
    /// Identity on the degrees of freedom.
    Dd,
    /// Diagonal of the consistency matrix.
    #[default]
    Drecipe,
    /// Scaled tangential derivative on the boundary, identity on moments.
    Trace,
}

impl FromStr for StabKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dd" => Ok(Self::Dd),
            "drecipe" => Ok(Self::Drecipe),
            "trace" => Ok(Self::Trace),
            _ => Err(format!("unknown stabilization {s:?} (expected dd, drecipe or trace)")),
        }
    }
}

impl fmt::Display for StabKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dd => "dd",
            Self::Drecipe => "drecipe",
            Self::Trace => "trace",
        })
    }
}

impl FromStr for BasisKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "monomial" => Ok(Self::Monomial),
            "ortho" => Ok(Self::Ortho),
            _ => Err(format!("unknown basis {s:?} (expected monomial or ortho)")),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Monomial => "monomial",
            Self::Ortho => "ortho",
        })
    }
}

/// What a local degree of freedom measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DofKind {
    Vertex { vertex: usize },
    /// Interior Gauss-Lobatto node `node` (1..k) of edge `edge`, counted
    /// along the loop direction.
    Edge { edge: usize, node: usize },
    /// Scaled moment against the monomial with this index.
    Moment { index: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DofLayout {
    pub k: usize,
    pub n_vertices: usize,
    pub descriptors: Vec<DofKind>,
}

impl DofLayout {
    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn n_boundary(&self) -> usize {
        self.n_vertices * self.k
    }

    pub fn n_moments(&self) -> usize {
        poly_dim(self.k as i64 - 2)
    }

    /// Local index of Gauss-Lobatto node `q` (0..=k) on edge `e`.
    pub fn edge_node(&self, e: usize, q: usize) -> usize {
        let n = self.n_vertices;
        if q == 0 {
            e
        } else if q == self.k {
            (e + 1) % n
        } else {
            n + e * (self.k - 1) + q - 1
        }
    }

    pub fn moment(&self, index: usize) -> usize {
        self.n_boundary() + index
    }
}

pub fn check_order(k: usize) -> Result<(), VemError> {
    if (1..=3).contains(&k) {
        Ok(())
    } else {
        Err(VemError::UnsupportedOrder(k))
    }
}

/// Vertices in loop order, then interior edge nodes edge by edge, then
/// moments in graded order.
pub fn dof_layout(p: &Polygon, k: usize) -> Result<DofLayout, VemError> {
    check_order(k)?;
    let n = p.len();
    let mut d: Vec<DofKind> = (0..n).map(|vertex| DofKind::Vertex { vertex }).collect();
    for edge in 0..n {
        d.extend((1..k).map(|node| DofKind::Edge { edge, node }));
    }
    d.extend((0..poly_dim(k as i64 - 2)).map(|index| DofKind::Moment { index }));
    Ok(DofLayout { k, n_vertices: n, descriptors: d })
}

/// Coordinates of the point-value degrees of freedom (`None` for moments).
pub fn dof_points(p: &Polygon, layout: &DofLayout) -> Vec<Option<Point2>> {
    let gl = gauss_lobatto(layout.k + 1).expect("k >= 1");
    layout
        .descriptors
        .iter()
        .map(|d| match *d {
            DofKind::Vertex { vertex } => Some(p.vertex(vertex)),
            DofKind::Edge { edge, node } => {
                let (a, b) = p.edge(edge);
                Some(a.lerp(b, 0.5 * (gl.nodes[node] + 1.0)))
            }
            DofKind::Moment { .. } => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementOptions {
    pub k: usize,
    pub basis: BasisKind,
    pub stab: StabKind,
}

impl ElementOptions {
    pub fn new(k: usize, basis: BasisKind, stab: StabKind) -> Self {
        Self { k, basis, stab }
    }
}

/// All local matrices of one element.
#[derive(Debug, Clone)]
pub struct ElementMatrices {
    pub layout: DofLayout,
    pub basis: CellBasis,
    pub area: f64,
    /// Degree-of-freedom values of the cell basis (`N_dof x N_k`).
    pub d: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub pi_nabla_star: DMatrix<f64>,
    pub pi_nabla_dof: DMatrix<f64>,
    pub pi0_star: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub kp: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementDiagnostics {
    pub cond_g: f64,
    pub cond_h: f64,
    pub pinabla_identity_err: f64,
    pub pi0_identity_err: f64,
    /// The orthonormal basis could not be built and scaled monomials were used.
    pub basis_fallback: bool,
}

fn spectral_norm(m: &DMatrix<f64>) -> Option<f64> {
    nalgebra::linalg::SVD::try_new(m.clone(), false, false, f64::EPSILON, 10_000).map(|s| s.singular_values.max())
}

/// 2-norm condition number `|A| |A^-1|`. The inverse comes from LU, which
/// stays meaningful for the strongly graded matrices of anisotropic
/// elements where the smallest singular value of an SVD is already noise.
/// Returns infinity for singular or non-finite input.
pub fn cond2(m: &DMatrix<f64>) -> f64 {
    if m.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    let Some(inv) = m.clone().lu().try_inverse() else {
        return f64::INFINITY;
    };
    if inv.iter().any(|v| !v.is_finite()) {
        return f64::INFINITY;
    }
    match (spectral_norm(m), spectral_norm(&inv)) {
        (Some(a), Some(b)) if (a * b).is_finite() => a * b,
        _ => f64::INFINITY,
    }
}

fn max_abs_identity_err(m: &DMatrix<f64>) -> f64 {
    let mut e = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let t = if i == j { 1.0 } else { 0.0 };
            let d = (m[(i, j)] - t).abs();
            e = if d.is_nan() { f64::INFINITY } else { e.max(d) };
        }
    }
    e
}

pub fn element_diagnostics(m: &ElementMatrices) -> ElementDiagnostics {
    ElementDiagnostics {
        cond_g: cond2(&m.g),
        cond_h: cond2(&m.h),
        pinabla_identity_err: max_abs_identity_err(&(&m.pi_nabla_star * &m.d)),
        pi0_identity_err: max_abs_identity_err(&(&m.pi0_star * &m.d)),
        basis_fallback: false,
    }
}

fn solve_checked(a: &DMatrix<f64>, rhs: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let x = a.clone().lu().solve(rhs)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Builds every local matrix of `p` and the conditioning diagnostics.
///
/// Element ids in returned errors are 0; callers relabel them.
pub fn build_element(p: &Polygon, opts: &ElementOptions) -> Result<(ElementMatrices, ElementDiagnostics), VemError> {
    let k = opts.k;
    let layout = dof_layout(p, k)?;
    let (basis, fallback) = match CellBasis::new(p, k, opts.basis) {
        Ok(b) => (b, false),
        Err(BasisError::SingularGram) => (CellBasis::new(p, k, BasisKind::Monomial).map_err(basis_err)?, true),
        Err(e) => return Err(basis_err(e)),
    };
    let rule = polygon_quadrature(p, 2 * k).map_err(basis_err)?;
    let mut m = assemble_matrices(p, layout, basis, &rule, opts.stab)?;
    let mut diag = element_diagnostics(&m);
    diag.basis_fallback = fallback;
    // keep the stiffness exactly symmetric
    let kt = m.kp.transpose();
    m.kp = 0.5 * (&m.kp + kt);
    Ok((m, diag))
}

pub(crate) fn basis_err(e: BasisError) -> VemError {
    match e {
        BasisError::Geometry(source) => VemError::Geometry { element: 0, source },
        BasisError::SingularGram => VemError::SingularGram { element: 0 },
        BasisError::TooFewPoints(_) => unreachable!("Gauss-Lobatto size is k + 1 >= 2"),
    }
}

fn assemble_matrices(
    p: &Polygon,
    layout: DofLayout,
    basis: CellBasis,
    rule: &QuadratureRule,
    stab: StabKind,
) -> Result<ElementMatrices, VemError> {
    let k = layout.k;
    let n = p.len();
    let nk = basis.dim();
    let ndof = layout.len();
    let nmom = layout.n_moments();
    let area = p.area();
    let gl = gauss_lobatto(k + 1).expect("k >= 1");
    let points = dof_points(p, &layout);
    let mono = CellBasis::scaled_monomials(k, basis.center(), basis.h());

    // values of the cell basis and scaled monomials at the quadrature nodes
    let pv: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| basis.eval(x)).collect();
    let mv: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| mono.monomials(x)).collect();

    let mut d = DMatrix::<f64>::zeros(ndof, nk);
    for (i, pt) in points.iter().enumerate() {
        if let Some(x) = pt {
            let v = basis.eval(*x);
            for b in 0..nk {
                d[(i, b)] = v[b];
            }
        }
    }
    for a in 0..nmom {
        let row = layout.moment(a);
        for (q, &w) in rule.weights.iter().enumerate() {
            for b in 0..nk {
                d[(row, b)] += w * pv[q][b] * mv[q][a];
            }
        }
        for b in 0..nk {
            d[(row, b)] /= area;
        }
    }

    let mut bm = DMatrix::<f64>::zeros(nk, ndof);
    let perimeter = p.perimeter();
    for e in 0..n {
        let (va, vb) = p.edge(e);
        let t = vb - va;
        let len = t.norm();
        let normal = Point2::new(t.y / len, -t.x / len);
        for q in 0..=k {
            let x = va.lerp(vb, 0.5 * (gl.nodes[q] + 1.0));
            let w = gl.weights[q] * 0.5 * len;
            let j = layout.edge_node(e, q);
            let g = basis.grad(x);
            for b in 1..nk {
                bm[(b, j)] += w * (g[b][0] * normal.x + g[b][1] * normal.y);
            }
            bm[(0, j)] += w / perimeter;
        }
    }
    if nmom > 0 {
        let lap = basis.laplacian_coeffs();
        for b in 1..nk {
            for a in 0..nmom {
                bm[(b, layout.moment(a))] -= area * lap[(b, a)];
            }
        }
    }

    let g = &bm * &d;
    let pi_nabla_star = solve_checked(&g, &bm).ok_or(VemError::SingularG { element: 0 })?;
    let pi_nabla_dof = &d * &pi_nabla_star;

    let mut h = DMatrix::<f64>::zeros(nk, nk);
    for (q, &w) in rule.weights.iter().enumerate() {
        for i in 0..nk {
            for j in 0..=i {
                h[(i, j)] += w * pv[q][i] * pv[q][j];
            }
        }
    }
    for i in 0..nk {
        for j in 0..i {
            h[(j, i)] = h[(i, j)];
        }
    }

    // moment matrix in the monomial basis, then mapped to the cell basis
    let mut cm = DMatrix::<f64>::zeros(nk, ndof);
    for a in 0..nmom {
        cm[(a, layout.moment(a))] = area;
    }
    let mut mp = DMatrix::<f64>::zeros(nk, nk);
    for (q, &w) in rule.weights.iter().enumerate() {
        for gi in nmom..nk {
            for b in 0..nk {
                mp[(gi, b)] += w * mv[q][gi] * pv[q][b];
            }
        }
    }
    let enh = &mp * &pi_nabla_star;
    for gi in nmom..nk {
        for j in 0..ndof {
            cm[(gi, j)] = enh[(gi, j)];
        }
    }
    let c = basis.coeffs() * cm;
    let pi0_star = match h.clone().cholesky() {
        Some(ch) => Some(ch.solve(&c)).filter(|x| x.iter().all(|v| v.is_finite())),
        None => None,
    }
    .or_else(|| solve_checked(&h, &c))
    .ok_or(VemError::SingularH { element: 0 })?;

    let mut gt = g.clone();
    gt.row_mut(0).fill(0.0);
    let consistency = pi_nabla_star.transpose() * &gt * &pi_nabla_star;
    let s = stabilization(p, &layout, &consistency, basis.h(), &gl.nodes, &gl.weights, stab);
    let proj = DMatrix::<f64>::identity(ndof, ndof) - &pi_nabla_dof;
    let kp = consistency + proj.transpose() * &s * proj;

    Ok(ElementMatrices {
        layout,
        basis,
        area,
        d,
        b: bm,
        g,
        h,
        c,
        pi_nabla_star,
        pi_nabla_dof,
        pi0_star,
        s,
        kp,
    })
}

fn stabilization(
    p: &Polygon,
    layout: &DofLayout,
    consistency: &DMatrix<f64>,
    h_p: f64,
    nodes: &[f64],
    weights: &[f64],
    stab: StabKind,
) -> DMatrix<f64> {
    let ndof = layout.len();
    match stab {
        StabKind::Dd => DMatrix::identity(ndof, ndof),
        StabKind::Drecipe => DMatrix::from_diagonal(&consistency.diagonal()),
        StabKind::Trace => {
            let k = layout.k;
            let mut s = DMatrix::<f64>::zeros(ndof, ndof);
            let dl = lagrange_derivatives(nodes);
            for e in 0..p.len() {
                let (a, b) = p.edge(e);
                let scale = h_p * 2.0 / a.dist(b);
                for i in 0..=k {
                    for j in 0..=k {
                        let v: f64 = (0..=k).map(|q| weights[q] * dl[q][i] * dl[q][j]).sum();
                        s[(layout.edge_node(e, i), layout.edge_node(e, j))] += scale * v;
                    }
                }
            }
            for a in 0..layout.n_moments() {
                let m = layout.moment(a);
                s[(m, m)] = 1.0;
            }
            s
        }
    }
}

/// Local load vector `f_i = ∫_P f Π⁰φ_i` computed with a rule of the given
/// degree.
pub fn local_load(
    p: &Polygon,
    m: &ElementMatrices,
    f: &(dyn Fn(Point2) -> f64 + Sync),
    degree: usize,
) -> Result<DVector<f64>, VemError> {
    let rule = polygon_quadrature(p, degree).map_err(basis_err)?;
    let nk = m.basis.dim();
    let mut fb = DVector::<f64>::zeros(nk);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = f(x) * w;
        let v = m.basis.eval(x);
        for b in 0..nk {
            fb[b] += fx * v[b];
        }
    }
    Ok(m.pi0_star.transpose() * fb)
}

/// Degrees of freedom of a smooth function: point values and scaled moments.
pub fn interpolate(
    p: &Polygon,
    layout: &DofLayout,
    u: &(dyn Fn(Point2) -> f64 + Sync),
    degree: usize,
) -> Result<DVector<f64>, VemError> {
    let points = dof_points(p, layout);
    let mut v = DVector::<f64>::zeros(layout.len());
    for (i, pt) in points.iter().enumerate() {
        if let Some(x) = pt {
            v[i] = u(*x);
        }
    }
    let nmom = layout.n_moments();
    if nmom > 0 {
        let mono = CellBasis::scaled_monomials(layout.k - 2, p.centroid(), p.diameter());
        let rule = polygon_quadrature(p, degree).map_err(basis_err)?;
        let area = p.area();
        let mut acc = vec![0.0; nmom];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let ux = u(x) * w;
            let m = mono.monomials(x);
            for a in 0..nmom {
                acc[a] += ux * m[a];
            }
        }
        for a in 0..nmom {
            v[layout.moment(a)] = acc[a] / area;
        }
    }
    Ok(v)
}

/// Exponents of the moment degrees of freedom for order `k`.
pub fn moment_exponents(k: usize) -> Vec<(u32, u32)> {
    if k < 2 {
        Vec::new()
    } else {
        exponents(k - 2)
    }
}
