//! Global numbering, assembly, Dirichlet conditions, linear solve and the
//! error report.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::local::{
    basis_err, build_element, check_order, dof_points, interpolate, local_load, ElementDiagnostics, ElementOptions,
};
use super::problem::ModelProblem;
use super::sparse::{cholesky_solve, pcg, relative_residual, CsrMatrix};
use crate::basis::{gauss_lobatto, poly_dim, polygon_quadrature, CellBasis};
use crate::error::VemError;
use crate::geometry::Point2;
use crate::mesh::{segment_key, PolygonalMesh, Segment};

/// Global numbering: mesh vertices, then interior edge nodes per sorted
/// vertex pair, then cell moments element by element.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub k: usize,
    pub n_dofs: usize,
    /// Local-to-global map of every element, in local layout order.
    pub element_dofs: Vec<Vec<usize>>,
    /// Coordinates of point-value dofs (`None` for moments).
    pub coords: Vec<Option<Point2>>,
    pub boundary: Vec<bool>,
}

impl DofMap {
    pub fn new(m: &PolygonalMesh, k: usize) -> Result<Self, VemError> {
        check_order(k)?;
        let owners = m.segment_owners();
        let edge_id: BTreeMap<Segment, usize> = owners.keys().enumerate().map(|(i, s)| (*s, i)).collect();
        let nv = m.n_vertices();
        let ne = edge_id.len();
        let per_edge = k - 1;
        let nmom = poly_dim(k as i64 - 2);
        let edge_base = nv;
        let mom_base = nv + ne * per_edge;
        let n_dofs = mom_base + m.n_elements() * nmom;

        let gl = gauss_lobatto(k + 1).expect("k >= 1");
        let mut coords: Vec<Option<Point2>> = vec![None; n_dofs];
        for (i, p) in m.vertices.iter().enumerate() {
            coords[i] = Some(*p);
        }
        let mut boundary = vec![false; n_dofs];
        for (s, own) in &owners {
            let id = edge_id[s];
            let (a, b) = (m.vertices[s.0], m.vertices[s.1]);
            for r in 0..per_edge {
                coords[edge_base + id * per_edge + r] = Some(a.lerp(b, 0.5 * (gl.nodes[r + 1] + 1.0)));
            }
            if own.len() == 1 {
                boundary[s.0] = true;
                boundary[s.1] = true;
                for r in 0..per_edge {
                    boundary[edge_base + id * per_edge + r] = true;
                }
            }
        }

        let element_dofs = m
            .elements
            .iter()
            .enumerate()
            .map(|(e, el)| {
                let n = el.len();
                let mut d: Vec<usize> = el.clone();
                for i in 0..n {
                    let (a, b) = (el[i], el[(i + 1) % n]);
                    let id = edge_id[&segment_key(a, b)];
                    for q in 1..k {
                        // nodes are numbered from the smaller vertex index
                        let r = if a < b { q - 1 } else { k - 1 - q };
                        d.push(edge_base + id * per_edge + r);
                    }
                }
                d.extend((0..nmom).map(|a| mom_base + e * nmom + a));
                d
            })
            .collect();
        Ok(Self { k, n_dofs, element_dofs, coords, boundary })
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }
}

/// Per-element data kept after assembly for post-processing.
#[derive(Debug, Clone)]
pub struct ElementData {
    pub kp: DMatrix<f64>,
    pub pi0_star: DMatrix<f64>,
    pub basis: CellBasis,
    pub diagnostics: ElementDiagnostics,
}

/// Assembled global system before boundary conditions.
#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dofmap: DofMap,
    pub elements: Vec<ElementData>,
}

impl GlobalSystem {
    pub fn diagnostics(&self) -> impl Iterator<Item = &ElementDiagnostics> {
        self.elements.iter().map(|e| &e.diagnostics)
    }
}

/// Quadrature degree for load and error integrals.
pub fn rhs_degree(k: usize) -> usize {
    2 * k + 3
}

/// Builds every element (in parallel) and scatters the local contributions
/// in element order.
pub fn assemble(
    m: &PolygonalMesh,
    opts: &ElementOptions,
    f: &(dyn Fn(Point2) -> f64 + Sync),
) -> Result<GlobalSystem, VemError> {
    let dofmap = DofMap::new(m, opts.k)?;
    let built: Vec<Result<(ElementData, DVector<f64>), VemError>> = (0..m.n_elements())
        .into_par_iter()
        .map(|e| {
            let p = m.element_polygon(e);
            let (mats, diagnostics) = build_element(&p, opts).map_err(|x| x.with_element(e))?;
            let fp = local_load(&p, &mats, f, rhs_degree(opts.k)).map_err(|x| x.with_element(e))?;
            Ok((
                ElementData { kp: mats.kp, pi0_star: mats.pi0_star, basis: mats.basis, diagnostics },
                fp,
            ))
        })
        .collect();
    let mut elements = Vec::with_capacity(built.len());
    let mut trips = Vec::new();
    let mut rhs = vec![0.0; dofmap.n_dofs];
    for (e, b) in built.into_iter().enumerate() {
        let (data, fp) = b?;
        let g = &dofmap.element_dofs[e];
        for (i, &gi) in g.iter().enumerate() {
            rhs[gi] += fp[i];
            for (j, &gj) in g.iter().enumerate() {
                trips.push((gi, gj, data.kp[(i, j)]));
            }
        }
        elements.push(data);
    }
    let matrix = CsrMatrix::from_triplets(dofmap.n_dofs, trips);
    Ok(GlobalSystem { matrix, rhs, dofmap, elements })
}

/// System restricted to the free dofs, with the known boundary values moved
/// to the right-hand side.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub free: Vec<usize>,
    pub boundary_values: Vec<f64>,
}

impl ReducedSystem {
    /// Full dof vector from a solution of the reduced system.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut full = self.boundary_values.clone();
        for (i, &g) in self.free.iter().enumerate() {
            full[g] = x[i];
        }
        full
    }
}

/// Fixes boundary dofs to `g` at their nodes and eliminates them
/// symmetrically.
pub fn apply_dirichlet(sys: &GlobalSystem, g: &(dyn Fn(Point2) -> f64 + Sync)) -> ReducedSystem {
    let dm = &sys.dofmap;
    let n = dm.n_dofs;
    let mut boundary_values = vec![0.0; n];
    let mut map = vec![usize::MAX; n];
    let mut free = Vec::new();
    for i in 0..n {
        if dm.boundary[i] {
            boundary_values[i] = g(dm.coords[i].expect("boundary dofs are point values"));
        } else {
            map[i] = free.len();
            free.push(i);
        }
    }
    let mut trips = Vec::with_capacity(sys.matrix.nnz());
    let mut rhs: Vec<f64> = free.iter().map(|&i| sys.rhs[i]).collect();
    for (ri, &i) in free.iter().enumerate() {
        for (j, v) in sys.matrix.row(i) {
            if dm.boundary[j] {
                rhs[ri] -= v * boundary_values[j];
            } else {
                trips.push((ri, map[j], v));
            }
        }
    }
    ReducedSystem { matrix: CsrMatrix::from_triplets(free.len(), trips), rhs, free, boundary_values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Cholesky,
    Cg,
}

/// Linear solve outcome; `converged = false` is a reported result, not an
/// error.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub converged: bool,
    pub method: SolverKind,
    pub message: Option<String>,
}

pub const RESIDUAL_TOL: f64 = 1e-10;

/// Direct sparse Cholesky first, Jacobi-preconditioned CG if the direct
/// solve fails or leaves a residual above `RESIDUAL_TOL`.
pub fn solve(a: &CsrMatrix, b: &[f64]) -> SolveOutcome {
    if a.n == 0 {
        return SolveOutcome { x: Vec::new(), residual: 0.0, converged: true, method: SolverKind::Cholesky, message: None };
    }
    let message;
    let mut best: Option<(Vec<f64>, f64)> = None;
    match cholesky_solve(a, b) {
        Ok(x) => {
            let r = relative_residual(a, &x, b);
            if r <= RESIDUAL_TOL {
                return SolveOutcome { x, residual: r, converged: true, method: SolverKind::Cholesky, message: None };
            }
            message = Some(format!("Cholesky residual {r:e}"));
            best = Some((x, r));
        }
        Err(e) => message = Some(e),
    }
    let cg = pcg(a, b, 1e-12, (10 * a.n).clamp(1000, 5_000));
    let r = relative_residual(a, &cg.x, b);
    let cg_ok = cg.converged && r <= RESIDUAL_TOL && cg.x.iter().all(|v| v.is_finite());
    if cg_ok {
        return SolveOutcome { x: cg.x, residual: r, converged: true, method: SolverKind::Cg, message };
    }
    let msg = format!(
        "{}; CG {} after {} iterations (residual {r:e})",
        message.unwrap_or_default(),
        if cg.converged { "stagnated" } else { "did not converge" },
        cg.iterations
    );
    match best {
        Some((x, rb)) if !(r < rb) => {
            SolveOutcome { x, residual: rb, converged: false, method: SolverKind::Cholesky, message: Some(msg) }
        }
        _ => SolveOutcome { x: cg.x, residual: r, converged: false, method: SolverKind::Cg, message: Some(msg) },
    }
}

/// Relative errors of a discrete solution plus the discrete energies used
/// by consistency checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub err_l2_rel: f64,
    pub err_h1_rel: f64,
    /// `a_h(u_h, u_h)`.
    pub energy_h: f64,
    /// `a_h(u_I, u_I)` for the interpolant of the exact solution.
    pub energy_interp: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// L2 error of `Π⁰_k u_h` and discrete H1 error `sqrt(a_h(u_I − u_h, u_I − u_h))`,
/// each relative to the corresponding norm of `u`.
pub fn error_norms(m: &PolygonalMesh, sys: &GlobalSystem, uh: &[f64], pb: &ModelProblem) -> Result<ErrorNorms, VemError> {
    let k = sys.dofmap.k;
    let deg = rhs_degree(k);
    let parts: Vec<Result<[f64; 6], VemError>> = (0..m.n_elements())
        .into_par_iter()
        .map(|e| {
            let p = m.element_polygon(e);
            let el = &sys.elements[e];
            let g = &sys.dofmap.element_dofs[e];
            let dh = DVector::from_iterator(g.len(), g.iter().map(|&i| uh[i]));
            let layout = super::local::dof_layout(&p, k).map_err(|x| x.with_element(e))?;
            let di = interpolate(&p, &layout, &*pb.u, deg).map_err(|x| x.with_element(e))?;
            let diff = &di - &dh;
            let h1 = diff.dot(&(&el.kp * &diff));
            let eh = dh.dot(&(&el.kp * &dh));
            let ei = di.dot(&(&el.kp * &di));
            let coef = &el.pi0_star * &dh;
            let rule = polygon_quadrature(&p, deg).map_err(|x| basis_err(x).with_element(e))?;
            let (mut l2, mut u2, mut g2) = (0.0, 0.0, 0.0);
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let pv = el.basis.eval(x);
                let uhx: f64 = pv.iter().zip(coef.iter()).map(|(a, b)| a * b).sum();
                let ux = (pb.u)(x);
                let gx = (pb.grad)(x);
                l2 += w * (ux - uhx).powi(2);
                u2 += w * ux * ux;
                g2 += w * (gx[0] * gx[0] + gx[1] * gx[1]);
            }
            Ok([l2, u2, h1, g2, eh, ei])
        })
        .collect();
    let mut acc = [0.0; 6];
    for p in parts {
        let p = p?;
        for i in 0..6 {
            acc[i] += p[i];
        }
    }
    Ok(ErrorNorms {
        err_l2_rel: ratio(acc[0].sqrt(), acc[1].sqrt()),
        err_h1_rel: ratio(acc[2].max(0.0).sqrt(), acc[3].sqrt()),
        energy_h: acc[4],
        energy_interp: acc[5],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Ok,
    SolverFailed,
    ElementFailed,
    /// Set by convergence studies when the error grows under refinement.
    Blowup,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Ok => "ok",
            SolveStatus::SolverFailed => "solver_failed",
            SolveStatus::ElementFailed => "element_failed",
            SolveStatus::Blowup => "blowup",
        }
    }
}

/// Everything measured by one solve on one mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n_dof: usize,
    pub h: f64,
    pub err_l2_rel: f64,
    pub err_h1_rel: f64,
    pub max_log10_cond_g: f64,
    pub max_log10_cond_h: f64,
    pub max_log10_pinabla_id: f64,
    pub max_log10_pi0_id: f64,
    pub energy_h: f64,
    pub energy_interp: f64,
    pub residual: f64,
    pub basis_fallbacks: usize,
    pub status: SolveStatus,
    pub message: Option<String>,
}

fn log10_floor(v: f64) -> f64 {
    v.max(f64::MIN_POSITIVE).log10()
}

/// Assembles, imposes `u` on the boundary, solves and measures the error
/// against the exact solution. Failures end up in the report status.
pub fn solve_problem(m: &PolygonalMesh, opts: &ElementOptions, pb: &ModelProblem) -> Result<(SolveReport, Vec<f64>), VemError> {
    check_order(opts.k)?;
    let h = m.stats().h;
    let failed = |status, message: String, n_dof| SolveReport {
        n_dof,
        h,
        err_l2_rel: f64::NAN,
        err_h1_rel: f64::NAN,
        max_log10_cond_g: f64::NAN,
        max_log10_cond_h: f64::NAN,
        max_log10_pinabla_id: f64::NAN,
        max_log10_pi0_id: f64::NAN,
        energy_h: f64::NAN,
        energy_interp: f64::NAN,
        residual: f64::NAN,
        basis_fallbacks: 0,
        status,
        message: Some(message),
    };
    let sys = match assemble(m, opts, &*pb.f) {
        Ok(s) => s,
        Err(e) => return Ok((failed(SolveStatus::ElementFailed, e.to_string(), 0), Vec::new())),
    };
    let red = apply_dirichlet(&sys, &*pb.u);
    let out = solve(&red.matrix, &red.rhs);
    let uh = red.expand(&out.x);
    let fold = |f: fn(&ElementDiagnostics) -> f64| {
        sys.diagnostics().map(f).fold(f64::NEG_INFINITY, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
    };
    let errs = error_norms(m, &sys, &uh, pb)?;
    let report = SolveReport {
        n_dof: sys.dofmap.n_dofs,
        h,
        err_l2_rel: errs.err_l2_rel,
        err_h1_rel: errs.err_h1_rel,
        max_log10_cond_g: log10_floor(fold(|d| d.cond_g)),
        max_log10_cond_h: log10_floor(fold(|d| d.cond_h)),
        max_log10_pinabla_id: log10_floor(fold(|d| d.pinabla_identity_err)),
        max_log10_pi0_id: log10_floor(fold(|d| d.pi0_identity_err)),
        energy_h: errs.energy_h,
        energy_interp: errs.energy_interp,
        residual: out.residual,
        basis_fallbacks: sys.diagnostics().filter(|d| d.basis_fallback).count(),
        status: if out.converged { SolveStatus::Ok } else { SolveStatus::SolverFailed },
        message: out.message,
    };
    Ok((report, uh))
}

/// Dof coordinates of one element, for consistency checks.
pub fn element_dof_coords(m: &PolygonalMesh, dm: &DofMap, e: usize) -> Vec<(usize, Option<Point2>)> {
    let p = m.element_polygon(e);
    let layout = super::local::dof_layout(&p, dm.k).expect("order checked by DofMap");
    dm.element_dofs[e].iter().copied().zip(dof_points(&p, &layout)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisKind;
    use crate::vem::StabKind;

    fn grid(n: usize) -> PolygonalMesh {
        let mut v = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                v.push(Point2::new(i as f64 / n as f64, j as f64 / n as f64));
            }
        }
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut el = Vec::new();
        for j in 0..n {
            for i in 0..n {
                el.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        PolygonalMesh::new(v, el)
    }

    fn two_triangles() -> PolygonalMesh {
        let mut m = grid(1);
        m.elements = vec![vec![0, 1, 3], vec![0, 3, 2]];
        m
    }

    fn opts(k: usize) -> ElementOptions {
        ElementOptions::new(k, BasisKind::Ortho, StabKind::Drecipe)
    }

    #[test]
    fn two_triangle_system_has_constant_kernel() {
        let sys = assemble(&two_triangles(), &opts(1), &|_| 0.0).unwrap();
        assert_eq!(sys.dofmap.n_dofs, 4);
        let mut dense = DMatrix::<f64>::zeros(4, 4);
        for i in 0..4 {
            for (j, v) in sys.matrix.row(i) {
                dense[(i, j)] = v;
            }
        }
        let sv = dense.singular_values();
        assert_eq!(sv.iter().filter(|&&s| s > 1e-12).count(), 3);
        assert!(sys.matrix.asymmetry() < 1e-14);
    }

    #[test]
    fn dof_counts_and_constants() {
        let m = grid(2);
        let sys = assemble(&m, &opts(2), &|_| 0.0).unwrap();
        assert_eq!(sys.dofmap.n_dofs, 25);
        assert_eq!(sys.dofmap.n_boundary(), 16);
        // constants in the kernel: point dofs 1, zeroth moments 1
        let mut one = vec![0.0; sys.dofmap.n_dofs];
        for (i, c) in sys.dofmap.coords.iter().enumerate() {
            if c.is_some() {
                one[i] = 1.0;
            }
        }
        for el in &sys.dofmap.element_dofs {
            one[*el.last().unwrap()] = 1.0;
        }
        let r = sys.matrix.mul_vec(&one);
        assert!(r.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn shared_edge_dofs_have_matching_coordinates() {
        let m = grid(3);
        for k in 1..=3 {
            let dm = DofMap::new(&m, k).unwrap();
            for e in 0..m.n_elements() {
                for (g, local) in element_dof_coords(&m, &dm, e) {
                    match (local, dm.coords[g]) {
                        (Some(a), Some(b)) => assert!(a.dist(b) < 1e-14),
                        (None, None) => {}
                        _ => panic!("dof kind mismatch"),
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneous_data_leaves_rhs() {
        let m = grid(3);
        let sys = assemble(&m, &opts(1), &|p| p.x).unwrap();
        let red = apply_dirichlet(&sys, &|_| 0.0);
        for (i, &g) in red.free.iter().enumerate() {
            assert_eq!(red.rhs[i], sys.rhs[g]);
        }
    }

    #[test]
    fn patch_tests() {
        let meshes = [grid(3), two_triangles()];
        for m in &meshes {
            for k in 1..=3 {
                for stab in [StabKind::Dd, StabKind::Drecipe, StabKind::Trace] {
                    let o = ElementOptions::new(k, BasisKind::Ortho, stab);
                    let (r, uh) = solve_problem(m, &o, &ModelProblem::patch(k)).unwrap();
                    assert_eq!(r.status, SolveStatus::Ok);
                    assert!(r.err_h1_rel < 1e-10, "k={k} {stab}: {}", r.err_h1_rel);
                    assert!(r.err_l2_rel < 1e-10);
                    if k == 1 {
                        // nodal values equal x + ... at every vertex
                        for (i, p) in m.vertices.iter().enumerate() {
                            assert!((uh[i] - (ModelProblem::patch(1).u)(*p)).abs() < 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn constant_solution() {
        let (r, uh) = solve_problem(&grid(2), &opts(2), &ModelProblem::constant(1.0)).unwrap();
        assert_eq!(r.status, SolveStatus::Ok);
        for (i, c) in DofMap::new(&grid(2), 2).unwrap().coords.iter().enumerate() {
            if c.is_some() {
                assert!((uh[i] - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_solution_has_unit_l2_error() {
        let m = grid(4);
        let pb = ModelProblem::sin_sin();
        let sys = assemble(&m, &opts(2), &*pb.f).unwrap();
        let e = error_norms(&m, &sys, &vec![0.0; sys.dofmap.n_dofs], &pb).unwrap();
        assert!((e.err_l2_rel - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors_decrease_on_grids() {
        let pb = ModelProblem::sin_sin();
        for k in 1..=3 {
            let (a, _) = solve_problem(&grid(4), &opts(k), &pb).unwrap();
            let (b, _) = solve_problem(&grid(8), &opts(k), &pb).unwrap();
            let rate_l2 = (a.err_l2_rel / b.err_l2_rel).log2();
            let rate_h1 = (a.err_h1_rel / b.err_h1_rel).log2();
            assert!(rate_l2 > k as f64 + 0.6, "k={k} L2 rate {rate_l2}");
            assert!(rate_h1 > k as f64 - 0.4, "k={k} H1 rate {rate_h1}");
        }
    }

    #[test]
    fn galerkin_energy_identity() {
        // with homogeneous boundary data a_h(u_h, u_h) = F_h(u_h) exactly
        let pb = ModelProblem::sin_sin();
        let m = grid(5);
        for k in 1..=3 {
            let sys = assemble(&m, &opts(k), &*pb.f).unwrap();
            let red = apply_dirichlet(&sys, &*pb.u);
            let out = solve(&red.matrix, &red.rhs);
            let uh = red.expand(&out.x);
            let ku = sys.matrix.mul_vec(&uh);
            let a: f64 = uh.iter().zip(&ku).map(|(x, y)| x * y).sum();
            let f: f64 = uh.iter().zip(&sys.rhs).map(|(x, y)| x * y).sum();
            assert!((a - f).abs() <= 1e-10 * a, "k={k}");
            let e = error_norms(&m, &sys, &uh, &pb).unwrap();
            assert!((e.energy_h - a).abs() <= 1e-10 * a);
        }
    }
}
