//! Conforming virtual elements for the Poisson problem.

pub mod global;
pub mod local;
pub mod problem;
pub mod sparse;

pub use global::{
    apply_dirichlet, assemble, error_norms, solve, solve_problem, DofMap, ErrorNorms, GlobalSystem, ReducedSystem,
    SolveOutcome, SolveReport, SolveStatus,
};
pub use local::{
    build_element, dof_layout, dof_points, element_diagnostics, interpolate, local_load, DofKind, DofLayout,
    ElementDiagnostics, ElementMatrices, ElementOptions, StabKind,
};
pub use problem::{ModelProblem, Poly2};
