//! Quadrature rules and polynomial bases on elements and edges.

pub mod cell;
pub mod edge;
pub mod quadrature;

pub use cell::{exponents, monomial_index, poly_dim, BasisKind, CellBasis};
pub use edge::{lagrange_derivatives, EdgeBasis};
pub use quadrature::{gauss_legendre, gauss_lobatto, polygon_quadrature, QuadratureRule, QuadratureRule1D};
