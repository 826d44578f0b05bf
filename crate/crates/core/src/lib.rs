//! Conforming virtual elements of order 1 to 3 for the Poisson problem on
//! general polygonal meshes, together with generators for families of
//! increasingly degenerate meshes and a-priori mesh quality indicators.

pub mod error;
pub mod basis;
pub mod datasets;
pub mod geometry;
pub mod mesh;
pub mod quality;
pub mod study;
pub mod vem;

pub use datasets::{Dataset, DatasetKind, DatasetSpec};
pub use error::{BasisError, DatasetError, GeometryError, MeshIoError, StudyError, VemError};
pub use geometry::{Point2, Polygon};
pub use mesh::{MeshStats, PolygonalMesh};
