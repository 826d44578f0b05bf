use thiserror::Error;

/// Errors raised by polygon construction and polygon algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("consecutive duplicate vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("polygon has non-positive signed area {0:e} (degenerate or clockwise)")]
    NonPositiveArea(f64),
    #[error("polygon boundary self-intersects (edges {0} and {1})")]
    SelfIntersection(usize, usize),
    #[error("ear clipping found no ear; stuck at vertex {vertex}")]
    NoEar { vertex: usize },
}

/// Errors raised while parsing or writing mesh files.
#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Errors raised by quadrature and polynomial basis construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("Gauss-Lobatto rule needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("Gram matrix of the scaled monomials is numerically singular")]
    SingularGram,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Errors raised by the element-level and global VEM machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VemError {
    #[error("unsupported polynomial order {0} (expected 1, 2 or 3)")]
    UnsupportedOrder(usize),
    #[error("element {element}: {source}")]
    Geometry {
        element: usize,
        #[source]
        source: GeometryError,
    },
    #[error("element {element}: Gram matrix of the cell basis is numerically singular")]
    SingularGram { element: usize },
    #[error("element {element}: projector matrix G is singular")]
    SingularG { element: usize },
    #[error("element {element}: mass matrix H is singular")]
    SingularH { element: usize },
    #[error("linear solver failed: {0}")]
    Solver(String),
}

impl VemError {
    /// Attaches an element id to element-level errors.
    pub fn with_element(self, id: usize) -> Self {
        match self {
            VemError::Geometry { source, .. } => VemError::Geometry { element: id, source },
            VemError::SingularGram { .. } => VemError::SingularGram { element: id },
            VemError::SingularG { .. } => VemError::SingularG { element: id },
            VemError::SingularH { .. } => VemError::SingularH { element: id },
            other => other,
        }
    }
}

/// Errors raised by dataset generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("invalid dataset spec: {0}")]
    InvalidSpec(String),
    #[error("star polygon: projection factor reached zero at t = {0}")]
    StarProjection(f64),
    #[error("level {level}: could not place {count} polygon copies without intersections")]
    Placement { level: usize, count: usize },
    #[error("level {level}: about {estimate:.0} elements exceeds the generator limit")]
    TooLarge { level: usize, estimate: f64 },
    #[error("triangulation failed: {0}")]
    Triangulation(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Errors raised by convergence studies.
#[derive(Debug, Error)]
pub enum StudyError {
    #[error("invalid study config: {0}")]
    Config(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
