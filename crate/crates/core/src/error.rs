use thiserror::Error;

/// Failure modes shared by every predicate.
///
/// Variants split into two families: genuine degeneracies of the input
/// configuration (exit code 2 on the command line) and violated
/// preconditions (exit code 3).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("one site is contained in another")]
    ContainedSites,
    #[error("a site is concentric with the inversion pole")]
    PoleDegeneracy,
    #[error("determinant query has the wrong number of rows or columns")]
    ShapeMismatch,
    #[error("quadratic extension with negative discriminant")]
    NegativeDiscriminant,
    #[error("the trisector of the three sites is not hyperbolic")]
    NotHyperbolic,
    #[error("degenerate shadow region")]
    DegenerateShadow,
    #[error("no tangent sphere with the requested orientation")]
    VertexNotFound,
    #[error("the tangent spheres coincide (double root)")]
    DegenerateDouble,
    #[error("infinitely many tangent spheres")]
    InfinitelyMany,
    #[error("degenerate vertex order")]
    DegenerateOrder,
    #[error("degenerate edge conflict")]
    DegenerateEdgeConflict,
    #[error("the edge endpoints are not ordered along the trisector")]
    InvalidEdge,
}

impl GeomError {
    /// True for configuration degeneracies, false for precondition failures.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            GeomError::PoleDegeneracy
                | GeomError::DegenerateShadow
                | GeomError::DegenerateDouble
                | GeomError::InfinitelyMany
                | GeomError::DegenerateOrder
                | GeomError::DegenerateEdgeConflict
        )
    }

    /// Stable upper-case token used by the command line and the fuzz reports.
    pub fn token(&self) -> &'static str {
        match self {
            GeomError::ContainedSites => "CONTAINED_SITES",
            GeomError::PoleDegeneracy => "POLE_DEGENERACY",
            GeomError::ShapeMismatch => "SHAPE_MISMATCH",
            GeomError::NegativeDiscriminant => "NEGATIVE_DISCRIMINANT",
            GeomError::NotHyperbolic => "NOT_HYPERBOLIC",
            GeomError::DegenerateShadow => "DEGENERATE_SHADOW",
            GeomError::VertexNotFound => "VERTEX_NOT_FOUND",
            GeomError::DegenerateDouble => "DEGENERATE_DOUBLE",
            GeomError::InfinitelyMany => "INFINITELY_MANY",
            GeomError::DegenerateOrder => "DEGENERATE_ORDER",
            GeomError::DegenerateEdgeConflict => "DEGENERATE_EDGE_CONFLICT",
            GeomError::InvalidEdge => "INVALID_EDGE",
        }
    }
}

pub type GeomResult<T> = Result<T, GeomError>;
