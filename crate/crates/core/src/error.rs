use thiserror::Error;

/// Construction and query failures for domain geometry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: String, reason: String },
    #[error("singular Möbius map (ad - bc = 0)")]
    SingularMobius,
    #[error("operation requires a {expected} domain")]
    Dimension { expected: &'static str },
    #[error("domain JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Unsupported(String),
}

impl GeometryError {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        GeometryError::InvalidField {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

/// Errors raised by the Green's function evaluators and solvers.
#[derive(Debug, Error)]
pub enum GreenError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("evaluation point coincides with the pole")]
    Pole,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("method `{method}` cannot handle this domain; feasible methods: {feasible}")]
    Infeasible { method: String, feasible: String },
    #[error(
        "fundamental-solutions boundary residual {residual:.3e} exceeds {limit:.0e}; \
         the geometry is ill-conditioned for this solver, use walk-on-spheres instead"
    )]
    IllConditioned { residual: f64, limit: f64 },
    #[error("linear algebra failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Infeasibility(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GreenError> = std::result::Result<T, E>;
