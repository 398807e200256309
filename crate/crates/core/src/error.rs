use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("acosh argument {value} is below the domain [1, inf)")]
    Domain { value: f64 },

    #[error("edge length undefined: pentagon cosh argument {cosh} does not exceed 1")]
    UndefinedLength { cosh: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate triangle with sides {sides:?}")]
    DegenerateTriangle { sides: [f64; 3] },

    #[error(
        "degenerate tetrahedron: vertex triangle at apex {apex} fails the triangle inequality"
    )]
    DegenerateTetrahedron { apex: usize },

    #[error("dihedral angle at slot {slot} disagrees between apexes: {first} vs {second}")]
    CrossCheckFailure {
        slot: usize,
        first: f64,
        second: f64,
    },

    #[error("path leaves the admissible region at parameter {at}")]
    PathLeavesAdmissible { at: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: usize },

    #[error("inadmissible state: degenerate tets {tets:?}, undefined edge lengths {edges:?}")]
    InadmissibleState { tets: Vec<usize>, edges: Vec<usize> },

    #[error("rigidity hypotheses failed: weight tier violated on edges {weight_edges:?}, K*sin^2(phi) < 0 on edges {curvature_edges:?}")]
    HypothesisFailed {
        weight_edges: Vec<usize>,
        curvature_edges: Vec<usize>,
    },

    #[error("Newton system could not be factorized")]
    SingularHessian,

    #[error("no admissible descent step >= min_step at iteration {iteration}")]
    LeftAdmissible { iteration: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },
}

impl Error {
    /// Whether the error stems from malformed or invalid input rather than
    /// from a computation on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Validation(_)
                | Error::UnknownId { .. }
                | Error::InvalidInput(_)
        )
    }
}
