use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gram context mismatch between operands")]
    ContextMismatch,
    #[error("matrix is not an isometry of the gram form")]
    InvalidIsometry,
    #[error("degenerate gram matrix (determinant zero)")]
    DegenerateGram,
    #[error("class is not in the interior of the positive cone")]
    NotInPositiveCone,
    #[error("class is not primitive")]
    NotPrimitive,
    #[error("invalid transfer input: {0}")]
    InvalidTransfer(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("linearly dependent basis")]
    DependentBasis,
    #[error("both polynomials are constant")]
    ConstantPolynomials,
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("root finding did not converge after {iterations} iterations ({converged} of {degree} roots settled)")]
    RootsDidNotConverge { iterations: usize, converged: usize, degree: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point does not lie on the hypersurface")]
    NotOnHypersurface,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("no witness found within search bound {0}")]
    NoWitness(u64),
    #[error("numeric tolerance exceeded: {0}")]
    Tolerance(String),
    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("ambient mismatch: G(2,{0}) vs G(2,{1})")]
    AmbientMismatch(u32, u32),
    #[error("not a disjoint sextuple of line classes")]
    NotASextuple,
    #[error("macaulay minor degenerate under every tried variable order (det M nonzero: {det_nonzero})")]
    MacaulayInconclusive { det_nonzero: bool },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
