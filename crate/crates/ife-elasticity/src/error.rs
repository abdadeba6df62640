use thiserror::Error;

/// Errors produced by mesh construction, interface classification, shape
/// construction and the linear solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("space {space:?} is incompatible with a {mesh:?} mesh")]
    IncompatibleSpace {
        space: crate::mesh::SpaceKind,
        mesh: crate::mesh::MeshKind,
    },

    #[error("element {element}: interface hypothesis ({hypothesis}) violated: {detail}")]
    HypothesisViolation {
        element: usize,
        hypothesis: &'static str,
        detail: String,
    },

    #[error("element {element}: degenerate interface cut: {detail}")]
    DegenerateCut { element: usize, detail: String },

    #[error("no sign change of the level set on the given edge")]
    NoSignChange,

    #[error("edge intersection search did not converge within {0} iterations")]
    IntersectionNoConvergence(usize),

    #[error(
        "singular shape-function system on element {element} (det = {det:.3e}, \
         d = {d:.4}, e = {e:.4}, lambda = ({lambda_minus}, {lambda_plus}), \
         mu = ({mu_minus}, {mu_plus}))"
    )]
    SingularConstruction {
        element: usize,
        det: f64,
        d: f64,
        e: f64,
        lambda_minus: f64,
        lambda_plus: f64,
        mu_minus: f64,
        mu_plus: f64,
    },

    #[error("ill-conditioned jump-matrix system (estimated condition {0:.3e})")]
    IllConditioned(f64),

    #[error("point ({0}, {1}) lies outside the element")]
    PointOutsideElement(f64, f64),

    #[error("unsupported quadrature degree {0} (supported up to 10)")]
    UnsupportedDegree(usize),

    #[error(
        "conjugate gradient did not converge in {iterations} iterations \
         (relative residual {residual:.3e}); residual history tail: {tail:?}"
    )]
    CgNoConvergence {
        iterations: usize,
        residual: f64,
        tail: Vec<f64>,
    },

    #[error("unknown interface '{0}' (catalog: ellipse)")]
    UnknownInterface(String),

    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
