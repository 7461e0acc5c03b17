use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("|z| = {radius} exceeds the certified evaluation radius {limit}")]
    RadiusExceeded { radius: f64, limit: f64 },

    #[error("argument {value} outside the domain: {what}")]
    DomainError { value: f64, what: &'static str },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("adaptive quadrature used {panels} panels without converging (value {value}, error {error})")]
    PanelBudgetExceeded { panels: usize, value: f64, error: f64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("sample set is empty")]
    EmptySamples,

    #[error("sample point {t} is not a node of the attached node set")]
    NodeMismatch { t: f64 },

    #[error("duplicate node {t} in sample set")]
    DuplicateNode { t: f64 },

    #[error("nodes coincide at {t}")]
    CoincidentNodes { t: f64 },

    #[error("evaluation point {z} sits on a singular node")]
    SingularPoint { z: String },

    #[error("points {i} and {j} are closer than the separation floor {sigma}")]
    SeparationViolated { i: usize, j: usize, sigma: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("tail estimate {tail} is not below 1% of the integral {integral}")]
    TailTooLarge { tail: f64, integral: f64 },

    #[error("function has zero energy on the window")]
    ZeroFunction,

    #[error("recipe references unknown node {0}")]
    UnknownNode(String),

    #[error("recipe mixes H(E) and H(E^2) families")]
    MixedLevels,

    #[error("recipe is empty")]
    EmptyRecipe,

    #[error("sign grid refinement exceeded its budget near x = {x}")]
    GridTooCoarse { x: f64 },

    #[error("no nodes of the designated family in the window")]
    NodeWindowEmpty,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("found {found} nodes where phase counting predicts {expected}")]
    NodeCountMismatch { found: usize, expected: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
