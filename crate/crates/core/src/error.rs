use thiserror::Error;

/// Errors produced by model construction, evaluation and the derived checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coordinate {x} outside model domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("integration step too large: first-integral residual {residual:e} exceeds 1e-8")]
    StepTooLarge { residual: f64 },

    #[error("trajectory left the domain at t = {t} (h = {h})")]
    DomainExit { t: f64, h: f64 },

    #[error("profile is not positive: u({s}) = {u}")]
    NonpositiveProfile { s: f64, u: f64 },

    #[error("nu = {0} is outside [-1, 1]")]
    NuOutOfRange(f64),

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("operation requires a de Sitter-Schwarzschild or Reissner-Nordstrom model")]
    ModelNotDssOrRn,

    #[error("threshold margin does not change sign inside the domain")]
    NoCrossingInDomain,

    #[error("curvature ordering required by the selected case fails at x = {x}")]
    CasePreconditionViolated { x: f64 },

    #[error("y = {0} is outside [0, 1]")]
    YOutOfRange(f64),

    #[error("eps = {0} lies inside the window [-1, 1+sqrt(5)]; no threshold is needed")]
    EpsInWindow(f64),

    #[error("second fundamental form coefficient a vanishes")]
    ZeroA,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("negative norm or second-form sum supplied")]
    NegativeNorm,

    #[error("codimension-1 flat embedding unavailable: {0}")]
    EmbeddingUnavailable(String),

    #[error("quadrature order {0} too small (need >= 2)")]
    OrderTooSmall(usize),

    #[error("quadrature did not converge under order doubling: {coarse} vs {fine}")]
    NonConverged { coarse: f64, fine: f64 },

    #[error("integrand singularity is not integrable (panel estimates {coarse} vs {fine})")]
    NonIntegrableSingularity { coarse: f64, fine: f64 },

    #[error("K_tan changes sign near x = {x}; embedding type flips")]
    SignChangeOfKTan { x: f64 },

    #[error("K_tan vanishes at x = {x}; second form singular (delta = {delta})")]
    VanishingKTan { x: f64, delta: f64 },

    #[error("phi1 = {0} is within 0.1 of a coordinate pole")]
    PoleProximity(f64),

    #[error("coordinate metric is singular")]
    SingularMetric,

    #[error("finite-difference step underflow")]
    StepUnderflow,
}

pub type Result<T> = std::result::Result<T, Error>;
