use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error(
        "grid spacing {spacing:.3e} does not resolve h = {h} (need spacing <= {max_spacing:.3e}, i.e. n_points >= {min_points})"
    )]
    Resolution {
        h: f64,
        spacing: f64,
        max_spacing: f64,
        min_points: usize,
    },

    #[error("invalid problem: {0}")]
    Problem(String),

    #[error("eigensolver failed for a {dim}x{dim} operator: {detail}")]
    Eigensolver { dim: usize, detail: String },

    #[error("quadrature did not converge: requested {requested:.1e}, achieved {achieved:.1e} after {evaluations} evaluations")]
    Quadrature {
        requested: f64,
        achieved: f64,
        evaluations: usize,
    },

    #[error("kappa = {kappa} is outside (0, {dimension})")]
    Kappa { kappa: f64, dimension: usize },

    #[error("singular weight evaluated on the diagonal (z = 0)")]
    SingularPoint,

    #[error("Fourier tail extrapolation diverged at zeta = {zeta}")]
    TailDivergence { zeta: f64 },

    #[error("invalid window: tau1 = {tau1} > tau2 = {tau2}")]
    Window { tau1: f64, tau2: f64 },

    #[error("T = {t} is below 2h = {min}")]
    TimeScale { t: f64, min: f64 },

    #[error("gamma = {gamma} is below twice the grid spacing ({min})")]
    Truncation { gamma: f64, min: f64 },

    #[error("exponent fit needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("nonpositive value {value} at h = {h} cannot be fitted on a log scale")]
    NonPositive { h: f64, value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Expr(#[from] crate::expr::ParseError),
}
