use thiserror::Error;

/// Errors raised by the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("degenerate parameters: ((s-1)n+1)λ + n = {denominator} must be positive")]
    DegenerateDenominator { denominator: f64 },

    #[error("closure did not converge for θ = {theta} after {iterations} iterations (bracket [{lo}, {hi}])")]
    ClosureNonConvergence {
        theta: f64,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("step size underflow at η = {eta} (h = {step})")]
    StepUnderflow { eta: f64, step: f64 },

    #[error("no sign-changing bracket for θ'(0) in [{lo}, {hi}] at η_max = {eta_max}")]
    NoBracket { lo: f64, hi: f64, eta_max: f64 },

    #[error("shooting did not reach |θ(η_max)| ≤ {tol} (best residual {residual} at θ'(0) = {theta_prime_0})")]
    ShootingNonConvergence {
        tol: f64,
        residual: f64,
        theta_prime_0: f64,
    },

    #[error("θ'(0) did not settle under domain doubling up to η_max = {eta_max_cap} (last change {last_change})")]
    DomainNonConvergence { eta_max_cap: f64, last_change: f64 },

    #[error(
        "relaxation Newton iteration diverged after {iterations} iterations (residual {residual})"
    )]
    RelaxationDivergence { iterations: usize, residual: f64 },

    #[error("quadrature depth exhausted on [{a}, {b}]")]
    QuadratureDepth { a: f64, b: f64 },

    #[error("η = {eta} lies outside the solution grid [0, {eta_max}]")]
    OutOfRange { eta: f64, eta_max: f64 },
}

impl Error {
    /// True for failures caused by bad inputs rather than by the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::DegenerateDenominator { .. }
        )
    }
}

impl Error {
    /// Name of the computation stage that raised the error.
    pub fn stage(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } | Error::DegenerateDenominator { .. } => "parameters",
            Error::ClosureNonConvergence { .. } => "closure",
            Error::StepUnderflow { .. } => "integration",
            Error::NoBracket { .. } | Error::ShootingNonConvergence { .. } => "shooting",
            Error::DomainNonConvergence { .. } => "domain extension",
            Error::RelaxationDivergence { .. } => "relaxation",
            Error::QuadratureDepth { .. } => "quadrature",
            Error::OutOfRange { .. } => "interpolation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
