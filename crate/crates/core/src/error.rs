//! Error types shared across the solver and analysis modules.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Parameter or configuration validation failed.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two of the competition ratios a1/a2, b1/b2, c1/c2 coincide; the
    /// regime classification is only defined for strict inequalities.
    #[error("regime boundary: ratios {0} and {1} coincide within 1e-12 relative tolerance")]
    BoundaryRegime(&'static str, &'static str),

    /// b1*c2 - b2*c1 is numerically zero; no coexistence formula.
    #[error("degenerate determinant: |b1*c2 - b2*c1| = {0:e} below threshold")]
    DegenerateDeterminant(f64),

    /// The dt-halving convergence gate of the ODE oracle failed.
    #[error("ODE step size too large: halving dt moved the endpoint by {0:e}")]
    StepSizeTooLarge(f64),

    /// Bessel zero bracketing failed.
    #[error("no sign change bracketing the first Bessel zero in [{0}, {1}]")]
    ConvergenceFailure(f64, f64),

    /// An operation that requires a specific competition regime was called
    /// outside of it.
    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    /// Semi-wave speed parameter outside [0, 2*sqrt(a*d)).
    #[error("k = {k} outside the semi-wave range [0, {limit})")]
    NotInSpeedRange { k: f64, limit: f64 },

    /// The phase-plane integration could not resolve the profile.
    #[error("semi-wave integration failure: {0}")]
    IntegrationFailure(String),

    /// g(k) = mu*U'(0) - k did not change sign over the search interval.
    #[error("k0 bracket failure: g({lo}) = {g_lo:e}, g({hi}) = {g_hi:e}")]
    BracketFailure { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    /// Positivity or sup-norm invariant violated beyond tolerance.
    #[error("solution bound breached at t = {t}: {what}")]
    BoundBreach { t: f64, what: String },

    /// The front reached 0.9 * L_v; the truncated v-domain is exhausted.
    #[error("front reached the domain guard: h = {h} > 0.9 * L_v = {limit}")]
    DomainExhausted { h: f64, limit: f64 },

    /// h decreased beyond -1e-12; the scheme lost front monotonicity.
    #[error("front retreated at t = {t}: h' = {h_prime:e}")]
    FrontRetreat { t: f64, h_prime: f64 },

    /// Tridiagonal assembly produced a non-dominant row.
    #[error("tridiagonal system not diagonally dominant at row {0}")]
    NotDiagonallyDominant(usize),

    /// Explicit oracle blow-up (stability constraint violated upstream).
    #[error("explicit oracle instability at t = {t}: sup = {sup:e}")]
    Instability { t: f64, sup: f64 },

    /// A classification routine was handed a regime it does not cover.
    #[error("wrong regime for this check: expected {expected}, got {got}")]
    WrongRegime { expected: &'static str, got: String },

    /// The mu-bisection bracket endpoints did not classify as required.
    #[error("invalid mu bracket: mu_lo = {lo} classified {lo_verdict}, mu_hi = {hi} classified {hi_verdict}")]
    BracketInvalid { lo: f64, lo_verdict: String, hi: f64, hi_verdict: String },

    /// Horizon doubling hit its cap with the verdict still undetermined.
    #[error("horizon exhausted at t_end = {0} with verdict still undetermined")]
    HorizonExhausted(f64),

    /// Speed estimation requires a spreading trajectory.
    #[error("speed estimate requires a spreading run: {0}")]
    NotSpreading(String),
}

pub type Result<T> = std::result::Result<T, Error>;
