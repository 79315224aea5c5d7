//! Numerical toolkit for the radially symmetric diffusive competition
//! model with a free boundary: an invader diffuses over an expanding ball
//! whose front obeys a Stefan condition, competing with a native species
//! on all of space.
//!
//! The crate covers four layers:
//!
//! - [`model`]: coefficients, regime classification, steady states, and the
//!   closed-form/ODE solutions used as oracles;
//! - [`eigen`] and [`semiwave`]: the critical radii from principal
//!   Dirichlet eigenvalues on balls, and the semi-wave speed constant k0;
//! - [`fbsolver`] and [`oracle`]: the production front-fixing IMEX stepper
//!   and its independent explicit reference discretization;
//! - [`analysis`]: spreading/vanishing classification, the sharp threshold
//!   mu*, and front-speed estimation against the k0 sandwich.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod fbsolver;
pub mod model;
pub mod oracle;
pub mod presets;
pub mod semiwave;
pub mod trajectory;
pub mod tridiag;

pub use analysis::{
    classify, estimate_speed, find_mu_star, inferior_longtime_check, ClassificationResult,
    ClassifyTolerances, MuStarOptions, MuStarResult, SpeedEstimate, Verdict,
};
pub use eigen::{bessel_first_zero, critical_radius, lambda1, r_star, vanishing_bound, CriticalRadii};
pub use error::{Error, Result};
pub use fbsolver::{
    mass_balance_residual, simulate, simulate_observed, step, GridSpec, SimOutcome, SolverState,
};
pub use model::{
    classify_regime, logistic_ode, lv_ode, steady_states, InitialData, ModelParams,
    RadialProfile, Regime, SteadyStates,
};
pub use oracle::{explicit_reference, ExplicitOracleConfig, OracleFields};
pub use presets::Preset;
pub use semiwave::{find_k0, solve_semiwave, SemiWaveProfile};
pub use trajectory::{Termination, Trajectory, TrajectoryRecord};
