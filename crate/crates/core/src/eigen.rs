//! Principal Dirichlet eigenvalue of the Laplacian on balls and the
//! critical front radii derived from it.
//!
//! On the ball of radius R in dimension N the principal eigenvalue is
//! `lambda1(R) = (j / R)^2` where `j` is the first positive zero of the
//! Bessel function of order N/2 - 1. Working through Bessel zeros keeps the
//! exact `lambda1(R) * R^2 = const` scaling law, so threshold comparisons
//! carry no grid error.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Partial sums of the ascending series for J_nu(x) with the overall
/// (x/2)^nu / Gamma(nu+1) prefactor dropped; the prefactor is positive for
/// x > 0 so the zeros are unchanged. Terms follow the recurrence
/// t_{m+1} = -t_m (x^2/4) / ((m+1)(m+1+nu)).
fn bessel_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..60 {
        let mf = m as f64;
        term *= -q / ((mf + 1.0) * (mf + 1.0 + nu));
        sum += term;
    }
    sum
}

/// First positive zero j_{nu,1} of the Bessel function of order nu >= -1/2,
/// to 1e-10 absolute accuracy (bracket scan plus bisection on the in-repo
/// series evaluation).
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(Error::InvalidParams(format!("order nu = {nu} must be >= -1/2")));
    }
    // The series (sans prefactor) is 1 at x = 0; the first zero lies below
    // nu + 10 for every order this crate needs (N <= 10, nu <= 4).
    let hi_limit = nu + 10.0;
    let step = 0.05;
    let mut lo = 0.05f64.min(hi_limit / 2.0);
    let mut f_lo = bessel_series(nu, lo);
    let mut bracket = None;
    let mut x = lo + step;
    while x <= hi_limit {
        let f_x = bessel_series(nu, x);
        if f_lo > 0.0 && f_x <= 0.0 {
            bracket = Some((lo, x));
            break;
        }
        lo = x;
        f_lo = f_x;
        x += step;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::ConvergenceFailure(nu + 1.0, hi_limit))?;
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        if bessel_series(nu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The dimensionless critical constant R* with lambda1(R*) = 1, i.e. the
/// first zero of the order-(N/2 - 1) Bessel function. R* = pi/2 for N = 1.
pub fn r_star(dim: u32) -> Result<f64> {
    if dim < 1 {
        return Err(Error::InvalidParams("dim must be >= 1".into()));
    }
    bessel_first_zero(dim as f64 / 2.0 - 1.0)
}

/// Principal Dirichlet eigenvalue of -Laplace on the ball of radius R.
pub fn lambda1(radius: f64, dim: u32) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParams(format!("radius {radius} must be positive")));
    }
    let j = r_star(dim)?;
    Ok((j / radius) * (j / radius))
}

/// Critical front radius of the scalar problem with diffusion d and growth
/// rate a: `R* sqrt(d/a)`. A front confined below it cannot sustain growth.
pub fn critical_radius(d: f64, a: f64, dim: u32) -> Result<f64> {
    if !(d > 0.0 && a > 0.0) {
        return Err(Error::InvalidParams("d and a must be positive".into()));
    }
    Ok(r_star(dim)? * (d / a).sqrt())
}

/// Upper bound on the vanishing front limit in the superior-u regime:
/// `R* sqrt(d1 / (a1 - a2 c1/c2))`. Any front observed beyond it is
/// incompatible with vanishing.
pub fn vanishing_bound(p: &ModelParams) -> Result<f64> {
    p.validate()?;
    let a_eff = p.effective_growth();
    if a_eff <= 0.0 {
        return Err(Error::InvalidRegime(format!(
            "a1 - a2*c1/c2 = {a_eff} must be positive (superior-u regime required)"
        )));
    }
    critical_radius(p.d1, a_eff, p.dim)
}

/// Bundle of the critical radii for one dimension.
#[derive(Debug, Clone, Copy)]
pub struct CriticalRadii {
    pub dim: u32,
    /// The dimensionless constant with lambda1(r_star) = 1.
    pub r_star: f64,
}

impl CriticalRadii {
    pub fn for_dim(dim: u32) -> Result<Self> {
        Ok(CriticalRadii { dim, r_star: r_star(dim)? })
    }

    /// Scalar threshold `r_star * sqrt(d/a)`.
    pub fn scalar_threshold(&self, d: f64, a: f64) -> f64 {
        self.r_star * (d / a).sqrt()
    }

    /// Two-species vanishing bound `r_star * sqrt(d1/(a1 - a2 c1/c2))`.
    pub fn vanishing_bound(&self, p: &ModelParams) -> Result<f64> {
        let a_eff = p.effective_growth();
        if a_eff <= 0.0 {
            return Err(Error::InvalidRegime(format!(
                "a1 - a2*c1/c2 = {a_eff} must be positive"
            )));
        }
        Ok(self.scalar_threshold(p.d1, a_eff))
    }
}
