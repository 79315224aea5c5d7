//! Front-fixing finite-difference time stepper for the free-boundary
//! competition system.
//!
//! The invader u lives on the moving ball {r < h(t)} rescaled to the fixed
//! unit interval via rho = r / h(t), which trades the moving boundary for
//! variable coefficients and an advection term:
//!
//! ```text
//! w_t = (d1/h^2) (w_rr + (N-1)/rho w_r) + (h'/h) rho w_rho + w (a1 - b1 w - c1 v)
//! ```
//!
//! The native v stays on a fixed physical grid truncated at L_v with
//! homogeneous Neumann there (v tends to a flat state in every regime the
//! analysis covers, so zero flux is the least-reflective cheap condition).
//!
//! One IMEX step: the Stefan flux and front update are explicit, diffusion
//! and the rescaling advection are implicit (tridiagonal solves with
//! coefficients frozen at the new front), reactions are explicit. Stability
//! is then governed by the reaction terms alone, giving the dt budget
//! dt <= 0.1 / max(a1, a2) enforced at validation.

use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::trajectory::{Termination, Trajectory, TrajectoryRecord};
use crate::tridiag;

/// Discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Cells for the rescaled u-domain [0, 1] (grid has m_u + 1 nodes).
    pub m_u: usize,
    /// Cells for the v-domain [0, l_v].
    pub m_v: usize,
    /// Truncation radius of the v-domain.
    pub l_v: f64,
    /// Time step.
    pub dt: f64,
    /// Horizon.
    pub t_end: f64,
    /// Steps between diagnostic records.
    pub output_stride: usize,
}

impl GridSpec {
    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if self.m_u < 16 || self.m_v < 16 {
            return Err(Error::InvalidParams(format!(
                "m_u and m_v must be >= 16, got {} and {}",
                self.m_u, self.m_v
            )));
        }
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return Err(Error::InvalidParams("dt and t_end must be positive".into()));
        }
        let dt_budget = 0.1 / p.a1.max(p.a2);
        if self.dt > dt_budget {
            return Err(Error::InvalidParams(format!(
                "dt = {} exceeds the explicit-reaction budget 0.1/max(a1,a2) = {dt_budget}",
                self.dt
            )));
        }
        if !(self.l_v > 4.0 * p.h0) {
            return Err(Error::InvalidParams(format!(
                "l_v = {} must exceed 4*h0 = {}",
                self.l_v,
                4.0 * p.h0
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::InvalidParams("output_stride must be >= 1".into()));
        }
        Ok(())
    }

    pub fn drho(&self) -> f64 {
        1.0 / self.m_u as f64
    }

    pub fn dr_v(&self) -> f64 {
        self.l_v / self.m_v as f64
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }
}

/// Coefficients of the front-fixed equation at a given front state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformCoefficients {
    /// Rescaled diffusion d1 / h^2.
    pub diffusion: f64,
    /// The moving-coordinate drift enters as (h'/h) * rho * w_rho.
    pub advection_scale: f64,
}

/// Front-fixing transform: u(t, r) = w(t, rho) with rho = r / h(t).
pub fn transform_equation_coefficients(d1: f64, h: f64, h_prime: f64) -> TransformCoefficients {
    debug_assert!(h > 0.0);
    TransformCoefficients {
        diffusion: d1 / (h * h),
        advection_scale: h_prime / h,
    }
}

/// Stencil row (lower, diag, upper) of the radial Laplacian
/// `u_rr + (N-1)/rho u_r` at node j of a uniform grid with spacing drho.
/// Row 0 uses the symmetric-limit form N * u_rr(0) with the reflection
/// ghost from u_rho(0) = 0, giving 2N (u_1 - u_0) / drho^2.
pub fn radial_laplacian_row(j: usize, dim: u32, drho: f64) -> (f64, f64, f64) {
    let inv2 = 1.0 / (drho * drho);
    if j == 0 {
        let n = dim as f64;
        (0.0, -2.0 * n * inv2, 2.0 * n * inv2)
    } else {
        let rho = j as f64 * drho;
        let radial = (dim as f64 - 1.0) / (2.0 * rho * drho);
        (inv2 - radial, -2.0 * inv2, inv2 + radial)
    }
}

/// Discrete solver state: u on the fixed rescaled grid rho_j = j/m_u, v on
/// the physical grid r_i = i * l_v / m_v, and the front radius h.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub t: f64,
    pub h: f64,
    /// Front radius before the last committed step (h' diagnostics).
    pub h_prev: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// Sup-norm bound max(a1/b1, sup u0); the solution may never exceed it
    /// beyond 1e-6 relative slack.
    pub bound_u: f64,
    /// Sup-norm bound max(a2/c2, sup v0).
    pub bound_v: f64,
    /// Running integral of the boundary-flux term of the mass identity.
    pub cum_flux: f64,
    /// Running integral of the reaction term of the mass identity.
    pub cum_react: f64,
}

impl SolverState {
    pub fn new(p: &ModelParams, init: &InitialData, g: &GridSpec) -> Result<Self> {
        p.validate()?;
        init.validate()?;
        g.validate(p)?;
        let drho = g.drho();
        let mut u: Vec<f64> = (0..=g.m_u)
            .map(|j| init.u0.eval(j as f64 * drho * p.h0, p.h0))
            .collect();
        u[g.m_u] = 0.0;
        let dr = g.dr_v();
        let v: Vec<f64> = (0..=g.m_v).map(|i| init.v0.eval(i as f64 * dr, p.h0)).collect();
        let sup_u0 = u.iter().cloned().fold(0.0f64, f64::max);
        let sup_v0 = v.iter().cloned().fold(0.0f64, f64::max);
        Ok(SolverState {
            t: 0.0,
            h: p.h0,
            h_prev: p.h0,
            u,
            v,
            bound_u: p.u_capacity().max(sup_u0),
            bound_v: p.v_capacity().max(sup_v0),
            cum_flux: 0.0,
            cum_react: 0.0,
        })
    }

    /// Physical boundary flux u_r(t, h) from the second-order one-sided
    /// stencil (3 w_m - 4 w_{m-1} + w_{m-2}) / (2 drho) with w_m = 0.
    pub fn boundary_flux(&self, g: &GridSpec) -> f64 {
        let m = g.m_u;
        let w_rho = (self.u[m - 2] - 4.0 * self.u[m - 1]) / (2.0 * g.drho());
        w_rho / self.h
    }

    pub fn h_prime(&self, g: &GridSpec) -> f64 {
        (self.h - self.h_prev) / g.dt
    }

    pub fn sup_u(&self) -> f64 {
        self.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_v(&self) -> f64 {
        self.v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Weighted invader mass `integral_0^h r^{N-1} u dr`, trapezoid rule in
    /// the physical coordinate.
    pub fn mass_u(&self, p: &ModelParams, g: &GridSpec) -> f64 {
        let dr = self.h * g.drho();
        let mut sum = 0.0;
        for (j, &uj) in self.u.iter().enumerate() {
            let r = j as f64 * dr;
            let w = if j == 0 || j == g.m_u { 0.5 } else { 1.0 };
            sum += w * uj * radial_weight(r, p.dim);
        }
        sum * dr
    }

    /// `integral_0^h u (a1 - b1 u - c1 v) r^{N-1} dr` with v interpolated
    /// onto the physical positions of the u-grid.
    fn reaction_integral(&self, p: &ModelParams, g: &GridSpec) -> f64 {
        let dr = self.h * g.drho();
        let mut sum = 0.0;
        for (j, &uj) in self.u.iter().enumerate() {
            let r = j as f64 * dr;
            let vi = sample_uniform(&self.v, g.dr_v(), r);
            let f = uj * (p.a1 - p.b1 * uj - p.c1 * vi);
            let w = if j == 0 || j == g.m_u { 0.5 } else { 1.0 };
            sum += w * f * radial_weight(r, p.dim);
        }
        sum * dr
    }

    pub fn record(&self, p: &ModelParams, g: &GridSpec) -> TrajectoryRecord {
        TrajectoryRecord {
            t: self.t,
            h: self.h,
            h_prime: self.h_prime(g),
            sup_u: self.sup_u(),
            sup_v: self.sup_v(),
            mass_u: self.mass_u(p, g),
            min_u: self.u.iter().cloned().fold(f64::INFINITY, f64::min),
            min_v: self.v.iter().cloned().fold(f64::INFINITY, f64::min),
            cum_flux: self.cum_flux,
            cum_react: self.cum_react,
        }
    }
}

#[inline]
fn radial_weight(r: f64, dim: u32) -> f64 {
    match dim {
        1 => 1.0,
        2 => r,
        3 => r * r,
        _ => r.powi(dim as i32 - 1),
    }
}

/// Monotone piecewise-linear sample of values on a uniform grid with
/// spacing `dx`, clamped at the ends.
#[inline]
fn sample_uniform(values: &[f64], dx: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return values[0];
    }
    let s = x / dx;
    let i = s as usize;
    if i + 1 >= values.len() {
        return *values.last().unwrap();
    }
    let frac = s - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

/// u extended by zero for r >= h, interpolated at a physical radius.
#[inline]
fn sample_u_physical(u: &[f64], h: f64, r: f64) -> f64 {
    if r >= h {
        return 0.0;
    }
    sample_uniform(u, h / (u.len() - 1) as f64, r)
}

/// Advance the state by one IMEX step.
///
/// Order: (i) one-sided boundary flux, (ii) explicit front update,
/// (iii) implicit u advance with coefficients frozen at the new front,
/// (iv) implicit v advance, reactions explicit throughout. The state is
/// only committed when every invariant check passes.
pub fn step(state: &mut SolverState, p: &ModelParams, g: &GridSpec) -> Result<()> {
    let m_u = g.m_u;
    let m_v = g.m_v;
    let dt = g.dt;
    let drho = g.drho();
    let dr = g.dr_v();

    // (i) + (ii): Stefan condition, forward Euler on h
    let u_r = state.boundary_flux(g);
    let h_new = state.h + dt * (-p.mu * u_r);
    let hp = (h_new - state.h) / dt;
    if hp < -1e-12 {
        return Err(Error::FrontRetreat { t: state.t, h_prime: hp });
    }
    if h_new > 0.9 * g.l_v {
        return Err(Error::DomainExhausted { h: h_new, limit: 0.9 * g.l_v });
    }

    // mass-identity accumulators (mu-free flux form, exact also at mu = 0)
    let react_increment = dt * state.reaction_integral(p, g);
    let flux_increment = dt * p.d1 * radial_weight(h_new, p.dim) * (-u_r);

    // (iii) u: diffusion + advection implicit, reaction explicit
    let coeffs = transform_equation_coefficients(p.d1, h_new, hp);
    let n_u = m_u + 1;
    let mut lower = vec![0.0; n_u];
    let mut diag = vec![0.0; n_u];
    let mut upper = vec![0.0; n_u];
    let mut rhs = vec![0.0; n_u];
    for j in 0..m_u {
        let (ll, ld, lu) = radial_laplacian_row(j, p.dim, drho);
        let rho = j as f64 * drho;
        let adv = coeffs.advection_scale * rho / (2.0 * drho);
        lower[j] = -dt * (coeffs.diffusion * ll - adv);
        diag[j] = 1.0 - dt * coeffs.diffusion * ld;
        upper[j] = -dt * (coeffs.diffusion * lu + adv);
        let vi = sample_uniform(&state.v, dr, rho * h_new);
        let uj = state.u[j];
        rhs[j] = uj + dt * uj * (p.a1 - p.b1 * uj - p.c1 * vi);
    }
    diag[m_u] = 1.0;
    rhs[m_u] = 0.0;
    let u_new = tridiag::solve(&lower, &diag, &upper, &rhs)?;

    // (iv) v: diffusion implicit, reaction explicit, u taken at the new
    // time level and extended by zero beyond the front
    let mut lower_v = vec![0.0; m_v + 1];
    let mut diag_v = vec![0.0; m_v + 1];
    let mut upper_v = vec![0.0; m_v + 1];
    let mut rhs_v = vec![0.0; m_v + 1];
    for i in 0..m_v {
        let (ll, ld, lu) = radial_laplacian_row(i, p.dim, dr);
        lower_v[i] = -dt * p.d2 * ll;
        diag_v[i] = 1.0 - dt * p.d2 * ld;
        upper_v[i] = -dt * p.d2 * lu;
        let r = i as f64 * dr;
        let ui = sample_u_physical(&u_new, h_new, r);
        let vi = state.v[i];
        rhs_v[i] = vi + dt * vi * (p.a2 - p.b2 * ui - p.c2 * vi);
    }
    // homogeneous Neumann at r = L_v by reflection
    let inv2 = 1.0 / (dr * dr);
    lower_v[m_v] = -dt * p.d2 * 2.0 * inv2;
    diag_v[m_v] = 1.0 + dt * p.d2 * 2.0 * inv2;
    {
        let r = m_v as f64 * dr;
        let ui = sample_u_physical(&u_new, h_new, r);
        let vi = state.v[m_v];
        rhs_v[m_v] = vi + dt * vi * (p.a2 - p.b2 * ui - p.c2 * vi);
    }
    let v_new = tridiag::solve(&lower_v, &diag_v, &upper_v, &rhs_v)?;

    // invariant audit before committing anything
    let t_new = state.t + dt;
    check_bounds(&u_new, state.bound_u, t_new, "u")?;
    check_bounds(&v_new, state.bound_v, t_new, "v")?;

    state.u = u_new;
    state.v = v_new;
    state.h_prev = state.h;
    state.h = h_new;
    state.t = t_new;
    state.cum_flux += flux_increment;
    state.cum_react += react_increment;
    Ok(())
}

fn check_bounds(values: &[f64], bound: f64, t: f64, name: &str) -> Result<()> {
    for &x in values {
        if x < -1e-12 {
            return Err(Error::BoundBreach {
                t,
                what: format!("{name} dropped to {x:e}; dt too large?"),
            });
        }
        if x > bound * (1.0 + 1e-6) {
            return Err(Error::BoundBreach {
                t,
                what: format!("{name} = {x} exceeds the sup bound {bound}"),
            });
        }
    }
    Ok(())
}

/// Result of a full simulation run.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub trajectory: Trajectory,
    pub state: SolverState,
    pub termination: Termination,
}

/// Repeated stepping until t_end or a terminal condition. Deterministic
/// given identical inputs. A front reaching the 0.9 L_v guard ends the run
/// with `Termination::DomainExhausted` and a valid trajectory; invariant
/// breaches abort with an error.
pub fn simulate(p: &ModelParams, init: &InitialData, g: &GridSpec) -> Result<SimOutcome> {
    simulate_observed(p, init, g, |_| {})
}

/// `simulate` with a callback after the initial state and every committed
/// step; callers use it to capture field snapshots at chosen times.
pub fn simulate_observed(
    p: &ModelParams,
    init: &InitialData,
    g: &GridSpec,
    mut observe: impl FnMut(&SolverState),
) -> Result<SimOutcome> {
    let mut state = SolverState::new(p, init, g)?;
    let n_steps = (g.t_end / g.dt).round().max(1.0) as usize;
    let mut records = vec![state.record(p, g)];
    observe(&state);
    let mut termination = Termination::Horizon;
    for i in 1..=n_steps {
        match step(&mut state, p, g) {
            Ok(()) => {}
            Err(Error::DomainExhausted { .. }) => {
                termination = Termination::DomainExhausted;
                break;
            }
            Err(e) => return Err(e),
        }
        observe(&state);
        if i % g.output_stride == 0 {
            records.push(state.record(p, g));
        }
    }
    if records.last().map(|r| r.t) != Some(state.t) {
        records.push(state.record(p, g));
    }
    Ok(SimOutcome {
        trajectory: Trajectory { records },
        state,
        termination,
    })
}

/// Discrete residual of the mass identity
/// `d/dt integral r^{N-1} u dr + d1 h^{N-1} u_r(t,h) - integral reaction`
/// per record interval, in units of mass/time. Shrinks at O(dt + drho^2).
pub fn mass_balance_residual(traj: &Trajectory, p: &ModelParams) -> Result<Vec<f64>> {
    p.validate()?;
    let recs = &traj.records;
    let mut out = Vec::with_capacity(recs.len().saturating_sub(1));
    for pair in recs.windows(2) {
        let (r0, r1) = (&pair[0], &pair[1]);
        let dt = r1.t - r0.t;
        let residual =
            ((r1.mass_u - r0.mass_u) + (r1.cum_flux - r0.cum_flux) - (r1.cum_react - r0.cum_react))
                / dt;
        out.push(residual);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RadialProfile;

    fn superior() -> ModelParams {
        ModelParams {
            d1: 1.0, d2: 1.0, a1: 3.0, a2: 1.0, b1: 1.0, b2: 1.0,
            c1: 1.0, c2: 1.0, mu: 1.0, h0: 0.8, dim: 1,
        }
    }

    fn grid() -> GridSpec {
        GridSpec { m_u: 64, m_v: 64, l_v: 8.0, dt: 1e-3, t_end: 1.0, output_stride: 10 }
    }

    #[test]
    fn transform_coefficients_values() {
        let c = transform_equation_coefficients(1.0, 2.0, 0.0);
        assert_eq!(c.diffusion, 0.25);
        assert_eq!(c.advection_scale, 0.0);
        let c = transform_equation_coefficients(2.0, 2.0, 1.0);
        assert_eq!(c.diffusion, 0.5);
        assert_eq!(c.advection_scale, 0.5);
    }

    #[test]
    fn laplacian_row_dim1_is_classical() {
        let drho = 0.1;
        let (l, d, u) = radial_laplacian_row(5, 1, drho);
        assert!((l - 100.0).abs() < 1e-9);
        assert!((d + 200.0).abs() < 1e-9);
        assert!((u - 100.0).abs() < 1e-9);
    }

    #[test]
    fn laplacian_origin_row_dim3() {
        let drho = 0.1;
        let (l, d, u) = radial_laplacian_row(0, 3, drho);
        assert_eq!(l, 0.0);
        assert!((d + 600.0).abs() < 1e-9);
        assert!((u - 600.0).abs() < 1e-9);
    }

    #[test]
    fn laplacian_exact_on_parabola() {
        // Laplacian of 1 - r^2 in dimension N is exactly -2N, and the
        // stencil is exact on quadratics at every node including the origin.
        let m = 20usize;
        let drho = 1.0 / m as f64;
        for dim in 1u32..=5 {
            let f = |r: f64| 1.0 - r * r;
            for j in 0..m {
                let (l, d, u) = radial_laplacian_row(j, dim, drho);
                let rho = j as f64 * drho;
                let applied = if j == 0 {
                    d * f(0.0) + u * f(drho)
                } else {
                    l * f(rho - drho) + d * f(rho) + u * f(rho + drho)
                };
                assert!(
                    (applied + 2.0 * dim as f64).abs() < 1e-9,
                    "dim {dim} node {j}: {applied}"
                );
            }
        }
    }

    #[test]
    fn equilibrium_state_is_stationary() {
        // u = 0, v = a2/c2: all fluxes and reactions vanish, h' = 0
        let p = superior();
        let g = grid();
        let init = InitialData {
            u0: RadialProfile::QuadraticBump { amplitude: 1.0 },
            v0: RadialProfile::Constant { value: 1.0 },
        };
        let mut state = SolverState::new(&p, &init, &g).unwrap();
        state.u.iter_mut().for_each(|x| *x = 0.0);
        let h0 = state.h;
        for _ in 0..50 {
            step(&mut state, &p, &g).unwrap();
        }
        assert_eq!(state.h, h0);
        assert!(state.sup_u().abs() < 1e-15);
        for &vi in &state.v {
            assert!((vi - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_zero_freezes_front() {
        let p = superior().with_mu(0.0);
        let g = grid();
        let init = InitialData::default_for(&p);
        let mut state = SolverState::new(&p, &init, &g).unwrap();
        let h0 = state.h;
        step(&mut state, &p, &g).unwrap();
        assert_eq!(state.h, h0);
        assert!(state.h_prime(&g).abs() == 0.0);
        // u still evolves as a fixed-ball Dirichlet problem
        assert!(state.u != SolverState::new(&p, &init, &g).unwrap().u);
    }

    #[test]
    fn front_advances_with_positive_mu() {
        let p = superior().with_mu(2.0);
        let g = grid();
        let init = InitialData::default_for(&p);
        let mut state = SolverState::new(&p, &init, &g).unwrap();
        step(&mut state, &p, &g).unwrap();
        assert!(state.h > p.h0);
        // initial flux: u0' at h0 is -2*amplitude/h0 = -3.75, so
        // h' = mu * 3.75 = 7.5 up to the O(drho^2) stencil error
        assert!((state.h_prime(&g) - 7.5).abs() < 0.05);
    }

    #[test]
    fn grid_validation_catches_bad_specs() {
        let p = superior();
        let mut g = grid();
        g.m_u = 8;
        assert!(g.validate(&p).is_err());
        let mut g = grid();
        g.l_v = 3.0; // needs > 4 * h0 = 3.2
        assert!(g.validate(&p).is_err());
        let mut g = grid();
        g.dt = 0.05; // budget is 0.1/3
        assert!(g.validate(&p).is_err());
    }

    #[test]
    fn simulate_records_monotone_front_and_time() {
        let p = superior().with_mu(2.0);
        let g = grid();
        let out = simulate(&p, &InitialData::default_for(&p), &g).unwrap();
        let recs = &out.trajectory.records;
        assert!(recs.len() > 10);
        for w in recs.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!(w[1].h >= w[0].h);
            assert!(w[1].h_prime >= -1e-12);
            assert!(w[0].min_u >= -1e-12 && w[0].min_v >= -1e-12);
        }
        assert_eq!(out.termination, Termination::Horizon);
    }

    #[test]
    fn simulate_is_deterministic() {
        let p = superior().with_mu(2.0);
        let g = grid();
        let a = simulate(&p, &InitialData::default_for(&p), &g).unwrap();
        let b = simulate(&p, &InitialData::default_for(&p), &g).unwrap();
        assert_eq!(a.trajectory.to_csv(), b.trajectory.to_csv());
        assert_eq!(a.state.u, b.state.u);
    }

    #[test]
    fn domain_exhaustion_terminates_cleanly() {
        let mut p = superior();
        p.mu = 20.0;
        p.h0 = 1.5;
        let g = GridSpec { m_u: 64, m_v: 32, l_v: 6.5, dt: 1e-3, t_end: 10.0, output_stride: 10 };
        let out = simulate(&p, &InitialData::default_for(&p), &g).unwrap();
        assert_eq!(out.termination, Termination::DomainExhausted);
        assert!(out.state.h <= 0.9 * g.l_v * (1.0 + 1e-9));
        assert!(out.trajectory.last().t < g.t_end);
    }

    #[test]
    fn mass_balance_residual_zero_at_equilibrium() {
        let p = superior();
        let g = grid();
        let init = InitialData {
            u0: RadialProfile::QuadraticBump { amplitude: 1.0 },
            v0: RadialProfile::Constant { value: 1.0 },
        };
        let mut state = SolverState::new(&p, &init, &g).unwrap();
        state.u.iter_mut().for_each(|x| *x = 0.0);
        let mut records = vec![state.record(&p, &g)];
        for _ in 0..30 {
            step(&mut state, &p, &g).unwrap();
            records.push(state.record(&p, &g));
        }
        let traj = Trajectory { records };
        for res in mass_balance_residual(&traj, &p).unwrap() {
            assert!(res.abs() < 1e-14);
        }
    }
}
