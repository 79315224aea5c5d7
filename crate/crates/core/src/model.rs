//! Model coefficients, competition-regime classification, steady states,
//! and the closed-form/ODE solutions used as oracles elsewhere.
//!
//! The system couples an invader `u` on an expanding ball of radius `h(t)`
//! with a native competitor `v` on all of space:
//!
//! ```text
//! u_t - d1 (u_rr + (N-1)/r u_r) = u (a1 - b1 u - c1 v),   0 <= r < h(t)
//! v_t - d2 (v_rr + (N-1)/r v_r) = v (a2 - b2 u - c2 v),   0 <= r < inf
//! h'(t) = -mu * u_r(t, h(t)),    u(t, r) = 0 for r >= h(t)
//! ```

use crate::error::{Error, Result};

/// Relative tolerance for regime-boundary tie detection.
const REGIME_TIE_TOL: f64 = 1e-12;

/// All model coefficients.
///
/// Units: `d1`, `d2` are diffusion rates (length^2/time); `a1`, `a2`
/// intrinsic growth rates (1/time); `b1`, `c2` intraspecific and `c1`, `b2`
/// interspecific competition rates (1/(density*time)); `mu` the free-boundary
/// coefficient (length^2/(density*time)); `h0` the initial front radius;
/// `dim` the space dimension N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub d1: f64,
    pub d2: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    /// Free-boundary coefficient. `mu = 0` is admitted as the frozen-front
    /// limit (the ball never moves); everything else must be positive.
    pub mu: f64,
    pub h0: f64,
    pub dim: u32,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("d1", self.d1),
            ("d2", self.d2),
            ("a1", self.a1),
            ("a2", self.a2),
            ("b1", self.b1),
            ("b2", self.b2),
            ("c1", self.c1),
            ("c2", self.c2),
            ("h0", self.h0),
        ];
        for (name, value) in named {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        if !(self.mu >= 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "mu must be nonnegative, got {}",
                self.mu
            )));
        }
        if self.dim < 1 {
            return Err(Error::InvalidParams("dim must be >= 1".into()));
        }
        Ok(())
    }

    /// Carrying capacity of the invader, a1/b1.
    pub fn u_capacity(&self) -> f64 {
        self.a1 / self.b1
    }

    /// Carrying capacity of the native species, a2/c2.
    pub fn v_capacity(&self) -> f64 {
        self.a2 / self.c2
    }

    /// Effective invader growth rate against an established native
    /// population at carrying capacity: a1 - a2*c1/c2.
    pub fn effective_growth(&self) -> f64 {
        self.a1 - self.a2 * self.c1 / self.c2
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_h0(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }
}

/// Competition regime by the ratio ordering of a1/a2 against b1/b2, c1/c2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// a1/a2 > max(b1/b2, c1/c2): u wipes out v in the homogeneous system.
    SuperiorU,
    /// a1/a2 < min(b1/b2, c1/c2): v wipes out u.
    InferiorU,
    /// b1/b2 > a1/a2 > c1/c2: stable coexistence.
    WeakCompetition,
    /// b1/b2 < a1/a2 < c1/c2: bistable, coexistence unstable.
    StrongCompetition,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::SuperiorU => "SuperiorU",
            Regime::InferiorU => "InferiorU",
            Regime::WeakCompetition => "WeakCompetition",
            Regime::StrongCompetition => "StrongCompetition",
        };
        write!(f, "{s}")
    }
}

fn ratios_tie(x: f64, y: f64) -> bool {
    (x - y).abs() <= REGIME_TIE_TOL * x.abs().max(y.abs())
}

/// Classify the competition regime. Boundary ties are an error, never a
/// silent bucket: the dichotomy theorems only cover strict inequalities.
pub fn classify_regime(p: &ModelParams) -> Result<Regime> {
    p.validate()?;
    let qa = p.a1 / p.a2;
    let qb = p.b1 / p.b2;
    let qc = p.c1 / p.c2;
    // Only ties involving a1/a2 make the case split ambiguous; b1/b2 =
    // c1/c2 with a1/a2 strictly separated is still superior or inferior.
    if ratios_tie(qa, qb) {
        return Err(Error::BoundaryRegime("a1/a2", "b1/b2"));
    }
    if ratios_tie(qa, qc) {
        return Err(Error::BoundaryRegime("a1/a2", "c1/c2"));
    }
    Ok(if qa > qb.max(qc) {
        Regime::SuperiorU
    } else if qa < qb.min(qc) {
        Regime::InferiorU
    } else if qb > qa && qa > qc {
        Regime::WeakCompetition
    } else {
        Regime::StrongCompetition
    })
}

/// Constant steady states of the homogeneous system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStates {
    /// The origin (0, 0).
    pub r0: (f64, f64),
    /// Semi-trivial (a1/b1, 0).
    pub r1: (f64, f64),
    /// Semi-trivial (0, a2/c2).
    pub r2: (f64, f64),
    /// Coexistence state, present only when componentwise positive.
    pub coexistence: Option<(f64, f64)>,
}

/// Compute the constant steady states; the coexistence branch requires a
/// nondegenerate competition determinant b1*c2 - b2*c1.
pub fn steady_states(p: &ModelParams) -> Result<SteadyStates> {
    p.validate()?;
    let det = p.b1 * p.c2 - p.b2 * p.c1;
    let scale = (p.b1 * p.c2).abs().max((p.b2 * p.c1).abs());
    if det.abs() < 1e-14 * scale {
        return Err(Error::DegenerateDeterminant(det.abs()));
    }
    let u_star = (p.a1 * p.c2 - p.a2 * p.c1) / det;
    let v_star = (p.a2 * p.b1 - p.a1 * p.b2) / det;
    let coexistence = (u_star > 0.0 && v_star > 0.0).then_some((u_star, v_star));
    Ok(SteadyStates {
        r0: (0.0, 0.0),
        r1: (p.a1 / p.b1, 0.0),
        r2: (0.0, p.a2 / p.c2),
        coexistence,
    })
}

/// Exact solution of the logistic ODE u' = u (a - b u), u(0) = u_init,
/// in the overflow-safe exponential-decay arrangement
/// `a u0 / (b u0 + (a - b u0) e^{-a t})`.
pub fn logistic_ode(a: f64, b: f64, u_init: f64, t: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0 && u_init > 0.0 && t >= 0.0);
    a * u_init / (b * u_init + (a - b * u_init) * (-a * t).exp())
}

/// Right-hand side of the spatially homogeneous competition system.
fn lv_rhs(p: &ModelParams, z: f64, w: f64) -> (f64, f64) {
    (
        z * (p.a1 - p.b1 * z - p.c1 * w),
        w * (p.a2 - p.b2 * z - p.c2 * w),
    )
}

fn rk4_step(p: &ModelParams, z: f64, w: f64, dt: f64) -> (f64, f64) {
    let (k1z, k1w) = lv_rhs(p, z, w);
    let (k2z, k2w) = lv_rhs(p, z + 0.5 * dt * k1z, w + 0.5 * dt * k1w);
    let (k3z, k3w) = lv_rhs(p, z + 0.5 * dt * k2z, w + 0.5 * dt * k2w);
    let (k4z, k4w) = lv_rhs(p, z + dt * k3z, w + dt * k3w);
    (
        z + dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
        w + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
    )
}

fn integrate_lv(p: &ModelParams, z0: f64, w0: f64, t_end: f64, dt: f64) -> Vec<(f64, f64, f64)> {
    let n = (t_end / dt).round().max(1.0) as usize;
    let dt = t_end / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let (mut z, mut w) = (z0, w0);
    out.push((0.0, z, w));
    for i in 0..n {
        (z, w) = rk4_step(p, z, w, dt);
        out.push(((i + 1) as f64 * dt, z, w));
    }
    out
}

/// Fourth-order trajectory of the homogeneous competition ODE
/// z' = z(a1 - b1 z - c1 w), w' = w(a2 - b2 z - c2 w).
///
/// A dt-halving run gates the step size: if it moves the endpoint by
/// 1e-6 or more the requested dt is rejected. Returns the finer trajectory,
/// subsampled onto the requested dt grid.
pub fn lv_ode(
    p: &ModelParams,
    z0: f64,
    w0: f64,
    t_end: f64,
    dt: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    p.validate()?;
    if z0 < 0.0 || w0 < 0.0 {
        return Err(Error::InvalidParams("z0, w0 must be nonnegative".into()));
    }
    if !(dt > 0.0) || !(t_end > 0.0) {
        return Err(Error::InvalidParams("dt and t_end must be positive".into()));
    }
    let coarse = integrate_lv(p, z0, w0, t_end, dt);
    let fine = integrate_lv(p, z0, w0, t_end, dt / 2.0);
    let (_, zc, wc) = *coarse.last().unwrap();
    let (_, zf, wf) = *fine.last().unwrap();
    let endpoint_shift = (zc - zf).abs().max((wc - wf).abs());
    if !endpoint_shift.is_finite() || endpoint_shift >= 1e-6 {
        return Err(Error::StepSizeTooLarge(endpoint_shift));
    }
    Ok(fine.into_iter().step_by(2).collect())
}

/// A named analytic radial profile for initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    /// `amplitude * (1 - (r/h0)^2)` on [0, h0]: zero slope at the origin,
    /// zero at the front, positive inside.
    QuadraticBump { amplitude: f64 },
    /// Spatially constant.
    Constant { value: f64 },
}

impl RadialProfile {
    /// Evaluate at radius `r`; `h0` only matters for the bump profile.
    pub fn eval(&self, r: f64, h0: f64) -> f64 {
        match *self {
            RadialProfile::QuadraticBump { amplitude } => {
                let s = r / h0;
                (amplitude * (1.0 - s * s)).max(0.0)
            }
            RadialProfile::Constant { value } => value,
        }
    }
}

/// Initial data (u0 on [0, h0], v0 on the truncated far-field domain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub u0: RadialProfile,
    pub v0: RadialProfile,
}

impl InitialData {
    /// Default data: u0 at half the invader carrying capacity, v0 flat at
    /// the native carrying capacity.
    pub fn default_for(p: &ModelParams) -> Self {
        InitialData {
            u0: RadialProfile::QuadraticBump {
                amplitude: 0.5 * p.u_capacity(),
            },
            v0: RadialProfile::Constant {
                value: p.v_capacity(),
            },
        }
    }

    /// u0 must satisfy u0'(0) = 0, u0(h0) = 0, u0 > 0 on [0, h0);
    /// v0 must be nonnegative and bounded.
    pub fn validate(&self) -> Result<()> {
        match self.u0 {
            RadialProfile::QuadraticBump { amplitude } => {
                if !(amplitude > 0.0) {
                    return Err(Error::InvalidParams(
                        "u0 amplitude must be positive".into(),
                    ));
                }
            }
            RadialProfile::Constant { .. } => {
                return Err(Error::InvalidParams(
                    "u0 must vanish at the front; a constant profile does not".into(),
                ));
            }
        }
        match self.v0 {
            RadialProfile::Constant { value } if value >= 0.0 => {}
            RadialProfile::QuadraticBump { .. } => {
                return Err(Error::InvalidParams(
                    "v0 must be defined on the whole far-field domain; use a constant".into(),
                ));
            }
            _ => return Err(Error::InvalidParams("v0 must be nonnegative".into())),
        }
        Ok(())
    }

    /// inf v0 > 0 on the whole domain.
    pub fn v0_strictly_positive(&self) -> bool {
        matches!(self.v0, RadialProfile::Constant { value } if value > 0.0)
    }

    /// liminf of v0 at infinity is at least the native carrying capacity.
    pub fn v0_farfield_at_capacity(&self, p: &ModelParams) -> bool {
        matches!(self.v0, RadialProfile::Constant { value } if value >= p.v_capacity() - 1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(a1: f64, a2: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> ModelParams {
        ModelParams {
            d1: 1.0,
            d2: 1.0,
            a1,
            a2,
            b1,
            b2,
            c1,
            c2,
            mu: 1.0,
            h0: 1.0,
            dim: 1,
        }
    }

    #[test]
    fn regime_superior() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(classify_regime(&p).unwrap(), Regime::SuperiorU);
    }

    #[test]
    fn regime_inferior() {
        let p = params(1.0, 3.0, 1.0, 1.0, 1.0, 1.0);
        assert_eq!(classify_regime(&p).unwrap(), Regime::InferiorU);
    }

    #[test]
    fn regime_weak() {
        // b1/b2 = 3 > a1/a2 = 1 > c1/c2 = 1/3
        let p = params(1.0, 1.0, 3.0, 1.0, 1.0, 3.0);
        assert_eq!(classify_regime(&p).unwrap(), Regime::WeakCompetition);
    }

    #[test]
    fn regime_strong() {
        let p = params(1.0, 1.0, 1.0, 3.0, 3.0, 1.0);
        assert_eq!(classify_regime(&p).unwrap(), Regime::StrongCompetition);
    }

    #[test]
    fn regime_boundary_is_an_error() {
        let p = params(1.0, 1.0, 1.0, 1.0, 0.5, 1.0);
        assert!(matches!(
            classify_regime(&p),
            Err(Error::BoundaryRegime("a1/a2", "b1/b2"))
        ));
    }

    #[test]
    fn regime_rejects_nonpositive() {
        let mut p = params(1.0, 2.0, 3.0, 1.0, 1.0, 3.0);
        p.a1 = 0.0;
        assert!(matches!(classify_regime(&p), Err(Error::InvalidParams(_))));
        p.a1 = 1.0;
        p.mu = -0.5;
        assert!(matches!(classify_regime(&p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn steady_states_coexistence_absent() {
        // all 1 except a1 = 3: v* = (a2 b1 - a1 b2)/det = (1 - 3)/0 -> degenerate det
        // (b1 c2 = b2 c1 = 1), so perturb c2 to keep det nonzero.
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 2.0);
        let ss = steady_states(&p).unwrap();
        // u* = (3*2 - 1)/ (2 - 1) = 5, v* = (1 - 3)/(2-1) = -2 < 0
        assert!(ss.coexistence.is_none());
        assert_eq!(ss.r1, (3.0, 0.0));
        assert_eq!(ss.r2, (0.0, 0.5));
    }

    #[test]
    fn steady_states_hand_value() {
        // (a1,a2)=(1,1), (b1,b2)=(2,1), (c1,c2)=(1,2): coexistence (1/3, 1/3)
        let p = params(1.0, 1.0, 2.0, 1.0, 1.0, 2.0);
        let ss = steady_states(&p).unwrap();
        let (u, v) = ss.coexistence.unwrap();
        assert!((u - 1.0 / 3.0).abs() < 1e-15);
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn steady_states_degenerate() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0); // b1 c2 = b2 c1
        assert!(matches!(
            steady_states(&p),
            Err(Error::DegenerateDeterminant(_))
        ));
    }

    #[test]
    fn logistic_fixed_point() {
        for t in [0.0, 0.5, 7.0, 100.0] {
            assert!((logistic_ode(1.0, 1.0, 1.0, t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn logistic_attractor() {
        assert!((logistic_ode(1.0, 1.0, 0.5, 40.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn logistic_matches_rk4_oracle() {
        // independent fourth-order integration of u' = u(2 - u)
        let (a, b, u0, t) = (2.0, 1.0, 0.1, 1.0);
        let n = 2000;
        let dt = t / n as f64;
        let f = |u: f64| u * (a - b * u);
        let mut u = u0;
        for _ in 0..n {
            let k1 = f(u);
            let k2 = f(u + 0.5 * dt * k1);
            let k3 = f(u + 0.5 * dt * k2);
            let k4 = f(u + dt * k3);
            u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        assert!((logistic_ode(a, b, u0, t) - u).abs() < 1e-8);
    }

    #[test]
    fn lv_ode_equilibrium_stays_put() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let traj = lv_ode(&p, 0.0, 1.0, 10.0, 0.01).unwrap();
        for &(_, z, w) in &traj {
            assert_eq!(z, 0.0);
            assert!((w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lv_ode_inferior_limit() {
        let p = params(1.0, 3.0, 1.0, 1.0, 1.0, 1.0);
        let traj = lv_ode(&p, 0.7, 0.4, 60.0, 0.01).unwrap();
        let &(_, z, w) = traj.last().unwrap();
        assert!(z.abs() < 1e-3, "z = {z}");
        assert!((w - 3.0).abs() < 1e-3, "w = {w}");
    }

    #[test]
    fn lv_ode_superior_limit() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let traj = lv_ode(&p, 0.2, 1.5, 60.0, 0.01).unwrap();
        let &(_, z, w) = traj.last().unwrap();
        assert!((z - 3.0).abs() < 1e-3, "z = {z}");
        assert!(w.abs() < 1e-3, "w = {w}");
    }

    #[test]
    fn lv_ode_rejects_coarse_dt() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            lv_ode(&p, 0.2, 1.5, 40.0, 4.0),
            Err(Error::StepSizeTooLarge(_))
        ));
    }

    #[test]
    fn initial_data_validation() {
        let p = params(3.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        let init = InitialData::default_for(&p);
        init.validate().unwrap();
        assert!(init.v0_strictly_positive());
        assert!(init.v0_farfield_at_capacity(&p));
        let bad = InitialData {
            u0: RadialProfile::Constant { value: 1.0 },
            v0: init.v0,
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        // Ratios are unchanged under scaling both species' reaction rows.
        #[test]
        fn regime_scaling_invariance(
            a1 in 0.1..10.0f64, a2 in 0.1..10.0f64,
            b1 in 0.1..10.0f64, b2 in 0.1..10.0f64,
            c1 in 0.1..10.0f64, c2 in 0.1..10.0f64,
            lambda in 0.01..100.0f64,
        ) {
            let p = params(a1, a2, b1, b2, c1, c2);
            let scaled = params(
                lambda * a1, lambda * a2,
                lambda * b1, lambda * b2,
                lambda * c1, lambda * c2,
            );
            match (classify_regime(&p), classify_regime(&scaled)) {
                (Ok(r1), Ok(r2)) => prop_assert_eq!(r1, r2),
                // A tie on one side must be a near-tie on the other; skip.
                _ => {}
            }
        }

        // Every returned steady state zeroes both reaction terms.
        #[test]
        fn steady_states_zero_reactions(
            a1 in 0.1..10.0f64, a2 in 0.1..10.0f64,
            b1 in 0.1..10.0f64, b2 in 0.1..10.0f64,
            c1 in 0.1..10.0f64, c2 in 0.1..10.0f64,
        ) {
            let p = params(a1, a2, b1, b2, c1, c2);
            if let Ok(ss) = steady_states(&p) {
                let mut states = vec![ss.r0, ss.r1, ss.r2];
                states.extend(ss.coexistence);
                let scale = a1.max(a2);
                for (u, v) in states {
                    let fu = u * (a1 - b1 * u - c1 * v);
                    let fv = v * (a2 - b2 * u - c2 * v);
                    prop_assert!(fu.abs() <= 1e-10 * scale * (1.0 + u.abs()));
                    prop_assert!(fv.abs() <= 1e-10 * scale * (1.0 + v.abs()));
                }
            }
        }

        // Logistic solution is monotone, increasing exactly when u0 < a/b.
        #[test]
        fn logistic_monotone(
            a in 0.1..5.0f64, b in 0.1..5.0f64, u0 in 0.01..5.0f64,
            t1 in 0.0..20.0f64, dt in 0.01..5.0f64,
        ) {
            let x1 = logistic_ode(a, b, u0, t1);
            let x2 = logistic_ode(a, b, u0, t1 + dt);
            if u0 < a / b - 1e-9 {
                prop_assert!(x2 >= x1);
            } else if u0 > a / b + 1e-9 {
                prop_assert!(x2 <= x1);
            }
        }

        // The competition ODE preserves nonnegativity and the invariant
        // rectangle [0, max(z0, a1/b1)] x [0, max(w0, a2/c2)].
        #[test]
        fn lv_ode_invariant_rectangle(
            a1 in 0.2..4.0f64, a2 in 0.2..4.0f64,
            b1 in 0.2..4.0f64, b2 in 0.2..4.0f64,
            c1 in 0.2..4.0f64, c2 in 0.2..4.0f64,
            z0 in 0.0..3.0f64, w0 in 0.0..3.0f64,
        ) {
            let p = params(a1, a2, b1, b2, c1, c2);
            if let Ok(traj) = lv_ode(&p, z0, w0, 20.0, 0.01) {
                let z_cap = z0.max(a1 / b1) * (1.0 + 1e-9) + 1e-12;
                let w_cap = w0.max(a2 / c2) * (1.0 + 1e-9) + 1e-12;
                for &(_, z, w) in &traj {
                    prop_assert!(z >= -1e-12 && z <= z_cap);
                    prop_assert!(w >= -1e-12 && w <= w_cap);
                }
            }
        }
    }
}
