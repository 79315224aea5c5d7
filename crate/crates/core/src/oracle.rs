//! Independent brute-force reference solver used to validate the
//! front-fixing scheme: fully explicit, physical coordinates, front tracked
//! across a fine fixed grid. Deliberately shares no discretization code
//! with the fbsolver module — an oracle that reuses the code under test
//! validates nothing.
//!
//! Near the front the last interior node uses an unequal-arm second
//! difference against the boundary point (h, 0); when the front sits closer
//! than dr/2 to that node, the node is instead slaved to the boundary by
//! linear interpolation (keeps the explicit stability bound). The Stefan
//! flux comes from the quadratic through (h, 0) and the last two reliable
//! nodes.

use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams};
use crate::trajectory::{Trajectory, TrajectoryRecord};

/// Grid and horizon of the explicit reference run. Costs grow as dr^-3;
/// short horizons only.
#[derive(Debug, Clone, Copy)]
pub struct ExplicitOracleConfig {
    /// Physical grid spacing.
    pub dr: f64,
    /// Explicit time step; must satisfy dt_e <= 0.2 dr^2 / max(d1, d2).
    pub dt_e: f64,
    /// Horizon.
    pub t_end: f64,
    /// Domain truncation (shared by u and v).
    pub l: f64,
    /// Steps between records.
    pub output_stride: usize,
}

impl ExplicitOracleConfig {
    /// Stable configuration with dt_e at the stability bound.
    pub fn stable(dr: f64, l: f64, t_end: f64, p: &ModelParams) -> Self {
        ExplicitOracleConfig {
            dr,
            dt_e: 0.2 * dr * dr / p.d1.max(p.d2),
            t_end,
            l,
            output_stride: 200,
        }
    }

    pub fn validate(&self, p: &ModelParams) -> Result<()> {
        if !(self.dr > 0.0 && self.dt_e > 0.0 && self.t_end > 0.0) {
            return Err(Error::InvalidParams("dr, dt_e, t_end must be positive".into()));
        }
        let bound = 0.2 * self.dr * self.dr / p.d1.max(p.d2);
        if self.dt_e > bound * (1.0 + 1e-12) {
            return Err(Error::InvalidParams(format!(
                "dt_e = {} violates the stability constraint 0.2 dr^2/max(d) = {bound}",
                self.dt_e
            )));
        }
        if !(self.l > 2.0 * p.h0) {
            return Err(Error::InvalidParams("oracle domain must exceed 2*h0".into()));
        }
        if !(self.dr < p.h0 / 3.0) {
            return Err(Error::InvalidParams(format!(
                "dr = {} too coarse to track a front starting at h0 = {}",
                self.dr, p.h0
            )));
        }
        Ok(())
    }
}

/// Final fields of a reference run, on the oracle's own grid.
#[derive(Debug, Clone)]
pub struct OracleFields {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub h: f64,
}

#[inline]
fn weight(r: f64, dim: u32) -> f64 {
    if dim == 1 {
        1.0
    } else {
        r.powi(dim as i32 - 1)
    }
}

/// Stefan flux u_r(h) from the quadratic through (h, 0) and two grid nodes
/// at distances s1 < s2 behind the front carrying values f1, f2.
#[inline]
fn front_slope(s1: f64, s2: f64, f1: f64, f2: f64) -> f64 {
    f1 * (-s2 / (s1 * (s2 - s1))) + f2 * (s1 / (s2 * (s2 - s1)))
}

/// Forward-Euler reference integration of the full system.
pub fn explicit_reference(
    p: &ModelParams,
    init: &InitialData,
    cfg: &ExplicitOracleConfig,
) -> Result<(Trajectory, OracleFields)> {
    p.validate()?;
    init.validate()?;
    cfg.validate(p)?;
    let m = (cfg.l / cfg.dr).round() as usize;
    let dr = cfg.l / m as f64;
    let r: Vec<f64> = (0..=m).map(|i| i as f64 * dr).collect();
    let u: Vec<f64> = r
        .iter()
        .map(|&ri| if ri < p.h0 { init.u0.eval(ri, p.h0) } else { 0.0 })
        .collect();
    let v: Vec<f64> = r.iter().map(|&ri| init.v0.eval(ri, p.h0)).collect();
    integrate(p, cfg, r, u, v, p.h0)
}

/// Core loop, separated so tests can start from arbitrary fields.
fn integrate(
    p: &ModelParams,
    cfg: &ExplicitOracleConfig,
    r: Vec<f64>,
    mut u: Vec<f64>,
    mut v: Vec<f64>,
    mut h: f64,
) -> Result<(Trajectory, OracleFields)> {
    let m = r.len() - 1;
    let dr = r[1] - r[0];
    let dt = cfg.dt_e;
    let mut t = 0.0;
    let sup_bound = 10.0 * p.u_capacity().max(u.iter().cloned().fold(0.0, f64::max)).max(1.0);
    let n_steps = (cfg.t_end / dt).round().max(1.0) as usize;

    let mut cum_flux = 0.0;
    let mut cum_react = 0.0;
    let make_record = |t: f64,
                       h: f64,
                       hp: f64,
                       u: &[f64],
                       v: &[f64],
                       cum_flux: f64,
                       cum_react: f64| {
        let mut mass = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            if r[i] < h {
                mass += ui * weight(r[i], p.dim) * dr;
            }
        }
        TrajectoryRecord {
            t,
            h,
            h_prime: hp,
            sup_u: u.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            sup_v: v.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            mass_u: mass,
            min_u: u.iter().cloned().fold(f64::INFINITY, f64::min),
            min_v: v.iter().cloned().fold(f64::INFINITY, f64::min),
            cum_flux,
            cum_react,
        }
    };
    let mut records = vec![make_record(t, h, 0.0, &u, &v, cum_flux, cum_react)];

    let mut lap_u = vec![0.0; m + 1];
    let mut lap_v = vec![0.0; m + 1];
    for step_idx in 1..=n_steps {
        // last node strictly inside the front
        let mut jf = (h / dr).floor() as usize;
        if r[jf] >= h {
            jf -= 1;
        }
        if jf + 3 > m {
            return Err(Error::DomainExhausted { h, limit: cfg.l - 2.0 * dr });
        }
        let s1 = h - r[jf];
        let takeover = s1 < 0.5 * dr;
        let slope = if takeover {
            front_slope(h - r[jf - 1], h - r[jf - 2], u[jf - 1], u[jf - 2])
        } else {
            front_slope(s1, h - r[jf - 1], u[jf], u[jf - 1])
        };
        let h_new = h + dt * (-p.mu * slope);
        let hp = (h_new - h) / dt;
        if hp < -1e-12 {
            return Err(Error::FrontRetreat { t, h_prime: hp });
        }
        cum_flux += dt * p.d1 * weight(h_new, p.dim) * (-slope);

        // bulk Laplacians
        let inv2 = 1.0 / (dr * dr);
        let nm1 = p.dim as f64 - 1.0;
        for i in 1..m {
            lap_u[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv2;
            lap_v[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv2;
            if p.dim > 1 {
                let cr = nm1 / r[i];
                lap_u[i] += cr * (u[i + 1] - u[i - 1]) / (2.0 * dr);
                lap_v[i] += cr * (v[i + 1] - v[i - 1]) / (2.0 * dr);
            }
        }
        let n2 = 2.0 * p.dim as f64 * inv2;
        lap_u[0] = n2 * (u[1] - u[0]);
        lap_v[0] = n2 * (v[1] - v[0]);
        lap_v[m] = 2.0 * inv2 * (v[m - 1] - v[m]);
        lap_u[m] = 0.0;
        if !takeover {
            // Shortley-Weller: unequal right arm s1 to the zero at r = h
            lap_u[jf] = 2.0 * (u[jf - 1] / (dr * (dr + s1)) - u[jf] / (dr * s1));
            if p.dim > 1 {
                // derivative at r[jf] of the quadratic through
                // (r[jf]-dr, u[jf-1]), (r[jf], u[jf]), (h, 0)
                let du = u[jf - 1] * (-s1 / (dr * (dr + s1)))
                    + u[jf] * ((s1 - dr) / (dr * s1));
                lap_u[jf] += nm1 / r[jf] * du;
            }
        }

        let mut react = 0.0;
        let mut u_new = vec![0.0; m + 1];
        let mut v_new = vec![0.0; m + 1];
        for i in 0..=m {
            let f_u = u[i] * (p.a1 - p.b1 * u[i] - p.c1 * v[i]);
            let f_v = v[i] * (p.a2 - p.b2 * u[i] - p.c2 * v[i]);
            if r[i] < h {
                react += f_u * weight(r[i], p.dim) * dr;
            }
            u_new[i] = u[i] + dt * (p.d1 * lap_u[i] + f_u);
            v_new[i] = v[i] + dt * (p.d2 * lap_v[i] + f_v);
        }
        cum_react += dt * react;
        for i in 0..=m {
            if r[i] >= h_new {
                u_new[i] = 0.0;
            }
        }
        if takeover {
            let s1n = h_new - r[jf];
            if s1n > 0.0 {
                u_new[jf] = u_new[jf - 1] * s1n / (h_new - r[jf - 1]);
            }
        }
        u = u_new;
        v = v_new;
        h = h_new;
        t += dt;
        let sup = u.iter().cloned().fold(0.0f64, f64::max);
        if !sup.is_finite() || sup > sup_bound {
            return Err(Error::Instability { t, sup });
        }
        if step_idx % cfg.output_stride == 0 || step_idx == n_steps {
            records.push(make_record(t, h, hp, &u, &v, cum_flux, cum_react));
        }
    }
    Ok((
        Trajectory { records },
        OracleFields { r, u, v, h },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RadialProfile;

    fn superior(mu: f64) -> ModelParams {
        ModelParams {
            d1: 1.0, d2: 1.0, a1: 3.0, a2: 1.0, b1: 1.0, b2: 1.0,
            c1: 1.0, c2: 1.0, mu, h0: 0.8, dim: 1,
        }
    }

    #[test]
    fn equilibrium_is_exactly_stationary() {
        // u = 0, v = a2/c2 is a fixed point of the discrete update too
        let p = superior(1.0);
        let cfg = ExplicitOracleConfig::stable(0.05, 6.0, 0.25, &p);
        let m = (cfg.l / cfg.dr).round() as usize;
        let r: Vec<f64> = (0..=m).map(|i| i as f64 * cfg.dr).collect();
        let (traj, fields) =
            integrate(&p, &cfg, r, vec![0.0; m + 1], vec![1.0; m + 1], p.h0).unwrap();
        assert_eq!(fields.h, p.h0);
        assert!(fields.u.iter().all(|&x| x == 0.0));
        for &vi in &fields.v {
            assert!((vi - 1.0).abs() < 1e-13);
        }
        assert!(traj.last().h_prime == 0.0);
    }

    #[test]
    fn stability_constraint_enforced() {
        let p = superior(1.0);
        let mut cfg = ExplicitOracleConfig::stable(0.05, 6.0, 0.5, &p);
        cfg.dt_e *= 4.0;
        assert!(cfg.validate(&p).is_err());
    }

    #[test]
    fn scalar_vanishing_direction() {
        // tiny mu, h0 below the critical radius: sup u decreases in time
        let p = ModelParams {
            d1: 1.0, d2: 1.0, a1: 1.0, a2: 0.5, b1: 1.0, b2: 1.0,
            c1: 1e-9, c2: 1.0, mu: 0.01, h0: 1.0, dim: 1,
        };
        let init = InitialData {
            u0: RadialProfile::QuadraticBump { amplitude: 0.5 },
            v0: RadialProfile::Constant { value: 0.0 },
        };
        let cfg = ExplicitOracleConfig::stable(0.02, 4.0, 3.0, &p);
        let (traj, _) = explicit_reference(&p, &init, &cfg).unwrap();
        let after_transient: Vec<_> =
            traj.records.iter().filter(|r| r.t >= 1.0).collect();
        for w in after_transient.windows(2) {
            assert!(w[1].sup_u < w[0].sup_u);
        }
    }

    #[test]
    fn refinement_shrinks_front_change() {
        // halving dr changes h(T) by strictly less than the previous halving
        let p = superior(8.0);
        let init = InitialData::default_for(&p);
        let mut hs = Vec::new();
        for dr in [0.04, 0.02, 0.01] {
            let cfg = ExplicitOracleConfig::stable(dr, 6.0, 0.5, &p);
            let (_t, fields) = explicit_reference(&p, &init, &cfg).unwrap();
            hs.push(fields.h);
        }
        let d01 = (hs[0] - hs[1]).abs();
        let d12 = (hs[1] - hs[2]).abs();
        assert!(d12 < d01, "refinement did not converge: {hs:?}");
    }
}
