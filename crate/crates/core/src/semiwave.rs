//! Semi-wave profiles and the asymptotic spreading-speed constant k0.
//!
//! The semi-wave problem on the half line,
//!
//! ```text
//! -d U'' + k U' = a U - b U^2,   U(0) = 0,  U(r) -> a/b,  U' > 0,
//! ```
//!
//! has a unique solution U_k for each k in [0, 2*sqrt(ad)). Its boundary
//! slope U_k'(0) decreases strictly in k, and the speed constant k0 is the
//! unique root of `mu U_k'(0) = k`.
//!
//! The profile is the one-dimensional stable manifold of the saddle
//! (a/b, 0) in the (U, U') phase plane, so it is computed by backward
//! integration from the saddle: numerically stable, and no nested shooting
//! is needed for the profile itself.

use crate::error::{Error, Result};

/// Relative offset of the backward start point from the saddle.
const MANIFOLD_OFFSET: f64 = 1e-8;
/// Local error tolerance (relative) for the adaptive integrator.
const LOCAL_TOL: f64 = 1e-10;
/// Below this scaled phase-plane norm the eventual crossing amplitude is
/// far beneath double precision; the slope is indistinguishable from zero.
const UNDERFLOW_NORM: f64 = 1e-220;

/// A computed semi-wave: coefficients, boundary slope, and the profile
/// sampled on the integrator's accepted steps (grid strictly increasing,
/// grid[0] = 0, values[0] = 0).
#[derive(Debug, Clone)]
pub struct SemiWaveProfile {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// U'(0).
    pub slope0: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// U' at the grid points, for dense evaluation between the adaptive
    /// integrator's accepted steps.
    pub slopes: Vec<f64>,
}

impl SemiWaveProfile {
    /// Far-field truncation radius of the stored profile.
    pub fn extent(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// Cubic Hermite evaluation on the stored grid; clamps to the
    /// far-field plateau.
    pub fn value_at(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.extent() {
            return *self.values.last().unwrap();
        }
        let idx = self.grid.partition_point(|&g| g <= r) - 1;
        let (r0, r1) = (self.grid[idx], self.grid[idx + 1]);
        let dr = r1 - r0;
        let theta = (r - r0) / dr;
        hermite(
            theta,
            self.values[idx],
            self.values[idx + 1],
            dr * self.slopes[idx],
            dr * self.slopes[idx + 1],
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct PhasePoint {
    r: f64,
    u: f64,
    p: f64,
}

enum Backward {
    /// Crossed U = 0 with the recorded slope; points run from the saddle
    /// side (r = 0 at the start of the backward run) to the crossing.
    Crossed { slope: f64, r_cross: f64, points: Vec<PhasePoint> },
    /// Spiraled into the origin below resolvable amplitude (k close to the
    /// upper end of the speed range): the true slope underflows f64.
    Underflow,
}

/// Dormand-Prince 5(4) step for the phase-plane system
/// U' = P, P' = (k P - a U + b U^2)/d.
struct Rhs {
    k: f64,
    a: f64,
    b: f64,
    d: f64,
}

impl Rhs {
    #[inline]
    fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        [y[1], (self.k * y[1] - self.a * y[0] + self.b * y[0] * y[0]) / self.d]
    }
}

/// One adaptive step; returns (y_new, k1_new (FSAL), inf-norm error estimate).
fn dp45_step(rhs: &Rhs, y: [f64; 2], k1: [f64; 2], h: f64) -> ([f64; 2], [f64; 2], f64) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let add = |y: [f64; 2], terms: &[(f64, [f64; 2])]| -> [f64; 2] {
        let mut out = y;
        for &(c, v) in terms {
            out[0] += h * c * v[0];
            out[1] += h * c * v[1];
        }
        out
    };
    let k2 = rhs.eval(add(y, &[(A21, k1)]));
    let k3 = rhs.eval(add(y, &[(A31, k1), (A32, k2)]));
    let k4 = rhs.eval(add(y, &[(A41, k1), (A42, k2), (A43, k3)]));
    let k5 = rhs.eval(add(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
    let k6 = rhs.eval(add(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]));
    let y_new = add(y, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
    let k7 = rhs.eval(y_new);
    let err = [
        h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0]),
        h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1]),
    ];
    (y_new, k7, err[0].abs().max(err[1].abs()))
}

/// Cubic Hermite value on [0, 1] given endpoint values and h-scaled slopes.
#[inline]
fn hermite(theta: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> f64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + theta) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1
}

/// Backward integration along the stable manifold of (a/b, 0) until the
/// trajectory crosses U = 0 (or provably underflows).
fn backward_from_saddle(a: f64, b: f64, d: f64, k: f64) -> Result<Backward> {
    let rhs = Rhs { k, a, b, d };
    let cap = a / b;
    let p_scale = cap * (a / d).sqrt();
    // stable eigenvalue of the saddle: (k - sqrt(k^2 + 4ad)) / (2d) < 0
    let lam = (k - (k * k + 4.0 * a * d).sqrt()) / (2.0 * d);
    let offset = MANIFOLD_OFFSET * cap;
    let mut y = [cap - offset, -lam * offset];
    let mut r = 0.0;
    let length_unit = (d / a).sqrt();
    let r_budget = 20_000.0 * length_unit;
    let h_min = 1e-12 * length_unit;
    let mut h = -1e-2 * length_unit;
    let mut k1 = rhs.eval(y);
    let mut points = vec![PhasePoint { r, u: y[0], p: y[1] }];
    let tol = |y: [f64; 2]| LOCAL_TOL * (y[0].abs().max(cap * 1e-4) + y[1].abs().max(p_scale * 1e-4));

    while r > -r_budget {
        let (y_new, k1_new, err) = dp45_step(&rhs, y, k1, h);
        let scale = tol(y);
        if err > scale {
            // reject, shrink
            h *= 0.9 * (scale / err).powf(0.2).clamp(0.1, 1.0);
            if h.abs() < h_min {
                return Err(Error::IntegrationFailure(format!(
                    "step size collapsed at r = {r}, U = {}",
                    y[0]
                )));
            }
            continue;
        }
        let r_new = r + h;
        if y_new[0] <= 0.0 {
            // Crossing inside this step. A cubic Hermite gives the first
            // guess; the bracket is then refined by re-taking partial RK
            // steps from the same start point, so the located state carries
            // the integrator's full order rather than interpolation error.
            let guess = {
                let (mut t_lo, mut t_hi) = (0.0f64, 1.0f64);
                for _ in 0..60 {
                    let mid = 0.5 * (t_lo + t_hi);
                    if hermite(mid, y[0], y_new[0], h * k1[0], h * k1_new[0]) > 0.0 {
                        t_lo = mid;
                    } else {
                        t_hi = mid;
                    }
                }
                0.5 * (t_lo + t_hi)
            };
            let partial = |theta: f64| -> [f64; 2] {
                if theta == 0.0 {
                    y
                } else {
                    dp45_step(&rhs, y, k1, theta * h).0
                }
            };
            let (mut t_lo, mut t_hi) = (0.0f64, 1.0f64);
            let mut theta = guess;
            for _ in 0..80 {
                let val = partial(theta)[0];
                if val.abs() < 1e-12 * cap {
                    break;
                }
                if val > 0.0 {
                    t_lo = theta;
                } else {
                    t_hi = theta;
                }
                theta = 0.5 * (t_lo + t_hi);
            }
            let state = partial(theta);
            let slope = state[1];
            let r_cross = r + theta * h;
            points.push(PhasePoint { r: r_cross, u: 0.0, p: slope });
            return Ok(Backward::Crossed { slope, r_cross, points });
        }
        if y_new[1] <= 0.0
            || (y_new[0] / cap).hypot(y_new[1] / p_scale) < UNDERFLOW_NORM
        {
            // P turned nonpositive with U still positive, or the orbit is
            // numerically glued to the origin: the crossing slope is below
            // anything representable.
            return Ok(Backward::Underflow);
        }
        y = y_new;
        k1 = k1_new;
        r = r_new;
        points.push(PhasePoint { r, u: y[0], p: y[1] });
        // grow the step
        h *= 0.9 * (tol(y) / err.max(1e-300)).powf(0.2).clamp(0.2, 5.0);
        if h < -1.0 * length_unit {
            h = -1.0 * length_unit;
        }
        if h.abs() < h_min {
            h = -h_min;
        }
    }
    Ok(Backward::Underflow)
}

/// Boundary slope U_k'(0), with the convention that slopes beneath the
/// resolvable amplitude count as zero (only reachable for k within a sliver
/// of the upper end of the speed range).
fn slope_or_zero(a: f64, b: f64, d: f64, k: f64) -> Result<f64> {
    match backward_from_saddle(a, b, d, k)? {
        Backward::Crossed { slope, .. } => Ok(slope),
        Backward::Underflow => Ok(0.0),
    }
}

fn check_coeffs(a: f64, b: f64, d: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && d > 0.0) {
        return Err(Error::InvalidParams(format!(
            "semi-wave coefficients must be positive: a = {a}, b = {b}, d = {d}"
        )));
    }
    Ok(())
}

/// Solve the semi-wave problem for a given speed parameter k.
pub fn solve_semiwave(a: f64, b: f64, d: f64, k: f64) -> Result<SemiWaveProfile> {
    check_coeffs(a, b, d)?;
    let limit = 2.0 * (a * d).sqrt();
    if !(k >= 0.0) || k >= limit {
        return Err(Error::NotInSpeedRange { k, limit });
    }
    match backward_from_saddle(a, b, d, k)? {
        Backward::Crossed { slope, r_cross, points } => {
            // shift so the crossing sits at r = 0 and reorder to increasing r
            let mut grid: Vec<f64> = Vec::with_capacity(points.len());
            let mut values: Vec<f64> = Vec::with_capacity(points.len());
            let mut slopes: Vec<f64> = Vec::with_capacity(points.len());
            for pt in points.iter().rev() {
                let r = pt.r - r_cross;
                // the event-located crossing can sit a hair beyond the
                // last accepted point; drop non-monotone duplicates
                if let Some(&last) = grid.last() {
                    if r <= last {
                        continue;
                    }
                }
                grid.push(r);
                values.push(pt.u.max(0.0));
                slopes.push(pt.p);
            }
            values[0] = 0.0;
            Ok(SemiWaveProfile { k, a, b, d, slope0: slope, grid, values, slopes })
        }
        Backward::Underflow => Err(Error::IntegrationFailure(format!(
            "semi-wave slope at k = {k} is below resolvable amplitude"
        ))),
    }
}

/// The spreading-speed constant: the unique k in (0, 2*sqrt(ad)) with
/// `mu U_k'(0) = k`, found by bisection on the strictly decreasing
/// g(k) = mu U_k'(0) - k. Absolute tolerance 1e-8 * sqrt(ad).
pub fn find_k0(mu: f64, a: f64, b: f64, d: f64) -> Result<f64> {
    check_coeffs(a, b, d)?;
    if !(mu > 0.0) {
        return Err(Error::InvalidParams(format!("mu must be positive, got {mu}")));
    }
    let s = (a * d).sqrt();
    let delta = 1e-6 * s;
    let (mut lo, mut hi) = (delta, 2.0 * s - delta);
    let g = |k: f64| -> Result<f64> { Ok(mu * slope_or_zero(a, b, d, k)? - k) };
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::BracketFailure { lo, hi, g_lo, g_hi });
    }
    while hi - lo > 1e-8 * s {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
