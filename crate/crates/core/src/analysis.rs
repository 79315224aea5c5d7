//! Long-time classification (spreading vs vanishing), the sharp-threshold
//! mu* bisection, spreading-speed estimation, and the long-time check for
//! the inferior-competitor regime.

use crate::eigen;
use crate::error::{Error, Result};
use crate::fbsolver::{simulate, GridSpec, SolverState};
use crate::model::{classify_regime, InitialData, ModelParams, Regime};
use crate::semiwave;
use crate::trajectory::{Termination, Trajectory};

/// Verdict of the spreading-vanishing dichotomy at a finite horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Spreading,
    Vanishing,
    /// Finite-horizon numerics cannot decide arbitrarily marginal cases;
    /// undetermined is a first-class outcome, not a failure.
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Classification thresholds. Defaults: spreading once h exceeds the
/// vanishing bound by 5% (absorbs grid error without giving up the
/// threshold logic); vanishing needs both a tiny invader sup-norm and a
/// flat front, sustained over the trailing 10% of the horizon.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyTolerances {
    /// Multiplier on the vanishing bound that triggers Spreading.
    pub spreading_margin: f64,
    /// Vanishing requires sup u below this fraction of a1/b1.
    pub vanishing_sup_frac: f64,
    /// ... and h' below this fraction of sqrt(a1 d1).
    pub vanishing_front_frac: f64,
    /// Trailing window fraction over which both must hold.
    pub tail_fraction: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        ClassifyTolerances {
            spreading_margin: 1.05,
            vanishing_sup_frac: 1e-3,
            vanishing_front_frac: 1e-5,
            tail_fraction: 0.10,
        }
    }
}

/// Which criterion fired, with its supporting numbers.
#[derive(Debug, Clone)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub h_final: f64,
    pub sup_u_final: f64,
    pub vanishing_bound: f64,
    pub horizon: f64,
    /// Human-readable note on the criterion that fired.
    pub note: String,
}

/// Decide the dichotomy from a finished trajectory (complete, or terminated
/// by the domain guard, which only ever happens on strongly spreading runs).
pub fn classify(
    traj: &Trajectory,
    p: &ModelParams,
    tol: &ClassifyTolerances,
) -> Result<ClassificationResult> {
    let regime = classify_regime(p)?;
    if regime != Regime::SuperiorU {
        return Err(Error::WrongRegime { expected: "SuperiorU", got: regime.to_string() });
    }
    let vb = eigen::vanishing_bound(p)?;
    let last = traj.last();
    let base = ClassificationResult {
        verdict: Verdict::Undetermined,
        h_final: last.h,
        sup_u_final: last.sup_u,
        vanishing_bound: vb,
        horizon: last.t,
        note: String::new(),
    };
    if traj.first().h >= vb {
        return Ok(ClassificationResult {
            verdict: Verdict::Spreading,
            note: format!("h0 = {} already at the vanishing bound {vb}", traj.first().h),
            ..base
        });
    }
    if let Some(rec) = traj.records.iter().find(|r| r.h > vb * tol.spreading_margin) {
        return Ok(ClassificationResult {
            verdict: Verdict::Spreading,
            note: format!(
                "h crossed {} * vanishing bound at t = {}",
                tol.spreading_margin, rec.t
            ),
            ..base
        });
    }
    let sup_cap = tol.vanishing_sup_frac * p.u_capacity();
    let front_cap = tol.vanishing_front_frac * (p.a1 * p.d1).sqrt();
    let tail = traj.tail(tol.tail_fraction);
    if tail.len() >= 2
        && tail.iter().all(|r| r.sup_u < sup_cap && r.h_prime < front_cap)
    {
        return Ok(ClassificationResult {
            verdict: Verdict::Vanishing,
            note: format!(
                "sup u < {sup_cap:e} and h' < {front_cap:e} over the trailing {}%",
                100.0 * tol.tail_fraction
            ),
            ..base
        });
    }
    Ok(ClassificationResult { note: "neither criterion fired".into(), ..base })
}

/// Fitted front speed plus the semi-wave sandwich it must sit in.
#[derive(Debug, Clone, Copy)]
pub struct SpeedEstimate {
    /// Least-squares slope of h(t) over the trailing half of the run.
    pub c_hat: f64,
    /// k0(mu, a1 - a2 c1/c2, b1, d1).
    pub lower: f64,
    /// k0(mu, a1, b1, d1).
    pub upper: f64,
    /// Max |h - fit| over the fit window.
    pub residual: f64,
    /// Reporting tolerance used by `within_sandwich`.
    pub theta: f64,
}

impl SpeedEstimate {
    /// Whether lower (1 - theta) <= c_hat <= upper (1 + theta).
    pub fn within_sandwich(&self) -> bool {
        self.lower * (1.0 - self.theta) <= self.c_hat
            && self.c_hat <= self.upper * (1.0 + self.theta)
    }
}

/// Trailing-half least-squares fit of h(t) against the semi-wave sandwich.
/// Default reporting tolerance theta = 0.10 absorbs finite-time and grid
/// bias; the bounds themselves are asymptotic statements.
pub fn estimate_speed(
    traj: &Trajectory,
    p: &ModelParams,
    classification: &ClassificationResult,
) -> Result<SpeedEstimate> {
    if classification.verdict != Verdict::Spreading {
        return Err(Error::NotSpreading(format!(
            "verdict was {:?}",
            classification.verdict
        )));
    }
    let tail = traj.tail(0.5);
    if tail.len() < 20 {
        return Err(Error::NotSpreading(format!(
            "trailing window has only {} records (>= 20 required)",
            tail.len()
        )));
    }
    let n = tail.len() as f64;
    let (mut st, mut sh, mut stt, mut sth) = (0.0, 0.0, 0.0, 0.0);
    for r in tail {
        st += r.t;
        sh += r.h;
        stt += r.t * r.t;
        sth += r.t * r.h;
    }
    let denom = n * stt - st * st;
    let slope = (n * sth - st * sh) / denom;
    let intercept = (sh - slope * st) / n;
    let residual = tail
        .iter()
        .map(|r| (r.h - (slope * r.t + intercept)).abs())
        .fold(0.0f64, f64::max);
    let a_eff = p.effective_growth();
    if a_eff <= 0.0 {
        return Err(Error::InvalidRegime(
            "speed sandwich needs a1 - a2 c1/c2 > 0".into(),
        ));
    }
    let lower = semiwave::find_k0(p.mu, a_eff, p.b1, p.d1)?;
    let upper = semiwave::find_k0(p.mu, p.a1, p.b1, p.d1)?;
    Ok(SpeedEstimate { c_hat: slope, lower, upper, residual, theta: 0.10 })
}

/// Bisection controls for the sharp threshold.
#[derive(Debug, Clone, Copy)]
pub struct MuStarOptions {
    /// Stop once the bracket width drops below this fraction of its midpoint.
    pub rel_tol: f64,
    /// Horizon-doubling cap, as a multiple of the GridSpec horizon.
    pub horizon_cap_factor: u32,
    pub tolerances: ClassifyTolerances,
}

impl Default for MuStarOptions {
    fn default() -> Self {
        MuStarOptions {
            rel_tol: 0.01,
            horizon_cap_factor: 16,
            tolerances: ClassifyTolerances::default(),
        }
    }
}

/// One bisection probe.
#[derive(Debug, Clone)]
pub struct MuProbe {
    pub mu: f64,
    pub verdict: Verdict,
    pub horizon: f64,
}

#[derive(Debug, Clone)]
pub struct MuStarResult {
    pub mu_star: f64,
    pub bracket_width: f64,
    pub history: Vec<MuProbe>,
}

fn probe_mu(
    p: &ModelParams,
    init: &InitialData,
    g: &GridSpec,
    mu: f64,
    opts: &MuStarOptions,
    history: &mut Vec<MuProbe>,
) -> Result<Verdict> {
    let p_mu = p.with_mu(mu);
    let mut horizon = g.t_end;
    let cap = g.t_end * opts.horizon_cap_factor as f64;
    loop {
        let outcome = simulate(&p_mu, init, &g.with_t_end(horizon))?;
        let result = classify(&outcome.trajectory, &p_mu, &opts.tolerances)?;
        if result.verdict != Verdict::Undetermined
            || outcome.termination == Termination::DomainExhausted
        {
            history.push(MuProbe { mu, verdict: result.verdict, horizon });
            return Ok(result.verdict);
        }
        if horizon * 2.0 > cap {
            history.push(MuProbe { mu, verdict: Verdict::Undetermined, horizon });
            return Err(Error::HorizonExhausted(horizon));
        }
        horizon *= 2.0;
    }
}

/// Bisect the sharp Stefan-coefficient threshold mu* on a validated
/// bracket, relying on the monotonicity of the front trajectory in mu.
/// When h0 already sits at the vanishing bound, spreading happens for every
/// mu and mu* = 0 is returned without simulating.
pub fn find_mu_star(
    p: &ModelParams,
    init: &InitialData,
    bracket: (f64, f64),
    g: &GridSpec,
    opts: &MuStarOptions,
) -> Result<MuStarResult> {
    p.validate()?;
    let vb = eigen::vanishing_bound(p)?;
    if p.h0 >= vb {
        return Ok(MuStarResult { mu_star: 0.0, bracket_width: 0.0, history: Vec::new() });
    }
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParams(format!("bad bracket [{lo}, {hi}]")));
    }
    let mut history = Vec::new();
    let v_lo = probe_mu(p, init, g, lo, opts, &mut history)?;
    let v_hi = probe_mu(p, init, g, hi, opts, &mut history)?;
    if v_lo != Verdict::Vanishing || v_hi != Verdict::Spreading {
        return Err(Error::BracketInvalid {
            lo,
            lo_verdict: format!("{v_lo:?}"),
            hi,
            hi_verdict: format!("{v_hi:?}"),
        });
    }
    while hi - lo > opts.rel_tol * 0.5 * (hi + lo) {
        let mid = 0.5 * (lo + hi);
        match probe_mu(p, init, g, mid, opts, &mut history)? {
            Verdict::Spreading => hi = mid,
            Verdict::Vanishing => lo = mid,
            Verdict::Undetermined => unreachable!("probe never returns undetermined"),
        }
    }
    Ok(MuStarResult {
        mu_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        history,
    })
}

/// Pass/fail report of the inferior-competitor long-time behavior.
#[derive(Debug, Clone)]
pub struct InferiorReport {
    pub pass: bool,
    pub sup_u_final: f64,
    pub h_prime_final: f64,
    pub v_deviation: f64,
    pub notes: Vec<String>,
}

/// Check extinction of the inferior invader: sup u below 1e-3 of its
/// carrying capacity, a plateaued front, and v restored to a2/c2 within 2%
/// over the near half of the v-domain. Requires inf v0 > 0.
pub fn inferior_longtime_check(
    traj: &Trajectory,
    state: &SolverState,
    p: &ModelParams,
    g: &GridSpec,
) -> Result<InferiorReport> {
    let regime = classify_regime(p)?;
    if regime != Regime::InferiorU {
        return Err(Error::WrongRegime { expected: "InferiorU", got: regime.to_string() });
    }
    let last = traj.last();
    let mut notes = Vec::new();
    let sup_cap = 1e-3 * p.u_capacity();
    if !(last.sup_u < sup_cap) {
        notes.push(format!("sup u = {} not below {sup_cap:e}", last.sup_u));
    }
    let front_cap = 1e-5 * (p.a1 * p.d1).sqrt();
    if !(last.h_prime < front_cap) {
        notes.push(format!("h' = {:e}: front not plateaued", last.h_prime));
    }
    let v_target = p.v_capacity();
    let dr = g.dr_v();
    let mut v_dev = 0.0f64;
    for (i, &vi) in state.v.iter().enumerate() {
        if i as f64 * dr <= 0.5 * g.l_v {
            v_dev = v_dev.max((vi - v_target).abs());
        }
    }
    if !(v_dev < 0.02 * v_target) {
        notes.push(format!("sup |v - a2/c2| = {v_dev} on [0, L_v/2] not below 2%"));
    }
    Ok(InferiorReport {
        pass: notes.is_empty(),
        sup_u_final: last.sup_u,
        h_prime_final: last.h_prime,
        v_deviation: v_dev,
        notes,
    })
}
