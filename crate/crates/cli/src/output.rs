//! Artifact writers shared by the subcommands: run manifests, trajectory
//! CSV, and the human-readable summary. Everything written here is a pure
//! function of the resolved inputs, so repeated runs produce bit-identical
//! files.

use crate::config::Scenario;
use crate::CliError;
use fbcomp_core::analysis::{self, ClassifyTolerances};
use fbcomp_core::fbsolver::SimOutcome;
use fbcomp_core::model::{classify_regime, Regime};
use fbcomp_core::trajectory::{Termination, Trajectory};
use std::fs;
use std::path::Path;

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

/// Every run records the fully resolved scenario and the code version.
/// The output path is where the manifest lives, not part of the run's
/// identity, so it is not echoed back.
pub fn manifest(command: &str, scenario: &Scenario) -> String {
    let mut resolved = scenario.clone();
    resolved.out = None;
    format!(
        "fbcomp {}\ncommand: {command}\n\n{}",
        env!("CARGO_PKG_VERSION"),
        resolved.to_config_string()
    )
}

/// Re-check the recorded invariants (positivity, sup bounds, monotone
/// front); the solver aborts on violations, so a completed run must audit
/// clean — this block just makes that visible in the summary.
pub fn audit_block(traj: &Trajectory, scenario: &Scenario) -> String {
    let p = &scenario.params;
    let init = &scenario.initial;
    let bound_u = p.u_capacity().max(init.u0.eval(0.0, p.h0)) * (1.0 + 1e-6);
    let bound_v = p.v_capacity().max(init.v0.eval(0.0, p.h0)) * (1.0 + 1e-6);
    let mut violations = 0usize;
    let mut h_last = f64::NEG_INFINITY;
    for r in &traj.records {
        if r.min_u < -1e-12 || r.min_v < -1e-12 || r.sup_u > bound_u || r.sup_v > bound_v
            || r.h < h_last - 1e-12
        {
            violations += 1;
        }
        h_last = r.h;
    }
    format!(
        "invariant audit: positivity, sup bounds (u <= {bound_u:.6}, v <= {bound_v:.6}), monotone front: {violations} violations"
    )
}

pub fn summary(scenario: &Scenario, outcome: &SimOutcome) -> String {
    let p = &scenario.params;
    let last = outcome.trajectory.last();
    let mut s = String::new();
    if let Some(name) = &scenario.name {
        s.push_str(&format!("scenario: {name}\n"));
    }
    let regime = classify_regime(p);
    match &regime {
        Ok(r) => s.push_str(&format!("regime: {r}\n")),
        Err(e) => s.push_str(&format!("regime: undetermined ({e})\n")),
    }
    s.push_str(&format!(
        "termination: {}\n",
        match outcome.termination {
            Termination::Horizon => "horizon reached",
            Termination::DomainExhausted => "front reached the domain guard (0.9 L_v)",
        }
    ));
    s.push_str(&format!(
        "t_final: {}\nh_final: {}\nsup_u_final: {:e}\nsup_v_final: {:e}\n",
        last.t, last.h, last.sup_u, last.sup_v
    ));
    match regime {
        Ok(Regime::SuperiorU) => {
            let tol = ClassifyTolerances::default();
            match analysis::classify(&outcome.trajectory, p, &tol) {
                Ok(cls) => {
                    s.push_str(&format!("verdict: {} ({})\n", cls.verdict, cls.note));
                    s.push_str(&format!("vanishing_bound: {}\n", cls.vanishing_bound));
                    if cls.verdict == analysis::Verdict::Spreading {
                        match analysis::estimate_speed(&outcome.trajectory, p, &cls) {
                            Ok(est) => s.push_str(&format!(
                                "speed: c_hat = {:.6} vs k0 sandwich [{:.6}, {:.6}], within 10%: {}\n",
                                est.c_hat,
                                est.lower,
                                est.upper,
                                if est.within_sandwich() { "yes" } else { "no" }
                            )),
                            Err(e) => s.push_str(&format!("speed: not estimated ({e})\n")),
                        }
                    }
                }
                Err(e) => s.push_str(&format!("verdict: unavailable ({e})\n")),
            }
        }
        Ok(Regime::InferiorU) => {
            match analysis::inferior_longtime_check(
                &outcome.trajectory,
                &outcome.state,
                p,
                &scenario.grid,
            ) {
                Ok(rep) => {
                    s.push_str(&format!(
                        "inferior long-time check: {}\n  sup u = {:e}, h' = {:e}, sup |v - a2/c2| on [0, L_v/2] = {:e}\n",
                        if rep.pass { "pass" } else { "fail" },
                        rep.sup_u_final,
                        rep.h_prime_final,
                        rep.v_deviation
                    ));
                    for note in &rep.notes {
                        s.push_str(&format!("  note: {note}\n"));
                    }
                }
                Err(e) => s.push_str(&format!("inferior long-time check: unavailable ({e})\n")),
            }
        }
        _ => {}
    }
    s.push_str(&audit_block(&outcome.trajectory, scenario));
    s.push('\n');
    s
}
