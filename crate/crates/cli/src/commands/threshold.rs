use crate::config::Scenario;
use crate::output;
use crate::CliError;
use fbcomp_core::analysis::{find_mu_star, MuStarOptions};
use fbcomp_core::error::Error;
use std::path::Path;

/// Bisect mu* for the scenario; write the probe history as CSV and report
/// the bracket. A horizon-exhausted or invalid-bracket outcome exits with
/// the inconclusive code.
pub fn run(scenario: &Scenario, bracket: (f64, f64), rel_tol: f64, out_dir: &Path) -> Result<(), CliError> {
    output::ensure_dir(out_dir)?;
    let opts = MuStarOptions { rel_tol, ..MuStarOptions::default() };
    let result = find_mu_star(
        &scenario.params,
        &scenario.initial,
        bracket,
        &scenario.grid,
        &opts,
    )
    .map_err(|e| match e {
        Error::HorizonExhausted(_) | Error::BracketInvalid { .. } => {
            CliError::Inconclusive(e.to_string())
        }
        other => CliError::Solver(other),
    })?;

    let mut csv = String::from("mu,verdict,horizon\n");
    for probe in &result.history {
        csv.push_str(&format!("{},{},{}\n", probe.mu, probe.verdict, probe.horizon));
    }
    output::write_file(&out_dir.join("threshold_history.csv"), &csv)?;
    output::write_file(&out_dir.join("manifest.txt"), &output::manifest("threshold", scenario))?;
    if result.history.is_empty() {
        println!(
            "mu_star = 0 (h0 = {} already at the vanishing bound; no simulations run)",
            scenario.params.h0
        );
    } else {
        println!(
            "mu_star = {} (bracket width {}, {} probes)",
            result.mu_star,
            result.bracket_width,
            result.history.len()
        );
    }
    Ok(())
}
