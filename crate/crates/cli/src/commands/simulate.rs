use crate::config::Scenario;
use crate::output;
use crate::CliError;
use fbcomp_core::fbsolver::{simulate_observed, SolverState};
use std::path::Path;

/// Run one simulation; write `trajectory.csv`, `summary.txt`,
/// `manifest.txt`, and optional field snapshots into the output directory.
pub fn run(scenario: &Scenario, snapshot_times: &[f64], out_dir: &Path) -> Result<(), CliError> {
    output::ensure_dir(out_dir)?;
    let mut wanted: Vec<f64> = snapshot_times.to_vec();
    wanted.sort_by(|a, b| a.total_cmp(b));
    let mut snapshots: Vec<(f64, String, String)> = Vec::new();
    let mut next = 0usize;
    let p = scenario.params;
    let grid = scenario.grid;
    let outcome = simulate_observed(&p, &scenario.initial, &grid, |state: &SolverState| {
        while next < wanted.len() && state.t >= wanted[next] - 0.5 * grid.dt {
            snapshots.push((wanted[next], snapshot_u_csv(state), snapshot_v_csv(state, grid.l_v)));
            next += 1;
        }
    })
    .map_err(CliError::Solver)?;

    output::write_file(&out_dir.join("trajectory.csv"), &outcome.trajectory.to_csv())?;
    for (t_req, u_csv, v_csv) in &snapshots {
        output::write_file(&out_dir.join(format!("snapshot_t{t_req}_u.csv")), u_csv)?;
        output::write_file(&out_dir.join(format!("snapshot_t{t_req}_v.csv")), v_csv)?;
    }
    let summary = output::summary(scenario, &outcome);
    output::write_file(&out_dir.join("summary.txt"), &summary)?;
    output::write_file(&out_dir.join("manifest.txt"), &output::manifest("simulate", scenario))?;
    print!("{summary}");
    Ok(())
}

fn snapshot_u_csv(state: &SolverState) -> String {
    let m = state.u.len() - 1;
    let mut s = String::from("r,u\n");
    for (j, &uj) in state.u.iter().enumerate() {
        let r = j as f64 / m as f64 * state.h;
        s.push_str(&format!("{r},{uj}\n"));
    }
    s
}

fn snapshot_v_csv(state: &SolverState, l_v: f64) -> String {
    let m = state.v.len() - 1;
    let mut s = String::from("r,v\n");
    for (i, &vi) in state.v.iter().enumerate() {
        let r = i as f64 / m as f64 * l_v;
        s.push_str(&format!("{r},{vi}\n"));
    }
    s
}
