use crate::config::Scenario;
use crate::output;
use crate::CliError;
use fbcomp_core::analysis::{classify, estimate_speed, ClassifyTolerances, Verdict};
use fbcomp_core::fbsolver::simulate;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// One classified grid point. Errors are recorded in the verdict column so
/// a sweep never aborts on a single bad point.
#[derive(Debug, Clone)]
struct Row {
    mu: f64,
    h0: f64,
    verdict: String,
    h_final: Option<f64>,
    c_hat: Option<f64>,
}

impl Row {
    fn code(&self) -> f64 {
        match self.verdict.as_str() {
            "Vanishing" => 0.0,
            "Undetermined" => 0.5,
            "Spreading" => 1.0,
            _ => -1.0,
        }
    }
}

fn classify_point(scenario: &Scenario, mu: f64, h0: f64) -> Row {
    let p = scenario.params.with_mu(mu).with_h0(h0);
    let tol = ClassifyTolerances::default();
    match simulate(&p, &scenario.initial, &scenario.grid) {
        Ok(outcome) => {
            let h_final = Some(outcome.trajectory.last().h);
            match classify(&outcome.trajectory, &p, &tol) {
                Ok(cls) => {
                    let c_hat = (cls.verdict == Verdict::Spreading)
                        .then(|| estimate_speed(&outcome.trajectory, &p, &cls).ok())
                        .flatten()
                        .map(|est| est.c_hat);
                    Row { mu, h0, verdict: cls.verdict.to_string(), h_final, c_hat }
                }
                Err(e) => Row { mu, h0, verdict: format!("error:{}", error_tag(&e)), h_final, c_hat: None },
            }
        }
        Err(e) => Row { mu, h0, verdict: format!("error:{}", error_tag(&e)), h_final: None, c_hat: None },
    }
}

fn error_tag(e: &fbcomp_core::Error) -> &'static str {
    use fbcomp_core::Error::*;
    match e {
        WrongRegime { .. } => "WrongRegime",
        BoundaryRegime(..) => "BoundaryRegime",
        InvalidParams(_) => "InvalidParams",
        InvalidRegime(_) => "InvalidRegime",
        BoundBreach { .. } => "BoundBreach",
        FrontRetreat { .. } => "FrontRetreat",
        DomainExhausted { .. } => "DomainExhausted",
        _ => "SolverError",
    }
}

/// Classify every (mu, h0) grid point; points run concurrently up to the
/// worker count, results merged by grid order.
pub fn run(
    scenario: &Scenario,
    mu_grid: &[f64],
    h0_grid: &[f64],
    workers: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    output::ensure_dir(out_dir)?;
    let jobs: Vec<(f64, f64)> = h0_grid
        .iter()
        .flat_map(|&h0| mu_grid.iter().map(move |&mu| (mu, h0)))
        .collect();
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; jobs.len()]);
    let cursor = AtomicUsize::new(0);
    let n_workers = workers.max(1).min(jobs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..n_workers {
            scope.spawn(|| loop {
                let idx = cursor.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs.len() {
                    break;
                }
                let (mu, h0) = jobs[idx];
                let row = classify_point(scenario, mu, h0);
                rows.lock().unwrap()[idx] = Some(row);
            });
        }
    });
    let rows: Vec<Row> = rows.into_inner().unwrap().into_iter().map(Option::unwrap).collect();

    let mut csv = String::from("param1,param2,verdict,h_final,c_hat\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.mu,
            row.h0,
            row.verdict,
            row.h_final.map(|x| x.to_string()).unwrap_or_default(),
            row.c_hat.map(|x| x.to_string()).unwrap_or_default(),
        ));
    }
    output::write_file(&out_dir.join("phase.csv"), &csv)?;

    // gnuplot `plot 'phase_matrix.dat' matrix with image`
    let mut matrix = String::new();
    for (i, _) in h0_grid.iter().enumerate() {
        let line: Vec<String> = (0..mu_grid.len())
            .map(|j| rows[i * mu_grid.len() + j].code().to_string())
            .collect();
        matrix.push_str(&line.join(" "));
        matrix.push('\n');
    }
    output::write_file(&out_dir.join("phase_matrix.dat"), &matrix)?;
    output::write_file(&out_dir.join("manifest.txt"), &output::manifest("sweep", scenario))?;
    println!(
        "swept {} points ({} mu x {} h0) with {n_workers} workers -> {}",
        jobs.len(),
        mu_grid.len(),
        h0_grid.len(),
        out_dir.display()
    );
    Ok(())
}

/// Parse `lo:hi:n` into n linearly spaced values (inclusive endpoints).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Config(format!("grid `{spec}` must be lo:hi:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || hi < lo {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}
