use crate::CliError;
use fbcomp_core::semiwave::{find_k0, solve_semiwave};

/// Emit the speed constant k0 for a given mu, or a (k, slope0) table over
/// an evenly spaced grid in [0, 2 sqrt(ad)), as CSV on stdout.
pub fn run(a: f64, b: f64, d: f64, mu: Option<f64>, table_rows: Option<usize>) -> Result<(), CliError> {
    if !(a > 0.0 && b > 0.0 && d > 0.0) {
        return Err(CliError::Config(format!(
            "semi-wave coefficients must be positive: a = {a}, b = {b}, d = {d}"
        )));
    }
    match (mu, table_rows) {
        (Some(mu), None) => {
            if !(mu > 0.0) {
                return Err(CliError::Config(format!("mu must be positive, got {mu}")));
            }
            let k0 = find_k0(mu, a, b, d).map_err(CliError::Solver)?;
            println!("mu,a,b,d,k0");
            println!("{mu},{a},{b},{d},{k0}");
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(CliError::Config("table needs at least one row".into()));
            }
            let limit = 2.0 * (a * d).sqrt();
            println!("k,slope0");
            for i in 0..n {
                let k = i as f64 / n as f64 * limit;
                let profile = solve_semiwave(a, b, d, k).map_err(CliError::Solver)?;
                println!("{k},{}", profile.slope0);
            }
        }
        _ => {
            return Err(CliError::Config(
                "pass exactly one of --mu <value> or --table".into(),
            ))
        }
    }
    Ok(())
}
