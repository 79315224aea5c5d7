//! Thomas algorithm for the tridiagonal systems assembled by the implicit
//! diffusion steps. The assembly there always produces diagonally dominant
//! rows (the identity contributes a margin of 1), so a non-dominant row is
//! reported as an assembly bug rather than silently pivoted around.

use crate::error::{Error, Result};

/// Solve the tridiagonal system with `lower[i] x[i-1] + diag[i] x[i] +
/// upper[i] x[i+1] = rhs[i]` (lower[0] and upper[n-1] are ignored).
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(n >= 2, "tridiagonal system needs at least 2 rows");
    assert_eq!(lower.len(), n);
    assert_eq!(upper.len(), n);
    assert_eq!(rhs.len(), n);
    for i in 0..n {
        let off = if i == 0 {
            upper[0].abs()
        } else if i == n - 1 {
            lower[n - 1].abs()
        } else {
            lower[i].abs() + upper[i].abs()
        };
        if diag[i].abs() < off {
            return Err(Error::NotDiagonallyDominant(i));
        }
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}
