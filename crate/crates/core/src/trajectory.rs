//! Time series of run diagnostics, shared by the front-fixing solver and
//! the explicit reference solver so their outputs diff directly.

/// One diagnostic record.
///
/// `mass_u` is the weighted mass `integral_0^h r^{N-1} u dr` by the
/// composite trapezoid rule in the physical coordinate. `cum_flux` and
/// `cum_react` accumulate the boundary-flux and reaction terms of the mass
/// identity over time; their increments per record interval feed the
/// mass-balance residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub h: f64,
    pub h_prime: f64,
    pub sup_u: f64,
    pub sup_v: f64,
    pub mass_u: f64,
    pub min_u: f64,
    pub min_v: f64,
    pub cum_flux: f64,
    pub cum_react: f64,
}

/// How a simulation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Ran to the requested horizon.
    Horizon,
    /// The front reached the 0.9 * L_v guard; the trajectory up to that
    /// point is valid (and is strong evidence of spreading).
    DomainExhausted,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
}

impl Trajectory {
    pub fn first(&self) -> &TrajectoryRecord {
        self.records.first().expect("trajectory is never empty")
    }

    pub fn last(&self) -> &TrajectoryRecord {
        self.records.last().expect("trajectory is never empty")
    }

    /// Records in the trailing time window `[t_last * (1 - fraction), t_last]`.
    pub fn tail(&self, fraction: f64) -> &[TrajectoryRecord] {
        let t_last = self.last().t;
        let cut = t_last * (1.0 - fraction);
        let start = self.records.partition_point(|r| r.t < cut);
        &self.records[start.min(self.records.len() - 1)..]
    }

    /// Serialize with the canonical header `t,h,h_prime,sup_u,sup_v,mass_u`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,h,h_prime,sup_u,sup_v,mass_u\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.t, r.h, r.h_prime, r.sup_u, r.sup_v, r.mass_u
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64, h: f64) -> TrajectoryRecord {
        TrajectoryRecord {
            t,
            h,
            h_prime: 0.0,
            sup_u: 1.0,
            sup_v: 1.0,
            mass_u: 0.5,
            min_u: 0.0,
            min_v: 0.0,
            cum_flux: 0.0,
            cum_react: 0.0,
        }
    }

    #[test]
    fn csv_header_is_canonical() {
        let traj = Trajectory { records: vec![rec(0.0, 1.0), rec(1.0, 2.0)] };
        let csv = traj.to_csv();
        assert!(csv.starts_with("t,h,h_prime,sup_u,sup_v,mass_u\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn tail_window() {
        let traj = Trajectory {
            records: (0..=10).map(|i| rec(i as f64, 1.0)).collect(),
        };
        let tail = traj.tail(0.25);
        assert_eq!(tail.first().unwrap().t, 8.0);
        assert_eq!(tail.last().unwrap().t, 10.0);
    }
}
