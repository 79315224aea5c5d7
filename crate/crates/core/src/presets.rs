//! Named built-in scenarios. These are the tuned baselines the CLI exposes
//! and the integration suites exercise; grids are sized so the default
//! horizon decides the run on commodity hardware in seconds.

use crate::fbsolver::GridSpec;
use crate::model::{InitialData, ModelParams, RadialProfile};

/// A fully specified run: coefficients, initial data, grid.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub params: ModelParams,
    pub initial: InitialData,
    pub grid: GridSpec,
}

/// Superior invader baseline: (a1, a2, b1, b2, c1, c2) = (3, 1, 1, 1, 1, 1),
/// unit diffusion, h0 = 0.8, native species established at capacity.
/// With the default mu = 8 the invader spreads well inside the horizon;
/// small mu vanishes against the bound (pi/2)/sqrt(2).
pub fn superior_baseline() -> Preset {
    let params = ModelParams {
        d1: 1.0,
        d2: 1.0,
        a1: 3.0,
        a2: 1.0,
        b1: 1.0,
        b2: 1.0,
        c1: 1.0,
        c2: 1.0,
        mu: 8.0,
        h0: 0.8,
        dim: 1,
    };
    Preset {
        params,
        initial: InitialData::default_for(&params),
        grid: GridSpec {
            m_u: 256,
            m_v: 700,
            l_v: 70.0,
            dt: 1e-3,
            t_end: 20.0,
            output_stride: 20,
        },
    }
}

/// Roles swapped: the invader is the inferior competitor
/// ((a1, a2) = (1, 3)) and dies out against an established native.
pub fn inferior_baseline() -> Preset {
    let params = ModelParams {
        d1: 1.0,
        d2: 1.0,
        a1: 1.0,
        a2: 3.0,
        b1: 1.0,
        b2: 1.0,
        c1: 1.0,
        c2: 1.0,
        mu: 1.0,
        h0: 0.8,
        dim: 1,
    };
    Preset {
        params,
        initial: InitialData::default_for(&params),
        grid: GridSpec {
            m_u: 256,
            m_v: 400,
            l_v: 20.0,
            dt: 1e-3,
            t_end: 20.0,
            output_stride: 20,
        },
    }
}

/// Scalar free-boundary logistic, embedded in the two-species solver by
/// v0 = 0 (v then stays identically zero and u decouples). c1 is kept
/// tiny-positive so the parameter set is strictly superior-u and the
/// vanishing bound coincides with the scalar threshold pi/2 to 3e-10.
pub fn scalar_logistic() -> Preset {
    let params = ModelParams {
        d1: 1.0,
        d2: 1.0,
        a1: 1.0,
        a2: 0.5,
        b1: 1.0,
        b2: 1.0,
        c1: 1e-9,
        c2: 1.0,
        mu: 10.0,
        h0: 1.0,
        dim: 1,
    };
    Preset {
        params,
        initial: InitialData {
            u0: RadialProfile::QuadraticBump { amplitude: 0.5 },
            v0: RadialProfile::Constant { value: 0.0 },
        },
        grid: GridSpec {
            m_u: 256,
            m_v: 32,
            l_v: 80.0,
            dt: 2e-3,
            t_end: 50.0,
            output_stride: 25,
        },
    }
}

/// Look up a preset by CLI name.
pub fn by_name(name: &str) -> Option<Preset> {
    match name {
        "superior-baseline" => Some(superior_baseline()),
        "inferior-baseline" => Some(inferior_baseline()),
        "scalar-logistic" => Some(scalar_logistic()),
        _ => None,
    }
}

/// Names accepted by `by_name`.
pub const NAMES: [&str; 3] = ["superior-baseline", "inferior-baseline", "scalar-logistic"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_regime, Regime};

    #[test]
    fn presets_are_valid_and_in_regime() {
        for name in NAMES {
            let preset = by_name(name).unwrap();
            preset.params.validate().unwrap();
            preset.initial.validate().unwrap();
            preset.grid.validate(&preset.params).unwrap();
        }
        assert_eq!(
            classify_regime(&superior_baseline().params).unwrap(),
            Regime::SuperiorU
        );
        assert_eq!(
            classify_regime(&inferior_baseline().params).unwrap(),
            Regime::InferiorU
        );
        assert_eq!(
            classify_regime(&scalar_logistic().params).unwrap(),
            Regime::SuperiorU
        );
    }

    #[test]
    fn unknown_name_is_none() {
        assert!(by_name("no-such-scenario").is_none());
    }
}
