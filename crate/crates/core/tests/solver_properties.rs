//! Cross-module consistency properties of the front-fixing solver that are
//! too heavy for in-module unit tests.

use fbcomp_core::analysis::{classify, ClassifyTolerances, Verdict};
use fbcomp_core::fbsolver::{simulate, GridSpec};
use fbcomp_core::model::{InitialData, ModelParams, RadialProfile};
use fbcomp_core::presets;

/// First-order-in-dt, second-order-in-space consistency: quartering both
/// dt and drho^2 must not shrink the h(t_end) error by less than 4x at the
/// coarse end of the triple.
#[test]
fn grid_convergence_triple() {
    let preset = presets::scalar_logistic();
    let p = preset.params.with_mu(1.0);
    let init = InitialData {
        u0: RadialProfile::QuadraticBump { amplitude: 0.5 },
        v0: RadialProfile::Constant { value: 0.0 },
    };
    let mut hs = Vec::new();
    for k in 0..3u32 {
        let g = GridSpec {
            m_u: 128 << k,
            m_v: 64 << k,
            l_v: 12.0,
            dt: 8e-3 / 4.0f64.powi(k as i32),
            t_end: 2.0,
            output_stride: 1000,
        };
        hs.push(simulate(&p, &init, &g).unwrap().state.h);
    }
    let d12 = (hs[0] - hs[1]).abs();
    let d23 = (hs[1] - hs[2]).abs();
    assert!(
        d12 <= 4.0 * d23,
        "refinement ratio {} above 4: h = {hs:?}",
        d12 / d23
    );
    // and the refinements genuinely converge
    assert!(d23 < d12);
}

/// Classification is monotone in mu at fixed horizon: spreading at mu
/// implies spreading at every larger mu, via the front-ordering property.
#[test]
fn classify_monotone_in_mu() {
    let base = presets::superior_baseline();
    let p = base.params.with_h0(0.45);
    let init = InitialData::default_for(&p);
    let g = GridSpec { m_u: 128, m_v: 240, l_v: 12.0, dt: 2e-3, t_end: 60.0, output_stride: 25 };
    let tol = ClassifyTolerances::default();
    let verdicts: Vec<Verdict> = [0.1, 0.4, 1.5, 6.0]
        .iter()
        .map(|&mu| {
            let out = simulate(&p.with_mu(mu), &init, &g).unwrap();
            classify(&out.trajectory, &p.with_mu(mu), &tol).unwrap().verdict
        })
        .collect();
    let mut seen_spreading = false;
    for v in &verdicts {
        match v {
            Verdict::Spreading => seen_spreading = true,
            Verdict::Vanishing => {
                assert!(!seen_spreading, "vanishing above a spreading mu: {verdicts:?}")
            }
            Verdict::Undetermined => {}
        }
    }
    assert!(verdicts.first() == Some(&Verdict::Vanishing));
    assert!(verdicts.last() == Some(&Verdict::Spreading));
}

/// The front-fixing scheme reduces exactly to the fixed-ball problem when
/// the Stefan coefficient vanishes: h frozen, u decaying under Dirichlet
/// conditions on a subcritical ball against an established native.
#[test]
fn mu_zero_limit_vanishes() {
    let base = presets::superior_baseline();
    // h0 below the scalar critical radius for (d1, a1)
    let p = base.params.with_mu(0.0).with_h0(0.45);
    let init = InitialData::default_for(&p);
    let g = GridSpec { m_u: 128, m_v: 160, l_v: 8.0, dt: 2e-3, t_end: 40.0, output_stride: 25 };
    let out = simulate(&p, &init, &g).unwrap();
    assert_eq!(out.state.h, 0.45);
    let cls = classify(&out.trajectory, &p, &ClassifyTolerances::default()).unwrap();
    assert_eq!(cls.verdict, Verdict::Vanishing);
}
