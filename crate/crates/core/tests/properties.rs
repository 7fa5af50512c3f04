//! Randomized invariants over the configuration space.

use proptest::prelude::*;

use susydelta::{model, oracle, scattering, ConfigKind};

fn arb_kind() -> impl Strategy<Value = ConfigKind> {
    let s = 0.3f64..3.0;
    let d = 0.3f64..2.5;
    prop_oneof![
        (s.clone(), -0.5f64..0.5).prop_map(|(mu, g)| ConfigKind::DeltaStep { mu, g }),
        (s.clone(), d.clone()).prop_map(|(alpha, a)| ConfigKind::DoubleEqual { alpha, a }),
        (s.clone(), s.clone(), d.clone())
            .prop_map(|(alpha, beta, a)| ConfigKind::DoubleUnequal { alpha, beta, a }),
        (s.clone(), s.clone(), s.clone(), d.clone())
            .prop_map(|(alpha, mu, beta, a)| ConfigKind::TripleUnequal { alpha, mu, beta, a }),
        (s, d).prop_map(|(alpha, a)| ConfigKind::TripleAlternating { alpha, a }),
    ]
}

fn open_energy(kind: ConfigKind, offset: f64) -> f64 {
    let w = model::build_superpotential(kind).unwrap();
    w.slopes.iter().map(|v| v * v).fold(0.0, f64::max) + offset
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flux_is_conserved(kind in arb_kind(), offset in 0.05f64..30.0, sector in 0u8..2) {
        let e = open_energy(kind, offset);
        let amps = scattering::amplitudes_for(kind, e, sector).unwrap();
        prop_assert!(amps.flux_residual() < 1e-11);
    }

    #[test]
    fn sectors_share_moduli(kind in arb_kind(), offset in 0.05f64..30.0) {
        let e = open_energy(kind, offset);
        let a0 = scattering::amplitudes_for(kind, e, 0).unwrap();
        let a1 = scattering::amplitudes_for(kind, e, 1).unwrap();
        prop_assert!((a0.sigma_r.norm() - a1.sigma_r.norm()).abs() < 1e-11);
        prop_assert!((a0.rho_r.norm() - a1.rho_r.norm()).abs() < 1e-11);
    }

    #[test]
    fn transfer_matrix_composes(kind in arb_kind(), offset in 0.05f64..30.0) {
        let e = open_energy(kind, offset);
        let w = model::build_superpotential(kind).unwrap();
        let (pot, _) = model::partner_potentials(&w);
        let t = oracle::transfer_matrix(&pot, e);
        // det T = k_left / k_right for flux-normalized conventions.
        prop_assert!(t.det_residual < 1e-10);
    }

    #[test]
    fn config_json_round_trips(kind in arb_kind()) {
        let text = serde_json::to_string(&kind).unwrap();
        let back: ConfigKind = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(kind, back);
    }
}
