use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use hybrid_epr::chsh::{
    chsh_lhs, chsh_lhs_cm, scan, ChshSettings, ExtremumMode, ScanOptions, TSIRELSON_BOUND,
};
use hybrid_epr::correlation::{
    correlation_closed, correlation_cm, correlation_planar, correlation_trace, planar_dual,
    MeasurementSettings,
};
use hybrid_epr::decay::{cm_kinematics, BlochVector, InnerParity};
use hybrid_epr::dirac::{clifford_residual, gammas, max_entry_norm, v_amplitude, DiracAdjoint};
use hybrid_epr::minkowski::{FourVector, ThreeDirection};
use hybrid_epr::sampling::Sampler;

fn direction() -> impl Strategy<Value = ThreeDirection> {
    (0.0..PI, 0.0..TAU).prop_map(|(polar, azimuth)| ThreeDirection::from_angles(polar, azimuth))
}

fn bloch() -> impl Strategy<Value = BlochVector> {
    (direction(), 0.0..=1.0).prop_map(|(d, r)| {
        BlochVector::from_vector(d.into_vector() * r).expect("radius at most one")
    })
}

fn chsh_angles() -> impl Strategy<Value = [f64; 6]> {
    (0.0..PI, 0.0..TAU, 0.0..TAU, 0.0..PI, 0.0..TAU, 0.0..TAU)
        .prop_map(|(a, b, c, d, e, f)| [a, b, c, d, e, f])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn routes_agree_on_random_decays(seed in any::<u64>()) {
        let input = Sampler::new(seed).correlation_input().unwrap();
        let closed = correlation_closed(&input.kin, &input.xi, &input.settings, &input.a_k, InnerParity::Equal).unwrap();
        let trace = correlation_trace(&input.kin, &input.xi, &input.settings, &input.a_k, InnerParity::Equal).unwrap();
        prop_assert!((closed - trace).abs() < 1e-10, "closed {closed} trace {trace}");
        prop_assert!(closed.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn opposite_parity_flips_sign(seed in any::<u64>()) {
        let input = Sampler::new(seed).correlation_input().unwrap();
        for route in [correlation_closed, correlation_trace] {
            let c = route(&input.kin, &input.xi, &input.settings, &input.a_k, InnerParity::Equal).unwrap();
            let cp = route(&input.kin, &input.xi, &input.settings, &input.a_k, InnerParity::Opposite).unwrap();
            prop_assert!((c + cp).abs() < 1e-12);
        }
    }

    #[test]
    fn polarizer_period_is_pi(seed in any::<u64>()) {
        let input = Sampler::new(seed).correlation_input().unwrap();
        let turned = MeasurementSettings::new(input.settings.a, input.settings.theta + PI);
        let c = correlation_closed(&input.kin, &input.xi, &input.settings, &input.a_k, InnerParity::Equal).unwrap();
        let c_turned = correlation_closed(&input.kin, &input.xi, &turned, &input.a_k, InnerParity::Equal).unwrap();
        prop_assert!((c - c_turned).abs() < 1e-12);
    }

    #[test]
    fn rest_frame_matches_general_route(
        ratio in 1.001f64..10.0,
        n_p in direction(),
        xi in bloch(),
        a in direction(),
        theta in 0.0..TAU,
        turn in 0.0..TAU,
    ) {
        let kin = cm_kinematics(ratio, 1.0, &n_p).unwrap();
        let n_k = ThreeDirection::normalize(kin.k().spatial()).unwrap();
        let u = n_k.perpendicular();
        let w = n_k.as_vector().cross(u.as_vector());
        let a_k = ThreeDirection::normalize(u.as_vector() * turn.cos() + w * turn.sin()).unwrap();
        let s = MeasurementSettings::new(a, theta);
        let general = correlation_closed(&kin, &xi, &s, &a_k, InnerParity::Equal).unwrap();
        let rest = correlation_cm(&xi, &s, &n_k, &a_k).unwrap();
        prop_assert!((general - rest).abs() < 1e-10, "general {general} rest {rest}");
    }

    #[test]
    fn planar_formula_matches_both_routes(
        x in 0.0f64..50.0,
        psi in 0.01f64..(TAU - 0.01),
        polar in 0.0..PI,
        azimuth in 0.0..TAU,
        theta in 0.0..TAU,
        k0 in 0.05f64..20.0,
    ) {
        let s = MeasurementSettings::from_angles(polar, azimuth, theta);
        let dual = planar_dual(x, psi, &s, k0).unwrap();
        let formula = correlation_planar(x, psi, polar, azimuth, theta);
        prop_assert!((dual.closed - formula).abs() < 1e-10);
        prop_assert!(dual.difference() < 1e-10);
    }

    #[test]
    fn fermion_amplitude_is_normalized(px in -5.0f64..5.0, py in -5.0f64..5.0, pz in -5.0f64..5.0, m in 0.1f64..4.0) {
        let p = FourVector::new((m * m + px * px + py * py + pz * pz).sqrt(), px, py, pz);
        let v = v_amplitude(&p, m).unwrap();
        let residual = max_entry_norm(&(v.dirac_adjoint() * v - nalgebra::Matrix2::identity()));
        prop_assert!(residual < 1e-12 * (1.0 + p.t / m));
    }

    #[test]
    fn chsh_never_exceeds_tsirelson(x in 0.0f64..100.0, psi in 0.0..TAU, angles in chsh_angles()) {
        let s = ChshSettings::from_angles(angles);
        prop_assert!(chsh_lhs(x, psi, &s) <= TSIRELSON_BOUND + 1e-12);
        prop_assert!(chsh_lhs_cm(&s) <= TSIRELSON_BOUND + 1e-12);
    }

    #[test]
    fn settings_angles_round_trip(angles in chsh_angles()) {
        let s = ChshSettings::from_angles(angles);
        let back = ChshSettings::from_angles(s.to_angles());
        prop_assert!((s.a1.as_vector() - back.a1.as_vector()).norm() < 1e-12);
        prop_assert!((s.a2.as_vector() - back.a2.as_vector()).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scan_does_not_depend_on_thread_count(psi in 0.0..TAU, angles in chsh_angles()) {
        let s = ChshSettings::from_angles(angles);
        let opts = ScanOptions { mode: ExtremumMode::Max, threshold: Some(2.0), ..ScanOptions::default() };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| scan(|x| chsh_lhs(x, psi, &s), 0.0, 20.0, 128, &opts).unwrap())
        };
        let single = run(1);
        prop_assert_eq!(&single, &run(3));
        prop_assert_eq!(&single, &run(1));
    }
}

#[test]
fn clifford_relations_hold() {
    assert!(clifford_residual(&gammas()) < 1e-14);
}
