use nonlocal_core::analysis::{qr_value, Radius};
use nonlocal_core::datum::{Datum, DatumPiece};
use nonlocal_core::eulerian::EulerianRun;
use nonlocal_core::fields::GridSpec;
use nonlocal_core::kernels::{make_smoothed_kernel, make_step_kernel};
use nonlocal_core::lagrangian::{seed_from_datum, LagrangianRun};
use nonlocal_core::velocity::{make_affine_desired_velocity, make_identity_velocity};
use proptest::prelude::*;

fn two_bumps(a: f64, w: f64, v1: f64, v2: f64) -> Datum {
    Datum::new(vec![DatumPiece::interval(a, a + w, v1), DatumPiece::interval(a + w + 0.1, a + 2.0 * w + 0.1, v2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smoothed_kernel_has_unit_mass(alpha in 0.0f64..=1.0, n in 3u32..200) {
        let k = make_smoothed_kernel(alpha, n).unwrap();
        prop_assert!((k.kernel().integral().unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(k.kernel().lipschitz().is_some());
    }

    #[test]
    fn particle_flow_conserves_mass_and_order(
        a in -0.2f64..0.2, w in 0.1f64..0.4, v1 in 0.1f64..2.0, v2 in 0.1f64..2.0, alpha in 0.0f64..=1.0,
    ) {
        let u0 = two_bumps(a, w, v1, v2);
        let ens = seed_from_datum(&u0, 300, &[(-1.0, 3.0)]).unwrap();
        let k = make_smoothed_kernel(alpha, 18).unwrap().into_kernel();
        let mut run = LagrangianRun::new(ens, k, make_identity_velocity(), 2e-3).unwrap();
        let m0 = run.ensemble().total_mass();
        run.advance_to(0.2).unwrap();
        prop_assert!(run.ensemble().is_ordered());
        prop_assert!((run.ensemble().total_mass() - m0).abs() < 1e-12 * m0);
        prop_assert!((m0 - u0.mass()).abs() < 1e-12 * m0);
    }

    #[test]
    fn upwind_scheme_is_positive_and_conservative(
        a in 0.0f64..0.3, w in 0.1f64..0.3, v1 in 0.1f64..2.0, v2 in 0.1f64..2.0, desired in 0.2f64..1.0,
    ) {
        let u0 = two_bumps(a, w, v1, v2);
        let spec = GridSpec::new(-0.5, 2.5, 300).unwrap();
        let mut run = EulerianRun::from_datum(
            &u0, spec, make_step_kernel(), make_affine_desired_velocity(desired), 0.5,
        ).unwrap();
        let m0 = run.field().mass();
        run.advance_to(0.3).unwrap();
        prop_assert!(run.field().values().iter().all(|&u| u >= 0.0));
        prop_assert!((run.field().mass() - m0).abs() < 1e-12 * m0);
    }

    #[test]
    fn weighted_distance_grows_with_radius(alpha1 in 0.0f64..=1.0, alpha2 in 0.0f64..=1.0, r in 0.1f64..5.0) {
        let u0 = two_bumps(0.0, 0.3, 1.0, 0.5);
        let flow = |alpha: f64| {
            let ens = seed_from_datum(&u0, 200, &[(-1.0, 3.0)]).unwrap();
            let k = make_smoothed_kernel(alpha, 18).unwrap().into_kernel();
            let mut run = LagrangianRun::new(ens, k, make_identity_velocity(), 2e-3).unwrap();
            run.advance_to(0.1).unwrap();
            run
        };
        let (f1, f2) = (flow(alpha1), flow(alpha2));
        let q_small = qr_value(&f1, &f2, Radius::Finite(r)).unwrap();
        let q_large = qr_value(&f1, &f2, Radius::Finite(2.0 * r)).unwrap();
        let q_inf = qr_value(&f1, &f2, Radius::Infinite).unwrap();
        prop_assert!(q_small >= 0.0);
        prop_assert!(q_small <= q_large + 1e-15);
        prop_assert!(q_large <= q_inf + 1e-15);
        prop_assert_eq!(qr_value(&f1, &f1, Radius::Infinite).unwrap(), 0.0);
    }
}
