use num_complex::Complex64;
use proptest::prelude::*;

use stablehcm::boundary::boundary_value;
use stablehcm::envelopes::{envelope_constants, sample_inverse_beta_power};
use stablehcm::hcm::{exp_stieltjes, HcmRepresentation, ThetaSpec};
use stablehcm::stable_core::{cdf_inverse_power, eval_g_real, tail_oscillatory};
use stablehcm::{QuadratureConfig, StableParams};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn g_is_positive(alpha in 0.1f64..0.9, lx in -4.0f64..4.0) {
        let p = StableParams::one_sided(alpha).unwrap();
        let x = 10f64.powf(lx);
        let g = eval_g_real(&p, x, &cfg()).unwrap();
        // Beyond delta x ~ 700 the value underflows.
        prop_assert!(g > 0.0 || (g == 0.0 && p.delta() * x > 700.0));
    }

    #[test]
    fn cdf_is_monotone(alpha in 0.1f64..0.9, lx in -3.0f64..3.0, step in 0.01f64..1.0) {
        let p = StableParams::one_sided(alpha).unwrap();
        let x = 10f64.powf(lx);
        let a = cdf_inverse_power(&p, x, &cfg()).unwrap();
        let b = cdf_inverse_power(&p, x * (1.0 + step), &cfg()).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && a <= b + 1e-15);
    }

    // P(S > y) = P(S^(-beta) < y^(-beta)), through two unrelated integrals.
    #[test]
    fn tail_matches_inverse_power_cdf(alpha in 0.2f64..0.8, ly in -1.5f64..1.5) {
        let p = StableParams::one_sided(alpha).unwrap();
        let y = 10f64.powf(ly);
        let t = tail_oscillatory(&p, y, &cfg()).unwrap();
        let c = cdf_inverse_power(&p, y.powf(-p.beta()), &cfg()).unwrap();
        prop_assert!((t - c).abs() < 1e-8, "{} vs {}", t, c);
    }

    #[test]
    fn theta_lies_in_unit_interval(alpha in 0.1f64..0.9, lr in -3.0f64..2.0) {
        let p = StableParams::one_sided(alpha).unwrap();
        let b = boundary_value(&p, 10f64.powf(lr), &cfg()).unwrap();
        prop_assert!(b.theta > 0.0 && b.theta < 1.0);
    }

    #[test]
    fn step_theta_closed_form(at in 0.01f64..50.0, height in -2.0f64..2.0, re in 0.05f64..20.0, im in -10.0f64..10.0) {
        let z = Complex64::new(re, im);
        let got = exp_stieltjes(&ThetaSpec::Step { at, height }, None, z, &cfg()).unwrap();
        let want = ((1.0 + at) / (z + at)).powf(height);
        prop_assert!((got - want).norm() <= 1e-10 * want.norm());
    }

    #[test]
    fn constant_theta_is_a_power(c in -3.0f64..3.0, re in 0.05f64..20.0, im in -10.0f64..10.0) {
        let z = Complex64::new(re, im);
        let got = exp_stieltjes(&ThetaSpec::Constant { value: c }, None, z, &cfg()).unwrap();
        prop_assert!((got - z.powf(-c)).norm() <= 1e-12 * got.norm());
    }

    #[test]
    fn representation_json_round_trip(coef in 0.1f64..3.0, exponent in -0.9f64..0.9, a in 0.0f64..2.0, b in 0.0f64..2.0) {
        let rep = HcmRepresentation::new(1.5, a, b, ThetaSpec::Power { coef, exponent }).unwrap();
        prop_assert_eq!(HcmRepresentation::from_json(&rep.to_json()).unwrap(), rep);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn sampler_replays_from_seed(seed in any::<u64>()) {
        let p = StableParams::one_sided(0.45).unwrap();
        let c = envelope_constants(&p, 60, &cfg()).unwrap();
        let a = sample_inverse_beta_power(&p, 300, seed, &c, &cfg()).unwrap();
        let b = sample_inverse_beta_power(&p, 300, seed, &c, &cfg()).unwrap();
        prop_assert_eq!(&a.samples, &b.samples);
        prop_assert!(a.samples.iter().all(|&x| x > 0.0 && x.is_finite()));
    }
}
