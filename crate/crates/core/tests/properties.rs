use proptest::prelude::*;

use tra_spectrum::orthopoly::{gauss_rule, QuadratureKind};
use tra_spectrum::potential::{classify_configuration, eval_potential_real};
use tra_spectrum::pps::{sigma_eigenvalues, u1_from_eta};
use tra_spectrum::tra::{basis_params, build_j, build_sigma, pt_spectrum};
use tra_spectrum::PotentialParams;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_is_affine_in_j(
        eps in -40.0f64..-1e-3,
        u0 in 0.1f64..5.0,
        u1 in -80.0f64..0.0,
        u2 in -50.0f64..150.0,
        n in 1usize..30,
    ) {
        let j = build_j(eps, u0, u1, u2, n).unwrap();
        let b = basis_params(eps, u0).unwrap();
        let s = build_sigma(b.mu, b.nu, u2, n);
        let eta = 0.25 - 2.0 * u1;
        for k in 0..n {
            prop_assert!((4.0 * j.diag[k] + eta - s.diag[k]).abs() <= 1e-9 * (1.0 + s.diag[k].abs()));
        }
        for k in 0..n - 1 {
            prop_assert!((4.0 * j.sub[k] - s.sub[k]).abs() <= 1e-12 * (1.0 + s.sub[k].abs()));
        }
    }

    #[test]
    fn sigma_eigenvalues_sorted_and_invert_to_u1(
        eps in -40.0f64..-1e-3,
        u0 in 0.1f64..5.0,
        u2 in -50.0f64..150.0,
        n in 1usize..25,
    ) {
        let etas = sigma_eigenvalues(eps, u0, u2, n).unwrap();
        prop_assert_eq!(etas.len(), n);
        prop_assert!(etas.windows(2).all(|w| w[0] <= w[1]));
        for eta in etas {
            prop_assert!((0.25 - 2.0 * u1_from_eta(eta) - eta).abs() <= 1e-12 * (1.0 + eta.abs()));
        }
    }

    #[test]
    fn gauss_weights_positive_with_total_mass(
        alpha in -0.9f64..6.0,
        beta in -0.9f64..6.0,
        k in 1usize..60,
    ) {
        for kind in [
            QuadratureKind::GaussLaguerre { alpha },
            QuadratureKind::GaussJacobi { alpha, beta },
        ] {
            let rule = gauss_rule(kind, k).unwrap();
            prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
            prop_assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            let total: f64 = rule.weights.iter().sum();
            prop_assert!((total - kind.total_mass()).abs() <= 1e-10 * kind.total_mass());
        }
    }

    #[test]
    fn configuration_is_scale_free(
        u0 in 0.05f64..5.0,
        u1 in -120.0f64..120.0,
        u2 in -150.0f64..150.0,
        lambda in 0.1f64..10.0,
    ) {
        let a = classify_configuration(&PotentialParams::from_reduced(1.0, [u0, u1, u2]).unwrap());
        let b = classify_configuration(&PotentialParams::from_reduced(lambda, [u0, u1, u2]).unwrap());
        prop_assert_eq!(a.kind, b.kind);
    }

    #[test]
    fn potential_scales_with_lambda(
        u in prop::array::uniform3(-50.0f64..50.0),
        lambda in 0.2f64..5.0,
        r in 0.05f64..4.0,
    ) {
        let u = [u[0].abs() + 0.1, u[1], u[2]];
        let a = eval_potential_real(&PotentialParams::from_reduced(1.0, u).unwrap(), r).unwrap();
        let b = eval_potential_real(&PotentialParams::from_reduced(lambda, u).unwrap(), r / lambda).unwrap();
        prop_assert!((lambda * lambda * a - b).abs() <= 1e-9 * (1.0 + b.abs()));
    }

    #[test]
    fn poschl_teller_levels_are_negative_and_ascending(
        u0 in 0.0f64..10.0,
        u1 in -200.0f64..0.1,
    ) {
        let levels = pt_spectrum(u0, u1).unwrap();
        prop_assert!(levels.iter().all(|&e| e < 0.0));
        prop_assert!(levels.windows(2).all(|w| w[0] < w[1]));
    }
}
