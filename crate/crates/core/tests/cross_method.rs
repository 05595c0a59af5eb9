//! Agreement between the three solvers and convergence behaviour.

use num_complex::Complex64;
use tra_spectrum::cs::{
    bound_levels, classify_run, cs_potential_matrix, harris_eigenvalues, sweep_v1, CsConfig,
    StabilityOptions, DEFAULT_TOL_BOUND,
};
use tra_spectrum::hd::{hd_spectrum, hd_spectrum_with};
use tra_spectrum::pps::{pps_spectrum, PpsOptions};
use tra_spectrum::tra::{build_sigma, eval_p};
use tra_spectrum::PotentialParams;

const BOUND_ONLY: [f64; 3] = [1.0, -50.0, 2.0];
const RESONANT: [f64; 3] = [2.0, -80.0, 120.0];

fn pps(n: usize) -> Vec<f64> {
    let [u0, u1, u2] = BOUND_ONLY;
    pps_spectrum(u0, u1, u2, n, &PpsOptions::default())
        .unwrap()
        .energies()
}

#[test]
fn hd_ground_state_agrees_and_excited_states_degrade() {
    let [u0, u1, u2] = BOUND_ONLY;
    let reference = pps(50);
    let hd = hd_spectrum(u0, u1, u2, 50).unwrap();
    assert_eq!(hd.len(), 4);
    let err: Vec<f64> = hd
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b).abs())
        .collect();
    assert!(err[0] <= 1e-10, "ground state error {}", err[0]);
    assert!(err[3] > err[0]);
    assert!(err[3] > 1e-4);
}

#[test]
fn hd_depends_on_quadrature_order() {
    let [u0, u1, u2] = BOUND_ONLY;
    let a = hd_spectrum_with(u0, u1, u2, 30, 30).unwrap();
    let b = hd_spectrum_with(u0, u1, u2, 30, 60).unwrap();
    assert!((a[3] - b[3]).abs() > 1e-8);
}

#[test]
fn unrotated_complex_scaling_matches_pps() {
    let p = PotentialParams::from_reduced(1.0, BOUND_ONLY).unwrap();
    let cfg = CsConfig::new(BOUND_ONLY[0], 0, 10.0, 0.0, 50, None).unwrap();
    let set = harris_eigenvalues(&p, &cfg).unwrap();
    let cs = bound_levels(&set, DEFAULT_TOL_BOUND);
    let reference = pps(50);
    assert_eq!(cs.len(), reference.len());
    for (a, b) in cs.iter().zip(&reference) {
        assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
    }
}

#[test]
fn unrotated_spectrum_is_real() {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let cfg = CsConfig::new(RESONANT[0], 1, 25.0, 0.0, 40, None).unwrap();
    for e in harris_eigenvalues(&p, &cfg).unwrap().eigenvalues {
        assert!(e.im.abs() <= 1e-8 * (1.0 + e.norm()), "{e}");
    }
}

#[test]
fn lambda_rescales_energies() {
    let u = BOUND_ONLY;
    let cfg = CsConfig::new(u[0], 0, 10.0, 0.0, 30, None).unwrap();
    let a = harris_eigenvalues(&PotentialParams::from_reduced(1.0, u).unwrap(), &cfg).unwrap();
    let b = harris_eigenvalues(&PotentialParams::from_reduced(2.5, u).unwrap(), &cfg).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x * 6.25 - y).norm() <= 1e-9 * (1.0 + y.norm()));
    }
}

#[test]
fn resonance_stable_under_rotation_in_a_converged_basis() {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let target = Complex64::new(5.1433, -1.7366);
    let run = |theta: f64| {
        let cfg = CsConfig::new(RESONANT[0], 0, 40.0, theta, 120, None).unwrap();
        let set = harris_eigenvalues(&p, &cfg).unwrap();
        set.eigenvalues
            .into_iter()
            .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
            .unwrap()
    };
    let (a, b) = (run(0.7), run(0.9));
    assert!((a - b).norm() <= 1e-4 * (1.0 + a.norm()), "{a} vs {b}");
}

#[test]
fn rotation_uncovers_resonances_in_the_wedge() {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let cfg = CsConfig::new(RESONANT[0], 2, 50.0, 0.8, 50, None).unwrap();
    let run = classify_run(&p, &cfg, &StabilityOptions::default()).unwrap();
    let c = &run.classified;
    assert_eq!(c.bound.len(), 1);
    assert!((c.bound[0].energy.re + 11.585302647445).abs() < 1e-6);
    assert!(!c.resonances.is_empty());
    for r in &c.resonances {
        assert!(r.energy.im < 0.0 && r.energy.arg() > -1.6);
    }
    // the narrow resonance is among them
    assert!(c
        .resonances
        .iter()
        .any(|r| (r.energy - Complex64::new(4.3251234, -0.244407)).norm() < 1e-5));
}

fn max_entry_change(k_a: usize, k_b: usize) -> f64 {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let n = 50;
    let mut worst = 0.0f64;
    for (ell, rho) in [(0, 40.0), (1, 40.0), (2, 50.0), (3, 35.0)] {
        let cfg = CsConfig::new(RESONANT[0], ell, rho, 0.8, n, None).unwrap();
        let a = cs_potential_matrix(&p, &cfg.with_quadrature_order(k_a).unwrap()).unwrap();
        let b = cs_potential_matrix(&p, &cfg.with_quadrature_order(k_b).unwrap()).unwrap();
        let scale = b.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let diff = (&a - &b).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        worst = worst.max(diff / scale);
    }
    worst
}

/// Entries move by at most 1e-10 (relative to the largest) from
/// `K_quad = N + 10` to `2N`.
#[test]
fn potential_matrix_converges_from_n_plus_10() {
    let change = max_entry_change(60, 100);
    assert!(change <= 1e-10, "max relative change {change:e}");
}

#[test]
fn potential_matrix_converged_beyond_2n() {
    let change = max_entry_change(100, 150);
    assert!(change <= 1e-10, "max relative change {change:e}");
}

#[test]
fn single_point_sweep_equals_direct_run() {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let cfg = CsConfig::new(RESONANT[0], 0, 40.0, 0.8, 40, None).unwrap();
    let opts = StabilityOptions::default();
    let frames = sweep_v1(&p, &[p.v1], &cfg, &opts);
    assert_eq!(frames.len(), 1);
    let direct = classify_run(&p, &cfg, &opts).unwrap().classified;
    assert_eq!(frames[0].result.as_ref().unwrap(), &direct);
}

#[test]
fn sweep_records_frame_errors_and_continues() {
    let p = PotentialParams::from_reduced(1.0, RESONANT).unwrap();
    let cfg = CsConfig::new(RESONANT[0], 0, 40.0, 0.8, 20, None).unwrap();
    let frames = sweep_v1(
        &p,
        &[-80.0, f64::NAN, -70.0],
        &cfg,
        &StabilityOptions::default(),
    );
    assert!(frames[0].result.is_ok());
    assert!(frames[1].result.is_err());
    assert!(frames[2].result.is_ok());
}

/// Forward recursion reproduces every row of `ΣP = ηP` except the truncated
/// last one, whatever the energy.
#[test]
#[allow(clippy::needless_range_loop)]
fn recursion_solves_all_but_the_last_row() {
    let [u0, u1, u2] = BOUND_ONLY;
    let eta = 0.25 - 2.0 * u1;
    for eps in [-27.878950096074, -10.0, -1.5] {
        let n = 12;
        let state = eval_p(eps, u0, u1, u2, n).unwrap();
        let s = build_sigma(state.basis.mu, state.basis.nu, u2, n);
        let sp = s.mul_vec(&state.values);
        for k in 0..n - 1 {
            let scale = s.diag[k].abs() * state.values[k].abs()
                + state.values.iter().fold(0.0f64, |m, v| m.max(v.abs())) * u2;
            assert!(
                (sp[k] - eta * state.values[k]).abs() <= 1e-10 * scale,
                "eps {eps}, row {k}"
            );
        }
    }
}

#[test]
fn recursion_residual_small_at_eigenvalue_for_short_basis() {
    let [u0, u1, u2] = BOUND_ONLY;
    let eta = 0.25 - 2.0 * u1;
    let n = 4;
    for eps in pps(n) {
        let state = eval_p(eps, u0, u1, u2, n).unwrap();
        let s = build_sigma(state.basis.mu, state.basis.nu, u2, n);
        let r: f64 = s
            .mul_vec(&state.values)
            .iter()
            .zip(&state.values)
            .map(|(a, p)| (a - eta * p).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = state.values.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r <= 1e-6 * norm, "eps {eps}: {r:e}");
    }
}
