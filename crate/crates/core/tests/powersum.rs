use std::f64::consts::{E, TAU};

use num_complex::Complex64;

use turanlab::powersum::{
    build_r, cartan_disc_radius, certificate_sweep, first_lemma_max, newton_coeffs, random_system,
    second_lemma_certificate, second_lemma_max, system_seed, turan_first_bound, turan_second_bound,
    CertificateCase, LambdaChoice, Lemma, PowerSumSystem,
};

fn roots_of_unity(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64)).collect()
}

#[test]
fn roots_of_unity_attain_the_full_sum_once_per_window() {
    for n in 2..=8 {
        let sys = PowerSumSystem::new(roots_of_unity(n, 1.0), 1.0).unwrap();
        // ν = n is in [D+1, D+L] = [2, n+1]
        assert!((first_lemma_max(&sys).unwrap() - n as f64).abs() < 1e-9);
        assert!(second_lemma_max(&sys).unwrap() >= turan_second_bound(&sys).unwrap());
        assert!(first_lemma_max(&sys).unwrap() >= turan_first_bound(&sys).unwrap());
    }
}

#[test]
fn newton_coefficients_are_divided_differences() {
    // with P ≡ 1 and D = 0, G(z) = 1/z, whose divided differences over
    // z_1..z_{j+1} are (-1)^j / (z_1 ⋯ z_{j+1})
    let head = [Complex64::new(0.9, 0.2), Complex64::new(-0.5, 0.8), Complex64::new(0.1, -0.95)];
    let res = newton_coeffs(&head, &[Complex64::new(1.0, 0.0)], 0, 0.4, 256).unwrap();
    let mut prod = Complex64::new(1.0, 0.0);
    for (j, z) in head.iter().enumerate() {
        prod *= z;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        assert!((res.b[j] - sign / prod).norm() < 1e-13, "j = {j}");
    }
}

#[test]
fn case_one_when_all_points_are_large() {
    let sys = PowerSumSystem::new(roots_of_unity(6, 1.0), 12.0).unwrap();
    let cert = second_lemma_certificate(&sys, LambdaChoice::Auto).unwrap();
    assert_eq!(cert.case, CertificateCase::I);
    assert!(cert.violations().is_empty());
}

#[test]
fn cartan_radius_keeps_subproducts_large() {
    for i in 0..20 {
        let sys = random_system(system_seed(11, i), Lemma::Second, 10);
        let u = 1.0 / (4.0 * E * 1.1);
        let res = cartan_disc_radius(sys.zs(), u, i).unwrap();
        assert!(res.min_modulus >= u.powi(sys.len() as i32));
        assert!(res.subsets_hold(), "system {i}: ratio {}", res.subset_ratio);
    }
}

#[test]
fn interpolation_on_random_systems() {
    for i in 0..50 {
        let sys = random_system(system_seed(12, i), Lemma::Second, 10);
        let sys = PowerSumSystem::new(sys.zs().to_vec(), sys.d().floor().max(1.0)).unwrap();
        let u = 1.0 / (4.0 * E * (1.0 + sys.d() / sys.len() as f64));
        let cartan = cartan_disc_radius(sys.zs(), u, i).unwrap();
        let l = sys.zs().iter().filter(|z| z.norm() > cartan.r).count();
        let res = build_r(&sys, l, u, cartan.r).unwrap();
        assert!(res.checks.all_hold(), "system {i}: {:?}", res.checks);
        assert!(res.checks.max_residual <= 1e-9);
    }
}

#[test]
fn sweeps_are_reproducible() {
    let a = certificate_sweep(12, 99, LambdaChoice::Auto);
    let b = certificate_sweep(12, 99, LambdaChoice::Auto);
    for ((sa, ca), (sb, cb)) in a.iter().zip(&b) {
        assert_eq!(sa, sb);
        assert_eq!(ca.as_ref().unwrap(), cb.as_ref().unwrap());
    }
}
