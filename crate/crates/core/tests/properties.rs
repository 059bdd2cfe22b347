use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use turanlab::arith::{psi, sieve_lambda, varpi, LambdaTable};
use turanlab::experiment::ExperimentConfig;
use turanlab::powersum::{brute_max, poly, PowerSumSystem};
use turanlab::zeros::{format_zeros, parse_zeros, ZeroDataset};
use turanlab::zeta::{zeta_integral, ComplexPoint};

fn table() -> &'static LambdaTable {
    static T: OnceLock<LambdaTable> = OnceLock::new();
    T.get_or_init(|| sieve_lambda(100_000).unwrap())
}

fn lambda_by_division(n: u64) -> f64 {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    if n >= 2 {
        (n as f64).ln()
    } else {
        0.0
    }
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.05f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(m, a)| Complex64::from_polar(m, a))
}

proptest! {
    #[test]
    fn sieve_agrees_with_trial_division(n in 1u64..=100_000) {
        prop_assert_eq!(table().lambda(n), lambda_by_division(n));
    }

    #[test]
    fn psi_is_nondecreasing_and_varpi_consistent(x in 2.0f64..99_990.0, dx in 0.0f64..10.0) {
        let t = table();
        prop_assert!(psi(x + dx, t).unwrap() >= psi(x, t).unwrap() - 1e-9);
        if x.fract() != 0.0 {
            let expected = psi(x, t).unwrap() - x.floor();
            prop_assert!((varpi(x, t).unwrap() - expected).abs() <= 1e-9 * x);
        }
    }

    #[test]
    fn scaling_up_never_lowers_the_maximum(
        zs in prop::collection::vec(point(), 2..8),
        d in 1.0f64..30.0,
        mu in 1.0f64..1.5,
    ) {
        let sys = PowerSumSystem::new(zs, d).unwrap();
        let base = brute_max(&sys, sys.len() as u64).unwrap();
        let scaled = brute_max(&sys.scaled(mu).unwrap(), sys.len() as u64).unwrap();
        prop_assert!(scaled >= mu.powf(d.ceil()) * base * (1.0 - 1e-12));
    }

    #[test]
    fn expanded_roots_vanish(roots in prop::collection::vec(point(), 1..10)) {
        let p = poly::from_roots(&roots);
        let scale: f64 = p.iter().map(|c| c.norm()).sum();
        for r in &roots {
            prop_assert!(poly::eval(&p, *r).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn zeta_is_conjugate_symmetric(sigma in 1.05f64..3.0, t in 0.5f64..40.0) {
        let up = zeta_integral(ComplexPoint::new(sigma, t).unwrap(), 16).unwrap();
        let down = zeta_integral(ComplexPoint::new(sigma, -t).unwrap(), 16).unwrap();
        prop_assert!((up.value - down.value.conj()).norm() <= up.est_error + down.est_error + 1e-14);
    }

    #[test]
    fn zero_tables_round_trip(mut ords in prop::collection::vec(14.5f64..5000.0, 0..40)) {
        ords.sort_by(f64::total_cmp);
        ords.dedup();
        let ds = ZeroDataset::new(ords.clone(), "prop").unwrap();
        let back = parse_zeros(&format_zeros(&ds), "prop").unwrap();
        prop_assert_eq!(back.ordinates(), &ords[..]);
    }

    #[test]
    fn config_listing_parses_back(a in 1.1f64..4.0, y in 1.1f64..5.0, gamma in 100.0f64..1e6) {
        let cfg = ExperimentConfig { a, y, gamma_p: gamma, ..ExperimentConfig::default() };
        let text: String = cfg.to_pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let back = ExperimentConfig::parse(&text).unwrap();
        prop_assert_eq!(back.to_pairs(), cfg.to_pairs());
    }
}
