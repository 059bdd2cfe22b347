//! End-to-end certificates for the second power-sum lemma.

use std::f64::consts::E;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    brute_max_window, build_r, cartan_disc_radius, random_system, system_seed, turan_second_bound,
    InterpolationChecks, Lemma, PowerSumSystem, DISTINCTNESS,
};
use crate::error::{Error, Result};

/// Offset applied per duplicate when separating coincident points.
pub const PERTURBATION_STEP: f64 = 2e-8;

/// How the disc parameter `λ` (with `U = 1/(4e(1+λ))`) is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaChoice {
    /// `max(1/40, D/L)`, which keeps the Case II bound above the final one.
    Auto,
    Fixed(f64),
}

impl LambdaChoice {
    fn resolve(self, d: f64, len: usize) -> Result<f64> {
        let lambda = match self {
            LambdaChoice::Auto => (d / len as f64).max(1.0 / 40.0),
            LambdaChoice::Fixed(x) => x,
        };
        if !(lambda >= 1.0 / 40.0) || !lambda.is_finite() {
            return Err(Error::OutOfRange {
                what: "lambda",
                value: lambda,
                range: "[1/40, inf)".into(),
            });
        }
        Ok(lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateCase {
    /// Every point lies outside the contour.
    I,
    /// Some points lie inside; the bound comes from the polynomial `R`.
    II,
}

/// One certified lower bound together with the brute-force comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    #[serde(rename = "L")]
    pub len: usize,
    #[serde(rename = "D")]
    pub d: f64,
    pub case: CertificateCase,
    /// The case-specific certified bound for the reduced system.
    pub bound: f64,
    /// `(L/(16e²(D+L)))^L` for the original system.
    pub final_bound: f64,
    /// Maximum over `ν ∈ [⌊D⌋+1, ⌊D⌋+L]` for the original system.
    pub brute_max: f64,
    /// The same maximum for the normalized, perturbed system.
    pub brute_reduced: f64,
    /// `brute_max / bound`.
    pub margin: f64,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub u: f64,
    pub r: f64,
    /// Points outside the contour.
    pub l: usize,
    pub perturbed: usize,
    /// `1/Σ|d_ν|` in Case II.
    pub constructive_bound: Option<f64>,
    pub checks: Option<InterpolationChecks>,
    /// Whether the certified bound dominates the final one.
    pub chain_holds: bool,
}

impl Certificate {
    /// Inequalities that must hold; an empty list means the certificate
    /// stands. The comparison between the certified and final bounds is not
    /// among them, see `chain_holds`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.brute_max < self.final_bound {
            out.push(format!("brute_max {:e} < final bound {:e}", self.brute_max, self.final_bound));
        }
        if self.brute_reduced < self.bound {
            out.push(format!(
                "reduced brute_max {:e} < certified bound {:e}",
                self.brute_reduced, self.bound
            ));
        }
        if let Some(cb) = self.constructive_bound {
            if self.brute_reduced < cb {
                out.push(format!("reduced brute_max {:e} < 1/Σ|d| = {cb:e}", self.brute_reduced));
            }
        }
        if let Some(checks) = &self.checks {
            if !checks.all_hold() {
                out.push(format!("coefficient checks failed: {checks:?}"));
            }
        }
        out
    }
}

/// Separates points closer than the distinctness threshold. The `j`-th
/// repeat moves by `j·PERTURBATION_STEP`: along the circle through it when
/// `|z| ≥ 1/2`, so moduli are kept, otherwise along the real axis.
fn separate(zs: &[Complex64]) -> (Vec<Complex64>, usize) {
    let mut out: Vec<Complex64> = Vec::with_capacity(zs.len());
    let mut moved = 0;
    for &z in zs {
        let mut candidate = z;
        let mut j = 0;
        while out.iter().any(|w| (w - candidate).norm() < DISTINCTNESS) {
            j += 1;
            let shift = j as f64 * PERTURBATION_STEP;
            candidate = if z.norm() >= 0.5 {
                z * Complex64::from_polar(1.0, shift / z.norm())
            } else {
                z + shift
            };
        }
        if j > 0 {
            moved += 1;
        }
        out.push(candidate);
    }
    (out, moved)
}

/// Certifies `max_{D<ν≤D+L} |Σ z^ν|` from below for a system with
/// `max |z| ≥ 1` and `D ≥ L/40`.
///
/// The system is normalized to `max |z| = 1`, `D` is floored, coincident
/// points are separated, and the contour from [`cartan_disc_radius`] decides
/// between the two cases.
pub fn second_lemma_certificate(sys: &PowerSumSystem, lambda: LambdaChoice) -> Result<Certificate> {
    let final_bound = turan_second_bound(sys)?;
    let len = sys.len();
    let m0 = sys.max_modulus();
    let d = sys.d().floor();
    let (zs, perturbed) = separate(&sys.zs().iter().map(|z| z / m0).collect::<Vec<_>>());
    let lambda = lambda.resolve(d, len)?;
    let u = 1.0 / (4.0 * E * (1.0 + lambda));
    let floor = 1.0 - 4.0 * E * u;

    let cartan = cartan_disc_radius(&zs, u, d.to_bits() ^ len as u64)?;
    let r = cartan.r;
    let l = zs.iter().filter(|z| z.norm() > r).count();
    let lo = d as u64 + 1;
    let hi = d as u64 + len as u64;
    let brute_reduced = brute_max_window(&zs, lo, hi)?.value;
    let brute_max = brute_max_window(sys.zs(), lo, hi)?.value;
    let lf = len as f64;

    let (case, bound, constructive_bound, checks) = if l == len {
        let bound = floor.powf(d) * (floor * lf / (2.0 * E * (1.0 - 2.0 * E * u) * (d + lf))).powf(lf);
        (CertificateCase::I, bound, None, None)
    } else {
        let reduced = PowerSumSystem::new(zs.clone(), d)?;
        let interp = build_r(&reduced, l, u, r)?;
        let bound = floor.powf(d) * (u / 4.0).powf(lf);
        (
            CertificateCase::II,
            bound,
            Some(1.0 / interp.checks.sum_abs_d),
            Some(interp.checks),
        )
    };

    Ok(Certificate {
        len,
        d: sys.d(),
        case,
        bound,
        final_bound,
        brute_max,
        brute_reduced,
        margin: brute_max / bound,
        seed: None,
        lambda,
        u,
        r,
        l,
        perturbed,
        constructive_bound,
        checks,
        chain_holds: bound >= final_bound,
    })
}

/// Certificates for `trials` random systems (`L ≤ 8`), in order, with the
/// per-system seed recorded.
pub fn certificate_sweep(trials: u64, seed: u64, lambda: LambdaChoice) -> Vec<(u64, Result<Certificate>)> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = system_seed(seed, i);
            let sys = random_system(s, Lemma::Second, 8);
            let cert = second_lemma_certificate(&sys, lambda).map(|mut c| {
                c.seed = Some(s);
                c
            });
            (s, cert)
        })
        .collect()
}
