//! Search for a circle on which a monic polynomial with roots in the unit
//! disc stays above `U^L`.

use std::f64::consts::{E, TAU};

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const COARSE_RADII: usize = 257;
const GOLDEN_STEPS: usize = 48;
const VERIFY_CANDIDATES: usize = 8;
const SUBSET_TRIALS: usize = 100;

/// A verified contour radius.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanRadius {
    pub r: f64,
    /// Minimum of `|∏ (w − z)|` on `|w| = r` over the dense sample set.
    pub min_modulus: f64,
    /// `U^L`.
    pub target: f64,
    pub samples: usize,
    /// Smallest ratio of a sampled sub-product minimum to `(U/2)^L` over the
    /// random index subsets.
    pub subset_ratio: f64,
}

impl CartanRadius {
    pub fn subsets_hold(&self) -> bool {
        self.subset_ratio >= 1.0
    }
}

fn product_modulus(zs: &[Complex64], w: Complex64) -> f64 {
    zs.iter().map(|z| (w - z).norm()).product()
}

fn circle_min(zs: &[Complex64], r: f64, samples: usize) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for k in 0..samples {
        let w = Complex64::from_polar(r, TAU * k as f64 / samples as f64);
        let v = product_modulus(zs, w);
        if v < best.0 {
            best = (v, k);
        }
    }
    best
}

/// Sampled minimum, sharpened by a golden-section search in angle around the
/// few worst samples.
fn refined_circle_min(zs: &[Complex64], r: f64, samples: usize) -> f64 {
    let step = TAU / samples as f64;
    let mut worst: Vec<(f64, usize)> = (0..samples)
        .map(|k| {
            let w = Complex64::from_polar(r, step * k as f64);
            (product_modulus(zs, w), k)
        })
        .collect();
    let keep = zs.len().clamp(1, 16);
    worst.select_nth_unstable_by(keep - 1, |a, b| a.0.total_cmp(&b.0));
    let at = |theta: f64| product_modulus(zs, Complex64::from_polar(r, theta));
    worst[..keep]
        .iter()
        .map(|&(v, k)| {
            let centre = step * k as f64;
            v.min(golden_min(at, centre - step, centre + step))
        })
        .fold(f64::INFINITY, f64::min)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.min(fd)
}

fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    for _ in 0..GOLDEN_STEPS {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    (a + b) / 2.0
}

/// Finds `r ∈ [1 − 4eU, 1]` with `|∏ (w − z)| ≥ U^L` on the whole circle
/// `|w| = r`, verified on at least `4096·L` angles.
///
/// Also samples 100 random index subsets (seeded by `seed`) and records how
/// the sub-products compare with `(U/2)^L`.
pub fn cartan_disc_radius(zs: &[Complex64], u: f64, seed: u64) -> Result<CartanRadius> {
    let cap = 1.0 / (4.0 * E);
    if !(u > 0.0 && u < cap) {
        return Err(Error::OutOfRange {
            what: "U",
            value: u,
            range: format!("(0, 1/(4e)) = (0, {cap})"),
        });
    }
    if zs.is_empty() {
        return Err(Error::invalid("no points to separate"));
    }
    if let Some(z) = zs.iter().find(|z| z.norm() > 1.0 + 1e-12) {
        return Err(Error::domain(format!("point {z} lies outside the unit disc")));
    }
    let len = zs.len();
    let target = u.powi(len as i32);
    let lo = 1.0 - 4.0 * E * u;
    let coarse = (64 * len).max(256);
    let dense = 4096 * len;

    let mut scan: Vec<(f64, f64)> = (0..COARSE_RADII)
        .map(|i| {
            let r = lo + (1.0 - lo) * i as f64 / (COARSE_RADII - 1) as f64;
            (r, circle_min(zs, r, coarse).0)
        })
        .collect();
    let best = scan
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let h = (1.0 - lo) / (COARSE_RADII - 1) as f64;
    let refined = golden_max(
        |r| circle_min(zs, r, coarse).0,
        (scan[best].0 - h).max(lo),
        (scan[best].0 + h).min(1.0),
    );

    scan.sort_by(|a, b| b.1.total_cmp(&a.1));
    let candidates = std::iter::once(refined).chain(scan.iter().take(VERIFY_CANDIDATES).map(|c| c.0));
    let mut best_seen = 0.0f64;
    for r in candidates {
        let min_modulus = refined_circle_min(zs, r, dense);
        best_seen = best_seen.max(min_modulus);
        if min_modulus >= target {
            let subset_ratio = subset_check(zs, r, u, coarse, seed);
            return Ok(CartanRadius {
                r,
                min_modulus,
                target,
                samples: dense,
                subset_ratio,
            });
        }
    }
    Err(Error::Convergence(format!(
        "no radius in [{lo}, 1] keeps the product above U^L = {target:e}; best sampled minimum {best_seen:e}"
    )))
}

fn subset_check(zs: &[Complex64], r: f64, u: f64, samples: usize, seed: u64) -> f64 {
    let len = zs.len();
    let floor = (u / 2.0).powi(len as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratio = f64::INFINITY;
    for _ in 0..SUBSET_TRIALS {
        let size = rng.gen_range(1..=len);
        let subset: Vec<Complex64> = sample(&mut rng, len, size).into_iter().map(|i| zs[i]).collect();
        ratio = ratio.min(circle_min(&subset, r, samples).0 / floor);
    }
    ratio
}
