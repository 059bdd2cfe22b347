//! Turán-type power sums: brute-force maxima, the two lower-bound lemmas, and
//! the constructive interpolation machinery behind the second one.

mod cartan;
mod certificate;
mod interp;
pub mod poly;

use std::f64::consts::E;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use cartan::{cartan_disc_radius, CartanRadius};
pub use certificate::{
    certificate_sweep, second_lemma_certificate, Certificate, CertificateCase, LambdaChoice,
    PERTURBATION_STEP,
};
pub use interp::{build_r, newton_coeffs, InterpolationChecks, InterpolationResult, NewtonCoeffs};

/// Exponent above which `|z|^ν` is treated as overflowing (`e^700 ≈ 1e304`).
const MAX_LOG_POWER: f64 = 700.0;

/// Points closer than this are considered coincident.
pub const DISTINCTNESS: f64 = 1e-8;

/// A finite list of complex numbers together with the start `D` of the
/// exponent window `[D, D + L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumSystem {
    zs: Vec<Complex64>,
    d: f64,
}

impl PowerSumSystem {
    /// Requires at least two finite points and a finite `D ≥ 0`.
    pub fn new(zs: Vec<Complex64>, d: f64) -> Result<Self> {
        if zs.len() < 2 {
            return Err(Error::invalid(format!(
                "a power-sum system needs L >= 2 points, got {}",
                zs.len()
            )));
        }
        Self::new_unchecked_len(zs, d)
    }

    /// Like [`PowerSumSystem::new`] but admits `L = 1`, which the lemmas
    /// exclude; useful only for smoke tests of the formulas.
    pub fn single_point_extension(z: Complex64, d: f64) -> Result<Self> {
        Self::new_unchecked_len(vec![z], d)
    }

    fn new_unchecked_len(zs: Vec<Complex64>, d: f64) -> Result<Self> {
        if zs.is_empty() {
            return Err(Error::invalid("empty power-sum system"));
        }
        if zs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("power-sum system contains a non-finite point"));
        }
        if !d.is_finite() || d < 0.0 {
            return Err(Error::OutOfRange {
                what: "D",
                value: d,
                range: "[0, inf)".into(),
            });
        }
        Ok(Self { zs, d })
    }

    pub fn zs(&self) -> &[Complex64] {
        &self.zs
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Number of points `L`.
    pub fn len(&self) -> usize {
        self.zs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zs.is_empty()
    }

    pub fn max_modulus(&self) -> f64 {
        self.zs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.zs.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, mu: f64) -> Result<Self> {
        Self::new_unchecked_len(self.zs.iter().map(|z| z * mu).collect(), self.d)
    }
}

/// Value and position of a power-sum maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMax {
    pub value: f64,
    pub nu: u64,
}

/// `max |Σ z^ν|` over the integers `ν ∈ [lo, hi]`.
pub fn brute_max_window(zs: &[Complex64], lo: u64, hi: u64) -> Result<PowerMax> {
    if hi < lo {
        return Err(Error::invalid(format!("empty exponent window [{lo}, {hi}]")));
    }
    let big = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if big > 1.0 && hi as f64 * big.ln() > MAX_LOG_POWER {
        return Err(Error::Overflow(format!(
            "|z|^{hi} with |z| = {big} exceeds the floating-point range; normalize by max|z| first"
        )));
    }
    let mut powers: Vec<Complex64> = zs.iter().map(|z| pow_u64(*z, lo)).collect();
    let mut best = PowerMax { value: -1.0, nu: lo };
    for nu in lo..=hi {
        let s: Complex64 = powers.iter().sum();
        if s.norm() > best.value {
            best = PowerMax { value: s.norm(), nu };
        }
        if nu < hi {
            for (p, z) in powers.iter_mut().zip(zs) {
                *p *= z;
            }
        }
    }
    Ok(best)
}

fn pow_u64(z: Complex64, n: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

/// `max |Σ z^ν|` over the integers `ν ∈ [⌈D⌉, ⌈D⌉ + span]`.
pub fn brute_max(sys: &PowerSumSystem, span: u64) -> Result<f64> {
    if span < 1 {
        return Err(Error::invalid("span must be at least 1"));
    }
    let lo = sys.d.ceil() as u64;
    Ok(brute_max_window(&sys.zs, lo, lo + span)?.value)
}

/// The window of the first lemma after reducing to integer `D`:
/// `ν ∈ [⌊D⌋ + 1, ⌊D⌋ + L]`, which lies inside `[D, D + L]`.
pub fn first_lemma_window(sys: &PowerSumSystem) -> (u64, u64) {
    let base = sys.d.floor() as u64;
    (base + 1, base + sys.len() as u64)
}

/// The integers of `[D, D + L]`.
pub fn second_lemma_window(sys: &PowerSumSystem) -> (u64, u64) {
    (sys.d.ceil() as u64, (sys.d + sys.len() as f64).floor() as u64)
}

pub fn first_lemma_max(sys: &PowerSumSystem) -> Result<f64> {
    let (lo, hi) = first_lemma_window(sys);
    Ok(brute_max_window(&sys.zs, lo, hi)?.value)
}

pub fn second_lemma_max(sys: &PowerSumSystem) -> Result<f64> {
    let (lo, hi) = second_lemma_window(sys);
    Ok(brute_max_window(&sys.zs, lo, hi)?.value)
}

/// `M^D (M L / (e (M + 1)(D + L)))^L` with `M = min |z|`.
///
/// A system containing zero has `M = 0` and the bound degenerates to 0.
pub fn turan_first_bound(sys: &PowerSumSystem) -> Result<f64> {
    if sys.d < 1.0 {
        return Err(Error::OutOfRange {
            what: "D",
            value: sys.d,
            range: "[1, inf) for the first power-sum lemma".into(),
        });
    }
    let m = sys.min_modulus();
    if m == 0.0 {
        return Ok(0.0);
    }
    let l = sys.len() as f64;
    Ok(m.powf(sys.d) * (m * l / (E * (m + 1.0) * (sys.d + l))).powf(l))
}

/// `(L / (16 e² (D + L)))^L`, valid when `max |z| ≥ 1` and `D ≥ L/40`.
pub fn turan_second_bound(sys: &PowerSumSystem) -> Result<f64> {
    let l = sys.len() as f64;
    let big = sys.max_modulus();
    if big < 1.0 {
        return Err(Error::domain(format!(
            "second power-sum lemma needs max|z| >= 1, got {big}"
        )));
    }
    if sys.d < l / 40.0 {
        return Err(Error::domain(format!(
            "second power-sum lemma needs D >= L/40 = {}, got D = {}",
            l / 40.0,
            sys.d
        )));
    }
    Ok((l / (16.0 * E * E * (sys.d + l))).powf(l))
}

/// Which lemma's hypotheses a random system should satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    First,
    Second,
}

/// Seed of the `index`-th system of a sweep started from `base`.
pub fn system_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random system with `L ∈ [2, max_len]`, moduli in `[0.1, 1]` with one
/// point on the unit circle, and `D` drawn from the lemma's admissible range
/// capped at 40.
pub fn random_system(seed: u64, lemma: Lemma, max_len: usize) -> PowerSumSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(2..=max_len.max(2));
    let unit = rng.gen_range(0..len);
    let zs = (0..len)
        .map(|i| {
            let modulus = if i == unit { 1.0 } else { rng.gen_range(0.1..=1.0) };
            let mut z = Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU));
            // rounding can leave the unit point a hair inside the circle
            while i == unit && z.norm() < 1.0 {
                z *= 1.0 + f64::EPSILON;
            }
            z
        })
        .collect();
    let d_min = match lemma {
        Lemma::First => 1.0,
        Lemma::Second => len as f64 / 40.0,
    };
    let d = rng.gen_range(d_min..=40.0);
    PowerSumSystem { zs, d }
}
