//! Independent numerical representations of ζ(s), ζ'(s), -ζ'/ζ(s) and
//! 𝒵(s) = -ζ'/ζ(s) - ζ(s).
//!
//! Every evaluator returns an [`EvalResult`] whose `est_error` is a bound on
//! the truncation error plus a floating-point noise allowance, so two
//! representations can be cross-checked by comparing values against summed
//! error estimates.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::LambdaTable;
use crate::error::{Error, Result};
use crate::numeric::{digamma, ComplexSum, CompensatedSum, GaussRule, BERNOULLI_EVEN, EULER_GAMMA};
use crate::zeros::{zero_tail_bound, ZeroDataset};

/// Dirichlet partial sums stop here even if `tol` asks for more terms;
/// the reported error bound then reflects the truncation actually used.
pub const DIRICHLET_MAX_TERMS: u64 = 1 << 20;

/// Default Gauss–Legendre order per panel for [`zeta_integral`].
pub const DEFAULT_QUAD_NODES: usize = 16;

/// Number of Bernoulli correction terms in the integral tail.
const TAIL_TERMS: usize = 8;

/// A point s = σ + it with finite components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !sigma.is_finite() || !t.is_finite() {
            return Err(Error::invalid(format!("non-finite point {sigma} + {t}i")));
        }
        Ok(Self { sigma, t })
    }

    pub fn real(sigma: f64) -> Result<Self> {
        Self::new(sigma, 0.0)
    }

    pub fn conj(self) -> Self {
        Self { sigma: self.sigma, t: -self.t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

impl TryFrom<Complex64> for ComplexPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        ComplexPoint::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub est_error: f64,
    pub terms_used: u64,
}

impl EvalResult {
    /// Whether `other` agrees with this result within the summed error bars.
    pub fn agrees_with(&self, other: &EvalResult) -> bool {
        (self.value - other.value).norm() <= self.est_error + other.est_error
    }
}

/// ζ(s) = Σ n^{-s} for σ > 1, truncated where the integral tail bound
/// N^{1-σ}/(σ-1) drops below `tol` (or at [`DIRICHLET_MAX_TERMS`]).
pub fn zeta_dirichlet(s: ComplexPoint, tol: f64) -> Result<EvalResult> {
    zeta_dirichlet_capped(s, tol, DIRICHLET_MAX_TERMS)
}

pub fn zeta_dirichlet_capped(s: ComplexPoint, tol: f64, max_terms: u64) -> Result<EvalResult> {
    if s.sigma <= 1.0 {
        return Err(Error::domain(format!("Dirichlet series needs sigma > 1, got {}", s.sigma)));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let excess = s.sigma - 1.0;
    let wanted = (tol * excess).powf(-1.0 / excess).ceil();
    let n = if wanted.is_finite() && wanted < max_terms as f64 {
        (wanted as u64).max(1)
    } else {
        max_terms.max(1)
    };
    let z = s.to_complex();
    let mut acc = ComplexSum::new();
    for k in (1..=n).rev() {
        acc.add((-z * (k as f64).ln()).exp());
    }
    let tail = (n as f64).powf(-excess) / excess;
    let noise = 4.0 * f64::EPSILON * (1.0 + z.norm() * (n as f64).ln()) * (1.0 + tail + 1.0 / excess);
    Ok(EvalResult { value: acc.total(), est_error: tail + noise, terms_used: n })
}

/// Pieces of the integral representation shared by ζ and ζ'.
struct IntegralParts {
    /// ∫_1^V {v} v^{-s-1} dv
    frac: Complex64,
    frac_err: f64,
    /// ∫_1^V {v} log v v^{-s-1} dv
    frac_log: Complex64,
    frac_log_err: f64,
    /// Σ |w f| over all nodes, used for the rounding allowance.
    magnitude: f64,
    cutoff: f64,
    evaluations: u64,
}

fn check_integral_domain(s: ComplexPoint, quad_nodes: usize) -> Result<()> {
    if s.sigma == 1.0 && s.t == 0.0 {
        return Err(Error::Pole);
    }
    if s.sigma <= 0.0 {
        return Err(Error::domain(format!("integral representation needs sigma > 0, got {}", s.sigma)));
    }
    if quad_nodes < 2 {
        return Err(Error::invalid(format!("need at least 2 quadrature nodes, got {quad_nodes}")));
    }
    Ok(())
}

/// |s (s+1)_{2m}| and its s-derivative, for the tail remainder bound.
fn remainder_poly(s: Complex64) -> (Complex64, Complex64) {
    let mut p = s;
    let mut dp = Complex64::new(1.0, 0.0);
    for j in 1..=2 * TAIL_TERMS {
        let f = s + j as f64;
        dp = dp * f + p;
        p *= f;
    }
    (p, dp)
}

fn remainder_constant() -> f64 {
    // sup |B_{2m+1}({v})| / (2m+1)! <= 2 ζ(2m+1) / (2π)^{2m+1}, with ζ(17) < 1.00001
    2.0 * 1.000_01 / (2.0 * PI).powi(2 * TAIL_TERMS as i32 + 1)
}

/// Smallest power-of-two cutoff V >= 32 whose Euler–Maclaurin remainder is
/// below 1e-17 relative to max(1, |s/(s-1)|).
fn choose_cutoff(s: Complex64) -> f64 {
    let (p, _) = remainder_poly(s);
    let a = s.re + 2.0 * TAIL_TERMS as f64;
    let scale = (s / (s - 1.0)).norm().max(1.0);
    let c = remainder_constant() * p.norm() / a;
    let mut v: f64 = 32.0;
    while c * v.powf(-a) > 1e-17 * scale && v < (1u64 << 22) as f64 {
        v *= 2.0;
    }
    v
}

fn integral_parts(s: Complex64, quad_nodes: usize, want_log: bool) -> IntegralParts {
    let cutoff = choose_cutoff(s);
    let fine = GaussRule::new(quad_nodes);
    let coarse = GaussRule::new((quad_nodes / 2).max(1));
    let sp1 = s + 1.0;
    let rate = sp1.norm();

    let mut frac = ComplexSum::new();
    let mut frac_log = ComplexSum::new();
    let mut frac_err = 0.0;
    let mut frac_log_err = 0.0;
    let mut magnitude = CompensatedSum::new();
    let mut evaluations = 0u64;

    let last = cutoff as u64;
    for n in 1..last {
        let nf = n as f64;
        // keep the change of (s+1) log v across one panel below one unit
        let panels = (rate * (1.0 + 1.0 / nf).ln()).ceil().max(1.0) as usize;
        let width = 1.0 / panels as f64;
        for p in 0..panels {
            let a = nf + p as f64 * width;
            let b = if p + 1 == panels { nf + 1.0 } else { a + width };
            let mut hi = Complex64::new(0.0, 0.0);
            let mut hi_log = Complex64::new(0.0, 0.0);
            for (v, w) in fine.points(a, b) {
                let lv = v.ln();
                let f = (v - nf) * (-sp1 * lv).exp();
                hi += f * w;
                magnitude.add(w * f.norm());
                if want_log {
                    hi_log += f * (w * lv);
                }
            }
            let mut lo = Complex64::new(0.0, 0.0);
            let mut lo_log = Complex64::new(0.0, 0.0);
            for (v, w) in coarse.points(a, b) {
                let lv = v.ln();
                let f = (v - nf) * (-sp1 * lv).exp();
                lo += f * w;
                if want_log {
                    lo_log += f * (w * lv);
                }
            }
            evaluations += (fine.len() + coarse.len()) as u64;
            frac.add(hi);
            frac_err += (hi - lo).norm();
            if want_log {
                frac_log.add(hi_log);
                frac_log_err += (hi_log - lo_log).norm();
            }
        }
    }
    IntegralParts {
        frac: frac.total(),
        frac_err,
        frac_log: frac_log.total(),
        frac_log_err,
        magnitude: magnitude.total(),
        cutoff,
        evaluations,
    }
}

/// s ∫_V^∞ {v} v^{-s-1} dv by Euler–Maclaurin, with its s-derivative and
/// rigorous remainder bounds for both.
struct Tail {
    value: Complex64,
    deriv: Complex64,
    err: f64,
    deriv_err: f64,
}

fn integral_tail(s: Complex64, cutoff: f64) -> Tail {
    let lv = cutoff.ln();
    let v_pow = (-s * lv).exp();
    let mut value = 0.5 * v_pow;
    let mut deriv = -0.5 * lv * v_pow;

    // P_k(s) = s (s+1) ... (s+2k-2); term_k = -(B_2k/(2k)!) P_k V^{-s-2k+1}
    let mut p = s;
    let mut dp = Complex64::new(1.0, 0.0);
    let mut fact = 2.0_f64;
    for k in 1..=TAIL_TERMS {
        if k > 1 {
            for j in [2 * k - 3, 2 * k - 2] {
                let f = s + j as f64;
                dp = dp * f + p;
                p *= f;
            }
            fact *= ((2 * k - 1) * (2 * k)) as f64;
        }
        let coef = BERNOULLI_EVEN[k - 1] / fact;
        let vk = v_pow * cutoff.powi(-(2 * k as i32) + 1);
        value -= coef * p * vk;
        deriv -= coef * (dp - lv * p) * vk;
    }

    let (q, dq) = remainder_poly(s);
    let a = s.re + 2.0 * TAIL_TERMS as f64;
    let va = cutoff.powf(-a);
    let c = remainder_constant();
    let err = c * q.norm() * va / a;
    let deriv_err = c * (dq.norm() * va / a + q.norm() * va * (lv / a + 1.0 / (a * a)));
    Tail { value, deriv, err, deriv_err }
}

fn rounding_allowance(s: Complex64, parts: &IntegralParts, extra: f64) -> f64 {
    let phase = 4.0 + (s + 1.0).norm() * parts.cutoff.ln();
    8.0 * f64::EPSILON * phase * (s.norm() * parts.magnitude + extra)
}

/// ζ(s) = s/(s-1) - s ∫_1^∞ {v} v^{-s-1} dv for σ > 0, s != 1.
///
/// The integral is split at the integers, where the integrand is smooth,
/// and each unit segment is covered by Gauss–Legendre panels of order
/// `quad_nodes`; the error of the half-order rule on the same panels is
/// the quadrature estimate. Beyond a cutoff V the tail is summed
/// analytically by Euler–Maclaurin with a bounded remainder.
pub fn zeta_integral(s: ComplexPoint, quad_nodes: usize) -> Result<EvalResult> {
    check_integral_domain(s, quad_nodes)?;
    let z = s.to_complex();
    let parts = integral_parts(z, quad_nodes, false);
    let tail = integral_tail(z, parts.cutoff);
    let pole = z / (z - 1.0);
    let value = pole - z * parts.frac - tail.value;
    let est_error = z.norm() * parts.frac_err
        + tail.err
        + rounding_allowance(z, &parts, pole.norm() + tail.value.norm());
    Ok(EvalResult { value, est_error, terms_used: parts.evaluations })
}

/// ζ(s) and ζ'(s) from the same integral representation.
pub fn zeta_and_derivative_integral(
    s: ComplexPoint,
    quad_nodes: usize,
) -> Result<(EvalResult, EvalResult)> {
    check_integral_domain(s, quad_nodes)?;
    let z = s.to_complex();
    let parts = integral_parts(z, quad_nodes, true);
    let tail = integral_tail(z, parts.cutoff);
    let pole = z / (z - 1.0);
    let value = pole - z * parts.frac - tail.value;
    let scale = pole.norm() + tail.value.norm();
    let est_error =
        z.norm() * parts.frac_err + tail.err + rounding_allowance(z, &parts, scale);

    let dpole = -(z - 1.0).powi(2).inv();
    let deriv = dpole - parts.frac + z * parts.frac_log - tail.deriv;
    let deriv_err = parts.frac_err
        + z.norm() * parts.frac_log_err
        + tail.deriv_err
        + rounding_allowance(z, &parts, dpole.norm() + tail.deriv.norm()) * (1.0 + parts.cutoff.ln());
    Ok((
        EvalResult { value, est_error, terms_used: parts.evaluations },
        EvalResult { value: deriv, est_error: deriv_err, terms_used: parts.evaluations },
    ))
}

/// -ζ'(s)/ζ(s) = Σ Λ(n) n^{-s} for σ > 1.
///
/// Truncated at the smaller of `table.limit()` and the N where the tail
/// bound 2σ N^{1-σ}/(σ-1) (from ψ(u) <= 2u) falls below `tol`.
pub fn log_deriv_zeta_series(s: ComplexPoint, table: &LambdaTable, tol: f64) -> Result<EvalResult> {
    if s.sigma <= 1.0 {
        return Err(Error::domain(format!("series for -zeta'/zeta needs sigma > 1, got {}", s.sigma)));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let excess = s.sigma - 1.0;
    let wanted = (tol * excess / (2.0 * s.sigma)).powf(-1.0 / excess).ceil();
    let n = if wanted.is_finite() && wanted < table.limit() as f64 {
        (wanted as u64).max(2)
    } else {
        table.limit()
    };
    let z = s.to_complex();
    let mut acc = ComplexSum::new();
    let mut magnitude = 0.0;
    let mut terms = 0u64;
    for (k, lam) in table.prime_powers(n) {
        let term = lam * (-z * (k as f64).ln()).exp();
        magnitude += term.norm();
        acc.add(term);
        terms += 1;
    }
    let tail = 2.0 * s.sigma * (n as f64).powf(-excess) / excess;
    let noise = 4.0 * f64::EPSILON * (1.0 + z.norm() * (n as f64).ln()) * magnitude;
    Ok(EvalResult { value: acc.total(), est_error: tail + noise, terms_used: terms.max(1) })
}

/// Constant part 1 + γ₀/2 - log π - log 2 of the zero expansion.
fn zero_expansion_constant() -> f64 {
    1.0 + 0.5 * EULER_GAMMA - PI.ln() - 2f64.ln()
}

/// -ζ'/ζ(s) from the first `k` conjugate pairs of nontrivial zeros:
///
/// 1/(s-1) - Σ_ρ (1/(s-ρ) + 1/ρ) + Γ'(s/2+1)/(2Γ(s/2+1)) + 1 + γ₀/2 - log π - log 2.
///
/// Trivial zeros are carried by the digamma term, not the ρ-sum. The
/// error estimate bounds the omitted pairs through the Riemann–von
/// Mangoldt envelope; it is infinite when |t| is not below the last
/// ordinate used.
pub fn log_deriv_zeta_zeros(s: ComplexPoint, zeros: &ZeroDataset, k: usize) -> Result<EvalResult> {
    if k == 0 {
        return Err(Error::invalid("zero expansion needs at least one zero pair"));
    }
    if k > zeros.len() {
        return Err(Error::InsufficientData(format!(
            "asked for {k} zero pairs, dataset has {}",
            zeros.len()
        )));
    }
    let z = s.to_complex();
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole);
    }
    let used = &zeros.ordinates()[..k];
    if s.sigma == 0.5 && used.contains(&s.t.abs()) {
        return Err(Error::domain(format!("s = {} + {}i is a zero", s.sigma, s.t)));
    }
    let mut acc = ComplexSum::new();
    for &g in used.iter().rev() {
        let rho = Complex64::new(0.5, g);
        let rho_bar = rho.conj();
        let pair = (z - rho).inv() + (z - rho_bar).inv() + rho.inv() + rho_bar.inv();
        acc.add(pair);
    }
    let gamma_term = 0.5 * digamma(0.5 * z + 1.0);
    let value = (z - 1.0).inv() - acc.total() + gamma_term + zero_expansion_constant();

    let last = used[k - 1];
    let tail = if last > s.t.abs() + 1.0 {
        // |1/(s-ρ) + 1/ρ| = |s| / |ρ (s-ρ)| <= |s| / (γ - |t|)^2, twice per pair
        zero_tail_bound(last, 2.0 * z.norm(), s.t.abs(), 2.0)?
    } else {
        f64::INFINITY
    };
    let noise = 16.0 * f64::EPSILON * (k as f64) * (1.0 + value.norm());
    Ok(EvalResult { value, est_error: tail + noise, terms_used: k as u64 })
}

/// -ζ'/ζ(s) from the integral representations of ζ and ζ'.
pub fn log_deriv_zeta_integral(s: ComplexPoint, quad_nodes: usize) -> Result<EvalResult> {
    let (zeta, deriv) = zeta_and_derivative_integral(s, quad_nodes)?;
    let q = -deriv.value / zeta.value;
    let denom = zeta.value.norm() - zeta.est_error;
    let est_error = if denom > 0.0 {
        (deriv.est_error + q.norm() * zeta.est_error) / denom
    } else {
        f64::INFINITY
    };
    Ok(EvalResult { value: q, est_error, terms_used: zeta.terms_used })
}

/// Which pair of representations 𝒵 is assembled from.
#[derive(Debug, Clone, Copy)]
pub enum CalZMethod<'a> {
    /// Σ Λ(n) n^{-s} and the Dirichlet series; σ > 1 only.
    Series { table: &'a LambdaTable, tol: f64 },
    /// Zero expansion of -ζ'/ζ and the integral representation of ζ.
    Zeros { zeros: &'a ZeroDataset, k: usize, quad_nodes: usize },
    /// Integral representations of both ζ and ζ'.
    Integral { quad_nodes: usize },
}

/// Direct evaluation, or the symmetric limit used at the removable
/// singularity s = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CalZMode {
    Direct,
    /// Average of 𝒵(s ± ε) and 𝒵(s ± ε/2), Richardson-combined to
    /// cancel the O(ε²) term.
    SymmetricLimit { eps: f64 },
}

fn cal_z_direct(s: ComplexPoint, method: &CalZMethod<'_>) -> Result<EvalResult> {
    let (ld, zeta) = match *method {
        CalZMethod::Series { table, tol } => {
            (log_deriv_zeta_series(s, table, tol)?, zeta_dirichlet(s, tol)?)
        }
        CalZMethod::Zeros { zeros, k, quad_nodes } => {
            (log_deriv_zeta_zeros(s, zeros, k)?, zeta_integral(s, quad_nodes)?)
        }
        CalZMethod::Integral { quad_nodes } => {
            (log_deriv_zeta_integral(s, quad_nodes)?, zeta_integral(s, quad_nodes)?)
        }
    };
    Ok(EvalResult {
        value: ld.value - zeta.value,
        est_error: ld.est_error + zeta.est_error,
        terms_used: ld.terms_used + zeta.terms_used,
    })
}

/// 𝒵(s) = -ζ'(s)/ζ(s) - ζ(s).
pub fn cal_z(s: ComplexPoint, method: &CalZMethod<'_>, mode: CalZMode) -> Result<EvalResult> {
    match mode {
        CalZMode::Direct => {
            if s.sigma == 1.0 && s.t == 0.0 {
                return Err(Error::Pole);
            }
            cal_z_direct(s, method)
        }
        CalZMode::SymmetricLimit { eps } => {
            if !(eps > 0.0) {
                return Err(Error::invalid(format!("limit step must be positive, got {eps}")));
            }
            let avg = |h: f64| -> Result<EvalResult> {
                let up = cal_z_direct(ComplexPoint::new(s.sigma + h, s.t)?, method)?;
                let down = cal_z_direct(ComplexPoint::new(s.sigma - h, s.t)?, method)?;
                Ok(EvalResult {
                    value: 0.5 * (up.value + down.value),
                    est_error: 0.5 * (up.est_error + down.est_error),
                    terms_used: up.terms_used + down.terms_used,
                })
            };
            let coarse = avg(eps)?;
            let fine = avg(0.5 * eps)?;
            let value = (4.0 * fine.value - coarse.value) / 3.0;
            // the O(ε⁴) remainder is at most what Richardson removed, scaled by 1/4
            let extrapolation = 0.25 * (fine.value - coarse.value).norm() / 3.0;
            Ok(EvalResult {
                value,
                est_error: (4.0 * fine.est_error + coarse.est_error) / 3.0 + extrapolation,
                terms_used: coarse.terms_used + fine.terms_used,
            })
        }
    }
}
