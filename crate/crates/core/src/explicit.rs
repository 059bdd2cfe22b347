//! The weighted explicit formula
//!
//! Σ_{n>W} Λ(n) n^{-s} log^{k-1}(n/W)
//!     = (k-1)! [ W^{1-s}/(s-1)^k - Σ_ρ W^{ρ-s}/(s-ρ)^k - Σ_{n≥1} W^{-2n-s}/(s+2n)^k ]
//!
//! evaluated from both sides with recorded truncation tails, plus the
//! block and tail estimates for F_W(s) = Σ_{n>W} Λ(n) n^{-s}.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::LambdaTable;
use crate::error::{Error, Result};
use crate::experiment::{derived_params, exponent_table, ExperimentConfig};
use crate::numeric::{factorial, ComplexSum, CompensatedSum, GaussRule};
use crate::zeros::{zero_tail_bound, ZeroDataset};
use crate::zeta::ComplexPoint;

/// Parameters of one evaluation of the weighted identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedSumSpec {
    pub w: f64,
    pub k: u32,
    pub s: ComplexPoint,
    /// Prime side sums n <= n_max.
    pub n_max: u64,
    /// Zero side uses this many conjugate pairs.
    pub zero_pairs: usize,
    /// Trivial zeros -2, ..., -2 m_triv.
    pub m_triv: u32,
}

/// Minimum distance of W from the integers.
pub const W_INTEGER_CLEARANCE: f64 = 0.25;

impl WeightedSumSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.w > 1.0) || !self.w.is_finite() {
            return Err(Error::OutOfRange { what: "W", value: self.w, range: "(1, inf)".into() });
        }
        let dist = (self.w - self.w.round()).abs();
        if dist < W_INTEGER_CLEARANCE {
            return Err(Error::invalid(format!(
                "W = {} is within {dist} of an integer; need distance >= {W_INTEGER_CLEARANCE}",
                self.w
            )));
        }
        if self.k < 4 {
            return Err(Error::OutOfRange { what: "k", value: self.k as f64, range: "[4, inf)".into() });
        }
        if self.s.sigma <= 1.0 {
            return Err(Error::domain(format!("need sigma > 1, got {}", self.s.sigma)));
        }
        if (self.n_max as f64) < 4.0 * self.w {
            return Err(Error::invalid(format!(
                "prime-side truncation {} is below 4W = {}",
                self.n_max,
                4.0 * self.w
            )));
        }
        Ok(())
    }

    pub fn with_s(&self, s: ComplexPoint) -> Self {
        Self { s, ..*self }
    }
}

/// A value together with a bound on the truncated remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncated {
    pub value: Complex64,
    pub tail: f64,
    /// Floating-point allowance for the summation itself.
    pub noise: f64,
}

/// Γ(m, x) for integer m >= 1.
fn upper_gamma_int(m: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..m {
        term *= x / i as f64;
        sum += term;
    }
    factorial(m - 1) * (-x).exp() * sum
}

/// Σ_{W < n <= n_max} Λ(n) n^{-s} log^{k-1}(n/W) without domain checks.
///
/// The tail bound compares Σ_{n > n_max} with ∫ log u · u^{-σ} log^{k-1}(u/W) du,
/// which needs the summand to be decreasing from n_max on; when it is not,
/// the tail is reported as infinite.
pub fn prime_side_raw(table: &LambdaTable, w: f64, k: u32, s: ComplexPoint, n_max: u64) -> Result<Truncated> {
    if n_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "n_max",
            value: n_max as f64,
            range: format!("[1, {}] (sieve limit)", table.limit()),
        });
    }
    let z = s.to_complex();
    let lw = w.ln();
    let first = w.floor() as u64 + 1;
    let mut acc = ComplexSum::new();
    let mut magnitude = 0.0;
    for (n, lam) in table.prime_powers_between(first, n_max) {
        let ln = (n as f64).ln();
        let term = (-z * ln).exp() * (lam * (ln - lw).powi(k as i32 - 1));
        magnitude += term.norm();
        acc.add(term);
    }
    let big_n = n_max as f64;
    let v0 = (big_n / w).ln();
    let decreasing = v0 > 0.0 && 1.0 / big_n.ln() + (k as f64 - 1.0) / v0 <= s.sigma;
    let tail = if !decreasing {
        f64::INFINITY
    } else if s.sigma > 1.0 {
        let a = s.sigma - 1.0;
        let x = a * v0;
        w.powf(1.0 - s.sigma)
            * (lw * upper_gamma_int(k, x) / a.powi(k as i32) + upper_gamma_int(k + 1, x) / a.powi(k as i32 + 1))
    } else {
        f64::INFINITY
    };
    let noise = 8.0 * f64::EPSILON * (1.0 + z.norm() * big_n.ln() + k as f64) * magnitude;
    Ok(Truncated { value: acc.total(), tail, noise })
}

/// Left side of the identity, truncated at `spec.n_max`.
pub fn prime_side(spec: &WeightedSumSpec, table: &LambdaTable) -> Result<Truncated> {
    spec.validate()?;
    prime_side_raw(table, spec.w, spec.k, spec.s, spec.n_max)
}

/// Pieces of the right side before the (k-1)! factor.
#[derive(Debug, Clone, Copy)]
struct ZeroSideParts {
    pole: Complex64,
    zeros: Complex64,
    trivial: Complex64,
    zero_tail: f64,
    trivial_tail: f64,
    noise: f64,
}

fn zero_side_parts(spec: &WeightedSumSpec, zeros: &ZeroDataset) -> Result<ZeroSideParts> {
    if spec.zero_pairs > zeros.len() {
        return Err(Error::InsufficientData(format!(
            "asked for {} zero pairs, dataset has {}",
            spec.zero_pairs,
            zeros.len()
        )));
    }
    let z = spec.s.to_complex();
    let lw = spec.w.ln();
    let k = spec.k as i32;
    let pole = ((1.0 - z) * lw).exp() / (z - 1.0).powi(k);

    let used = &zeros.ordinates()[..spec.zero_pairs];
    let mut acc = ComplexSum::new();
    let mut magnitude = 0.0;
    for &g in used.iter().rev() {
        for rho in [Complex64::new(0.5, g), Complex64::new(0.5, -g)] {
            let term = ((rho - z) * lw).exp() / (z - rho).powi(k);
            magnitude += term.norm();
            acc.add(term);
        }
    }
    let t = spec.s.t.abs();
    let zero_tail = match used.last() {
        // |W^{ρ-s}/(s-ρ)^k| <= W^{1/2-σ}/(γ-|t|)^k for each member of a pair
        Some(&last) if last > t + 1.0 => {
            zero_tail_bound(last, 2.0 * spec.w.powf(0.5 - spec.s.sigma), t, spec.k as f64)?
        }
        _ => f64::INFINITY,
    };

    let mut triv = ComplexSum::new();
    for n in (1..=spec.m_triv).rev() {
        let two_n = 2.0 * n as f64;
        triv.add(((-two_n - z) * lw).exp() / (z + two_n).powi(k));
    }
    // |W^{-2n-s}/(s+2n)^k| <= W^{-σ} W^{-2n} / (2n)^k, geometric beyond m_triv
    let m1 = spec.m_triv as f64 + 1.0;
    let trivial_tail = spec.w.powf(-spec.s.sigma) * spec.w.powf(-2.0 * m1) / (2.0 * m1).powi(k)
        / (1.0 - spec.w.powi(-2));

    let top = used.last().copied().unwrap_or(0.0);
    let noise = 8.0 * f64::EPSILON
        * ((1.0 + (top + t) * lw + spec.k as f64) * magnitude + (1.0 + t * lw) * pole.norm());
    Ok(ZeroSideParts { pole, zeros: acc.total(), trivial: triv.total(), zero_tail, trivial_tail, noise })
}

/// Right side of the identity with zero-tail and trivial-tail bounds.
pub fn zero_side(spec: &WeightedSumSpec, zeros: &ZeroDataset) -> Result<Truncated> {
    spec.validate()?;
    let p = zero_side_parts(spec, zeros)?;
    let f = factorial(spec.k - 1);
    Ok(Truncated {
        value: f * (p.pole - p.zeros - p.trivial),
        tail: f * (p.zero_tail + p.trivial_tail),
        noise: f * p.noise,
    })
}

/// The analytic prime-side bound
/// 9·2^{σ-1} W^{1-σ} (k-1)! / (2t (2^{σ-1}-1) (σ-1)^{k-1}).
pub fn weighted_sum_bound(w: f64, k: u32, s: ComplexPoint) -> f64 {
    let two = 2f64.powf(s.sigma - 1.0);
    9.0 * two * w.powf(1.0 - s.sigma) * factorial(k - 1)
        / (2.0 * s.t.abs() * (two - 1.0) * (s.sigma - 1.0).powi(k as i32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// Analytic bound on |lhs|; reported, not compared with the residual.
    pub bound: f64,
    pub truncation_allowance: f64,
    pub prime_tail: f64,
    pub zero_tail: f64,
    pub noise: f64,
}

impl ResidualReport {
    pub fn within_allowance(&self) -> bool {
        self.residual <= self.truncation_allowance
    }
}

/// Both sides of the identity and the residual against the summed tails.
pub fn explicit_residual(spec: &WeightedSumSpec, table: &LambdaTable, zeros: &ZeroDataset) -> Result<ResidualReport> {
    let lhs = prime_side(spec, table)?;
    let rhs = zero_side(spec, zeros)?;
    let noise = lhs.noise + rhs.noise;
    Ok(ResidualReport {
        lhs: lhs.value,
        rhs: rhs.value,
        residual: (lhs.value - rhs.value).norm(),
        bound: weighted_sum_bound(spec.w, spec.k, spec.s),
        truncation_allowance: lhs.tail + rhs.tail + noise,
        prime_tail: lhs.tail,
        zero_tail: rhs.tail,
        noise,
    })
}

fn check_oscillation_domain(s: ComplexPoint) -> Result<()> {
    if s.sigma <= 1.0 {
        return Err(Error::domain(format!("need sigma > 1, got {}", s.sigma)));
    }
    if s.t < 15.0 {
        return Err(Error::OutOfRange { what: "t", value: s.t, range: "[15, inf)".into() });
    }
    Ok(())
}

/// Smallest N for which the oscillating-sum bound applies at height t.
pub fn oscillation_threshold(t: f64) -> f64 {
    9.0 * (t * t + 1.0) / 8.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFReport {
    pub w: f64,
    pub n: u64,
    pub s: ComplexPoint,
    /// Σ_{N <= n <= limit} Λ(n) n^{-s}
    pub value: Complex64,
    /// Bound on the terms beyond the sieve limit.
    pub truncation_tail: f64,
    pub bound: f64,
    pub ratio: f64,
    /// N >= 9(t²+1)/8
    pub size_condition: bool,
}

impl TailFReport {
    /// |F| <= bound, counting the unsummed tail against the value.
    pub fn holds(&self) -> bool {
        self.value.norm() + self.truncation_tail <= self.bound
    }
}

/// 9·2^{σ-1} / (2t (2^{σ-1}-1) N^{σ-1})
pub fn tail_f_bound(n: f64, s: ComplexPoint) -> f64 {
    let two = 2f64.powf(s.sigma - 1.0);
    9.0 * two / (2.0 * s.t * (two - 1.0) * n.powf(s.sigma - 1.0))
}

/// Σ_{n > L} Λ(n) n^{-σ} <= 2σ L^{1-σ}/(σ-1), from ψ(u) <= 2u.
fn lambda_tail(limit: u64, sigma: f64) -> f64 {
    2.0 * sigma * (limit as f64).powf(1.0 - sigma) / (sigma - 1.0)
}

/// F_W(s) = Σ_{n >= ⌊W⌋+1} Λ(n) n^{-s}, summed to the sieve limit.
pub fn tail_f(w: f64, s: ComplexPoint, table: &LambdaTable) -> Result<TailFReport> {
    check_oscillation_domain(s)?;
    if !(w > 0.0) {
        return Err(Error::OutOfRange { what: "W", value: w, range: "(0, inf)".into() });
    }
    let n = w.floor() as u64 + 1;
    if n > table.limit() {
        return Err(Error::OutOfRange {
            what: "W",
            value: w,
            range: format!("below the sieve limit {}", table.limit()),
        });
    }
    let z = s.to_complex();
    let mut acc = ComplexSum::new();
    for (m, lam) in table.prime_powers_between(n, table.limit()) {
        acc.add(lam * (-z * (m as f64).ln()).exp());
    }
    let value = acc.total();
    let bound = tail_f_bound(n as f64, s);
    Ok(TailFReport {
        w,
        n,
        s,
        value,
        truncation_tail: lambda_tail(table.limit(), s.sigma),
        bound,
        ratio: value.norm() / bound,
        size_condition: n as f64 >= oscillation_threshold(s.t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockReport {
    pub j: u32,
    pub n: u64,
    pub value: Complex64,
    pub bound: f64,
}

impl BlockReport {
    pub fn holds(&self) -> bool {
        self.value.norm() <= self.bound
    }
}

/// 9 / (2t · 2^{(σ-1)(j-1)} N^{σ-1})
pub fn dyadic_block_bound(j: u32, n: f64, s: ComplexPoint) -> f64 {
    9.0 / (2.0 * s.t * 2f64.powf((s.sigma - 1.0) * (j as f64 - 1.0)) * n.powf(s.sigma - 1.0))
}

/// G_j(s) = Σ_{2^{j-1}N <= n < 2^j N} Λ(n) n^{-s}.
pub fn dyadic_block_g(j: u32, n: u64, s: ComplexPoint, table: &LambdaTable) -> Result<BlockReport> {
    check_oscillation_domain(s)?;
    if j == 0 || n == 0 {
        return Err(Error::invalid(format!("need j >= 1 and N >= 1, got j = {j}, N = {n}")));
    }
    let hi = 1u64
        .checked_shl(j)
        .and_then(|p| p.checked_mul(n))
        .filter(|&hi| hi <= table.limit())
        .ok_or_else(|| Error::OutOfRange {
            what: "2^j N",
            value: 2f64.powi(j as i32) * n as f64,
            range: format!("[1, {}] (sieve limit)", table.limit()),
        })?;
    let lo = hi / 2;
    let z = s.to_complex();
    let mut acc = ComplexSum::new();
    for (m, lam) in table.prime_powers_between(lo, hi - 1) {
        acc.add(lam * (-z * (m as f64).ln()).exp());
    }
    Ok(BlockReport { j, n, value: acc.total(), bound: dyadic_block_bound(j, n as f64, s) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationReport {
    pub n1: u64,
    pub n2: u64,
    pub t: f64,
    pub value: Complex64,
    pub bound: f64,
    /// Sampled n where |n^{-it} - (n+1)^{-it}| exceeded t/n.
    pub step_violations: usize,
    pub steps_checked: usize,
}

impl OscillationReport {
    pub fn holds(&self) -> bool {
        self.value.norm() <= self.bound && self.step_violations == 0
    }
}

/// Σ_{N1 <= n < N2} n^{-it} against 2 N2 / t.
pub fn oscillating_block_sum(n1: u64, n2: u64, t: f64) -> Result<OscillationReport> {
    if !(t >= 15.0) {
        return Err(Error::invalid(format!("need t >= 15, got t = {t}")));
    }
    if n2 < n1 {
        return Err(Error::invalid(format!("need N2 >= N1, got N1 = {n1}, N2 = {n2}")));
    }
    let threshold = oscillation_threshold(t);
    if (n1 as f64) < threshold {
        return Err(Error::invalid(format!("need N1 >= 9(t^2+1)/8 = {threshold}, got N1 = {n1}")));
    }
    let mut acc = ComplexSum::new();
    for n in n1..n2 {
        acc.add(Complex64::from_polar(1.0, -t * (n as f64).ln()));
    }
    // per-step mean-value bound, on up to 64 evenly spaced n
    let span = n2.saturating_sub(n1).max(1);
    let stride = (span / 64).max(1);
    let mut checked = 0;
    let mut violations = 0;
    let mut n = n1;
    while n < n2.max(n1 + 1) {
        let nf = n as f64;
        let a = Complex64::from_polar(1.0, -t * nf.ln());
        let b = Complex64::from_polar(1.0, -t * (nf + 1.0).ln());
        if (a - b).norm() > t / nf {
            violations += 1;
        }
        checked += 1;
        n += stride;
    }
    Ok(OscillationReport {
        n1,
        n2,
        t,
        value: acc.total(),
        bound: 2.0 * n2 as f64 / t,
        step_violations: violations,
        steps_checked: checked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingReport {
    pub direct: Complex64,
    pub integral: Complex64,
    pub residual: f64,
    pub allowance: f64,
    pub segments: usize,
}

impl SmoothingReport {
    pub fn holds(&self) -> bool {
        self.residual <= self.allowance
    }
}

/// Compares Σ_{W<n<=U} Λ(n) n^{-s} log^{k-1}(n/W) with
/// (k-1) ∫_W^U F_u(s) log^{k-2}(u/W) du/u, where F_u sums n in [u, U].
///
/// F_u is constant between integers, so the integral is a sum over unit
/// segments of F times a smooth weight; each weight integral uses
/// Gauss–Legendre of order `quad_nodes`, accepted when the doubled order
/// agrees to 1e-14 relative.
pub fn smoothing_identity_check(
    w: f64,
    k: u32,
    s: ComplexPoint,
    table: &LambdaTable,
    quad_nodes: usize,
    u_max: u64,
) -> Result<SmoothingReport> {
    if s.sigma <= 1.0 {
        return Err(Error::domain(format!("need sigma > 1, got {}", s.sigma)));
    }
    if k < 4 {
        return Err(Error::OutOfRange { what: "k", value: k as f64, range: "[4, inf)".into() });
    }
    if !(w > 1.0) || (u_max as f64) <= w {
        return Err(Error::invalid(format!("need 1 < W < U_max, got W = {w}, U_max = {u_max}")));
    }
    if u_max > table.limit() {
        return Err(Error::OutOfRange {
            what: "U_max",
            value: u_max as f64,
            range: format!("[1, {}] (sieve limit)", table.limit()),
        });
    }
    if quad_nodes < 2 {
        return Err(Error::invalid("need at least 2 quadrature nodes"));
    }
    let z = s.to_complex();
    let lw = w.ln();
    let first = w.floor() as u64 + 1;

    // term[n - first] = Λ(n) n^{-s}
    let terms: Vec<Complex64> = (first..=u_max)
        .map(|n| {
            let lam = table.lambda(n);
            if lam > 0.0 {
                lam * (-z * (n as f64).ln()).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();

    let mut direct = ComplexSum::new();
    let mut magnitude = 0.0;
    for (i, t) in terms.iter().enumerate() {
        let n = (first + i as u64) as f64;
        let term = t * (n.ln() - lw).powi(k as i32 - 1);
        magnitude += term.norm();
        direct.add(term);
    }

    let fine = GaussRule::new(quad_nodes);
    let finer = GaussRule::new(2 * quad_nodes);
    let weight = |u: f64| (u.ln() - lw).powi(k as i32 - 2) / u;
    let mut integral = ComplexSum::new();
    let mut suffix = ComplexSum::new();
    let mut quad_err = CompensatedSum::new();
    let mut worst = (0.0_f64, w);
    // segment (a, b] where F_u = Σ_{n >= b} terms, b runs down from U_max
    for i in (0..terms.len()).rev() {
        suffix.add(terms[i]);
        let b = (first + i as u64) as f64;
        let a = (b - 1.0).max(w);
        let lo = fine.integrate(a, b, weight);
        let hi = finer.integrate(a, b, weight);
        let diff = (hi - lo).abs();
        if diff > 1e-14 * hi.abs().max(1e-300) && diff > 1e-300 {
            if diff > worst.0 {
                worst = (diff, a);
            }
        }
        let f = suffix.total();
        quad_err.add(diff * f.norm());
        integral.add(f * (hi * (k as f64 - 1.0)));
    }
    if worst.0 > 1e-10 {
        return Err(Error::Convergence(format!(
            "weight integral on segment starting at {} changed by {:e} under node doubling",
            worst.1, worst.0
        )));
    }
    let direct = direct.total();
    let integral = integral.total();
    let allowance = (k as f64 - 1.0) * quad_err.total()
        + 16.0 * f64::EPSILON * (1.0 + k as f64) * (terms.len() as f64).sqrt() * magnitude.max(integral.norm());
    Ok(SmoothingReport {
        direct,
        integral,
        residual: (direct - integral).norm(),
        allowance,
        segments: terms.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedReport {
    pub s0: ComplexPoint,
    pub multiplier: Complex64,
    /// W^{1-ρ'} ((s₀-ρ')/(s₀-1))^k
    pub pole_term: Complex64,
    /// Σ_ρ W^{ρ-ρ'} ((s₀-ρ')/(s₀-ρ))^k over the zeros used
    pub zero_term: Complex64,
    /// Σ_n W^{-2n-ρ'} ((s₀-ρ')/(s₀+2n))^k
    pub trivial_term: Complex64,
    /// Residual of the identity at s₀ before multiplication.
    pub base: ResidualReport,
    /// |multiplier| times the base residual.
    pub residual: f64,
    pub truncation_allowance: f64,
    /// A W^{1-β'} / γ'^τ
    pub analytic_bound: f64,
    pub a_constant: f64,
    pub tau: f64,
}

/// The identity at s₀ multiplied by W^{s₀-ρ'} (s₀-ρ')^k.
///
/// `spec` supplies W, k and the truncations; its s is replaced by s₀.
pub fn normalized_identity(
    spec: &WeightedSumSpec,
    config: &ExperimentConfig,
    table: &LambdaTable,
    zeros: &ZeroDataset,
) -> Result<NormalizedReport> {
    let derived = derived_params(config)?;
    let exps = exponent_table(config)?;
    let s0 = derived.s0;
    let at = spec.with_s(s0);
    let base = explicit_residual(&at, table, zeros)?;
    let parts = zero_side_parts(&at, zeros)?;

    let rho_p = Complex64::new(config.beta_p, config.gamma_p);
    let z0 = s0.to_complex();
    let lw = spec.w.ln();
    let k = spec.k as i32;
    let shift = z0 - rho_p;
    let multiplier = (shift * lw).exp() * shift.powi(k);
    let f = factorial(spec.k - 1);

    let sigma = s0.sigma;
    let two = 2f64.powf(sigma - 1.0);
    let a_constant = 9.0 * (sigma - 1.0) * two / (2.0 * (two - 1.0));
    let analytic_bound = a_constant * spec.w.powf(1.0 - config.beta_p) / config.gamma_p.powf(exps.tau);
    let m = multiplier.norm();
    Ok(NormalizedReport {
        s0,
        multiplier,
        pole_term: multiplier * parts.pole,
        zero_term: multiplier * parts.zeros,
        trivial_term: multiplier * parts.trivial,
        residual: m * base.residual,
        truncation_allowance: m * base.truncation_allowance,
        base,
        analytic_bound: analytic_bound * f,
        a_constant,
        tau: exps.tau,
    })
}
