//! Sieve-backed arithmetic: the von Mangoldt table, ψ and ϖ under the
//! half-maximum convention, and the remainder exponents H_j.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, CompensatedSum};

/// Default memory budget for [`sieve_lambda`], in bytes.
pub const DEFAULT_SIEVE_BUDGET: u64 = 2 << 30;

const BYTES_PER_ENTRY: u64 = (std::mem::size_of::<f64>() + std::mem::size_of::<bool>()) as u64;

/// Λ(n) for 1 <= n <= limit.
///
/// Immutable once built; index 0 is a zero placeholder so that
/// `lambda(n)` is a plain index.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    limit: u64,
    values: Vec<f64>,
    prime_flags: Vec<bool>,
}

impl LambdaTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Λ(n); panics if `n` is outside 1..=limit.
    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        assert!(n >= 1 && n <= self.limit, "n = {n} outside table 1..={}", self.limit);
        self.values[n as usize]
    }

    /// Whether `n` is a prime power.
    #[inline]
    pub fn is_prime_power(&self, n: u64) -> bool {
        self.prime_flags[n as usize]
    }

    /// Λ(1), ..., Λ(limit) as a slice indexed from 1 (slot 0 is unused).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Prime powers n <= min(limit, upto) with their Λ(n).
    pub fn prime_powers(&self, upto: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        let end = upto.min(self.limit) as usize;
        self.values[..=end]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(n, &v)| (n as u64, v))
    }

    /// Prime powers in [lo, min(hi, limit)], ascending.
    pub fn prime_powers_between(&self, lo: u64, hi: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        let end = hi.min(self.limit) as usize;
        let start = (lo.max(1) as usize).min(end + 1);
        self.values[start..=end]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(move |(i, &v)| ((start + i) as u64, v))
    }
}

/// Sieve Λ(n) up to `limit` with the default memory budget.
pub fn sieve_lambda(limit: u64) -> Result<LambdaTable> {
    sieve_lambda_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

pub fn sieve_lambda_with_budget(limit: u64, budget_bytes: u64) -> Result<LambdaTable> {
    if limit < 2 {
        return Err(Error::invalid(format!("sieve limit must be >= 2, got {limit}")));
    }
    let bytes = (limit + 1).saturating_mul(BYTES_PER_ENTRY);
    if bytes > budget_bytes {
        return Err(Error::Resource { limit, bytes, budget: budget_bytes });
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut values = vec![0.0_f64; n + 1];
    let mut prime_flags = vec![false; n + 1];
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        if let Some(start) = p.checked_mul(p) {
            let mut m = start;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
        let log_p = (p as f64).ln();
        let mut q = p;
        loop {
            values[q] = log_p;
            prime_flags[q] = true;
            match q.checked_mul(p) {
                Some(next) if next <= n => q = next,
                _ => break,
            }
        }
    }
    Ok(LambdaTable { limit, values, prime_flags })
}

fn check_x(x: f64, lo: f64, table: &LambdaTable) -> Result<()> {
    if !x.is_finite() || x < lo {
        return Err(Error::OutOfRange { what: "x", value: x, range: format!("[{lo}, limit]") });
    }
    if x > table.limit as f64 {
        return Err(Error::OutOfRange {
            what: "x",
            value: x,
            range: format!("[{lo}, {}]", table.limit),
        });
    }
    Ok(())
}

/// Integer n with n == x exactly, if any.
fn as_integer(x: f64) -> Option<u64> {
    (x.fract() == 0.0).then_some(x as u64)
}

/// ψ(x) = Σ_{n<=x} Λ(n), halved at jumps.
///
/// Summed in ascending n with compensation; when x is itself a prime power
/// half of Λ(x) is subtracted afterwards.
pub fn psi(x: f64, table: &LambdaTable) -> Result<f64> {
    check_x(x, f64::MIN_POSITIVE, table)?;
    let end = x.floor() as u64;
    let mut acc = CompensatedSum::new();
    for n in 1..=end {
        acc.add(table.values[n as usize]);
    }
    let mut value = acc.total();
    if let Some(n) = as_integer(x) {
        if n >= 1 && table.values[n as usize] != 0.0 {
            value -= 0.5 * table.values[n as usize];
        }
    }
    Ok(value)
}

/// ϖ(x) = Σ_{n<=x} (Λ(n) - 1), halved at every integer jump.
pub fn varpi(x: f64, table: &LambdaTable) -> Result<f64> {
    check_x(x, 1.0, table)?;
    let end = x.floor() as u64;
    let mut acc = CompensatedSum::new();
    for n in 1..=end {
        acc.add(table.values[n as usize] - 1.0);
    }
    let mut value = acc.total();
    if let Some(n) = as_integer(x) {
        let jump = table.values[n as usize] - 1.0;
        if jump != 0.0 {
            value -= 0.5 * jump;
        }
    }
    Ok(value)
}

/// Coefficient 3.1 + j/8 shared by H_j and h_j.
pub fn region_coefficient(j: u32) -> f64 {
    3.1 + f64::from(j) / 8.0
}

/// The remainder exponent H_j together with its crossover x_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionExponent {
    pub j: u32,
    pub coefficient: f64,
    pub crossover: f64,
}

impl RegionExponent {
    pub fn new(j: u32) -> Self {
        Self { j, coefficient: region_coefficient(j), crossover: solve_crossover(j) }
    }

    /// H_j(x).
    pub fn at(&self, x: f64) -> Result<f64> {
        remainder_exponent(x, self)
    }
}

/// x_j: the largest x > e with (3.1 + j/8) log log x = log x.
///
/// Works in u = log x where the equation is c log u = u; the function
/// c log u - u is concave and positive at u = e, so the root beyond e is
/// unique and bisection on a doubling bracket finds it.
///
/// Returns +inf once x_j exceeds the f64 range (j above roughly 1100).
pub fn solve_crossover(j: u32) -> f64 {
    let c = region_coefficient(j);
    let f = |u: f64| c * u.ln() - u;
    let lo = std::f64::consts::E;
    let mut hi = 1e3;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    let u = bisect(f, lo, hi, 0.0, 1e-15).expect("c log u - u changes sign on [e, hi]");
    u.exp()
}

/// H_j(x): 1/2 up to the crossover, (3.1 + j/8) log log x / log x beyond it.
pub fn remainder_exponent(x: f64, region: &RegionExponent) -> Result<f64> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::OutOfRange { what: "x", value: x, range: "(2, inf)".into() });
    }
    if x <= region.crossover {
        Ok(0.5)
    } else {
        let lx = x.ln();
        Ok(region.coefficient * lx.ln() / lx)
    }
}

/// One sample of a remainder-bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RemainderSample {
    pub x: f64,
    pub psi: f64,
    pub varpi: f64,
    pub exponent: f64,
    pub bound: f64,
    /// |ϖ(x)| / bound; infinite when the bound is 0 and ϖ(x) is not.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderReport {
    pub b: f64,
    pub samples: Vec<RemainderSample>,
    pub worst_ratio: f64,
    pub worst_x: f64,
    /// Samples whose ratio is infinite (degenerate bound).
    pub flagged: usize,
}

/// Compare |ϖ(x)| with B x^{1-H_j(x)} log^2 x at each sample point.
pub fn check_remainder_bound(
    table: &LambdaTable,
    region: &RegionExponent,
    b: f64,
    sample_points: &[f64],
) -> Result<RemainderReport> {
    remainder_report(table, b, sample_points, |x| remainder_exponent(x, region))
}

/// The same comparison with the exponent pinned to the 1/2 branch, i.e.
/// the bound B √x log^2 x.
pub fn check_remainder_bound_half(
    table: &LambdaTable,
    b: f64,
    sample_points: &[f64],
) -> Result<RemainderReport> {
    remainder_report(table, b, sample_points, |_| Ok(0.5))
}

fn remainder_report<H>(
    table: &LambdaTable,
    b: f64,
    sample_points: &[f64],
    exponent: H,
) -> Result<RemainderReport>
where
    H: Fn(f64) -> Result<f64>,
{
    if sample_points.is_empty() {
        return Err(Error::invalid("remainder check needs at least one sample point"));
    }
    if !(b >= 0.0) {
        return Err(Error::invalid(format!("bound constant B must be >= 0, got {b}")));
    }
    let mut samples = Vec::with_capacity(sample_points.len());
    for &x in sample_points {
        if !(x > 2.0) {
            return Err(Error::OutOfRange { what: "x", value: x, range: "(2, limit]".into() });
        }
        let h = exponent(x)?;
        let p = psi(x, table)?;
        let w = varpi(x, table)?;
        let lx = x.ln();
        let bound = b * x.powf(1.0 - h) * lx * lx;
        let ratio = if bound > 0.0 {
            w.abs() / bound
        } else if w == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        samples.push(RemainderSample { x, psi: p, varpi: w, exponent: h, bound, ratio });
    }
    let (worst_x, worst_ratio) = samples
        .iter()
        .map(|s| (s.x, s.ratio))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let flagged = samples.iter().filter(|s| s.ratio.is_infinite()).count();
    Ok(RemainderReport { b, samples, worst_ratio, worst_x, flagged })
}

/// `count` points log-spaced over [lo, hi], endpoints included.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .map(|x| x.clamp(lo, hi))
                .collect()
        }
    }
}
