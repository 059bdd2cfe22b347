//! Zero ordinates: ingestion, Riemann–von Mangoldt counting against
//! Schoenfeld's explicit error term, short-interval counts, and the
//! zero-free-region functions h_j(t), t_j.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::region_coefficient;
use crate::error::{Error, Result};
use crate::numeric::{bisect, ln_gamma};
use crate::zeta::{zeta_integral, ComplexPoint, DEFAULT_QUAD_NODES};

/// Lower clamp for t_j: zeros below this height are known to lie on the
/// critical line.
pub const VERIFIED_HEIGHT: f64 = 29753.0;

/// Ascending ordinates γ > 0 of nontrivial zeros ρ = 1/2 + iγ.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroDataset {
    ordinates: Vec<f64>,
    source: String,
}

impl ZeroDataset {
    /// Validates strict ascent and positivity; `line_of(i)` is only used
    /// in error messages.
    pub fn new(ordinates: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        Self::validated(ordinates, source.into(), |i| i + 1)
    }

    fn validated(
        ordinates: Vec<f64>,
        source: String,
        line_of: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::Parse { line: line_of(i), msg: format!("ordinate {g} is not positive") });
            }
            if g <= 14.0 {
                return Err(Error::Parse {
                    line: line_of(i),
                    msg: format!("ordinate {g} is below the first zero height 14"),
                });
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::NotAscending { line: line_of(i), prev: ordinates[i - 1], next: g });
            }
        }
        Ok(Self { ordinates, source })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Largest ordinate, i.e. the height up to which counts are exact.
    pub fn coverage(&self) -> Option<f64> {
        self.ordinates.last().copied()
    }

    /// Keep only the first `k` ordinates.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            ordinates: self.ordinates[..k.min(self.len())].to_vec(),
            source: format!("{} (first {k})", self.source),
        }
    }

    fn require_coverage(&self, t: f64) -> Result<()> {
        match self.coverage() {
            None => Err(Error::InsufficientData("zero dataset is empty".into())),
            Some(top) if t > top => Err(Error::InsufficientData(format!(
                "height {t} is beyond the last ordinate {top}"
            ))),
            Some(_) => Ok(()),
        }
    }

    /// Number of ordinates in [lo, hi].
    pub fn count_between(&self, lo: f64, hi: f64) -> usize {
        let a = self.ordinates.partition_point(|&g| g < lo);
        let b = self.ordinates.partition_point(|&g| g <= hi);
        b.saturating_sub(a)
    }
}

/// Parse a zero table: one decimal ordinate per line, '#' comments, LF or
/// CRLF line endings, blank lines ignored.
pub fn parse_zeros(text: &str, source: impl Into<String>) -> Result<ZeroDataset> {
    let mut ordinates = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let g: f64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            msg: format!("cannot parse {line:?} as a decimal ordinate"),
        })?;
        ordinates.push(g);
        lines.push(idx + 1);
    }
    ZeroDataset::validated(ordinates, source.into(), |i| lines[i])
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_zeros(&text, path.display().to_string())
}

/// Render ordinates in the table format, with at least six fractional
/// digits and enough to round-trip exactly.
pub fn format_zeros(dataset: &ZeroDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# source: {}", dataset.source);
    for &g in &dataset.ordinates {
        let _ = writeln!(out, "{}", format_ordinate(g));
    }
    out
}

fn format_ordinate(g: f64) -> String {
    let short = format!("{g}");
    let frac = short.split_once('.').map_or(0, |(_, f)| f.len());
    if frac >= 6 {
        short
    } else {
        format!("{g:.6}")
    }
}

pub fn write_zeros(path: impl AsRef<Path>, dataset: &ZeroDataset) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_zeros(dataset)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// θ(t) = Im log Γ(1/4 + it/2) - (t/2) log π, the phase making
/// e^{iθ} ζ(1/2 + it) real.
pub fn siegel_theta(t: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

/// The real-valued rotation Z(t) = e^{iθ(t)} ζ(1/2 + it).
pub fn siegel_z(t: f64) -> Result<f64> {
    let zeta = zeta_integral(ComplexPoint::new(0.5, t)?, DEFAULT_QUAD_NODES)?;
    let rotated = Complex64::from_polar(1.0, siegel_theta(t)) * zeta.value;
    Ok(rotated.re)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignChangeScan {
    pub zeros: Vec<f64>,
    /// Grid cells where |Z| dips without a detected sign change; a pair of
    /// close zeros could hide there.
    pub unresolved: Vec<(f64, f64)>,
}

/// Upper end of the range where the locator is trusted.
pub const LOCATOR_MAX_HEIGHT: f64 = 100.0;

/// Zeros of Z(t) on [t_lo, t_hi] from sign changes on a uniform grid of
/// `grid` cells, each refined by bisection to 1e-9.
///
/// Cells without an endpoint sign change are probed at the midpoint; a
/// sign flip there yields two zeros, and a dip of |Z| below both
/// endpoints is listed as unresolved.
pub fn locate_zero_signchange(t_lo: f64, t_hi: f64, grid: usize) -> Result<SignChangeScan> {
    if !(t_lo > 0.0 && t_lo < t_hi && t_hi <= LOCATOR_MAX_HEIGHT) {
        return Err(Error::invalid(format!(
            "locator needs 0 < t_lo < t_hi <= {LOCATOR_MAX_HEIGHT}, got [{t_lo}, {t_hi}]"
        )));
    }
    if grid == 0 {
        return Err(Error::invalid("grid must have at least one cell"));
    }
    let h = (t_hi - t_lo) / grid as f64;
    let nodes: Vec<f64> = (0..=grid).map(|i| if i == grid { t_hi } else { t_lo + i as f64 * h }).collect();
    let values = nodes.iter().map(|&t| siegel_z(t)).collect::<Result<Vec<_>>>()?;

    let refine = |a: f64, b: f64| bisect(|t| siegel_z(t).unwrap_or(f64::NAN), a, b, 1e-9, 0.0);
    let mut zeros = Vec::new();
    let mut unresolved = Vec::new();
    for i in 0..grid {
        let (a, b) = (nodes[i], nodes[i + 1]);
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            zeros.push(a);
            continue;
        }
        if fa.signum() != fb.signum() {
            if fb != 0.0 {
                zeros.extend(refine(a, b));
            }
            continue;
        }
        let m = 0.5 * (a + b);
        let fm = siegel_z(m)?;
        if fm.signum() != fa.signum() {
            zeros.extend(refine(a, m));
            zeros.extend(refine(m, b));
        } else if fm.abs() < fa.abs() && fm.abs() < fb.abs() {
            unresolved.push((a, b));
        }
    }
    zeros.dedup();
    Ok(SignChangeScan { zeros, unresolved })
}

/// N(T): ordinates in (0, T].
pub fn count_n(dataset: &ZeroDataset, t: f64) -> Result<usize> {
    dataset.require_coverage(t)?;
    Ok(dataset.ordinates.partition_point(|&g| g <= t))
}

/// M(T) = (T/2π) log(T/2π) - T/2π.
pub fn main_term_m(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("M(T) needs T > 0, got {t}")));
    }
    let u = t / (2.0 * PI);
    Ok(u * u.ln() - u)
}

/// Q(T) = 0.137 log T + 0.443 log log T + 1.588.
pub fn q_bound(t: f64) -> Result<f64> {
    if !(t >= E) {
        return Err(Error::domain(format!("Q(T) needs T >= e, got {t}")));
    }
    let l = t.ln();
    Ok(0.137 * l + 0.443 * l.ln().max(0.0) + 1.588)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountReport {
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub slack: f64,
}

impl CountReport {
    pub fn holds(&self) -> bool {
        self.slack >= 0.0
    }
}

/// |N(T) - M(T) + 7/8| <= Q(T), reported as slack = Q - |N - M + 7/8|.
pub fn check_schoenfeld(dataset: &ZeroDataset, t: f64) -> Result<CountReport> {
    let q = q_bound(t)?;
    let n = count_n(dataset, t)?;
    let m = main_term_m(t)?;
    let slack = q - (n as f64 - m + 0.875).abs();
    Ok(CountReport { t, n, m, q, slack })
}

/// Heights probing every step of N(T) up to `t_max`: integers from 15,
/// midpoints between consecutive ordinates, and each ordinate ± 1e-6.
pub fn schoenfeld_sample_points(dataset: &ZeroDataset, t_max: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (15..).map(f64::from).take_while(|&t| t <= t_max).collect();
    let g = &dataset.ordinates;
    for (i, &x) in g.iter().enumerate() {
        pts.push(x - 1e-6);
        pts.push(x + 1e-6);
        if let Some(&y) = g.get(i + 1) {
            pts.push(0.5 * (x + y));
        }
    }
    let top = dataset.coverage().unwrap_or(0.0).min(t_max);
    pts.retain(|&t| t > E && t <= top);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

pub fn schoenfeld_sweep(dataset: &ZeroDataset, t_max: f64) -> Result<Vec<CountReport>> {
    schoenfeld_sample_points(dataset, t_max)
        .into_iter()
        .map(|t| check_schoenfeld(dataset, t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShortIntervalReport {
    pub gamma2: f64,
    pub d: f64,
    pub count: usize,
    /// (7d/22) log γ''
    pub lemma_bound: f64,
    /// M(t+d) - M(t-d) + Q(t+d) + Q(t-d)
    pub chain_bound: f64,
    /// (d/π)(log((t+d)/2π) + 2π + 1)
    pub mvt_bound: f64,
}

impl ShortIntervalReport {
    pub fn lemma_holds(&self) -> bool {
        self.count as f64 <= self.lemma_bound
    }

    pub fn chain_holds(&self) -> bool {
        self.count as f64 <= self.chain_bound
    }

    pub fn mvt_holds(&self) -> bool {
        self.count as f64 <= self.mvt_bound
    }
}

/// Zeros with |γ - γ''| <= d, against the short-interval bounds.
pub fn short_interval_count(dataset: &ZeroDataset, gamma2: f64, d: f64) -> Result<ShortIntervalReport> {
    if !(gamma2 >= 16.0) {
        return Err(Error::OutOfRange { what: "gamma2", value: gamma2, range: "[16, inf)".into() });
    }
    if !(d > 0.0) {
        return Err(Error::OutOfRange { what: "d", value: d, range: "(0, inf)".into() });
    }
    if gamma2 - d <= E {
        return Err(Error::domain(format!("interval [{}, {}] reaches below e", gamma2 - d, gamma2 + d)));
    }
    dataset.require_coverage(gamma2 + d)?;
    let (lo, hi) = (gamma2 - d, gamma2 + d);
    let count = dataset.count_between(lo, hi);
    let chain_bound = main_term_m(hi)? - main_term_m(lo)? + q_bound(hi)? + q_bound(lo)?;
    let mvt_bound = d / PI * ((hi / (2.0 * PI)).ln() + 2.0 * PI + 1.0);
    Ok(ShortIntervalReport {
        gamma2,
        d,
        count,
        lemma_bound: 7.0 * d / 22.0 * gamma2.ln(),
        chain_bound,
        mvt_bound,
    })
}

/// Upper bound for Σ_{γ > T} A/(γ - c)^p over all zeros above T.
///
/// Uses Stieltjes integration against N(γ) with Schoenfeld's envelope,
/// valid for T > max(c, e) and p > 1:
///
/// 2Q(T)f(T) + (A/2π) v₀^{1-p} [(log(v₀/2π) + log(T/v₀))/(p-1) + 1/(p-1)²]
///     + A (0.137 + 0.443/log T) v₀^{-p}/p,     v₀ = T - c.
pub fn zero_tail_bound(t: f64, amplitude: f64, shift: f64, power: f64) -> Result<f64> {
    if !(power > 1.0) {
        return Err(Error::invalid(format!("tail bound needs power > 1, got {power}")));
    }
    if !(t > shift && t > E) {
        return Err(Error::invalid(format!("tail bound needs T > max(shift, e); T = {t}, shift = {shift}")));
    }
    if !(amplitude >= 0.0) {
        return Err(Error::invalid(format!("amplitude must be nonnegative, got {amplitude}")));
    }
    let v0 = t - shift;
    let p1 = power - 1.0;
    let f_t = amplitude * v0.powf(-power);
    let boundary = 2.0 * q_bound(t)? * f_t;
    let main = amplitude / (2.0 * PI)
        * v0.powf(-p1)
        * (((v0 / (2.0 * PI)).ln() + (t / v0).ln()) / p1 + 1.0 / (p1 * p1));
    let q_part = amplitude * (0.137 + 0.443 / t.ln()) * v0.powf(-power) / power;
    Ok(boundary + main.max(0.0) + q_part)
}

/// h_j(t) = (3.1 + j/8) θ log t / t^θ above t_j, and 1/2 up to t_j.
pub fn h_region(t: f64, j: u32, theta: f64, t_j: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::OutOfRange { what: "t", value: t, range: "(0, inf)".into() });
    }
    if !(theta >= 2.0) {
        return Err(Error::OutOfRange { what: "theta", value: theta, range: "[2, inf)".into() });
    }
    if t <= t_j {
        return Ok(0.5);
    }
    Ok(region_coefficient(j) * theta * t.ln() / t.powf(theta))
}

/// Largest t > 1 with (3.1 + j/8) θ log t = t^θ.
pub fn tj_interior_root(j: u32, theta: f64) -> Result<f64> {
    if !(theta >= 2.0) {
        return Err(Error::OutOfRange { what: "theta", value: theta, range: "[2, inf)".into() });
    }
    let c = region_coefficient(j);
    let g = |t: f64| c * theta * t.ln() - t.powf(theta);
    // g peaks at t = c^{1/θ} with value c(log c - 1) > 0
    let lo = c.powf(1.0 / theta);
    let mut hi = 2.0 * lo;
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    bisect(g, lo, hi, 0.0, 1e-15).ok_or_else(|| Error::Convergence("t_j root not bracketed".into()))
}

/// t_j = max(29753, interior root).
pub fn solve_tj(j: u32, theta: f64) -> Result<f64> {
    Ok(tj_interior_root(j, theta)?.max(VERIFIED_HEIGHT))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroFreeReport {
    pub j: u32,
    pub theta: f64,
    pub t_j: f64,
    pub checked: usize,
    pub above_tj: usize,
    pub min_margin: f64,
    pub argmin: f64,
    pub violations: usize,
}

/// For each ordinate, margin = (1 - h_j(γ)) - 1/2; a verified zero inside
/// the claimed zero-free region shows up as a negative margin.
pub fn zero_free_consistency(dataset: &ZeroDataset, j: u32, theta: f64) -> Result<ZeroFreeReport> {
    if dataset.is_empty() {
        return Err(Error::InsufficientData("zero dataset is empty".into()));
    }
    let t_j = solve_tj(j, theta)?;
    let mut min_margin = f64::INFINITY;
    let mut argmin = f64::NAN;
    let mut violations = 0;
    let mut above_tj = 0;
    for &g in &dataset.ordinates {
        let margin = (1.0 - h_region(g, j, theta, t_j)?) - 0.5;
        if g > t_j {
            above_tj += 1;
        }
        if margin < 0.0 {
            violations += 1;
        }
        if margin < min_margin {
            min_margin = margin;
            argmin = g;
        }
    }
    Ok(ZeroFreeReport {
        j,
        theta,
        t_j,
        checked: dataset.len(),
        above_tj,
        min_margin,
        argmin,
        violations,
    })
}
