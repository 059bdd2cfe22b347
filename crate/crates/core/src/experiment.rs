//! Constant bookkeeping for the zero-density argument: derived parameters,
//! the τ/ι/κ exponent calculus, a grid search over the free constants, and
//! the partition of the zero sum S₀ = S + S₁ + S₂ + S₃.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::zeros::{solve_tj, ZeroDataset};
use crate::zeta::ComplexPoint;

/// Constant of the key-sum estimate.
pub const KEYSUM_CONSTANT: f64 = 7297.0;
/// Final constant of the S₃ estimate.
pub const S3_CONSTANT: f64 = 72.0;

/// The full constant table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub u: f64,
    pub x_cut: f64,
    pub y: f64,
    pub lambda: f64,
    pub delta: f64,
    pub theta: f64,
    pub j: u32,
    /// Remainder constant B of the ϖ hypothesis.
    pub big_b: f64,
    pub beta_p: f64,
    pub gamma_p: f64,
    /// T₀ in τ⁽⁰⁾ = log log T₀ / log T₀.
    pub t0: f64,
    pub keysum_constant: f64,
    /// Reconstructed S₂ constants (first, middle, final form).
    pub s2_first: f64,
    pub s2_middle: f64,
    pub s2_final: f64,
    /// Reconstructed first-form S₃ constant.
    pub s3_first: f64,
    pub s3_final: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            a: 2.0,
            b: 1.5,
            c: 0.5,
            u: 1.0,
            x_cut: 3.0,
            y: 2.0,
            lambda: 1.0 / 40.0,
            delta: 17.0 / 19.0,
            theta: 3.0,
            j: 0,
            big_b: 1.0,
            beta_p: 0.75,
            gamma_p: 30000.0,
            t0: 1e6,
            keysum_constant: KEYSUM_CONSTANT,
            s2_first: 7800.0,
            s2_middle: 8990.0,
            s2_final: 9900.0,
            s3_first: 720.0,
            s3_final: S3_CONSTANT,
        }
    }
}

impl ExperimentConfig {
    /// Every violated constraint, empty when the config is admissible.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let la = log_ratio(self.a);
        if !(self.a > 1.0) {
            v.push(format!("a = {} must exceed 1", self.a));
        }
        if !(self.c > 0.0 && self.c < self.b) {
            v.push(format!("need 0 < c < b, got c = {}, b = {}", self.c, self.b));
        }
        if self.gamma_p > 1.0 && !(self.b < self.gamma_p.ln() / 4.0) {
            v.push(format!("b = {} must be below log(gamma') / 4 = {}", self.b, self.gamma_p.ln() / 4.0));
        }
        if self.a > 1.0 && !(self.c * la < 1.0) {
            v.push(format!("c (log a - log(a-1)) = {} must be below 1", self.c * la));
        }
        if !(self.u > 0.0) {
            v.push(format!("u = {} must be positive", self.u));
        }
        let x_floor = 2f64.max(self.u * self.a * (1.0 - self.beta_p));
        if !(self.x_cut > x_floor) {
            v.push(format!("x = {} must exceed max(2, u a (1 - beta')) = {x_floor}", self.x_cut));
        }
        if !(self.y > 1.0) {
            v.push(format!("y = {} must exceed 1", self.y));
        }
        if !(self.lambda > 0.0) {
            v.push(format!("lambda = {} must be positive", self.lambda));
        }
        if !(self.delta > 0.5 && self.delta <= 1.0) {
            v.push(format!("delta = {} must lie in (1/2, 1]", self.delta));
        }
        if !(self.theta >= 2.0) {
            v.push(format!("theta = {} must be at least 2", self.theta));
        }
        if !(self.big_b > 0.0) {
            v.push(format!("B = {} must be positive", self.big_b));
        }
        if !(self.beta_p > 0.5 && self.beta_p < 1.0) {
            v.push(format!("beta' = {} must lie in (1/2, 1)", self.beta_p));
        }
        if !(self.gamma_p > std::f64::consts::E) {
            v.push(format!("gamma' = {} must exceed e", self.gamma_p));
        }
        if !(self.t0 > std::f64::consts::E) {
            v.push(format!("T0 = {} must exceed e", self.t0));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(v.join("; ")))
        }
    }

    /// Parse `key = value` lines; '#' starts a comment. Unset keys keep
    /// their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got {line:?}"),
            })?;
            cfg.set(key.trim(), value.trim()).map_err(|msg| Error::Parse { line: line_no, msg })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let num = || -> std::result::Result<f64, String> {
            parse_number(value).ok_or_else(|| format!("cannot parse {value:?} as a number for {key}"))
        };
        match key {
            "a" => self.a = num()?,
            "b" => self.b = num()?,
            "c" => self.c = num()?,
            "u" => self.u = num()?,
            "x" | "x_cut" => self.x_cut = num()?,
            "y" => self.y = num()?,
            "lambda" => self.lambda = num()?,
            "delta" => self.delta = num()?,
            "theta" => self.theta = num()?,
            "j" => self.j = value.parse().map_err(|_| format!("j must be a nonnegative integer, got {value:?}"))?,
            "B" => self.big_b = num()?,
            "beta_p" => self.beta_p = num()?,
            "gamma_p" => self.gamma_p = num()?,
            "T0" | "t0" => self.t0 = num()?,
            "keysum_constant" => self.keysum_constant = num()?,
            "s2_first" => self.s2_first = num()?,
            "s2_middle" => self.s2_middle = num()?,
            "s2_final" => self.s2_final = num()?,
            "s3_first" => self.s3_first = num()?,
            "s3_final" => self.s3_final = num()?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn rho_p(&self) -> Complex64 {
        Complex64::new(self.beta_p, self.gamma_p)
    }

    /// Key-value listing in the order accepted by [`ExperimentConfig::parse`].
    pub fn to_pairs(&self) -> BTreeMap<&'static str, String> {
        BTreeMap::from([
            ("a", self.a.to_string()),
            ("b", self.b.to_string()),
            ("c", self.c.to_string()),
            ("u", self.u.to_string()),
            ("x", self.x_cut.to_string()),
            ("y", self.y.to_string()),
            ("lambda", self.lambda.to_string()),
            ("delta", self.delta.to_string()),
            ("theta", self.theta.to_string()),
            ("j", self.j.to_string()),
            ("B", self.big_b.to_string()),
            ("beta_p", self.beta_p.to_string()),
            ("gamma_p", self.gamma_p.to_string()),
            ("T0", self.t0.to_string()),
        ])
    }
}

/// Accepts plain decimals and simple fractions such as `17/19`.
fn parse_number(s: &str) -> Option<f64> {
    if let Some((n, d)) = s.split_once('/') {
        let n: f64 = n.trim().parse().ok()?;
        let d: f64 = d.trim().parse().ok()?;
        (d != 0.0).then_some(n / d)
    } else {
        s.parse().ok()
    }
}

/// log a - log(a - 1)
fn log_ratio(a: f64) -> f64 {
    a.ln() - (a - 1.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub sigma0: f64,
    pub s0: ComplexPoint,
    pub omega: f64,
    /// k ranges over [k_min, k_max] = [min(b,c), max(b,c)] · log γ'.
    pub k_min: f64,
    pub k_max: f64,
    /// log W = k ω at the two ends of the k range.
    pub log_w_min: f64,
    pub log_w_max: f64,
    pub t_j: f64,
    /// γ' > t_j, as the contrary hypothesis requires.
    pub gamma_above_tj: bool,
}

impl DerivedParams {
    pub fn log_w(&self, k: f64) -> f64 {
        k * self.omega
    }
}

pub fn derived_params(config: &ExperimentConfig) -> Result<DerivedParams> {
    config.validate()?;
    let sigma0 = config.a - (config.a - 1.0) * config.beta_p;
    let lg = config.gamma_p.ln();
    let coef = crate::arith::region_coefficient(config.j);
    let omega = config.gamma_p.powf(config.theta) / (19.328 * coef * config.theta * lg);
    let k_min = config.b.min(config.c) * lg;
    let k_max = config.b.max(config.c) * lg;
    let t_j = solve_tj(config.j, config.theta)?;
    Ok(DerivedParams {
        sigma0,
        s0: ComplexPoint::new(sigma0, config.gamma_p)?,
        omega,
        k_min,
        k_max,
        log_w_min: k_min * omega,
        log_w_max: k_max * omega,
        t_j,
        gamma_above_tj: config.gamma_p > t_j,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentTable {
    pub tau: f64,
    pub tau_p: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub tau_sup0: f64,
    pub iota: f64,
    pub kappa: f64,
    pub kappa_branch1: f64,
    pub kappa_branch2: f64,
    pub m_pp: f64,
}

impl ExponentTable {
    /// 0 < κ <= ι - 1/32
    pub fn feasible(&self) -> bool {
        self.kappa > 0.0 && self.kappa <= self.iota - 1.0 / 32.0
    }
}

pub fn exponent_table(config: &ExperimentConfig) -> Result<ExponentTable> {
    config.validate()?;
    let la = log_ratio(config.a);
    let tau = 1.0 - config.c * la;
    let tau_p = config.c * la;
    let tau0 = tau.min(tau_p).min(1.0);
    let tau1 = config.b * (config.x_cut.ln() - 2f64.ln());
    let tau3 = config.b * config.y.ln();
    let lt0 = config.t0.ln();
    let tau_sup0 = lt0.ln() / lt0;
    let ua = config.u * config.a;
    if !(ua > 0.0) {
        return Err(Error::domain(format!("log of u a = {ua}")));
    }
    let tau2 = config.b * (ua.ln() - la) - tau_sup0;
    let iota = [tau, tau_p, 1.0, tau0, tau1, tau2, tau3].into_iter().fold(f64::INFINITY, f64::min);

    let one_minus_delta = 1.0 - config.delta;
    let m_pp = config.a * one_minus_delta
        / (((config.a - 1.0) * one_minus_delta + 0.5).powi(2)
            + (config.u * config.a * one_minus_delta).powi(2))
        .sqrt();
    let l1 = (1.0 + config.lambda).ln();
    let kappa_branch1 = 21.0 * config.a * one_minus_delta / 22.0 * (4.0 * 2f64.ln() + 2.0 + l1);
    let kappa_branch2 = if m_pp > 0.0 {
        21.0 * config.a / 44.0 * (1.0 + l1 + (1.0 + 1.0 / m_pp).ln())
    } else {
        // δ = 1 makes M'' vanish and the second branch unbounded
        f64::INFINITY
    };
    Ok(ExponentTable {
        tau,
        tau_p,
        tau0,
        tau1,
        tau2,
        tau3,
        tau_sup0,
        iota,
        kappa: kappa_branch1.min(kappa_branch2),
        kappa_branch1,
        kappa_branch2,
        m_pp,
    })
}

/// Candidate values for each free constant; δ, θ, j, β', γ' come from the
/// base config.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityGrid {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub u: Vec<f64>,
    pub x_cut: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl Default for FeasibilityGrid {
    fn default() -> Self {
        Self {
            a: vec![1.1, 1.25, 1.5, 2.0, 3.0, 4.0],
            b: vec![0.5, 1.0, 1.5, 2.0],
            c: vec![0.1, 0.25, 0.5, 1.0],
            u: vec![0.5, 1.0, 2.0],
            x_cut: vec![2.5, 4.0, 8.0],
            y: vec![1.5, 2.0, 4.0],
            lambda: vec![1.0 / 40.0, 0.5, 1.0],
        }
    }
}

impl FeasibilityGrid {
    pub fn len(&self) -> usize {
        [&self.a, &self.b, &self.c, &self.u, &self.x_cut, &self.y, &self.lambda]
            .iter()
            .map(|v| v.len())
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lines `key = v1, v2, ...`; keys not mentioned keep the default list.
    pub fn parse(text: &str) -> Result<Self> {
        let mut grid = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = idx + 1;
            let (key, values) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: format!("expected `key = v1, v2, ...`, got {line:?}"),
            })?;
            let parsed = values
                .split(',')
                .map(|v| {
                    parse_number(v.trim()).ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: format!("cannot parse {:?} as a number", v.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let slot = match key.trim() {
                "a" => &mut grid.a,
                "b" => &mut grid.b,
                "c" => &mut grid.c,
                "u" => &mut grid.u,
                "x" | "x_cut" => &mut grid.x_cut,
                "y" => &mut grid.y,
                "lambda" => &mut grid.lambda,
                other => {
                    return Err(Error::Parse { line: line_no, msg: format!("unknown grid key {other:?}") })
                }
            };
            *slot = parsed;
        }
        Ok(grid)
    }

    fn point(&self, mut i: usize, base: &ExperimentConfig) -> ExperimentConfig {
        let mut pick = |v: &[f64]| {
            let x = v[i % v.len()];
            i /= v.len();
            x
        };
        let lambda = pick(&self.lambda);
        let y = pick(&self.y);
        let x_cut = pick(&self.x_cut);
        let u = pick(&self.u);
        let c = pick(&self.c);
        let b = pick(&self.b);
        let a = pick(&self.a);
        ExperimentConfig { a, b, c, u, x_cut, y, lambda, ..base.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub u: f64,
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub tau: Option<f64>,
    pub tau_p: Option<f64>,
    pub tau0: Option<f64>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub tau3: Option<f64>,
    pub tau_sup0: Option<f64>,
    pub iota: Option<f64>,
    pub kappa: Option<f64>,
    pub m_pp: Option<f64>,
    pub feasible: bool,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub rows: Vec<FeasibilityRow>,
    pub evaluated: usize,
    pub skipped: usize,
    pub feasible: usize,
    /// Grid index maximising ι - κ among evaluated points.
    pub best_index: Option<usize>,
    pub best_gap: Option<f64>,
}

/// Evaluate the exponent table at every grid point; rows come back in grid
/// order regardless of thread count.
pub fn feasibility_search(grid: &FeasibilityGrid, base: &ExperimentConfig) -> Result<FeasibilityReport> {
    if grid.is_empty() {
        return Err(Error::invalid("feasibility grid is empty"));
    }
    let rows: Vec<FeasibilityRow> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let cfg = grid.point(i, base);
            let mut row = FeasibilityRow {
                a: cfg.a,
                b: cfg.b,
                c: cfg.c,
                u: cfg.u,
                x: cfg.x_cut,
                y: cfg.y,
                lambda: cfg.lambda,
                tau: None,
                tau_p: None,
                tau0: None,
                tau1: None,
                tau2: None,
                tau3: None,
                tau_sup0: None,
                iota: None,
                kappa: None,
                m_pp: None,
                feasible: false,
                skipped: None,
            };
            match exponent_table(&cfg) {
                Ok(e) => {
                    row.tau = Some(e.tau);
                    row.tau_p = Some(e.tau_p);
                    row.tau0 = Some(e.tau0);
                    row.tau1 = Some(e.tau1);
                    row.tau2 = Some(e.tau2);
                    row.tau3 = Some(e.tau3);
                    row.tau_sup0 = Some(e.tau_sup0);
                    row.iota = Some(e.iota);
                    row.kappa = Some(e.kappa);
                    row.m_pp = Some(e.m_pp);
                    row.feasible = e.feasible();
                }
                Err(err) => row.skipped = Some(err.to_string()),
            }
            row
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (i, r) in rows.iter().enumerate() {
        if let (Some(iota), Some(kappa)) = (r.iota, r.kappa) {
            let gap = iota - kappa;
            if best.is_none_or(|(_, g)| gap > g) {
                best = Some((i, gap));
            }
        }
    }
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    Ok(FeasibilityReport {
        evaluated: rows.len() - skipped,
        skipped,
        feasible: rows.iter().filter(|r| r.feasible).count(),
        best_index: best.map(|b| b.0),
        best_gap: best.map(|b| b.1),
        rows,
    })
}

/// z(ρ) = e^{ω(ρ-ρ')} (s₀-ρ')/(s₀-ρ); equals 1 at ρ = ρ'.
pub fn zsbl(rho: Complex64, config: &ExperimentConfig, derived: &DerivedParams) -> Complex64 {
    let rho_p = config.rho_p();
    let s0 = derived.s0.to_complex();
    (derived.omega * (rho - rho_p)).exp() * ((s0 - rho_p) / (s0 - rho))
}

/// Which piece of the zero sum a zero falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroClass {
    /// Near γ' with β above the cut.
    H,
    /// |γ - γ'| >= x
    H1,
    /// u(σ₀-β') < |γ - γ'| < x
    H2,
    /// Near γ' with β at or below the cut.
    H3,
}

/// A sum Σ W^{ρ-ρ'} (...)^k stored as W^{1/2-β'} · mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledSum {
    pub mantissa: Complex64,
    /// Natural log of the common factor |W^{1/2-β'}|.
    pub log_scale: f64,
}

impl ScaledSum {
    /// log |sum|, or -inf for an empty or cancelled sum.
    pub fn log_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    pub k: u32,
    pub log_w: f64,
    /// Members of H, H₁, H₂, H₃ (both conjugates counted).
    pub counts: [usize; 4],
    pub total: usize,
    pub s: ScaledSum,
    pub s1: ScaledSum,
    pub s2: ScaledSum,
    pub s3: ScaledSum,
    /// S₀ summed directly over all zeros.
    pub s0: ScaledSum,
    /// |S₀ - (S + S₁ + S₂ + S₃)| / |S₀|
    pub relative_gap: f64,
    /// Near zeros whose class would differ if H used the x cut as printed.
    pub x_cut_conflicts: usize,
    /// (21 a (1-β') / 22) log γ', compared with |H|.
    pub h_count_bound: f64,
}

impl PartitionReport {
    pub fn is_partition(&self) -> bool {
        self.counts.iter().sum::<usize>() == self.total
    }

    pub fn identity_holds(&self, tol: f64) -> bool {
        self.relative_gap <= tol
    }
}

/// Split the dataset zeros (and conjugates) into H, H₁, H₂, H₃ and sum
/// W^{ρ-ρ'} ((s₀-ρ')/(s₀-ρ))^k over each piece, with W = e^{log_w}.
///
/// All dataset zeros have β = 1/2, so the common modulus W^{1/2-β'} is
/// factored out and only phases and the k-th power ratios are summed.
/// Both near-zero classes split on β against 1 - y(σ₀-β').
pub fn partition_sums(zeros: &ZeroDataset, config: &ExperimentConfig, k: u32, log_w: f64) -> Result<PartitionReport> {
    let d = derived_params(config)?;
    if !(log_w > 0.0) || !log_w.is_finite() {
        return Err(Error::OutOfRange { what: "log W", value: log_w, range: "(0, inf)".into() });
    }
    let coverage = zeros
        .coverage()
        .ok_or_else(|| Error::InsufficientData("zero dataset is empty".into()))?;
    let gp = config.gamma_p;
    if gp + config.x_cut > coverage || gp - config.x_cut <= 0.0 {
        return Err(Error::InsufficientData(format!(
            "[gamma' - x, gamma' + x] = [{}, {}] is not inside the dataset range (0, {coverage}]",
            gp - config.x_cut,
            gp + config.x_cut
        )));
    }
    let gap = d.sigma0 - config.beta_p;
    let near = config.u * gap;
    let beta_cut_y = 1.0 - config.y * gap;
    let beta_cut_x = 1.0 - config.x_cut * gap;
    let s0 = d.s0.to_complex();
    let ratio_num = s0 - config.rho_p();
    let ki = k as i32;

    let classify = |g: f64| {
        let dist = (g - gp).abs();
        if dist >= config.x_cut {
            ZeroClass::H1
        } else if dist > near {
            ZeroClass::H2
        } else if 0.5 > beta_cut_y {
            ZeroClass::H
        } else {
            ZeroClass::H3
        }
    };
    let term = |g: f64| {
        let rho = Complex64::new(0.5, g);
        Complex64::from_polar(1.0, (g - gp) * log_w) * (ratio_num / (s0 - rho)).powi(ki)
    };

    let mut parts = [ComplexSum::new(); 4];
    let mut direct = ComplexSum::new();
    let mut counts = [0usize; 4];
    let mut conflicts = 0;
    let ords = zeros.ordinates();
    // fixed order: ordinates descending, then their conjugates descending
    let all = ords.iter().rev().copied().chain(ords.iter().rev().map(|&g| -g));
    for g in all {
        let class = classify(g);
        let idx = class as usize;
        let t = term(g);
        parts[idx].add(t);
        direct.add(t);
        counts[idx] += 1;
        if matches!(class, ZeroClass::H | ZeroClass::H3) {
            let in_h_as_printed = 0.5 > beta_cut_x;
            if in_h_as_printed != (class == ZeroClass::H) {
                conflicts += 1;
            }
        }
    }
    let log_scale = (0.5 - config.beta_p) * log_w;
    let scaled = |m: Complex64| ScaledSum { mantissa: m, log_scale };
    let [h, h1, h2, h3] = parts.map(|p| p.total());
    let mut recombined = ComplexSum::new();
    for v in [h, h1, h2, h3] {
        recombined.add(v);
    }
    let s0_direct = direct.total();
    let diff = (s0_direct - recombined.total()).norm();
    let relative_gap = if s0_direct.norm() > 0.0 { diff / s0_direct.norm() } else { diff };
    Ok(PartitionReport {
        k,
        log_w,
        counts,
        total: 2 * ords.len(),
        s: scaled(h),
        s1: scaled(h1),
        s2: scaled(h2),
        s3: scaled(h3),
        s0: scaled(s0_direct),
        relative_gap,
        x_cut_conflicts: conflicts,
        h_count_bound: 21.0 * config.a * (1.0 - config.beta_p) / 22.0 * gp.ln(),
    })
}

/// How a bound row should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    AtMost,
    AtLeast,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub quantity: &'static str,
    /// Natural log of the computed magnitude.
    pub log_value: f64,
    /// Natural log of the bound; NaN where the constant is blank.
    pub log_bound: f64,
    pub relation: Relation,
    pub constant: f64,
    /// "stated", "estimated", "derived" or "blank".
    pub source: &'static str,
    pub holds: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub partition: PartitionReport,
    pub exponents: ExponentTable,
    pub derived: DerivedParams,
    pub rows: Vec<BoundRow>,
}

/// Computed |S|, |S_j| against the shapes C W^{1-β'} / γ'^{τ_j}, plus the
/// power-sum lower bound γ'^{-κ}. Logs throughout; nothing is asserted.
pub fn bound_comparison_report(zeros: &ZeroDataset, config: &ExperimentConfig, k: u32, log_w: f64) -> Result<BoundReport> {
    let derived = derived_params(config)?;
    let exponents = exponent_table(config)?;
    let partition = partition_sums(zeros, config, k, log_w)?;
    let lg = config.gamma_p.ln();
    let wfac = (1.0 - config.beta_p) * log_w;
    let b_note = format!("conditional on the remainder hypothesis with B = {}", config.big_b);

    let upper = |quantity, value: &ScaledSum, constant: f64, tau: f64, source, note: String| {
        let log_bound = constant.ln() + wfac - tau * lg;
        let log_value = value.log_abs();
        BoundRow {
            quantity,
            log_value,
            log_bound,
            relation: Relation::AtMost,
            constant,
            source,
            holds: Some(log_value <= log_bound),
            note,
        }
    };

    let gap = derived.sigma0 - config.beta_p;
    let a = config.a;
    let kf = k as f64;
    let mut rows = vec![
        upper("S", &partition.s, config.keysum_constant, exponents.iota, "stated", b_note.clone()),
        BoundRow {
            quantity: "S0",
            log_value: partition.s0.log_abs(),
            log_bound: f64::NAN,
            relation: Relation::AtMost,
            constant: partition.s0.log_abs() - wfac + exponents.tau0 * lg,
            source: "blank",
            holds: None,
            note: "constant left blank; the column holds log of the implied constant".into(),
        },
        upper("S1", &partition.s1, 14.0 / (11.0 * config.b), exponents.tau1, "derived", "C = 14/(11 b)".into()),
    ];

    // S₂ chain: first and middle forms carry explicit log and k-th power factors
    let s2_first = config.s2_first.ln() + wfac + (config.gamma_p + config.x_cut).ln().ln()
        + kf * (gap / ((derived.sigma0 - 1.0).powi(2) + (config.u * gap).powi(2)).sqrt()).ln();
    let s2_middle = config.s2_middle.ln() + wfac + lg.ln() + kf * (a / (a - 1.0 + config.u * a)).ln();
    let s2_value = partition.s2.log_abs();
    for (quantity, log_bound, constant) in [
        ("S2 first form", s2_first, config.s2_first),
        ("S2 middle form", s2_middle, config.s2_middle),
    ] {
        rows.push(BoundRow {
            quantity,
            log_value: s2_value,
            log_bound,
            relation: Relation::AtMost,
            constant,
            source: "estimated",
            holds: Some(s2_value <= log_bound),
            note: "constant estimated from the neighbouring bounds".into(),
        });
    }
    rows.push(upper("S2", &partition.s2, config.s2_final, exponents.tau2, "estimated", format!("valid for gamma' >= T0 = {}", config.t0)));

    let s3_first = config.s3_first.ln() + wfac + lg.ln() - kf * config.y.ln();
    let s3_value = partition.s3.log_abs();
    rows.push(BoundRow {
        quantity: "S3 first form",
        log_value: s3_value,
        log_bound: s3_first,
        relation: Relation::AtMost,
        constant: config.s3_first,
        source: "estimated",
        holds: Some(s3_value <= s3_first),
        note: "constant estimated from the neighbouring bounds".into(),
    });
    rows.push(upper("S3", &partition.s3, config.s3_final, exponents.tau3, "stated", String::new()));

    let lower = -exponents.kappa * lg;
    let s_value = partition.s.log_abs();
    rows.push(BoundRow {
        quantity: "S lower",
        log_value: s_value,
        log_bound: lower,
        relation: Relation::AtLeast,
        constant: 1.0,
        source: "stated",
        holds: Some(s_value >= lower),
        note: "power-sum lower bound gamma'^(-kappa); needs the hypothetical zero rho' in H".into(),
    });
    Ok(BoundReport { partition, exponents, derived, rows })
}
