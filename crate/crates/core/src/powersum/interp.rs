//! The interpolating polynomial `R(w) = w^{D+1} P(w) Q(w)` that equals 1 on
//! the outer points and 0 on the inner ones.

use std::f64::consts::{E, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::{poly, PowerSumSystem, DISTINCTNESS};
use crate::error::{Error, Result};
use crate::numeric::binomial;

const MAX_NODES: usize = 1 << 20;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_FAIL: f64 = 1e-10;
const INTERP_TOL: f64 = 1e-9;
const CFROMB_TOL: f64 = 1e-12;
// Room for rounding in comparisons of computed sums with closed-form bounds.
const BOUND_ROUNDING: f64 = 1.0 + 1e-12;

/// Newton-basis coefficients of `Q` from the contour integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonCoeffs {
    pub b: Vec<Complex64>,
    /// Nodes used for the returned values.
    pub nodes: usize,
    /// Largest change of any `b_j` in the final doubling, relative to
    /// `max(1, |b_j|)`. Above 1e-12 only when rounding noise in the sum
    /// has been reached.
    pub doubling_change: f64,
}

fn trapezoid(head: &[Complex64], p: &[Complex64], d: u32, r: f64, n: usize) -> (Vec<Complex64>, Vec<f64>) {
    let l = head.len();
    let mut sums = vec![Complex64::new(0.0, 0.0); l];
    let mut mags = vec![0.0; l];
    for m in 0..n {
        let w = Complex64::from_polar(r, TAU * m as f64 / n as f64);
        // w·G(w) with G = 1/(w^{D+1} P(w))
        let mut term = Complex64::new(1.0, 0.0) / (w.powu(d) * poly::eval(p, w));
        for j in 0..l {
            term /= w - head[j];
            sums[j] += term;
            mags[j] += term.norm();
        }
    }
    let scale = 1.0 / n as f64;
    (
        sums.into_iter().map(|s| -s * scale).collect(),
        mags.into_iter().map(|s| s * scale).collect(),
    )
}

/// `b_j = −(1/2πi) ∮_{|z|=r} G(z) / ∏_{k≤j+1} (z − z_k) dz` with
/// `G(z) = 1/(z^{D+1} P(z))`, by the trapezoid rule on the circle, doubling
/// the node count from `quad_nodes` until successive values agree to 1e-12
/// relative to `max(1, |b_j|)`. A change below 1e-10 is also accepted once it
/// is down at the rounding level of the sum.
///
/// `P` is given by ascending coefficients and must have all its zeros inside
/// the circle; `head` must lie outside it.
pub fn newton_coeffs(
    head: &[Complex64],
    p: &[Complex64],
    d: u32,
    r: f64,
    quad_nodes: usize,
) -> Result<NewtonCoeffs> {
    if head.is_empty() {
        return Err(Error::invalid("Newton interpolation needs at least one node"));
    }
    if let Some(z) = head.iter().find(|z| z.norm() <= r) {
        return Err(Error::domain(format!(
            "interpolation node {z} is not outside the contour |z| = {r}"
        )));
    }
    let degree = d as usize + head.len() + p.len().saturating_sub(1);
    if quad_nodes < 64 * degree {
        return Err(Error::invalid(format!(
            "quad_nodes = {quad_nodes} is below 64·(D+L) = {}",
            64 * degree
        )));
    }
    let mut n = quad_nodes;
    let (mut prev, _) = trapezoid(head, p, d, r, n);
    loop {
        let (next, mags) = trapezoid(head, p, d, r, 2 * n);
        n *= 2;
        let mut change = 0.0f64;
        let mut at_floor = true;
        for ((a, b), &mag) in next.iter().zip(&prev).zip(&mags) {
            let diff = (a - b).norm();
            change = change.max(diff / 1f64.max(a.norm()));
            // rounding floor of an n-term sum of terms of mean size `mag`
            at_floor &= diff <= 64.0 * f64::EPSILON * mag;
        }
        if change <= NEWTON_TOL || (at_floor && change <= NEWTON_FAIL) {
            return Ok(NewtonCoeffs {
                b: next,
                nodes: n,
                doubling_change: change,
            });
        }
        if n >= MAX_NODES {
            return Err(Error::Convergence(format!(
                "contour coefficients still move by {change:e} at {n} nodes"
            )));
        }
        prev = next;
    }
}

/// Radius between the inner points and the outer ones where the contour
/// integrand is smallest, so that rounding in the trapezoid sum stays far
/// below the coefficients.
fn quiet_radius(head: &[Complex64], p: &[Complex64], d: u32, inner: f64) -> f64 {
    let outer = head.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let samples = 64 * (head.len() + p.len() + d as usize);
    let peak = |rho: f64| {
        (0..samples)
            .map(|m| {
                let w = Complex64::from_polar(rho, TAU * m as f64 / samples as f64);
                let mut v = w.powu(d + 1) * poly::eval(p, w);
                for z in head {
                    v *= w - z;
                }
                1.0 / v.norm()
            })
            .fold(0.0, f64::max)
    };
    (1..32)
        .map(|i| inner + (outer - inner) * i as f64 / 32.0)
        .map(|rho| (rho, peak(rho)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0.5 * (inner + outer), |(rho, _)| rho)
}

/// Outcome of the coefficient and interpolation checks of [`build_r`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationChecks {
    /// `max |R(z_j) − target_j|` over all points.
    pub max_residual: f64,
    /// `max_j |a_j| / C(L−l, j)`.
    pub a_ratio: f64,
    /// `max_j |b_j| / (r^{−D} (2/U)^L)`.
    pub b_ratio_r: f64,
    /// `max_j |b_j| / ((1−4eU)^{−D} (2/U)^L)`.
    pub b_ratio_u: f64,
    /// `max_j |c_j| / (C(l, j+1) (1−4eU)^{−D} (2/U)^L)`.
    pub c_ratio: f64,
    pub sum_abs_d: f64,
    /// `(Σ|c|)(Σ|a|)`.
    pub product_sum: f64,
    /// `(1−4eU)^{−D} (4/U)^L`.
    pub lastsum_bound: f64,
    /// Largest discrepancy between the two monomial expansions of `Q`.
    pub cfromb_diff: f64,
    pub newton_change: f64,
    /// Trapezoid nodes behind the returned `b_j`.
    pub newton_nodes: usize,
}

impl InterpolationChecks {
    pub fn coefupd(&self) -> bool {
        self.a_ratio <= BOUND_ROUNDING
    }

    pub fn bjupd(&self) -> bool {
        self.b_ratio_r <= BOUND_ROUNDING && self.b_ratio_u <= BOUND_ROUNDING
    }

    pub fn cjupd(&self) -> bool {
        self.c_ratio <= BOUND_ROUNDING
    }

    pub fn lastsum(&self) -> bool {
        self.sum_abs_d <= self.product_sum * BOUND_ROUNDING
            && self.product_sum <= self.lastsum_bound * BOUND_ROUNDING
    }

    pub fn cfromb(&self) -> bool {
        self.cfromb_diff <= CFROMB_TOL
    }

    pub fn newton_stable(&self) -> bool {
        self.newton_change <= NEWTON_TOL
    }

    pub fn all_hold(&self) -> bool {
        self.coefupd() && self.bjupd() && self.cjupd() && self.lastsum() && self.cfromb()
    }
}

/// The polynomials `P`, `Q` and `R` of the second power-sum lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationResult {
    pub l: usize,
    /// `P(w) = Σ a_j w^{L−l−j}` with `a_0 = 1`.
    pub a_coeffs: Vec<Complex64>,
    /// `Q(w) = Σ b_j ∏_{k≤j} (w − z_k)`.
    pub b_coeffs: Vec<Complex64>,
    /// `Q(w) = Σ c_j w^j`.
    pub c_coeffs: Vec<Complex64>,
    /// `R(w) = Σ d_ν w^ν` for `ν = D+1, …, D+L`; entry `i` is `d_{D+1+i}`.
    pub d_coeffs: Vec<Complex64>,
    pub r: f64,
    /// Circle the contour integrals were evaluated on; any circle separating
    /// the inner from the outer points gives the same `b_j`.
    pub contour_radius: f64,
    pub u: f64,
    pub d: u32,
    /// The points, outer ones first, in the order used for the Newton basis.
    pub points: Vec<Complex64>,
    pub checks: InterpolationChecks,
}

impl InterpolationResult {
    /// `R(w)` from the monomial coefficients.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        w.powu(self.d + 1) * poly::eval(&self.d_coeffs, w)
    }
}

/// Builds `R` for a system with integer `D`, splitting at the `l` points of
/// largest modulus, which must lie outside `|w| = r`, while the remaining
/// points lie inside and `r ≥ 1 − 4eU`.
pub fn build_r(sys: &PowerSumSystem, l: usize, u: f64, r: f64) -> Result<InterpolationResult> {
    let len = sys.len();
    if l == 0 || l > len {
        return Err(Error::OutOfRange {
            what: "l",
            value: l as f64,
            range: format!("[1, {len}]"),
        });
    }
    if sys.d().fract() != 0.0 {
        return Err(Error::invalid(format!("D = {} must be an integer here", sys.d())));
    }
    let d = sys.d() as u32;
    let floor = 1.0 - 4.0 * E * u;
    if !(u > 0.0 && floor > 0.0) {
        return Err(Error::OutOfRange {
            what: "U",
            value: u,
            range: "(0, 1/(4e))".into(),
        });
    }
    if r < floor || r > 1.0 {
        return Err(Error::domain(format!("radius {r} is outside [1 − 4eU, 1] = [{floor}, 1]")));
    }
    let zs = sys.zs();
    for (i, a) in zs.iter().enumerate() {
        if a.norm() > 1.0 + 1e-12 {
            return Err(Error::domain(format!("point {a} lies outside the unit disc")));
        }
        for b in &zs[..i] {
            if (a - b).norm() < DISTINCTNESS {
                return Err(Error::domain(format!(
                    "points {b} and {a} are closer than {DISTINCTNESS:e}"
                )));
            }
        }
    }
    let mut points = zs.to_vec();
    points.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let (head, tail) = points.split_at(l);
    if let Some(z) = head.iter().find(|z| z.norm() <= r) {
        return Err(Error::domain(format!("outer point {z} is not outside |w| = {r}")));
    }
    if let Some(z) = tail.iter().find(|z| z.norm() >= r) {
        return Err(Error::domain(format!("inner point {z} is not inside |w| = {r}")));
    }

    let p = poly::from_roots(tail);
    let contour_radius = quiet_radius(head, &p, d, tail.first().map_or(0.0, |z| z.norm()));
    let newton = newton_coeffs(head, &p, d, contour_radius, 64 * (d as usize + len))?;
    let b = newton.b.clone();

    // c_j = Σ_{m≥j} b_m (−1)^{m−j} e_{m−j}(z_1, …, z_m)
    let mut c = vec![Complex64::new(0.0, 0.0); l];
    for (m, &bm) in b.iter().enumerate() {
        let e = poly::elementary_symmetric(&head[..m]);
        for j in 0..=m {
            let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
            c[j] += bm * sign * e[m - j];
        }
    }
    // nested form: Q = b_0 + (w − z_1)(b_1 + (w − z_2)(b_2 + …))
    let mut nested = vec![b[l - 1]];
    for m in (0..l - 1).rev() {
        nested = poly::mul(&nested, &[-head[m], Complex64::new(1.0, 0.0)]);
        nested[0] += b[m];
    }
    let c_scale = c.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let cfromb_diff = c
        .iter()
        .zip(&nested)
        .map(|(x, y)| (x - y).norm() / c_scale)
        .fold(0.0, f64::max);

    let d_coeffs = poly::mul(&p, &c);
    let a_coeffs: Vec<Complex64> = p.iter().rev().copied().collect();

    let two_u = (2.0 / u).powi(len as i32);
    let b_bound_r = r.powi(-(d as i32)) * two_u;
    let b_bound_u = floor.powi(-(d as i32)) * two_u;
    let deg_p = (len - l) as u64;
    let a_ratio = a_coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| a.norm() / binomial(deg_p, j as u64))
        .fold(0.0, f64::max);
    let b_max = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let c_ratio = c
        .iter()
        .enumerate()
        .map(|(j, x)| x.norm() / (binomial(l as u64, j as u64 + 1) * b_bound_u))
        .fold(0.0, f64::max);
    let sum_abs = |v: &[Complex64]| v.iter().map(|x| x.norm()).sum::<f64>();

    let mut result = InterpolationResult {
        l,
        a_coeffs,
        b_coeffs: b,
        c_coeffs: c,
        d_coeffs,
        r,
        contour_radius,
        u,
        d,
        points: points.clone(),
        checks: InterpolationChecks {
            max_residual: 0.0,
            a_ratio,
            b_ratio_r: b_max / b_bound_r,
            b_ratio_u: b_max / b_bound_u,
            c_ratio,
            sum_abs_d: 0.0,
            product_sum: 0.0,
            lastsum_bound: floor.powi(-(d as i32)) * (4.0 / u).powi(len as i32),
            cfromb_diff,
            newton_change: newton.doubling_change,
            newton_nodes: newton.nodes,
        },
    };
    result.checks.sum_abs_d = sum_abs(&result.d_coeffs);
    result.checks.product_sum = sum_abs(&result.c_coeffs) * sum_abs(&result.a_coeffs);

    let mut worst = (0.0f64, Complex64::new(0.0, 0.0));
    for (j, &z) in points.iter().enumerate() {
        let target = if j < l { 1.0 } else { 0.0 };
        let residual = (result.eval(z) - target).norm();
        if residual > worst.0 {
            worst = (residual, z);
        }
    }
    result.checks.max_residual = worst.0;
    if worst.0 > INTERP_TOL {
        return Err(Error::Convergence(format!(
            "R misses its interpolation value by {:e} at z = {}",
            worst.0, worst.1
        )));
    }
    Ok(result)
}
