//! Small numerical kernels shared by the evaluators: compensated summation,
//! Gauss–Legendre rules, bisection, and the complex gamma-family functions.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
///
/// The running compensation is folded in only when the total is read, so
/// two accumulators fed the same terms in the same order agree bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

impl Extend<Complex64> for ComplexSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Roots of P_n are found by Newton iteration from the Chebyshev-like
/// initial guess; accurate to a few ulps for n up to a few hundred.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A Gauss–Legendre rule mapped onto arbitrary intervals.
#[derive(Debug, Clone)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (abscissa, weight) pairs for the interval [a, b].
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut acc = CompensatedSum::new();
        for (x, w) in self.points(a, b) {
            acc.add(w * f(x));
        }
        acc.total()
    }
}

/// Bisection for a sign change of `f` on [lo, hi].
///
/// Stops once the bracket is narrower than `abs_tol + rel_tol * |mid|`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= abs_tol + rel_tol * mid.abs() || mid == lo || mid == hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bernoulli numbers B_2, B_4, ..., B_20.
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Digamma Γ'/Γ for complex argument away from the poles at 0, -1, -2, ...
///
/// The argument is shifted up by the recurrence ψ(z) = ψ(z+1) - 1/z until
/// |z| >= 10, then six terms of the asymptotic series are summed.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 10.0 || z.re < 0.0 {
        shift -= z.inv();
        z += 1.0;
    }
    let z2 = (z * z).inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut zpow = z2;
    for (k, b) in BERNOULLI_EVEN.iter().take(6).enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += zpow * (*b / two_k);
        zpow *= z2;
    }
    shift + z.ln() - 0.5 * z.inv() - series
}

/// Principal branch of log Γ(z) for Re z > 0, continuous in z.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < 15.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut zpow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let kk = k as f64 + 1.0;
        series += zpow * (*b / (2.0 * kk * (2.0 * kk - 1.0)));
        zpow *= inv2;
    }
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// Binomial coefficient as f64 (exact for the small arguments used here).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0_f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// (k-1)! as f64.
pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.total(), 1.0);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 8, 16, 33] {
            let rule = GaussRule::new(n);
            let deg = 2 * n - 1;
            let got = rule.integrate(0.0, 2.0, |x| x.powi(deg as i32));
            let want = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert_relative_eq!(got, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn digamma_reference_values() {
        // ψ(1) = -γ, ψ(2) = 1 - γ, ψ(1/2) = -γ - 2 log 2
        assert_relative_eq!(digamma(Complex64::new(1.0, 0.0)).re, -EULER_GAMMA, epsilon = 1e-13);
        assert_relative_eq!(
            digamma(Complex64::new(2.0, 0.0)).re,
            1.0 - EULER_GAMMA,
            epsilon = 1e-13
        );
        assert_relative_eq!(
            digamma(Complex64::new(0.5, 0.0)).re,
            -EULER_GAMMA - 2.0 * 2f64.ln(),
            epsilon = 1e-13
        );
        // Im ψ(1 + i y) = -1/(2y) + (π/2) coth(π y)
        let y = 3.0_f64;
        let want = -0.5 / y + 0.5 * PI / (PI * y).tanh();
        assert_relative_eq!(digamma(Complex64::new(1.0, y)).im, want, epsilon = 1e-13);
    }

    #[test]
    fn ln_gamma_reference_values() {
        assert_relative_eq!(ln_gamma(Complex64::new(5.0, 0.0)).re, 24f64.ln(), epsilon = 1e-13);
        assert_relative_eq!(
            ln_gamma(Complex64::new(0.5, 0.0)).re,
            PI.sqrt().ln(),
            epsilon = 1e-13
        );
        // |Γ(1/2 + iy)|^2 = π / cosh(π y)
        let y = 2.5_f64;
        let want = 0.5 * (PI / (PI * y).cosh()).ln();
        assert_relative_eq!(ln_gamma(Complex64::new(0.5, y)).re, want, epsilon = 1e-12);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 0.0).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0, 1e-12, 0.0).is_none());
    }

    #[test]
    fn hockey_stick_small_cases() {
        for l in 1..=12u64 {
            for j in 0..l {
                let lhs: f64 = (j..l).map(|m| binomial(m, j)).sum();
                assert_eq!(lhs, binomial(l, j + 1), "l={l} j={j}");
            }
        }
    }
}
