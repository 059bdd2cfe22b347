//! Dense complex polynomials in ascending coefficient order.

use num_complex::Complex64;

/// Coefficients of ∏ (w - r), ascending.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        p.push(Complex64::new(0.0, 0.0));
        for i in (1..p.len()).rev() {
            let lower = p[i - 1];
            p[i] = lower - r * p[i];
        }
        p[0] *= -r;
    }
    // p now holds ascending coefficients with the leading one last
    p
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Horner evaluation.
pub fn eval(p: &[Complex64], w: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
}

/// Elementary symmetric polynomials e_0..e_n of `zs`.
pub fn elementary_symmetric(zs: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); zs.len() + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (m, &z) in zs.iter().enumerate() {
        for i in (1..=m + 1).rev() {
            let prev = e[i - 1];
            e[i] += z * prev;
        }
    }
    e
}
