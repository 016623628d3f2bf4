//! Truncated power series with complex coefficients.

use num_complex::Complex64;

pub(crate) type Series = Vec<Complex64>;

/// Coefficients of `exp(c t)` up to `t^n`.
pub(crate) fn exp_series(c: Complex64, n: usize) -> Series {
    let mut out = Vec::with_capacity(n + 1);
    let mut term = Complex64::new(1.0, 0.0);
    out.push(term);
    for k in 1..=n {
        term = term * c / k as f64;
        out.push(term);
    }
    out
}

/// `(exp(c t) - 1) / t` up to `t^n`.
pub(crate) fn exp_m1_over_t(c: Complex64, n: usize) -> Series {
    let e = exp_series(c, n + 1);
    e[1..].to_vec()
}

#[cfg(test)]
pub(crate) fn mul(a: &[Complex64], b: &[Complex64], n: usize) -> Series {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `a / b`; requires `b[0] != 0`.
pub(crate) fn div(a: &[Complex64], b: &[Complex64], n: usize) -> Series {
    assert!(b[0].norm() > 0.0, "series division by a series with zero constant term");
    let mut q = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 0..=n {
        let mut acc = a.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(b.len() - 1) {
            acc -= b[j] * q[k - j];
        }
        q[k] = acc / b[0];
    }
    q
}

pub(crate) fn eval(a: &[Complex64], t: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = exp_series(r(1.5), 12);
        let b = exp_m1_over_t(r(-2.0), 12);
        let q = div(&mul(&a, &b, 12), &b, 12);
        for (x, y) in q.iter().zip(&a) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn evaluation_matches_closed_form() {
        let a = exp_series(r(1.0), 30);
        assert!((eval(&a, r(0.5)) - r(0.5f64.exp())).norm() < 1e-15);
    }
}
