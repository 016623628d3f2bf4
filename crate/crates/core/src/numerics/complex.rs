//! Elementary complex helpers with the principal branch cut on the
//! non-positive real axis.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{check_finite, Result, ZhlError};

pub type ComplexValue = Complex64;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `sin(pi z)` with the real part reduced to `[-1/2, 1/2]` first, so the
/// zeros at the integers come out exact.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let r = z.re - n;
    let py = PI * z.im;
    let (s, co) = (PI * r).sin_cos();
    let v = c(s * py.cosh(), co * py.sinh());
    if (n as i64) % 2 == 0 {
        v
    } else {
        -v
    }
}

pub fn cos_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let r = z.re - n;
    let py = PI * z.im;
    let (s, co) = (PI * r).sin_cos();
    let v = c(co * py.cosh(), -s * py.sinh());
    if (n as i64) % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `log(sin(pi z))` modulo `2 pi i`, without overflowing for large `|Im z|`.
pub fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im > 10.0 {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
        let q = (2.0 * PI * I * z).exp();
        -I * PI * z + c(0.5f64.ln(), PI / 2.0) + (real(1.0) - q).ln()
    } else if z.im < -10.0 {
        let q = (-2.0 * PI * I * z).exp();
        I * PI * z + c(0.5f64.ln(), -PI / 2.0) + (real(1.0) - q).ln()
    } else {
        sin_pi(z).ln()
    }
}

/// `exp(z) - 1` accurate for small `|z|`.
pub fn exp_m1(z: Complex64) -> Complex64 {
    let em1 = z.re.exp_m1();
    let (s, co) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    c(em1 * co - 2.0 * half * half, (em1 + 1.0) * s)
}

/// `t^z = exp(z (log|t| + i arg t))`.
///
/// `arg_override` replaces the principal argument; it is how the two rays of
/// the Hankel loop pick `arg t = -pi` (incoming) and `arg t = +pi` (outgoing).
/// Without an override, `t` must not lie on the cut `{re <= 0, im = 0}`.
pub fn complex_pow(t: Complex64, z: Complex64, arg_override: Option<f64>) -> Result<Complex64> {
    check_finite(t, "base")?;
    check_finite(z, "exponent")?;
    if t.re == 0.0 && t.im == 0.0 {
        return Err(ZhlError::ZeroBase);
    }
    let arg = match arg_override {
        Some(a) => {
            if !a.is_finite() {
                return Err(ZhlError::NonFinite("arg override"));
            }
            a
        }
        None => {
            if t.im == 0.0 && t.re < 0.0 {
                return Err(ZhlError::Domain(
                    "base on the branch cut needs an explicit argument".into(),
                ));
            }
            t.arg()
        }
    };
    Ok(pow_unchecked(t.norm().ln(), arg, z))
}

#[inline]
pub(crate) fn pow_unchecked(log_abs: f64, arg: f64, z: Complex64) -> Complex64 {
    (z * c(log_abs, arg)).exp()
}

/// `x^z` for a positive real base.
#[inline]
pub fn real_pow(x: f64, z: Complex64) -> Complex64 {
    debug_assert!(x > 0.0);
    (z * x.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_examples() {
        let one = complex_pow(real(1.0), c(0.3, -7.0), None).unwrap();
        assert!((one - real(1.0)).norm() < 1e-15);
        let i = complex_pow(real(-1.0), real(0.5), Some(PI)).unwrap();
        assert!((i - I).norm() < 1e-15);
        let eight = complex_pow(real(2.0), real(3.0), None).unwrap();
        assert!((eight - real(8.0)).norm() < 1e-14);
    }

    #[test]
    fn pow_errors() {
        assert_eq!(complex_pow(real(0.0), real(1.0), None), Err(ZhlError::ZeroBase));
        assert!(complex_pow(real(-2.0), real(0.5), None).is_err());
        assert!(complex_pow(c(f64::NAN, 0.0), real(0.5), None).is_err());
    }

    #[test]
    fn sin_pi_exact_at_integers() {
        for n in -6..=6 {
            assert_eq!(sin_pi(real(n as f64)).norm(), 0.0);
        }
        let z = c(0.3, 0.7);
        let direct = (PI * z).sin();
        assert!((sin_pi(z) - direct).norm() < 1e-14);
        assert!((cos_pi(z) - (PI * z).cos()).norm() < 1e-14);
    }

    #[test]
    fn log_sin_pi_matches_direct() {
        for &z in &[c(0.3, 11.0), c(-2.7, -15.0), c(0.25, 0.5)] {
            let a = log_sin_pi(z).exp();
            let b = sin_pi(z);
            assert!((a - b).norm() <= 1e-13 * b.norm(), "{z}");
        }
    }

    #[test]
    fn exp_m1_small() {
        let z = c(1e-12, -3e-12);
        let v = exp_m1(z);
        assert!((v - z).norm() < 1e-23);
        let z = c(0.7, 2.0);
        assert!((exp_m1(z) - (z.exp() - 1.0)).norm() < 1e-14);
    }
}
