//! Large-`x` expansion of `Delta_f^{-1} x^{-z}`.
//!
//! Expanding `f(t) = -A(t)/t` inside the Laplace integral term by term gives
//!
//! ```text
//! S_N(x) = Gamma(2-z)/(1-z) sum_{n<=N} a_n (-1)^n x^{1-z-n} / Gamma(2-z-n)
//! ```
//!
//! whose limit is `L(f~, z, x + 1)` for the reflected kernel `f~(t) = f(-t)`.

use num_complex::Complex64;

use crate::engine::{continued_l, ray_cut};
use crate::error::{check_finite, Result, ZhlError};
use crate::kernels::{Kernel, TAYLOR_LEN};
use crate::numerics::{integrate_panels, pow_unchecked, reciprocal_gamma, QuadratureSpec};

fn check(z: Complex64, x: f64, n: usize) -> Result<()> {
    check_finite(z, "z")?;
    if z == Complex64::new(1.0, 0.0) {
        return Err(ZhlError::PoleAtOne);
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(ZhlError::Domain(format!("x must be positive, got {x}")));
    }
    if n >= TAYLOR_LEN {
        return Err(ZhlError::InvalidParameter(format!("N = {n} exceeds the stored Taylor data")));
    }
    Ok(())
}

/// Partial sum `S_N(x)`. The ratio `Gamma(2-z) / Gamma(2-z-n)` is taken as
/// the finite product `(1-z)(-z)...(2-z-n)`, so integer `z` needs no limit.
pub fn delta_inv_asymptotic(kernel: &Kernel, z: Complex64, x: f64, n: usize) -> Result<Complex64> {
    check(z, x, n)?;
    let a = kernel.taylor();
    let lx = x.ln();
    let mut ratio = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, ak) in a.iter().enumerate().take(n + 1) {
        if k > 0 {
            ratio *= 2.0 - z - k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += ak * sign * ratio * pow_unchecked(lx, 0.0, 1.0 - z - k as f64);
    }
    Ok(sum / (1.0 - z))
}

/// `|S_N(x) - L(f~, z, x + 1)| x^N`, the limit taken from the engine.
pub fn truncation_check(kernel: &Kernel, z: Complex64, x: f64, n: usize) -> Result<f64> {
    let s = delta_inv_asymptotic(kernel, z, x, n)?;
    let target = continued_l(&kernel.reflected()?, z, x + 1.0)?.value;
    Ok((s - target).norm() * x.powi(n as i32))
}

/// `S_N(x) - L(f~, z, x + 1)` as one integral,
/// `(1/Gamma(z)) int_0^inf t^{z-2} e^{-xt} (A(t) - P_N(t)) dt`,
/// so that it keeps full relative accuracy far below `|S_N|`. Needs
/// `Re z + N > 0` and `f` bounded on the positive axis.
pub fn asymptotic_remainder(kernel: &Kernel, z: Complex64, x: f64, n: usize) -> Result<Complex64> {
    check(z, x, n)?;
    if !(z.re + n as f64 > 0.0) {
        return Err(ZhlError::Domain(format!("remainder integral needs Re z + N > 0, got {}", z.re + n as f64)));
    }
    let a = kernel.taylor();
    let (head, tail) = a.split_at(n + 1);
    let switch = kernel.radius() / 3.0;
    let zm2 = z - 2.0;
    let integrand = |t: f64| -> Complex64 {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let rest = if t < switch {
            let lead = t.powi(n as i32 + 1);
            tail.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c) * lead
        } else {
            let full = -t * kernel.eval_f(Complex64::new(t, 0.0));
            full - head.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)
        };
        pow_unchecked(t.ln(), 0.0, zm2) * (-x * t).exp() * rest
    };
    let cut = ray_cut(x, z.re + n as f64, 45.0, 1.0);
    let q = integrate_panels(integrand, 0.0, cut, &QuadratureSpec::default())?;
    let v = reciprocal_gamma(z) * q.value;
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(ZhlError::NonFinite("asymptotic remainder"));
    }
    Ok(v)
}

/// Observed orders `log(e(x_i) / e(x_{i+1})) / log(x_{i+1} / x_i)` of the
/// remainder along an increasing ladder.
pub fn remainder_orders(kernel: &Kernel, z: Complex64, n: usize, xs: &[f64]) -> Result<Vec<f64>> {
    let e = xs
        .iter()
        .map(|&x| asymptotic_remainder(kernel, z, x, n).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?;
    Ok(xs
        .windows(2)
        .zip(e.windows(2))
        .map(|(x, e)| (e[0] / e[1]).ln() / (x[1] / x[0]).ln())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::hurwitz_zeta;
    use crate::kernels::{make_lambda_kernel, make_riemann_kernel};
    use crate::numerics::real;

    #[test]
    fn riemann_series_tends_to_minus_zeta() {
        let k = make_riemann_kernel();
        let z = real(2.5);
        let s = delta_inv_asymptotic(&k, z, 30.0, 10).unwrap();
        let target = -hurwitz_zeta(z, 30.0).unwrap();
        assert!((s - target).norm() < 1e-10 * target.norm(), "{s} vs {target}");
    }

    #[test]
    fn integer_z_is_finite() {
        let k = make_riemann_kernel();
        let s = delta_inv_asymptotic(&k, real(2.0), 50.0, 6).unwrap();
        let target = -hurwitz_zeta(real(2.0), 50.0).unwrap();
        assert!((s - target).norm() < 1e-12 * target.norm());
        assert_eq!(delta_inv_asymptotic(&k, real(1.0), 5.0, 2), Err(ZhlError::PoleAtOne));
    }

    #[test]
    fn remainder_matches_direct_difference() {
        let k = make_riemann_kernel();
        let z = real(2.5);
        for (x, n) in [(10.0, 2), (20.0, 0), (5.0, 4)] {
            let direct = delta_inv_asymptotic(&k, z, x, n).unwrap() + hurwitz_zeta(z, x).unwrap();
            let r = asymptotic_remainder(&k, z, x, n).unwrap();
            assert!((r - direct).norm() < 1e-9 * direct.norm(), "{x} {n}: {r} vs {direct}");
        }
    }

    #[test]
    fn truncation_sequences_stay_bounded() {
        for (k, z) in [(make_riemann_kernel(), real(2.5)), (make_lambda_kernel(), real(3.2))] {
            let t: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&x| truncation_check(&k, z, x, 4).unwrap()).collect();
            assert!(t[2] <= t[0] && t[1] <= t[0], "{}: {t:?}", k.name());
        }
    }

    #[test]
    fn remainder_order_is_n_plus_re_z_plus_one() {
        let k = make_riemann_kernel();
        let o = remainder_orders(&k, real(2.5), 4, &[20.0, 40.0, 80.0]).unwrap();
        for v in o {
            assert!((v - 7.5).abs() < 0.05, "{v}");
        }
    }
}
