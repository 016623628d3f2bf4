//! `L(f, z, x)` from a single ray integral.
//!
//! With `g(s) = s e^{-(x-1)s} f(-s)` and `P_K` its Taylor polynomial of
//! degree `K`,
//!
//! ```text
//! Gamma(z) L / c(z) = int_0^{c'} s^{z-2} (g - P_K) ds
//!                   + sum_{k<=K} p_k c'^{z+k-1} / (z+k-1)
//!                   + int_{c'}^{inf} s^{z-2} g ds
//! ```
//!
//! along a ray `arg s = phi` through `c' = eps e^{i phi}`. For `Re z > 1`
//! this is the Mellin integral with its contour turned; for `Re z > 1 - K`
//! it is the Hankel loop with its two rays merged into one and the small
//! circle integrated term by term. Dividing by `Gamma(z)` term-wise keeps
//! every piece entire except the `k = 0` pole at `z = 1`. Turning the ray
//! towards `sign(Im z) i` keeps `s^{z-2}` from growing like `e^{pi |Im z| / 2}`
//! relative to the result.

use num_complex::Complex64;

use crate::error::{Result, ZhlError};
use crate::kernels::{Kernel, TAYLOR_LEN};
use crate::numerics::{integrate_panels, pow_unchecked, reciprocal_gamma, Quadrature, QuadratureSpec};

/// Degree of the subtracted Taylor polynomial; the split integral is valid
/// for `Re z > 1 - SUBTRACTED`.
pub(crate) const SUBTRACTED: usize = 30;

/// Full rotation is reached once `|Im z|` exceeds this.
const ROTATION_RAMP: f64 = 5.0;

/// `-ln` of the relative size at which a decaying ray is cut off.
const RAY_MARGIN: f64 = 45.0;

pub(crate) struct LoopValue {
    pub value: Complex64,
    pub error: f64,
}

/// Taylor coefficients of `g(s) = e^{-(x-1)s} A(-s)` where `A(t) = sum a_n t^n`.
pub(crate) fn shifted_taylor(a: &[Complex64], x: f64) -> Vec<Complex64> {
    let n = a.len();
    let mut e = vec![1.0; n];
    for j in 1..n {
        e[j] = e[j - 1] * (1.0 - x) / j as f64;
    }
    (0..n)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    a[i] * sign * e[k - i]
                })
                .sum()
        })
        .collect()
}

/// Radius of the small circle: inside the kernel's disc, and small enough
/// that the Taylor coefficients of `e^{-(x-1)s}` decay from the start.
pub(crate) fn circle_radius(kernel: &Kernel, x: f64) -> f64 {
    let r = (kernel.radius() / 2.0).min(0.5);
    let spread = (x - 1.0).abs();
    if spread > 0.0 {
        r.min(MAX_EXPONENT / spread)
    } else {
        r
    }
}

const MAX_EXPONENT: f64 = 2.0;

/// Smallest `T` with `T^p e^{-beta T} <= e^{-margin}`, at least `floor`.
pub(crate) fn ray_cut(beta: f64, power: f64, margin: f64, floor: f64) -> f64 {
    let p = power.max(0.0);
    let mut t = (margin / beta).max(1.0);
    for _ in 0..20 {
        t = ((margin + p * t.ln()) / beta).max(1.0);
    }
    t.max(floor)
}

fn poly(p: &[Complex64], s: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c)
}

/// `rgamma(z) / (z + k - 1)`, entire for `k >= 1`.
fn scaled_rgamma(z: Complex64, k: usize) -> Complex64 {
    match k {
        0 => reciprocal_gamma(z) / (z - 1.0),
        _ => {
            let mut prod = Complex64::new(1.0, 0.0);
            for j in 0..k.saturating_sub(1) {
                prod *= z + j as f64;
            }
            prod * reciprocal_gamma(z + k as f64)
        }
    }
}

/// Evaluates `L(f, z, x)`; requires `z != 1` and `x > 1 - decay_alpha`.
pub(crate) fn loop_l(kernel: &Kernel, z: Complex64, x: f64, spec: &QuadratureSpec) -> Result<LoopValue> {
    let tau = z.im;
    let phi = tau.signum() * kernel.max_rotation() * (tau.abs() / ROTATION_RAMP).min(1.0);
    let beta = (x - 1.0 + kernel.decay_alpha()) * phi.cos();
    if !(beta > 0.0) {
        return Err(ZhlError::Divergence { x, min: kernel.x_lower_bound() });
    }
    let eps = circle_radius(kernel, x);
    let dir = Complex64::from_polar(1.0, phi);
    let p = shifted_taylor(kernel.taylor(), x);
    let (head, tail) = p.split_at(SUBTRACTED + 1);
    let zm2 = z - 2.0;
    let g = |s: Complex64| s * (-(x - 1.0) * s).exp() * kernel.f_neg(s);

    let rg = reciprocal_gamma(z);
    let ln_eps = eps.ln();
    let mut circle = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for (k, pk) in head.iter().enumerate() {
        let term = pk * pow_unchecked(ln_eps, phi, z + (k as f64 - 1.0)) * scaled_rgamma(z, k);
        scale += term.norm();
        circle += term;
    }
    debug_assert_eq!(head.len() + tail.len(), TAYLOR_LEN);

    // 1/Gamma(z) vanishes at 0, -1, -2, ...: only the circle terms survive
    let zero = Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 };
    let (inner, outer) = if rg.norm() == 0.0 {
        (zero, zero)
    } else {
        let floor = QuadratureSpec { abs_tol: spec.abs_tol.max(1e-2 * spec.rel_tol * scale / rg.norm()), ..*spec };
        let inner = integrate_panels(
            |rho: f64| {
                if rho <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let s = dir * rho;
                let h = if rho < 0.5 * eps {
                    s.powu(SUBTRACTED as u32 + 1) * poly(tail, s)
                } else {
                    g(s) - poly(head, s)
                };
                dir * pow_unchecked(rho.ln(), phi, zm2) * h
            },
            0.0,
            eps,
            &floor,
        )?;
        let cut = ray_cut(beta, z.re - 1.0, RAY_MARGIN, 2.0 * eps);
        let outer = integrate_panels(
            |rho: f64| {
                let s = dir * rho;
                dir * pow_unchecked(rho.ln(), phi, zm2) * g(s)
            },
            eps,
            cut,
            &floor,
        )?;
        (inner, outer)
    };

    let pre = kernel.prefactor(z);
    let integrals = rg * (inner.value + outer.value);
    let value = pre * (integrals + circle);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(ZhlError::NonFinite("loop integral value"));
    }
    let rounding = f64::EPSILON * (rg.norm() * (inner.value.norm() + outer.value.norm()) + scale);
    let error = pre.norm() * (rg.norm() * (inner.error + outer.error) + rounding);
    Ok(LoopValue { value, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_riemann_kernel;

    #[test]
    fn shifted_taylor_at_one_is_alternating() {
        let k = make_riemann_kernel();
        let p = shifted_taylor(k.taylor(), 1.0);
        for (n, (pn, an)) in p.iter().zip(k.taylor()).enumerate() {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((pn - an * s).norm() < 1e-18);
        }
    }

    #[test]
    fn scaled_rgamma_matches_definition() {
        let z = Complex64::new(0.3, 2.0);
        for k in 0..8 {
            let direct = reciprocal_gamma(z) / (z + k as f64 - 1.0);
            assert!((scaled_rgamma(z, k) - direct).norm() < 1e-14 * direct.norm(), "{k}");
        }
        // finite at the poles of 1 / (z + k - 1)
        assert!((scaled_rgamma(Complex64::new(-2.0, 0.0), 3) - 2.0).norm() < 1e-15);
    }

    #[test]
    fn ray_cut_reaches_margin() {
        let t = ray_cut(0.3, 2.0, 45.0, 1.0);
        assert!(2.0 * t.ln() - 0.3 * t <= -45.0 + 1e-9);
    }
}
