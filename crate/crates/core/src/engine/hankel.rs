use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::loop_integral::{circle_radius, ray_cut};
use crate::error::{check_finite, Result, ZhlError};
use crate::kernels::Kernel;
use crate::numerics::{gauss_legendre, integrate_panels, pow_unchecked, sin_pi, QuadratureSpec};

const RAY_MARGIN: f64 = 45.0;

/// Geometry of the loop `C`: in along `arg t = -pi`, around `|t| = epsilon`,
/// out along `arg t = +pi`, with both rays cut at `|t| = ray_cut`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub epsilon: f64,
    pub ray_cut: f64,
    pub circle_nodes: usize,
    pub ray_spec: QuadratureSpec,
}

impl ContourSpec {
    /// Defaults: `epsilon = min(r/2, 1/2, 2/|x-1|)`, 64 circle nodes and a cut where
    /// the ray integrand has decayed below `e^{-45}`.
    pub fn for_kernel(kernel: &Kernel, z: Complex64, x: f64) -> Result<Self> {
        check_window(kernel, x)?;
        let epsilon = circle_radius(kernel, x);
        let beta = x - 1.0 + kernel.decay_alpha();
        Ok(Self {
            epsilon,
            ray_cut: ray_cut(beta, z.re - 1.0, RAY_MARGIN, 2.0 * epsilon),
            circle_nodes: 64,
            ray_spec: QuadratureSpec::default(),
        })
    }

    pub fn validate(&self, kernel: &Kernel) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(ZhlError::InvalidParameter(format!("epsilon {} must be positive", self.epsilon)));
        }
        if self.epsilon >= kernel.radius() {
            return Err(ZhlError::ContourTouchesPole { epsilon: self.epsilon, radius: kernel.radius() });
        }
        if !(self.ray_cut > self.epsilon && self.ray_cut.is_finite()) {
            return Err(ZhlError::InvalidParameter(format!("ray cut {} must exceed epsilon", self.ray_cut)));
        }
        if self.circle_nodes < 16 {
            return Err(ZhlError::InvalidParameter("circle needs at least 16 nodes".into()));
        }
        self.ray_spec.validate()
    }
}

fn check_window(kernel: &Kernel, x: f64) -> Result<()> {
    let lo = kernel.x_lower_bound();
    if !(x > lo && x.is_finite()) {
        return Err(ZhlError::Window { x, lo, hi: f64::INFINITY });
    }
    Ok(())
}

fn circle_integral(kernel: &Kernel, z: Complex64, x: f64, eps: f64, nodes: usize) -> Complex64 {
    // (1/2 pi) int_{-pi}^{pi} eps^z e^{i theta z} e^{(x-1)t} f(t) d theta, t = eps e^{i theta}
    let (xs, ws) = gauss_legendre(nodes);
    let ln_eps = eps.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, w) in xs.iter().zip(&ws) {
        let theta = PI * u;
        let t = Complex64::from_polar(eps, theta);
        acc += *w * pow_unchecked(ln_eps, theta, z) * ((x - 1.0) * t).exp() * kernel.eval_f(t);
    }
    // d theta = pi du
    0.5 * acc
}

/// `I(f, z, x) = (1/2 pi i) int_C t^{z-1} e^{(x-1)t} f(t) dt` on the literal
/// loop, so that `L(f, z, x) = c(z) Gamma(1-z) I(f, z, x)`.
///
/// The two rays differ only in the phase of `t^{z-1}`; together they give
/// `sin(pi z) / pi` times one real-axis integral. The circle is integrated
/// by Gauss-Legendre in `theta`, and its error estimated against a rule
/// with 16 more nodes.
pub fn hankel_i(kernel: &Kernel, z: Complex64, x: f64, contour: &ContourSpec) -> Result<super::EvaluationResult> {
    check_finite(z, "z")?;
    check_window(kernel, x)?;
    contour.validate(kernel)?;
    let eps = contour.epsilon;
    let zm1 = z - 1.0;
    let rays = integrate_panels(
        |rho: f64| pow_unchecked(rho.ln(), 0.0, zm1) * (-(x - 1.0) * rho).exp() * kernel.eval_f_neg(rho),
        eps,
        contour.ray_cut,
        &contour.ray_spec,
    )?;
    let factor = sin_pi(z) / PI;
    let circle = circle_integral(kernel, z, x, eps, contour.circle_nodes);
    let check = circle_integral(kernel, z, x, eps, contour.circle_nodes + 16);
    let value = factor * rays.value + circle;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(ZhlError::NonFinite("hankel integral"));
    }
    let est_error = 10.0 * (factor.norm() * rays.error + (circle - check).norm());
    Ok(super::EvaluationResult { value, est_error, method: super::Method::Hankel, shift_steps: 0 })
}
