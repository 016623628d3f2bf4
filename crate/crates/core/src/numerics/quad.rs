//! Composite quadrature on a finite interval: a tanh-sinh panel at the
//! left end (absorbs algebraic endpoint singularities) followed by adaptive
//! Gauss-Legendre panels.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use crate::error::{check_finite_real, Result, ZhlError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
    pub nodes_per_panel: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_panels: 4000,
            nodes_per_panel: 15,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_panels < 1 || self.nodes_per_panel < 2 {
            return Err(ZhlError::InvalidParameter(format!("bad quadrature spec {self:?}")));
        }
        Ok(())
    }

    fn tolerance(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_panel<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(&rule.1) {
        acc += *w * g(mid + half * x);
    }
    acc * half
}

/// Tanh-sinh rule on `[a, b]`, refined by halving the step until two
/// successive levels agree to `tol`. Nodes are placed by their distance to
/// the nearer endpoint so no accuracy is lost next to a singular end.
fn tanh_sinh<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (Complex64, f64) {
    let width = b - a;
    let tmax = 6.5;
    let term = |tau: f64| -> Complex64 {
        let u = FRAC_PI_2 * tau.sinh();
        if u.abs() > 350.0 {
            return Complex64::new(0.0, 0.0);
        }
        // distance from the near end, as a fraction of the width
        let near = 1.0 / (1.0 + (2.0 * u.abs()).exp());
        let sech = 1.0 / u.cosh();
        let jac = FRAC_PI_2 * tau.cosh() * 0.5 * sech * sech * width;
        let x = if tau < 0.0 { a + width * near } else { b - width * near };
        if x <= a || x >= b {
            return Complex64::new(0.0, 0.0);
        }
        let v = g(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Complex64::new(0.0, 0.0);
        }
        v * jac
    };

    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        if t > tmax {
            break;
        }
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    for _level in 0..9 {
        h *= 0.5;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > tmax {
                break;
            }
            sum += term(t) + term(-t);
            k += 2;
        }
        let next = sum * h;
        err = (next - estimate).norm();
        estimate = next;
        if err <= abs_tol.max(0.1 * rel_tol * estimate.norm()).max(1e-16 * estimate.norm()) {
            break;
        }
    }
    (estimate, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `g` over `[a, b]`.
///
/// The leftmost panel (width `min(b - a, 1)`) uses tanh-sinh, so `g` may
/// behave like `(t - a)^s` with `s > -1` there; the remainder is covered by
/// adaptive bisection of Gauss-Legendre panels, each panel's error estimated
/// by comparing it against its two halves.
pub fn integrate_panels<G>(g: G, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    G: Fn(f64) -> Complex64,
{
    spec.validate()?;
    check_finite_real(a, "lower limit")?;
    check_finite_real(b, "upper limit")?;
    if b < a {
        let q = integrate_panels(g, b, a, spec)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }
    if b == a {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0, panels: 0 });
    }

    let split = (a + 1.0).min(b);
    let (de_value, de_err) = tanh_sinh(&g, a, split, spec.rel_tol, spec.abs_tol);
    let mut value = de_value;
    let mut panels = 1usize;
    let mut error = de_err;

    if split < b {
        let rule = gauss_legendre(spec.nodes_per_panel);
        let make = |pa: f64, pb: f64| -> Panel {
            let whole = gl_panel(&g, pa, pb, &rule);
            let m = 0.5 * (pa + pb);
            let halves = gl_panel(&g, pa, m, &rule) + gl_panel(&g, m, pb, &rule);
            Panel { a: pa, b: pb, value: halves, error: (whole - halves).norm() }
        };
        // unit-length starting panels keep the first error estimates meaningful
        let n0 = ((b - split).ceil() as usize).clamp(1, spec.max_panels.max(1));
        let step = (b - split) / n0 as f64;
        let mut heap = BinaryHeap::with_capacity(2 * n0);
        for i in 0..n0 {
            let pa = split + i as f64 * step;
            let pb = if i + 1 == n0 { b } else { pa + step };
            heap.push(make(pa, pb));
        }
        panels += n0;
        loop {
            let gl_value: Complex64 = heap.iter().map(|p| p.value).sum();
            let gl_error: f64 = heap.iter().map(|p| p.error).sum();
            value = de_value + gl_value;
            error = de_err + gl_error;
            if error <= spec.tolerance(value) {
                break;
            }
            if panels >= spec.max_panels {
                return Err(ZhlError::NonConvergence { panels, achieved: error });
            }
            let worst = heap.pop().expect("non-empty panel heap");
            let m = 0.5 * (worst.a + worst.b);
            if m <= worst.a || m >= worst.b {
                return Err(ZhlError::NonConvergence { panels, achieved: error });
            }
            heap.push(make(worst.a, m));
            heap.push(make(m, worst.b));
            panels += 1;
        }
    } else if error > spec.tolerance(value) {
        return Err(ZhlError::NonConvergence { panels, achieved: error });
    }

    Ok(Quadrature { value, error, panels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |t| Complex64::new(f(t), 0.0)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(15);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(28)).sum();
        assert!((s - 2.0 / 29.0).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn examples() {
        let spec = QuadratureSpec::default();
        let q = integrate_panels(re(|t| t), 0.0, 1.0, &spec).unwrap();
        assert!((q.value.re - 0.5).abs() < 1e-14);
        let q = integrate_panels(re(|t| t.powf(-0.5)), 0.0, 1.0, &spec).unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-12, "{q:?}");
        let q = integrate_panels(re(|t| t * (-t).exp()), 0.0, 40.0, &spec).unwrap();
        // integral over [0, 40] = 1 - 41 e^{-40}
        assert!((q.value.re - 1.0).abs() < 1e-12, "{q:?}");
    }

    #[test]
    fn strong_endpoint_singularity() {
        let spec = QuadratureSpec::default();
        let q = integrate_panels(re(|t| t.powf(-0.9)), 0.0, 1.0, &spec).unwrap();
        assert!((q.value.re - 10.0).abs() < 1e-9, "{q:?}");
    }

    #[test]
    fn reversed_and_empty_limits() {
        let spec = QuadratureSpec::default();
        let q = integrate_panels(re(|t| t), 1.0, 0.0, &spec).unwrap();
        assert!((q.value.re + 0.5).abs() < 1e-14);
        let q = integrate_panels(re(|t| t), 2.0, 2.0, &spec).unwrap();
        assert_eq!(q.value.re, 0.0);
    }

    #[test]
    fn reports_non_convergence() {
        let spec = QuadratureSpec { max_panels: 3, ..Default::default() };
        let r = integrate_panels(re(|t| (50.0 * t * t).sin()), 0.0, 30.0, &spec);
        assert!(matches!(r, Err(ZhlError::NonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = QuadratureSpec { nodes_per_panel: 1, ..Default::default() };
        assert!(integrate_panels(re(|t| t), 0.0, 1.0, &spec).is_err());
    }
}
