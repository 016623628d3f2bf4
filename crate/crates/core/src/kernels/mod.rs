//! Kernels `f(t)` generating zeta families
//! `L(f, z, x) = c(z) / Gamma(z) * int_0^inf t^{z-1} e^{-(x-1) t} f(-t) dt`.

mod character;
mod cusp;
pub(crate) mod series;

pub use character::DirichletCharacter;
pub use cusp::{compute_tau_coefficients, tau_values, CuspFormCoefficients};

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, ZhlError};
use crate::numerics::{exp_m1, real, real_pow};

/// Number of Taylor coefficients stored with every kernel (`a_0..a_40`).
pub const TAYLOR_LEN: usize = 41;

const MIN_HECKE_TERMS: usize = 50;

/// User-supplied `s -> f(-s)`.
pub type KernelFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    Riemann,
    Lambda,
    Dirichlet(DirichletCharacter),
    Hecke(CuspFormCoefficients),
    Custom(KernelFn),
    /// `t -> f(-t)` for the wrapped kernel `f`.
    Reflected(Kernel),
}

struct Inner {
    name: String,
    family: Family,
    taylor: Vec<Complex64>,
    radius: f64,
    decay_alpha: f64,
    abscissa: f64,
    max_rotation: f64,
}

/// An immutable, cheaply clonable kernel descriptor.
#[derive(Clone)]
pub struct Kernel(Arc<Inner>);

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.0.name)
            .field("radius", &self.0.radius)
            .field("decay_alpha", &self.0.decay_alpha)
            .field("abscissa", &self.0.abscissa)
            .finish()
    }
}

/// Rays of the continuation may be turned up to this angle for the built-in
/// kernels, which are analytic and decaying in the open right half-plane
/// away from the imaginary axis.
const BUILTIN_ROTATION: f64 = FRAC_PI_2 - 0.3;

pub fn make_riemann_kernel() -> Kernel {
    let chi = DirichletCharacter::principal(1).expect("principal character");
    Kernel::build(Inner {
        name: "riemann".into(),
        family: Family::Riemann,
        taylor: dirichlet_taylor(&chi),
        radius: 2.0 * PI,
        decay_alpha: 1.0,
        abscissa: 1.0,
        max_rotation: BUILTIN_ROTATION,
    })
}

pub fn make_lambda_kernel() -> Kernel {
    let n = TAYLOR_LEN - 1;
    let num = series::exp_series(real(1.0), n);
    let den = series::exp_m1_over_t(real(2.0), n);
    Kernel::build(Inner {
        name: "lambda".into(),
        family: Family::Lambda,
        taylor: series::div(&num, &den, n),
        radius: PI,
        decay_alpha: 1.0,
        abscissa: 1.0,
        max_rotation: BUILTIN_ROTATION,
    })
}

pub fn make_dirichlet_kernel(chi: DirichletCharacter) -> Result<Kernel> {
    chi.validate()?;
    let m = chi.modulus();
    Ok(Kernel::build(Inner {
        name: format!("dirichlet-mod{m}"),
        taylor: dirichlet_taylor(&chi),
        family: Family::Dirichlet(chi),
        radius: 2.0 * PI / m as f64,
        decay_alpha: 1.0,
        abscissa: 1.0,
        max_rotation: BUILTIN_ROTATION,
    }))
}

/// Kernel of the Hecke series of a cusp form, `f(-t) = sum lambda_n e^{-2 pi n t}`,
/// with the `(2 pi)^z` prefactor applied outside the integral.
///
/// The truncated series is entire; `radius` is set to `2 / (pi N)` so the
/// Taylor data stays well conditioned on `|t| = r/4`.
pub fn make_hecke_kernel(coeffs: CuspFormCoefficients) -> Result<Kernel> {
    let n = coeffs.len();
    if n < MIN_HECKE_TERMS {
        return Err(ZhlError::InvalidParameter(format!(
            "hecke kernel needs at least {MIN_HECKE_TERMS} coefficients, got {n}"
        )));
    }
    // -t f(t) = -sum_m lambda_m t e^{2 pi m t}, so a_k = -sum_m lambda_m (2 pi m)^{k-1} / (k-1)!
    let mut taylor = vec![Complex64::new(0.0, 0.0); TAYLOR_LEN];
    for (idx, &lam) in coeffs.coefficients().iter().enumerate() {
        let w = 2.0 * PI * (idx + 1) as f64;
        let mut term = lam;
        for k in 1..TAYLOR_LEN {
            taylor[k] -= term;
            term *= w / k as f64;
        }
    }
    let weight = coeffs.weight();
    Ok(Kernel::build(Inner {
        name: "hecke".into(),
        family: Family::Hecke(coeffs),
        taylor,
        radius: 2.0 / (PI * n as f64),
        decay_alpha: 2.0 * PI,
        abscissa: (weight as f64 + 1.0) / 2.0,
        max_rotation: BUILTIN_ROTATION,
    }))
}

/// Parameters of a user-defined kernel.
#[derive(Clone)]
pub struct CustomKernelSpec {
    pub name: String,
    /// `s -> f(-s)`, analytic on a neighbourhood of the positive axis and
    /// on `0 < |s| < radius`.
    pub f_neg: KernelFn,
    pub radius: f64,
    pub decay_alpha: f64,
    pub abscissa: f64,
    /// Largest angle by which integration rays may leave the positive axis.
    pub max_rotation: f64,
}

/// Builds a kernel from a closure; Taylor data is obtained numerically from
/// samples on `|t| = r/4` and self-checked on a second circle.
pub fn make_custom_kernel(spec: CustomKernelSpec) -> Result<Kernel> {
    if !(spec.radius > 0.0 && spec.radius.is_finite()) {
        return Err(ZhlError::InvalidParameter(format!("radius {} must be positive", spec.radius)));
    }
    if !spec.decay_alpha.is_finite() || !spec.abscissa.is_finite() {
        return Err(ZhlError::NonFinite("custom kernel data"));
    }
    if !(0.0..FRAC_PI_2).contains(&spec.max_rotation) {
        return Err(ZhlError::InvalidParameter("max_rotation must lie in [0, pi/2)".into()));
    }
    let f = spec.f_neg.clone();
    // (-t) f(t) = (-t) f_neg(-t)
    let a = move |t: Complex64| -t * f(-t);
    let taylor = numeric_taylor(&a, spec.radius / 4.0)?;
    Ok(Kernel::build(Inner {
        name: spec.name,
        family: Family::Custom(spec.f_neg),
        taylor,
        radius: spec.radius,
        decay_alpha: spec.decay_alpha,
        abscissa: spec.abscissa,
        max_rotation: spec.max_rotation,
    }))
}

/// `a_0..a_n` of `(-t) f(t)`.
pub fn kernel_taylor(kernel: &Kernel, n: usize) -> Result<Vec<Complex64>> {
    if n >= TAYLOR_LEN {
        return Err(ZhlError::InvalidParameter(format!("taylor order {n} exceeds {}", TAYLOR_LEN - 1)));
    }
    Ok(kernel.taylor()[..=n].to_vec())
}

/// `(-t) f(t)` for `f(t) = sum_r chi(r) e^{rt} / (1 - e^{mt})`.
fn dirichlet_taylor(chi: &DirichletCharacter) -> Vec<Complex64> {
    let n = TAYLOR_LEN - 1;
    let m = chi.modulus();
    let mut num = vec![Complex64::new(0.0, 0.0); n + 1];
    for r in 1..=m {
        let v = chi.at(r as i64);
        if v.norm() == 0.0 {
            continue;
        }
        for (acc, e) in num.iter_mut().zip(series::exp_series(real(r as f64), n)) {
            *acc += v * e;
        }
    }
    let den = series::exp_m1_over_t(real(m as f64), n);
    series::div(&num, &den, n)
}

const SAMPLES: usize = 128;

/// Taylor coefficients by the trapezoid rule on `|t| = rho`, cross-checked
/// against a second circle of radius `0.8 rho`.
fn numeric_taylor(a: &dyn Fn(Complex64) -> Complex64, rho: f64) -> Result<Vec<Complex64>> {
    let on_circle = |radius: f64| -> Result<(Vec<Complex64>, f64)> {
        let vals: Vec<Complex64> = (0..SAMPLES)
            .map(|j| a(Complex64::from_polar(radius, 2.0 * PI * j as f64 / SAMPLES as f64)))
            .collect();
        if vals.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(ZhlError::NonFinite("custom kernel sample"));
        }
        let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let coeffs = (0..TAYLOR_LEN)
            .map(|k| {
                let s: Complex64 = vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / SAMPLES as f64))
                    .sum();
                s / (SAMPLES as f64 * radius.powi(k as i32))
            })
            .collect();
        Ok((coeffs, sup))
    };
    let (c1, sup) = on_circle(rho)?;
    let (c2, _) = on_circle(0.8 * rho)?;
    let scale = sup.max(f64::MIN_POSITIVE);
    let mismatch = c1
        .iter()
        .zip(&c2)
        .enumerate()
        .map(|(k, (x, y))| (x - y).norm() * rho.powi(k as i32) / scale)
        .fold(0.0, f64::max);
    if mismatch > 1e-8 {
        return Err(ZhlError::RadiusExceeded(mismatch));
    }
    Ok(c1)
}

impl Kernel {
    fn build(inner: Inner) -> Self {
        Kernel(Arc::new(inner))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn family(&self) -> &Family {
        &self.0.family
    }

    /// Taylor coefficients `a_0..a_40` of `(-t) f(t)` at `t = 0`.
    pub fn taylor(&self) -> &[Complex64] {
        &self.0.taylor
    }

    /// Radius of analyticity of `t f(t)` at the origin.
    pub fn radius(&self) -> f64 {
        self.0.radius
    }

    /// `|f(-t)| <= K e^{-decay_alpha t}` as `t -> +inf`.
    pub fn decay_alpha(&self) -> f64 {
        self.0.decay_alpha
    }

    /// The defining series converges for `Re z > abscissa`.
    pub fn abscissa(&self) -> f64 {
        self.0.abscissa
    }

    pub fn max_rotation(&self) -> f64 {
        self.0.max_rotation
    }

    /// The Mellin integral converges only for `x` above this bound.
    pub fn x_lower_bound(&self) -> f64 {
        1.0 - self.0.decay_alpha
    }

    /// `f(-s)` for complex `s`, evaluated in whichever form avoids overflow.
    pub fn f_neg(&self, s: Complex64) -> Complex64 {
        match &self.0.family {
            Family::Riemann => {
                if s.re >= 0.0 {
                    (-s).exp() / -exp_m1(-s)
                } else {
                    1.0 / exp_m1(s)
                }
            }
            Family::Lambda => {
                if s.re >= 0.0 {
                    (-s).exp() / -exp_m1(-2.0 * s)
                } else {
                    s.exp() / exp_m1(2.0 * s)
                }
            }
            Family::Dirichlet(chi) => {
                let m = chi.modulus() as f64;
                let mut num = Complex64::new(0.0, 0.0);
                for r in 1..=chi.modulus() {
                    let v = chi.at(r as i64);
                    if v.norm() == 0.0 {
                        continue;
                    }
                    let e = if s.re >= 0.0 { -(r as f64) } else { m - r as f64 };
                    num += v * (e * s).exp();
                }
                if s.re >= 0.0 {
                    num / -exp_m1(-m * s)
                } else {
                    num / exp_m1(m * s)
                }
            }
            Family::Hecke(c) => c
                .coefficients()
                .iter()
                .enumerate()
                .map(|(i, &lam)| lam * (-2.0 * PI * (i + 1) as f64 * s).exp())
                .sum(),
            Family::Custom(f) => f(s),
            Family::Reflected(k) => k.f_neg(-s),
        }
    }

    /// `f(t)`.
    pub fn eval_f(&self, t: Complex64) -> Complex64 {
        self.f_neg(-t)
    }

    /// `f(-t)` for real `t > 0`.
    pub fn eval_f_neg(&self, t: f64) -> Complex64 {
        self.f_neg(real(t))
    }

    /// `c(z)`; `(2 pi)^z` for Hecke kernels, 1 otherwise.
    pub fn prefactor(&self, z: Complex64) -> Complex64 {
        match &self.0.family {
            Family::Hecke(_) => real_pow(2.0 * PI, z),
            _ => real(1.0),
        }
    }

    pub fn has_prefactor(&self) -> bool {
        matches!(self.0.family, Family::Hecke(_))
    }

    /// Step `delta` of the relation `L(z, x) = L(z, x + delta) + term(z, x)`.
    pub fn shift_step(&self) -> Option<f64> {
        match &self.0.family {
            Family::Riemann => Some(1.0),
            Family::Lambda => Some(2.0),
            Family::Dirichlet(chi) => Some(chi.modulus() as f64),
            _ => None,
        }
    }

    /// The elementary `term(z, x)` of the shift relation; needs `x > 0`.
    pub fn shift_term(&self, z: Complex64, x: f64) -> Option<Complex64> {
        match &self.0.family {
            Family::Riemann | Family::Lambda => Some(real_pow(x, -z)),
            Family::Dirichlet(chi) => Some(
                (1..=chi.modulus())
                    .map(|n| chi.at(n as i64) * real_pow(n as f64 + x - 1.0, -z))
                    .sum(),
            ),
            _ => None,
        }
    }

    /// The kernel `t -> f(-t)`, whose Taylor data is `-(-1)^n a_n`.
    ///
    /// Its zeta family satisfies `L(reflected, z, x) = (1/Gamma(z)) int t^{z-1}
    /// e^{-(x-1)t} f(t) dt`; for the Riemann kernel that is `-zeta(z, x - 1)`.
    pub fn reflected(&self) -> Result<Kernel> {
        let decay = match &self.0.family {
            Family::Riemann => 0.0,
            Family::Lambda => 1.0,
            Family::Dirichlet(chi) if chi.modulus() == 1 => 0.0,
            Family::Dirichlet(_) => 1.0,
            Family::Reflected(k) => return Ok(k.clone()),
            _ => {
                return Err(ZhlError::Domain(format!("kernel {} has no reflected form", self.name())));
            }
        };
        let taylor = self
            .taylor()
            .iter()
            .enumerate()
            .map(|(n, a)| if n % 2 == 0 { -a } else { *a })
            .collect();
        Ok(Kernel::build(Inner {
            name: format!("{}-reflected", self.name()),
            family: Family::Reflected(self.clone()),
            taylor,
            radius: self.radius(),
            decay_alpha: decay,
            abscissa: self.abscissa(),
            max_rotation: self.max_rotation(),
        }))
    }

    /// `f(-t)` with the truncation tail of a Hecke kernel bounded by `tol`.
    ///
    /// The tail bound uses `|lambda_n| <= 2 n^{k/2}` for weight `k`.
    pub fn eval_f_neg_checked(&self, t: f64, tol: f64) -> Result<Complex64> {
        if let Family::Hecke(c) = &self.0.family {
            let bound = hecke_tail_bound(c, t);
            if !(bound <= tol) {
                return Err(ZhlError::InsufficientCoefficients { t, bound, tol });
            }
        }
        Ok(self.eval_f_neg(t))
    }

    /// Largest relative mismatch between `sum a_n t^n` and `(-t) f(t)` over
    /// `samples` points of `|t| = r/4`.
    pub fn taylor_defect(&self, samples: usize) -> f64 {
        let rho = self.radius() / 4.0;
        let pts: Vec<(Complex64, Complex64)> = (0..samples)
            .map(|j| {
                let theta = 2.0 * PI * (j as f64 + 0.5) / samples as f64;
                let t = Complex64::from_polar(rho, theta);
                (series::eval(self.taylor(), t), -t * self.eval_f(t))
            })
            .collect();
        let sup = pts.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        pts.iter()
            .map(|(s, v)| (s - v).norm() / v.norm().max(1e-3 * sup))
            .fold(0.0, f64::max)
    }
}

fn hecke_tail_bound(c: &CuspFormCoefficients, t: f64) -> f64 {
    if !(t > 0.0) {
        return f64::INFINITY;
    }
    let half_k = c.weight() as f64 / 2.0;
    let mut n = c.len() as f64 + 1.0;
    let mut total = 0.0;
    loop {
        let term = 2.0 * n.powf(half_k) * (-2.0 * PI * n * t).exp();
        total += term;
        if term <= 1e-17 * total || n > 1e7 {
            break;
        }
        n += 1.0;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn builtins() -> Vec<Kernel> {
        vec![
            make_riemann_kernel(),
            make_lambda_kernel(),
            make_dirichlet_kernel(DirichletCharacter::chi4()).unwrap(),
            make_dirichlet_kernel(DirichletCharacter::chi3()).unwrap(),
            make_dirichlet_kernel(DirichletCharacter::principal(3).unwrap()).unwrap(),
            make_hecke_kernel(compute_tau_coefficients(60).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn riemann_examples() {
        let k = make_riemann_kernel();
        assert!((k.eval_f_neg(2f64.ln()) - 1.0).norm() < 1e-15);
        let a = kernel_taylor(&k, 2).unwrap();
        assert!((a[0] - 1.0).norm() < 1e-15);
        assert!((a[1] - 0.5).norm() < 1e-15);
        assert!((a[2] - 1.0 / 12.0).norm() < 1e-15);
        assert!(k.taylor()[3].norm() < 1e-15);
        assert!((k.taylor()[4] + 1.0 / 720.0).norm() < 1e-16);
    }

    #[test]
    fn lambda_examples() {
        let k = make_lambda_kernel();
        let t = 1.0f64;
        let geo: f64 = (0..=40).map(|n| (-(2 * n + 1) as f64 * t).exp()).sum();
        assert!((k.eval_f_neg(t).re - geo).abs() < 1e-15);
        let e = 1f64.exp();
        assert!((k.eval_f_neg(1.0).re - e / (e * e - 1.0)).abs() < 1e-15);
        assert!((k.eval_f_neg(1.0).re - 0.425_459_064_119_660_77).abs() < 1e-15);
        assert!((kernel_taylor(&k, 0).unwrap()[0] - 0.5).norm() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        let r = make_riemann_kernel();
        let p1 = make_dirichlet_kernel(DirichletCharacter::principal(1).unwrap()).unwrap();
        for t in [0.5, 1.0, 2.0] {
            assert!((r.eval_f_neg(t) - p1.eval_f_neg(t)).norm() < 1e-14);
        }
        let k = make_dirichlet_kernel(DirichletCharacter::chi4()).unwrap();
        let direct = {
            let e = |a: f64| (-a).exp();
            (e(1.0) - e(3.0)) / (1.0 - e(4.0))
        };
        let series: f64 = (1..=60).map(|n| [0.0, 1.0, 0.0, -1.0][n % 4] * (-(n as f64)).exp()).sum();
        assert!((k.eval_f_neg(1.0).re - direct).abs() < 1e-15);
        assert!((direct - series).abs() < 1e-15);
        assert!((direct - 0.324_027_136_831_942_7).abs() < 1e-15);
        assert!(k.taylor()[0].norm() < 1e-15);
        for t in [10.0, 20.0, 40.0] {
            assert!((k.eval_f_neg(t) * t.exp() - 1.0).norm() < 1e-6);
        }
    }

    #[test]
    fn hecke_examples() {
        let coeffs = compute_tau_coefficients(60).unwrap();
        assert_eq!(coeffs.get(2), Some(-24.0));
        let k = make_hecke_kernel(coeffs).unwrap();
        let ratio = k.eval_f_neg(3.0) / (-6.0 * PI).exp();
        assert!((ratio - 1.0).norm() < 1e-6);
        let long = make_hecke_kernel(compute_tau_coefficients(120).unwrap()).unwrap();
        let (a, b) = (k.eval_f_neg(0.5), long.eval_f_neg(0.5));
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} {b}");
        assert!(k.eval_f_neg_checked(0.5, 1e-10).is_ok());
        assert!(matches!(
            k.eval_f_neg_checked(0.01, 1e-10),
            Err(ZhlError::InsufficientCoefficients { .. })
        ));
        assert!(make_hecke_kernel(compute_tau_coefficients(20).unwrap()).is_err());
        assert_eq!(k.abscissa(), 6.5);
        assert!((k.prefactor(real(2.0)) - 4.0 * PI * PI).norm() < 1e-12);
    }

    #[test]
    fn taylor_reproduces_kernel_on_quarter_circle() {
        for k in builtins() {
            let d = k.taylor_defect(32);
            assert!(d < 1e-8, "{}: {d:e}", k.name());
        }
    }

    #[test]
    fn f_neg_branches_agree() {
        for k in builtins() {
            for t in [0.05, 0.3, 0.7, 1.3] {
                let t = t * k.radius() / 2.0;
                let a = k.eval_f_neg(t);
                let b = k.eval_f(real(-t));
                assert!((a - b).norm() <= 1e-12 * a.norm(), "{}", k.name());
            }
        }
        // both evaluation branches of the closed forms describe one function
        for k in builtins().into_iter().take(5) {
            let s = c(1e-3, 0.4);
            let lhs = k.f_neg(s);
            let rhs = k.f_neg(c(-1e-3, 0.4));
            assert!((lhs - rhs).norm() < 1e-2 * lhs.norm(), "{}", k.name());
        }
    }

    #[test]
    fn decay_is_bounded() {
        for k in builtins() {
            let vals: Vec<f64> = (1..=50)
                .map(|t| k.eval_f_neg(t as f64).norm() * (k.decay_alpha() * t as f64).exp())
                .collect();
            let max = vals.iter().cloned().fold(0.0, f64::max);
            assert!(max.is_finite() && max < 1e3, "{}: {max}", k.name());
        }
    }

    #[test]
    fn shift_terms() {
        let chi4 = make_dirichlet_kernel(DirichletCharacter::chi4()).unwrap();
        let z = c(0.3, 2.0);
        let x = 0.7;
        let expected = real_pow(x, -z) - real_pow(x + 2.0, -z);
        assert!((chi4.shift_term(z, x).unwrap() - expected).norm() < 1e-15);
        assert_eq!(chi4.shift_step(), Some(4.0));
        let hecke = make_hecke_kernel(compute_tau_coefficients(50).unwrap()).unwrap();
        assert!(hecke.shift_step().is_none());
    }

    #[test]
    fn reflected_kernel() {
        let k = make_riemann_kernel();
        let r = k.reflected().unwrap();
        assert!((r.eval_f_neg(1.3) - k.eval_f(real(1.3))).norm() < 1e-15);
        assert!((r.taylor()[0] + 1.0).norm() < 1e-15);
        assert!((r.taylor()[1] - 0.5).norm() < 1e-15);
        assert!(r.taylor_defect(32) < 1e-8);
        assert_eq!(r.decay_alpha(), 0.0);
        assert_eq!(r.reflected().unwrap().name(), "riemann");
        assert!(make_hecke_kernel(compute_tau_coefficients(50).unwrap()).unwrap().reflected().is_err());
    }

    #[test]
    fn custom_kernel_numeric_taylor() {
        let spec = CustomKernelSpec {
            name: "riemann-copy".into(),
            f_neg: Arc::new(|s: Complex64| 1.0 / exp_m1(s)),
            radius: 2.0 * PI,
            decay_alpha: 1.0,
            abscissa: 1.0,
            max_rotation: 0.0,
        };
        let k = make_custom_kernel(spec.clone()).unwrap();
        let r = make_riemann_kernel();
        for n in 0..12 {
            assert!((k.taylor()[n] - r.taylor()[n]).norm() < 1e-10, "{n}");
        }
        // a pole inside the sampling circle breaks the self-check
        let bad = CustomKernelSpec { radius: 30.0, ..spec };
        assert!(matches!(make_custom_kernel(bad), Err(ZhlError::RadiusExceeded(_))));
        assert!(kernel_taylor(&r, 41).is_err());
    }
}
