//! Zeros on the critical line from sign changes of the real function
//! `Z(t) = e^{i theta(t)} L(1/2 + it)`, with `L` taken from the
//! Euler-Maclaurin oracle rather than the integral engine.
//!
//! For a real primitive character `chi` mod `m` of parity `a`, the completed
//! function `(m/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)` is real on the line,
//! so `theta(t) = Im log Gamma((1/2 + a + it)/2) + (t/2) ln(m/pi)`. The
//! Riemann kernel is the case `m = 1`, `a = 0`.

use num_complex::Complex64;

use super::{ScanWindow, ZeroMethod, ZeroRecord};
use crate::engine::oracle_l;
use crate::error::{Result, ZhlError};
use crate::kernels::{DirichletCharacter, Family, Kernel};
use crate::numerics::{c, log_gamma};

struct Completion {
    modulus: f64,
    parity: f64,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether a real character is induced by none of its proper divisors.
fn is_primitive(chi: &DirichletCharacter) -> bool {
    let m = chi.modulus();
    (1..m).filter(|d| m % d == 0).all(|d| {
        (1..m).any(|a| gcd(a, m) == 1 && a % d == 1 % d && (chi.at(a as i64) - 1.0).norm() > 1e-12)
    })
}

fn completion(kernel: &Kernel) -> Result<Completion> {
    match kernel.family() {
        Family::Riemann => Ok(Completion { modulus: 1.0, parity: 0.0 }),
        Family::Dirichlet(chi) => {
            if chi.values().iter().any(|v| v.im.abs() > 1e-12) || !is_primitive(chi) {
                return Err(ZhlError::NoOracle(format!("{} is not a real primitive character", kernel.name())));
            }
            let odd = chi.at(-1).re < 0.0;
            Ok(Completion { modulus: chi.modulus() as f64, parity: if odd { 1.0 } else { 0.0 } })
        }
        _ => Err(ZhlError::NoOracle(kernel.name().to_string())),
    }
}

fn hardy_z(kernel: &Kernel, comp: &Completion, t: f64) -> Result<f64> {
    let s = c(0.5, t);
    let theta = log_gamma(c((0.5 + comp.parity) / 2.0, t / 2.0))?.im + 0.5 * t * (comp.modulus / std::f64::consts::PI).ln();
    let v = Complex64::from_polar(1.0, theta) * oracle_l(kernel, s, 1.0)?;
    Ok(v.re)
}

/// Real-valued `Z(t)` along the critical line for kernels with a real
/// completed function.
pub fn hardy_z_function(kernel: &Kernel, t: f64) -> Result<f64> {
    hardy_z(kernel, &completion(kernel)?, t)
}

/// Sign changes of `Z` on the window grid, bisected to `1e-12` in `t`.
pub fn bisection_zeros(kernel: &Kernel, window: &ScanWindow) -> Result<Vec<ZeroRecord>> {
    window.validate()?;
    let comp = completion(kernel)?;
    let ts = window.points();
    let zs = ts.iter().map(|&t| hardy_z(kernel, &comp, t)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..ts.len() - 1 {
        if zs[i] == 0.0 || zs[i].signum() == zs[i + 1].signum() {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (ts[i], ts[i + 1], zs[i]);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let fm = hardy_z(kernel, &comp, mid)?;
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        let z = c(0.5, 0.5 * (lo + hi));
        let residual = oracle_l(kernel, z, 1.0)?.norm();
        out.push(ZeroRecord::new(kernel.name(), z, residual, ZeroMethod::BisectionOracle, 0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_dirichlet_kernel, make_lambda_kernel, make_riemann_kernel};

    #[test]
    fn z_is_real_multiple_of_l() {
        let k = make_riemann_kernel();
        let t = 17.3;
        let z = hardy_z_function(&k, t).unwrap();
        assert!((z.abs() - oracle_l(&k, c(0.5, t), 1.0).unwrap().norm()).abs() < 1e-12);
    }

    #[test]
    fn riemann_and_chi4_zeros() {
        let k = make_riemann_kernel();
        let w = ScanWindow::new(10.0, 30.0, 0.05, 0.5).unwrap();
        let t: Vec<f64> = bisection_zeros(&k, &w).unwrap().iter().map(|r| r.z.im).collect();
        let known = [14.134_725_141_734_693, 21.022_039_638_771_555, 25.010_857_580_145_689];
        assert_eq!(t.len(), 3);
        for (a, b) in t.iter().zip(known) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        let k = make_dirichlet_kernel(DirichletCharacter::chi4()).unwrap();
        let w = ScanWindow::new(1.0, 7.0, 0.05, 0.5).unwrap();
        let r = bisection_zeros(&k, &w).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].z.im - 6.020_948_904_697_597).abs() < 1e-9);
    }

    #[test]
    fn unsupported_kernels() {
        assert!(hardy_z_function(&make_lambda_kernel(), 10.0).is_err());
        let p3 = make_dirichlet_kernel(DirichletCharacter::principal(3).unwrap()).unwrap();
        assert!(hardy_z_function(&p3, 10.0).is_err());
        assert!(is_primitive(&DirichletCharacter::chi3()));
    }
}
