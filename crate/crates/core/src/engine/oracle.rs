//! Euler-Maclaurin evaluation of the Hurwitz zeta function and the closed
//! form reductions of the built-in kernels to it.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{check_finite, Result, ZhlError};
use crate::kernels::{Family, Kernel};
use crate::numerics::dd::{Cdd, Dd};
use crate::numerics::{gamma, real, real_pow, sin_pi};

// B_2, B_4, ..., B_24
const BERNOULLI_EVEN: [f64; 12] = [
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
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

// the same values as exact numerator, denominator pairs
const BERNOULLI_EVEN_RATIO: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

pub const EM_TERMS: usize = 40;
pub const EM_ORDER: usize = 12;

/// `zeta(z, x) = sum_{k >= 0} (x + k)^{-z}` by Euler-Maclaurin summation with
/// `terms` explicit terms and `correction_order` Bernoulli corrections.
pub fn hurwitz_em(z: Complex64, x: f64, terms: usize, correction_order: usize) -> Result<Complex64> {
    check_finite(z, "z")?;
    if z == real(1.0) {
        return Err(ZhlError::PoleAtOne);
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(ZhlError::Domain(format!("hurwitz zeta needs x > 0, got {x}")));
    }
    if correction_order > BERNOULLI_EVEN.len() {
        return Err(ZhlError::InvalidParameter(format!(
            "correction order {correction_order} exceeds {}",
            BERNOULLI_EVEN.len()
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..terms {
        sum += real_pow(x + k as f64, -z);
    }
    let a = x + terms as f64;
    sum += real_pow(a, 1.0 - z) / (z - 1.0) + 0.5 * real_pow(a, -z);
    // B_{2j}/(2j)! * z (z+1) ... (z+2j-2) * a^{-z-2j+1}
    let mut rising = z;
    let mut fact = 2.0;
    let a_pow = real_pow(a, -z - 1.0);
    let inv_a2 = 1.0 / (a * a);
    let mut p = a_pow;
    for (j, b) in BERNOULLI_EVEN.iter().take(correction_order).enumerate() {
        sum += b / fact * rising * p;
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (z + k - 1.0) * (z + k);
        fact *= (k + 1.0) * (k + 2.0);
        p *= inv_a2;
    }
    Ok(sum)
}

/// [`hurwitz_em`] carried out in double-double arithmetic, so the
/// cancellation between the explicit sum and the tail at `Re z < 0` costs
/// nothing visible in the rounded result.
pub(crate) fn hurwitz_em_dd(z: Complex64, x: f64, terms: usize) -> Complex64 {
    let minus_z = Cdd::new(-z);
    let mut sum = Cdd::default();
    for k in 0..terms {
        sum = sum + Cdd::real_pow(Dd::sum(x, k as f64), minus_z);
    }
    let a = Dd::sum(x, terms as f64);
    let a_pow = Cdd::real_pow(a, minus_z);
    sum = sum + a_pow.scale(a) * Cdd::shifted(z, -1.0).inv() + a_pow.scale(Dd::new(0.5));
    let inv_a2 = Dd::new(1.0) / (a * a);
    let mut p = a_pow.scale(Dd::new(1.0) / a);
    let mut rising = Cdd::new(z);
    let mut fact = Dd::new(2.0);
    for (j, &(num, den)) in BERNOULLI_EVEN_RATIO.iter().enumerate() {
        let coef = Dd::new(num) / (Dd::new(den) * fact);
        sum = sum + (rising * p).scale(coef);
        let k = 2.0 * (j as f64 + 1.0);
        rising = rising * Cdd::shifted(z, k - 1.0) * Cdd::shifted(z, k);
        fact = fact * Dd::new((k + 1.0) * (k + 2.0));
        p = p.scale(inv_a2);
    }
    sum.to_c64()
}

// |B_26| / 26!
const NEXT_BERNOULLI_OVER_FACT: f64 = 8_553_103.0 / 6.0 / 4.032_914_611_266_056_4e26;

/// Size of the first omitted correction of `hurwitz_em(z, x, terms, EM_ORDER)`.
fn em_remainder(z: Complex64, a: f64) -> f64 {
    let mut rising = 1.0;
    for j in 0..(2 * EM_ORDER + 1) {
        rising *= (z + j as f64).norm();
    }
    NEXT_BERNOULLI_OVER_FACT * rising * a.powf(-z.re - (2 * EM_ORDER + 1) as f64)
}

/// `zeta(z, x)` with the number of explicit terms chosen per argument: the
/// fewest for which the first omitted correction is below `1e-16 |zeta|`.
/// Fewer terms mean less cancellation between the partial sum and the
/// tail when `Re z < 0`.
pub fn hurwitz_zeta(z: Complex64, x: f64) -> Result<Complex64> {
    let start = (2.0 - x).max(0.0).ceil() as usize;
    let mut chosen = start + 399;
    for n in start..start + 400 {
        let v = hurwitz_em(z, x, n, EM_ORDER)?;
        if em_remainder(z, x + n as f64) <= 1e-16 * v.norm() {
            chosen = n;
            break;
        }
    }
    Ok(hurwitz_em_dd(z, x, chosen))
}

fn zeta_em(z: Complex64, x: f64) -> Result<Complex64> {
    hurwitz_zeta(z, x)
}

/// Independent evaluation of `L(f, z, x)` through Hurwitz zeta values.
pub fn oracle_l(kernel: &Kernel, z: Complex64, x: f64) -> Result<Complex64> {
    oracle_l_with(kernel, z, x, None)
}

/// [`oracle_l`] with every Hurwitz value taken from a fixed number of
/// explicit Euler-Maclaurin terms instead of the adaptive choice.
pub fn oracle_l_with(kernel: &Kernel, z: Complex64, x: f64, terms: Option<usize>) -> Result<Complex64> {
    let zeta_em = |z: Complex64, x: f64| match terms {
        Some(n) => hurwitz_em(z, x, n, EM_ORDER),
        None => hurwitz_zeta(z, x),
    };
    match kernel.family() {
        Family::Riemann => zeta_em(z, x),
        Family::Lambda => Ok(real_pow(2.0, -z) * zeta_em(z, x / 2.0)?),
        Family::Dirichlet(chi) => {
            let m = chi.modulus() as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 1..=chi.modulus() {
                let v = chi.at(r as i64);
                if v.norm() != 0.0 {
                    acc += v * zeta_em(z, (x - 1.0 + r as f64) / m)?;
                }
            }
            Ok(real_pow(m, -z) * acc)
        }
        Family::Reflected(base) => match base.family() {
            Family::Riemann => Ok(-zeta_em(z, x - 1.0)?),
            Family::Lambda => Ok(-oracle_l_with(base, z, x, terms)?),
            Family::Dirichlet(chi) => {
                // -sum_{n >= 0} chi(-n) (n + x - 1)^{-z}
                let m = chi.modulus() as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..chi.modulus() {
                    let v = chi.at(-(r as i64));
                    if v.norm() != 0.0 {
                        acc += v * zeta_em(z, (x - 1.0 + r as f64) / m)?;
                    }
                }
                Ok(-real_pow(m, -z) * acc)
            }
            _ => Err(ZhlError::NoOracle(kernel.name().to_string())),
        },
        Family::Hecke(_) | Family::Custom(_) => Err(ZhlError::NoOracle(kernel.name().to_string())),
    }
}

/// Relative residual of `zeta(z) = 2 (2 pi)^{z-1} Gamma(1-z) sin(pi z / 2) zeta(1-z)`,
/// both zeta values from the Euler-Maclaurin oracle.
pub fn functional_equation_residual(z: Complex64) -> Result<f64> {
    check_finite(z, "z")?;
    if !(z.re < 1.0) {
        return Err(ZhlError::Domain(format!("functional equation check needs Re z < 1, got {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() && (z.re as i64) % 2 == 0 {
        return Err(ZhlError::Domain(format!("z = {} is a trivial zero", z.re)));
    }
    let lhs = zeta_em(z, 1.0)?;
    let rhs = 2.0 * real_pow(2.0 * PI, z - 1.0) * gamma(1.0 - z)? * sin_pi(z / 2.0) * zeta_em(1.0 - z, 1.0)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}
