//! Eigenstates `Psi(f, z, x) = C(z) L(f, z, x + 1)` of the Hamiltonian built
//! from `Delta_f` and the dilation generator, and numerical checks of the
//! relations they satisfy.

mod asymptotic;
mod delta;

pub use asymptotic::{asymptotic_remainder, delta_inv_asymptotic, remainder_orders, truncation_check};
pub use delta::{DeltaForm, DeltaOperator, MAX_SERIES_ORDER};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::engine::continued_l;
use crate::error::{check_finite, Result, ZhlError};
use crate::kernels::Kernel;
use crate::numerics::{derivative, real_pow, GridSpec, I};

/// Convention for the constant `C(z)` in front of `L(f, z, x + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `e^{i pi (z - 1)}`
    #[default]
    Principal,
    /// `e^{-i pi (z - 1)}`
    Conjugate,
    /// `-1`
    Bbm,
    /// `+1`
    Unit,
}

impl Branch {
    pub fn constant(self, z: Complex64) -> Complex64 {
        match self {
            Branch::Principal => (I * PI * (z - 1.0)).exp(),
            Branch::Conjugate => (-I * PI * (z - 1.0)).exp(),
            Branch::Bbm => Complex64::new(-1.0, 0.0),
            Branch::Unit => Complex64::new(1.0, 0.0),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Principal => "principal",
            Branch::Conjugate => "conjugate",
            Branch::Bbm => "bbm",
            Branch::Unit => "unit",
        })
    }
}

impl FromStr for Branch {
    type Err = ZhlError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "principal" => Ok(Branch::Principal),
            "conjugate" => Ok(Branch::Conjugate),
            "bbm" => Ok(Branch::Bbm),
            "unit" => Ok(Branch::Unit),
            other => Err(ZhlError::InvalidParameter(format!("unknown branch {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub kernel: Kernel,
    pub z: Complex64,
    pub branch: Branch,
    pub constant: Complex64,
}

impl Eigenstate {
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.constant * continued_l(&self.kernel, self.z, x + 1.0)?.value)
    }
}

pub fn make_eigenstate(kernel: &Kernel, z: Complex64, branch: Branch) -> Result<Eigenstate> {
    check_finite(z, "z")?;
    if z == Complex64::new(1.0, 0.0) {
        return Err(ZhlError::PoleAtOne);
    }
    Ok(Eigenstate { kernel: kernel.clone(), z, branch, constant: branch.constant(z) })
}

/// Applies the kernel's registered `Delta_f` to `psi` at `x`.
pub fn delta_apply<P>(kernel: &Kernel, psi: P, x: f64) -> Result<Complex64>
where
    P: Fn(f64) -> Result<Complex64>,
{
    DeltaOperator::register(kernel)?.apply(psi, x)
}

/// Mean of `q` and `max |q - mean| / |mean|`.
pub(crate) fn relative_spread(q: &[Complex64]) -> (Complex64, f64) {
    let mean = q.iter().sum::<Complex64>() / q.len() as f64;
    let dev = q.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    (mean, dev / mean.norm())
}

/// `-i (2 x phi' + phi) - i (2z - 1) phi`, the dilation generator minus its
/// eigenvalue applied to `phi` at `x`.
pub fn dilation_residual<G>(phi: G, z: Complex64, x: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    let d = derivative(&phi, x, 1, 1.0)?;
    let p = phi(x);
    Ok(-I * (2.0 * x * d + p) - I * (2.0 * z - 1.0) * p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub kernel: String,
    pub z: [f64; 2],
    pub branch: Branch,
    pub grid: GridSpec,
    /// Absent for a pure proportionality check.
    pub residual_sup: Option<f64>,
    /// `sup |Delta_f Psi|` over the grid.
    pub phi_sup: f64,
    pub prop_const: [f64; 2],
    pub prop_spread: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

impl OperatorReport {
    pub fn relative_residual(&self) -> Option<f64> {
        self.residual_sup.map(|r| r / self.phi_sup)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn check_state(kernel: &Kernel, state: &Eigenstate, grid: &GridSpec) -> Result<DeltaOperator> {
    grid.validate()?;
    if kernel.name() != state.kernel.name() {
        return Err(ZhlError::InvalidParameter(format!(
            "state built on {} checked against {}",
            state.kernel.name(),
            kernel.name()
        )));
    }
    DeltaOperator::register(kernel)
}

fn report(kernel: &Kernel, state: &Eigenstate, grid: &GridSpec, op: &DeltaOperator, phi: &[Complex64], residual: Option<f64>) -> OperatorReport {
    let q: Vec<Complex64> = grid.points().iter().zip(phi).map(|(&x, p)| p * real_pow(x, state.z)).collect();
    let (mean, spread) = relative_spread(&q);
    OperatorReport {
        kernel: kernel.name().to_string(),
        z: [state.z.re, state.z.im],
        branch: state.branch,
        grid: *grid,
        residual_sup: residual,
        phi_sup: phi.iter().map(|p| p.norm()).fold(0.0, f64::max),
        prop_const: [mean.re, mean.im],
        prop_spread: spread,
        n: op.form.truncation(),
    }
}

/// `q(x) = Delta_f Psi(x) x^z` on the grid: its mean and relative spread.
pub fn proportionality_check(kernel: &Kernel, state: &Eigenstate, grid: &GridSpec) -> Result<OperatorReport> {
    let op = check_state(kernel, state, grid)?;
    let phi = grid
        .points()
        .par_iter()
        .map(|&x| op.apply(|y| state.eval(y), x))
        .collect::<Result<Vec<_>>>()?;
    Ok(report(kernel, state, grid, &op, &phi, None))
}

/// `sup |(xp + px) phi - i (2z - 1) phi|` over the grid with
/// `phi = Delta_f Psi`, together with the proportionality data of `phi`.
pub fn eigen_residual(kernel: &Kernel, state: &Eigenstate, grid: &GridSpec) -> Result<OperatorReport> {
    let op = check_state(kernel, state, grid)?;
    let rows = grid
        .points()
        .par_iter()
        .map(|&x| {
            let failure = std::sync::Mutex::new(None);
            let phi = |t: f64| match op.apply(|y| state.eval(y), t) {
                Ok(v) => v,
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    Complex64::new(f64::NAN, f64::NAN)
                }
            };
            let r = dilation_residual(&phi, state.z, x)?;
            let p = phi(x);
            if let Some(e) = failure.into_inner().expect("poisoned") {
                return Err(e);
            }
            Ok((p, r.norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi: Vec<Complex64> = rows.iter().map(|r| r.0).collect();
    let sup = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(report(kernel, state, grid, &op, &phi, Some(sup)))
}
