//! Evaluation of `L(f, z, x)`: the Mellin integral for `Re z > 1`, its
//! continuation to `z != 1`, and Euler-Maclaurin reference values.

mod hankel;
mod loop_integral;
mod oracle;

pub use hankel::{hankel_i, ContourSpec};
pub use oracle::{functional_equation_residual, hurwitz_em, hurwitz_zeta, oracle_l, oracle_l_with, EM_ORDER, EM_TERMS};

pub(crate) use loop_integral::ray_cut;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{check_finite, Result, ZhlError};
use crate::kernels::Kernel;
use crate::numerics::{gamma, real, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mellin,
    Hankel,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Mellin => "mellin",
            Method::Hankel => "hankel",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationResult {
    pub value: Complex64,
    pub est_error: f64,
    pub method: Method,
    /// Number of shift steps applied to bring `x` into the kernel's window.
    pub shift_steps: u32,
}

impl EvaluationResult {
    /// `mellin`, `hankel`, `oracle`, or `series-reduced+<path>` after shifts.
    pub fn tag(&self) -> String {
        if self.shift_steps > 0 {
            format!("series-reduced+{}", self.method)
        } else {
            self.method.to_string()
        }
    }
}

/// Which path `continued_l_with` must take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathChoice {
    Mellin,
    Hankel,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EngineOptions {
    pub quad: QuadratureSpec,
    pub force: Option<PathChoice>,
    /// Overrides the default loop for a forced Hankel evaluation.
    pub contour: Option<ContourSpec>,
}

const SAFETY: f64 = 10.0;
const MAX_SHIFTS: u32 = 1_000_000;

fn check_args(z: Complex64, x: f64) -> Result<()> {
    check_finite(z, "z")?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(ZhlError::Domain(format!("x must be positive, got {x}")));
    }
    Ok(())
}

/// `(c(z)/Gamma(z)) int_0^inf t^{z-1} e^{-(x-1)t} f(-t) dt` for `Re z > 1`
/// (and `Re z` beyond the kernel abscissa when it carries a prefactor).
pub fn mellin_l(kernel: &Kernel, z: Complex64, x: f64, spec: &QuadratureSpec) -> Result<EvaluationResult> {
    check_args(z, x)?;
    let min_re = if kernel.has_prefactor() { kernel.abscissa().max(1.0) } else { 1.0 };
    if !(z.re > min_re) {
        return Err(ZhlError::Domain(format!("Mellin integral needs Re z > {min_re}, got {z}")));
    }
    if !(x > kernel.x_lower_bound()) {
        return Err(ZhlError::Divergence { x, min: kernel.x_lower_bound() });
    }
    let v = loop_integral::loop_l(kernel, z, x, spec)?;
    Ok(EvaluationResult { value: v.value, est_error: SAFETY * v.error, method: Method::Mellin, shift_steps: 0 })
}

/// `L(f, z, x)` for every `z != 1`, with default options.
pub fn continued_l(kernel: &Kernel, z: Complex64, x: f64) -> Result<EvaluationResult> {
    continued_l_with(kernel, z, x, &EngineOptions::default())
}

/// `L(f, z) = L(f, z, 1)`.
pub fn l_value(kernel: &Kernel, z: Complex64) -> Result<EvaluationResult> {
    continued_l(kernel, z, 1.0)
}

/// `L(f, z, x)` for every `z != 1`.
///
/// `x` is first moved up into `[1 - alpha/2, inf)` with the kernel's shift
/// relation, the elementary terms being added exactly. Then `Re z` beyond
/// the abscissa goes to the Mellin integral and everything else to the
/// loop integral, unless `opts.force` names a path. A forced Hankel path
/// evaluates `c(z) Gamma(1-z) I(f, z, x)` on the literal loop.
pub fn continued_l_with(kernel: &Kernel, z: Complex64, x: f64, opts: &EngineOptions) -> Result<EvaluationResult> {
    check_args(z, x)?;
    if z == real(1.0) {
        return Err(ZhlError::PoleAtOne);
    }
    let lo = kernel.x_lower_bound();
    let comfort = 1.0 - kernel.decay_alpha() / 2.0;
    let mut xe = x;
    let mut steps = 0u32;
    let mut shifted = Complex64::new(0.0, 0.0);
    if let Some(delta) = kernel.shift_step() {
        while xe < comfort {
            shifted += kernel.shift_term(z, xe).expect("shift term exists with shift step");
            xe += delta;
            steps += 1;
            if steps > MAX_SHIFTS {
                return Err(ZhlError::Domain(format!("x = {x} needs too many shift steps")));
            }
        }
    } else if !(x > lo) {
        return Err(ZhlError::Divergence { x, min: lo });
    }

    let mut r = match opts.force {
        Some(PathChoice::Mellin) => mellin_l(kernel, z, xe, &opts.quad)?,
        Some(PathChoice::Hankel) => {
            let contour = match opts.contour {
                Some(c) => c,
                None => ContourSpec::for_kernel(kernel, z, xe)?,
            };
            let g = gamma(1.0 - z)?;
            let i = hankel_i(kernel, z, xe, &contour)?;
            let pre = kernel.prefactor(z) * g;
            EvaluationResult {
                value: pre * i.value,
                est_error: pre.norm() * i.est_error,
                method: Method::Hankel,
                shift_steps: 0,
            }
        }
        None => {
            let min_re = if kernel.has_prefactor() { kernel.abscissa().max(1.0) } else { 1.0 };
            if z.re > min_re {
                mellin_l(kernel, z, xe, &opts.quad)?
            } else {
                let v = loop_integral::loop_l(kernel, z, xe, &opts.quad)?;
                EvaluationResult {
                    value: v.value,
                    est_error: SAFETY * v.error,
                    method: Method::Hankel,
                    shift_steps: 0,
                }
            }
        }
    };
    r.value += shifted;
    r.est_error += SAFETY * f64::EPSILON * shifted.norm();
    r.shift_steps = steps;
    Ok(r)
}

/// `continued_l` over many `(z, x)` points in parallel; output order
/// follows input order.
pub fn continued_l_batch(kernel: &Kernel, points: &[(Complex64, f64)]) -> Vec<Result<EvaluationResult>> {
    points.par_iter().map(|&(z, x)| continued_l(kernel, z, x)).collect()
}
