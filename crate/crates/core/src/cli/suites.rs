use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{
    continued_l_with, functional_equation_residual, oracle_l_with, ContourSpec, EngineOptions, PathChoice,
};
use crate::error::Result;
use crate::hamiltonian::{eigen_residual, make_eigenstate, truncation_check, Branch, OperatorReport};
use crate::kernels::Kernel;
use crate::numerics::{c, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Gamma(1-z) times the literal loop integral against the Mellin integral
    Prop21,
    /// Eigen-relation of Delta_f Psi under the dilation generator
    Eigen,
    /// Truncation error of the large-x series on x = 10, 20, 40
    Asymptotic,
    /// Functional equation of the Riemann zeta function
    Functional,
    /// Engine against the Euler-Maclaurin reference
    Oracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub suite: Suite,
    pub case: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<OperatorReport>,
}

pub struct SuiteConfig<'a> {
    pub kernel: &'a Kernel,
    pub zs: Option<Vec<Complex64>>,
    pub grid: GridSpec,
    pub opts: EngineOptions,
    pub hankel_eps: Option<f64>,
    pub em_terms: Option<usize>,
}

fn show(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn case(suite: Suite, name: String, residual: f64, tol: f64) -> CaseResult {
    CaseResult { suite, case: name, residual, tol, pass: residual < tol, report: None }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CaseResult>> {
    let zs = |default: &[(f64, f64)]| -> Vec<Complex64> {
        cfg.zs.clone().unwrap_or_else(|| default.iter().map(|&(a, b)| c(a, b)).collect())
    };
    let k = cfg.kernel;
    let mut out = Vec::new();
    match suite {
        Suite::Prop21 => {
            for z in zs(&[(1.5, 2.0), (2.2, -4.0), (1.2, 0.5), (2.9, 9.0), (1.7, -7.5)]) {
                for x in [1.0, 1.4] {
                    let mellin = continued_l_with(k, z, x, &EngineOptions { force: Some(PathChoice::Mellin), ..cfg.opts })?;
                    let contour = match cfg.hankel_eps {
                        Some(eps) => Some(ContourSpec { epsilon: eps, ..ContourSpec::for_kernel(k, z, x)? }),
                        None => None,
                    };
                    let hankel = continued_l_with(
                        k,
                        z,
                        x,
                        &EngineOptions { force: Some(PathChoice::Hankel), contour, ..cfg.opts },
                    )?;
                    let r = (hankel.value - mellin.value).norm() / mellin.value.norm();
                    out.push(case(suite, format!("z={} x={x}", show(z)), r, 1e-7));
                }
            }
        }
        Suite::Eigen => {
            for z in zs(&[(2.3, 1.1), (0.5, 14.134725)]) {
                let state = make_eigenstate(k, z, Branch::Principal)?;
                let rep = eigen_residual(k, &state, &cfg.grid)?;
                let r = rep.relative_residual().unwrap_or(f64::INFINITY);
                let mut res = case(suite, format!("z={}", show(z)), r, 1e-5);
                res.report = Some(rep);
                out.push(res);
            }
        }
        Suite::Asymptotic => {
            for z in zs(&[(2.5, 0.0)]) {
                let t = [10.0, 20.0, 40.0]
                    .iter()
                    .map(|&x| truncation_check(k, z, x, 4))
                    .collect::<Result<Vec<_>>>()?;
                // growth factor of |S_N - L| x^N along the ladder; bounded means <= 1
                let growth = t.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
                out.push(case(suite, format!("z={} N=4 x=10,20,40", show(z)), growth, 1.0 + 1e-9));
            }
        }
        Suite::Functional => {
            let default: Vec<(f64, f64)> = (0..20)
                .map(|j| {
                    let j = j as f64;
                    (-3.7 + 0.21 * j, if j as usize % 2 == 0 { 1.0 + 1.5 * j } else { -0.5 - 1.3 * j })
                })
                .collect();
            for z in zs(&default) {
                let r = functional_equation_residual(z)?;
                out.push(case(suite, format!("z={}", show(z)), r, 1e-10));
            }
        }
        Suite::Oracle => {
            let default = [(-1.0, 0.0), (0.0, 0.0), (-2.5, 7.0), (0.5, 14.1), (3.3, -20.0), (-0.7, -29.0), (2.0, 0.0)];
            for z in zs(&default) {
                let v = continued_l_with(k, z, 1.0, &cfg.opts)?.value;
                let o = oracle_l_with(k, z, 1.0, cfg.em_terms)?;
                let r = (v - o).norm() / o.norm();
                out.push(case(suite, format!("z={}", show(z)), r, 1e-7));
            }
        }
    }
    Ok(out)
}
