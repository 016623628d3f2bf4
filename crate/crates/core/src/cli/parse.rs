use num_complex::Complex64;
use std::path::Path;

use crate::error::{Result, ZhlError};
use crate::kernels::{
    compute_tau_coefficients, make_dirichlet_kernel, make_hecke_kernel, make_lambda_kernel, make_riemann_kernel,
    DirichletCharacter, Kernel,
};
use crate::numerics::GridSpec;

fn number(s: &str, whole: &str) -> Result<f64> {
    let v = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => s.parse::<f64>().map_err(|_| bad(whole))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(whole))
    }
}

fn bad(s: &str) -> ZhlError {
    ZhlError::InvalidParameter(format!("cannot read {s:?} as a complex number (expected a+bi)"))
}

/// Reads `a`, `bi`, `a+bi` or `a-bi`, spaces allowed anywhere.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(s));
    }
    let Some(body) = t.strip_suffix('i') else {
        if t.ends_with(|c: char| c.is_ascii_digit() || c == '.') {
            return Ok(Complex64::new(number(&t, s)?, 0.0));
        }
        return Err(bad(s));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let (re, im) = body.split_at(k);
            if re.is_empty() || re == "+" || re == "-" {
                return Err(bad(s));
            }
            Ok(Complex64::new(number(re, s)?, number(im, s)?))
        }
        None => Ok(Complex64::new(0.0, number(body, s)?)),
    }
}

/// `min:max:count`.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let err = || ZhlError::InvalidParameter(format!("grid {s:?} is not min:max:count"));
    if parts.len() != 3 {
        return Err(err());
    }
    let min = parts[0].parse::<f64>().map_err(|_| err())?;
    let max = parts[1].parse::<f64>().map_err(|_| err())?;
    let count = parts[2].parse::<usize>().map_err(|_| err())?;
    GridSpec::new(min, max, count)
}

/// Built-in kernel by name; `dirichlet` reads its table from `character`.
pub fn resolve_kernel(name: &str, character: Option<&Path>, tau_count: usize) -> Result<Kernel> {
    match name.to_ascii_lowercase().as_str() {
        "riemann" | "zeta" => Ok(make_riemann_kernel()),
        "lambda" => Ok(make_lambda_kernel()),
        "chi4" => make_dirichlet_kernel(DirichletCharacter::chi4()),
        "chi3" => make_dirichlet_kernel(DirichletCharacter::chi3()),
        "dirichlet" => {
            let path = character.ok_or_else(|| {
                ZhlError::InvalidParameter("kernel dirichlet needs --character <table.json>".into())
            })?;
            make_dirichlet_kernel(DirichletCharacter::from_json_file(path)?)
        }
        "hecke" | "delta" => make_hecke_kernel(compute_tau_coefficients(tau_count)?),
        other => Err(ZhlError::InvalidParameter(format!(
            "unknown kernel {other:?} (riemann, lambda, chi4, chi3, dirichlet, hecke)"
        ))),
    }
}
