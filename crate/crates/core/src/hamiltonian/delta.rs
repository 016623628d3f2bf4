//! Difference forms of the operator `Delta_f`, with `Delta_f^{-1} = f(D)`
//! and `D = d/dx`.
//!
//! When `1/f(D)` is a finite combination of unit shifts the shift form is
//! used. Otherwise `1/f(t) = -t / A(t)` is expanded and truncated to the
//! derivative orders the difference scheme supports. Every form is checked
//! against `Delta_f L(f, z, . + 1) ~ x^{-z}` before it is accepted.

use num_complex::Complex64;
use std::cell::RefCell;

use crate::engine::continued_l;
use crate::error::{Result, ZhlError};
use crate::kernels::{series, Family, Kernel};
use crate::numerics::{derivative_n, real, real_pow};

/// Highest derivative order the truncated series may use.
pub const MAX_SERIES_ORDER: u32 = 4;

const PROBE_Z: f64 = 2.5;
const PROBE_X: [f64; 7] = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
const PROBE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum DeltaForm {
    /// `sum_j c_j psi(x + s_j)`.
    Shifts(Vec<(Complex64, f64)>),
    /// `sum_k c_k psi^{(k)}(x)`, the truncation `s_N` with `N` terms.
    Series(Vec<(u32, Complex64)>),
}

impl DeltaForm {
    /// Number of retained series terms; zero for shift forms.
    pub fn truncation(&self) -> usize {
        match self {
            DeltaForm::Shifts(_) => 0,
            DeltaForm::Series(terms) => terms.len(),
        }
    }

    pub fn apply<P>(&self, psi: P, x: f64) -> Result<Complex64>
    where
        P: Fn(f64) -> Result<Complex64>,
    {
        match self {
            DeltaForm::Shifts(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, s) in terms {
                    let y = x + s;
                    if !(y > 0.0 && y.is_finite()) {
                        return Err(ZhlError::Domain(format!("shifted point {y} leaves (0, inf)")));
                    }
                    acc += c * psi(y)?;
                }
                Ok(acc)
            }
            DeltaForm::Series(terms) => {
                let failure = RefCell::new(None);
                let g = |t: f64| match psi(t) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        Complex64::new(f64::NAN, f64::NAN)
                    }
                };
                let mut acc = Complex64::new(0.0, 0.0);
                for (order, c) in terms {
                    let d = if *order == 0 { g(x) } else { derivative_n(&g, x, *order)? };
                    acc += c * d;
                }
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                Ok(acc)
            }
        }
    }
}

/// Laurent coefficients of `(1 - q^m) / sum_r chi(r) q^{r-1}` when the
/// division is exact.
fn dirichlet_shifts(values: &[Complex64]) -> Option<Vec<(Complex64, f64)>> {
    let m = values.len();
    // denominator Q(q) = sum_{r=1}^m chi(r) q^{r-1}; chi(m mod m) = chi(0)
    let mut den: Vec<Complex64> = (1..=m).map(|r| values[r % m]).collect();
    while den.len() > 1 && den.last().map_or(false, |c| c.norm() < 1e-14) {
        den.pop();
    }
    let mut num = vec![Complex64::new(0.0, 0.0); m + 1];
    num[0] = real(1.0);
    num[m] = real(-1.0);
    let dd = den.len() - 1;
    let lead = *den.last()?;
    let mut quot = vec![Complex64::new(0.0, 0.0); m + 1 - dd];
    for i in (0..quot.len()).rev() {
        let c = num[i + dd] / lead;
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= c * d;
        }
    }
    if num.iter().any(|r| r.norm() > 1e-12) {
        return None;
    }
    Some(
        quot.iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 1e-14)
            .map(|(j, c)| (*c, j as f64 - 1.0))
            .collect(),
    )
}

/// `1/f(t) = -t^{1-v} / A_v(t)` truncated to orders `0..=MAX_SERIES_ORDER`.
fn series_form(a: &[Complex64]) -> Option<Vec<(u32, Complex64)>> {
    let sup = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let v = a.iter().position(|c| c.norm() > 1e-14 * sup)?;
    if v > 1 {
        return None;
    }
    let len = MAX_SERIES_ORDER as usize + 1;
    let mut one = vec![Complex64::new(0.0, 0.0); len];
    one[0] = real(1.0);
    let b = series::div(&one, &a[v..], len);
    let shift = 1 - v;
    Some(
        b.iter()
            .enumerate()
            .filter(|(k, _)| k + shift <= MAX_SERIES_ORDER as usize)
            .map(|(k, c)| ((k + shift) as u32, -c))
            .filter(|(_, c)| c.norm() > 0.0)
            .collect(),
    )
}

fn candidate(kernel: &Kernel) -> Result<DeltaForm> {
    let shifts = match kernel.family() {
        Family::Riemann => Some(vec![(real(1.0), 0.0), (real(-1.0), -1.0)]),
        Family::Lambda => Some(vec![(real(1.0), 1.0), (real(-1.0), -1.0)]),
        Family::Dirichlet(chi) => dirichlet_shifts(chi.values()),
        _ => None,
    };
    if let Some(s) = shifts {
        return Ok(DeltaForm::Shifts(s));
    }
    series_form(kernel.taylor()).map(DeltaForm::Series).ok_or_else(|| {
        ZhlError::NonValidatedForm(kernel.name().to_string(), "Taylor data vanishes to second order".into())
    })
}

/// `Delta_f` for one kernel, accepted only after the probe check.
#[derive(Debug, Clone)]
pub struct DeltaOperator {
    pub form: DeltaForm,
    /// Relative spread of `Delta_f L(f, 2.5, . + 1) x^{2.5}` on the probe grid.
    pub probe_spread: f64,
}

impl DeltaOperator {
    pub fn register(kernel: &Kernel) -> Result<Self> {
        let form = candidate(kernel)?;
        let z = real(PROBE_Z);
        let psi = |y: f64| continued_l(kernel, z, y + 1.0).map(|r| r.value);
        let q = PROBE_X
            .iter()
            .map(|&x| Ok(form.apply(psi, x)? * real_pow(x, z)))
            .collect::<Result<Vec<_>>>()?;
        let spread = super::relative_spread(&q).1;
        if !(spread < PROBE_TOL) {
            return Err(ZhlError::NonValidatedForm(
                kernel.name().to_string(),
                format!("probe spread {spread:e} exceeds {PROBE_TOL:e}"),
            ));
        }
        Ok(Self { form, probe_spread: spread })
    }

    pub fn apply<P>(&self, psi: P, x: f64) -> Result<Complex64>
    where
        P: Fn(f64) -> Result<Complex64>,
    {
        self.form.apply(psi, x)
    }
}
