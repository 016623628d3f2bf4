use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite_real, Result, ZhlError};

/// Uniform grid on `[x_min, x_max]` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "min")]
    pub x_min: f64,
    #[serde(rename = "max")]
    pub x_max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, count: usize) -> Result<Self> {
        let g = Self { x_min, x_max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0 && self.x_min < self.x_max && self.x_max.is_finite()) || self.count < 2 {
            return Err(ZhlError::InvalidParameter(format!("bad grid {self:?}")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.x_max - self.x_min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.x_max } else { self.x_min + i as f64 * step })
            .collect()
    }
}

fn central4<G: Fn(f64) -> Complex64>(g: &G, x: f64, h: f64) -> Complex64 {
    (8.0 * (g(x + h) - g(x - h)) - (g(x + 2.0 * h) - g(x - 2.0 * h))) / (12.0 * h)
}

/// First derivative by the fourth-order central difference with two levels
/// of Richardson extrapolation; base step `scale * max(|x|, 1) * 1e-5`.
pub fn derivative<G>(g: G, x: f64, order: u32, scale: f64) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    check_finite_real(x, "x")?;
    if order != 1 {
        return Err(ZhlError::InvalidParameter(format!("derivative order {order} unsupported")));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(ZhlError::InvalidParameter("scale must be positive".into()));
    }
    let h = scale * x.abs().max(1.0) * 1e-5;
    if x + 0.25 * h == x {
        return Err(ZhlError::StepUnderflow(x));
    }
    let d1 = central4(&g, x, h);
    let d2 = central4(&g, x, 0.5 * h);
    let d3 = central4(&g, x, 0.25 * h);
    let r1 = (16.0 * d2 - d1) / 15.0;
    let r2 = (16.0 * d3 - d2) / 15.0;
    Ok((64.0 * r2 - r1) / 63.0)
}

/// Derivatives of order 1..=4 from central stencils of second order,
/// Richardson-extrapolated once. Much less accurate than [`derivative`];
/// used only by the truncated differential form of the operator.
pub fn derivative_n<G>(g: G, x: f64, order: u32) -> Result<Complex64>
where
    G: Fn(f64) -> Complex64,
{
    check_finite_real(x, "x")?;
    let stencil = |h: f64| -> Complex64 {
        match order {
            1 => (g(x + h) - g(x - h)) / (2.0 * h),
            2 => (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h),
            3 => (g(x + 2.0 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) - g(x - 2.0 * h)) / (2.0 * h * h * h),
            _ => (g(x + 2.0 * h) - 4.0 * g(x + h) + 6.0 * g(x) - 4.0 * g(x - h) + g(x - 2.0 * h)) / (h * h * h * h),
        }
    };
    if !(1..=4).contains(&order) {
        return Err(ZhlError::InvalidParameter(format!("derivative order {order} unsupported")));
    }
    let h = x.abs().max(1.0) * 10f64.powf(-3.0 / (order as f64 + 1.0).sqrt());
    if x + 0.5 * h == x {
        return Err(ZhlError::StepUnderflow(x));
    }
    Ok((4.0 * stencil(0.5 * h) - stencil(h)) / 3.0)
}
