//! Double-double arithmetic: an unevaluated sum `hi + lo` carrying about
//! 32 significant digits, with just enough elementary functions for
//! `b^w = exp(w ln b)`.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
const FRAC_PI_2: Dd = Dd { hi: 1.570_796_326_794_896_6, lo: 6.123_233_995_736_766e-17 };

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact `a + b`.
    pub fn sum(a: f64, b: f64) -> Self {
        two_sum(a, b)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn scale2(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::new(0.0);
        }
        let n = (self.hi / LN2.hi).round();
        let r = (self - LN2 * Dd::new(n)).scale2(-10);
        // Taylor series of e^r - 1, |r| < 4e-4
        let mut term = r;
        let mut acc = r;
        for k in 2..=11 {
            term = term * r / Dd::new(k as f64);
            acc = acc + term;
        }
        // (1 + acc)^{1024} through e^{2r} - 1 = (e^r - 1)(e^r - 1 + 2)
        for _ in 0..10 {
            acc = acc * (acc + Dd::new(2.0));
        }
        (acc + Dd::new(1.0)).scale2(n as i32)
    }

    /// Natural log of a positive value: one Newton step on `exp`.
    pub fn ln(self) -> Self {
        let y = Dd::new(self.hi.ln());
        y + self * (-y).exp() - Dd::new(1.0)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let n = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2 * Dd::new(n);
        let r2 = r * r;
        let mut s = r;
        let mut c = Dd::new(1.0);
        let mut ts = r;
        let mut tc = Dd::new(1.0);
        for k in 1..=14 {
            let k = k as f64;
            ts = -(ts * r2) / Dd::new((2.0 * k) * (2.0 * k + 1.0));
            tc = -(tc * r2) / Dd::new((2.0 * k - 1.0) * (2.0 * k));
            s = s + ts;
            c = c + tc;
        }
        match (n as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let s = two_sum(self.hi, b.hi);
        let t = two_sum(self.lo, b.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let p = self.hi * b.hi;
        let e = self.hi.mul_add(b.hi, -p);
        quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        quick_two_sum(q1, q2) + Dd::new(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(z: Complex64) -> Self {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    /// `z + k` without rounding the real part.
    pub fn shifted(z: Complex64, k: f64) -> Self {
        Cdd { re: Dd::sum(z.re, k), im: Dd::new(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, s: Dd) -> Self {
        Cdd { re: self.re * s, im: self.im * s }
    }

    pub fn inv(self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        Cdd { re: self.re / d, im: -(self.im / d) }
    }

    /// `b^w` for real `b > 0`.
    pub fn real_pow(b: Dd, w: Cdd) -> Self {
        let l = b.ln();
        let m = (w.re * l).exp();
        let (s, c) = (w.im * l).sin_cos();
        Cdd { re: m * c, im: m * s }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, hi: f64, lo: f64, tol: f64) {
        let d = (a - Dd { hi, lo }).to_f64().abs();
        assert!(d <= tol * hi.abs(), "{a:?} vs {hi} + {lo}: {d:e}");
    }

    #[test]
    fn elementary_functions() {
        // reference digits from 40-digit arithmetic
        close(Dd::new(2.0).ln(), 0.693_147_180_559_945_3, 2.319_046_813_846_299_6e-17, 1e-30);
        close(Dd::new(0.5).exp(), 1.648_721_270_700_128_2, -4.731_568_479_435_833e-17, 1e-30);
        let (s, c) = Dd::new(1.0).sin_cos();
        close(s, 0.841_470_984_807_896_5, 1.776_845_092_935_536e-18, 1e-30);
        close(c, 0.540_302_305_868_139_8, -4.760_954_612_604_417e-17, 1e-30);
        let x = Dd::new(123.456);
        close(x.ln().exp(), 123.456, 0.0, 1e-30);
        let (s, c) = Dd::new(100.0).sin_cos();
        assert!((s * s + c * c - Dd::new(1.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn division_and_sums() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        assert!((third * Dd::new(3.0) - Dd::new(1.0)).to_f64().abs() < 1e-31);
        let s = Dd::sum(1.0, 1e-20);
        assert_eq!(s.lo, 1e-20);
    }

    #[test]
    fn complex_power() {
        let w = Cdd::new(Complex64::new(-2.5, 3.0));
        let v = Cdd::real_pow(Dd::new(7.0), w).to_c64();
        let expect = Complex64::new(7.0, 0.0).powc(Complex64::new(-2.5, 3.0));
        assert!((v - expect).norm() < 1e-14 * expect.norm());
    }
}
