//! Double-precision complex numbers for the numeric sampling and rendering
//! paths.

use super::rational::Field;
use super::NumError;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    /// Rejects NaN/Inf components.
    pub fn checked(re: f64, im: f64) -> Result<Self, NumError> {
        if re.is_finite() && im.is_finite() {
            Ok(Cx { re, im })
        } else {
            Err(NumError::NonFinite)
        }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn abs_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re, -self.im)
    }

    pub fn sqrt(&self) -> Self {
        let r = self.abs();
        let re = ((r + self.re) / 2.0).max(0.0).sqrt();
        let im_mag = ((r - self.re) / 2.0).max(0.0).sqrt();
        Cx::new(re, if self.im >= 0.0 { im_mag } else { -im_mag })
    }

    pub fn recip(&self) -> Self {
        let d = self.abs_sq();
        Cx::new(self.re / d, -self.im / d)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Cx::new(1.0, 0.0);
        for _ in 0..n {
            acc = acc * *self;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, rhs: Cx) -> Cx {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}
impl Sub for Cx {
    type Output = Cx;
    fn sub(self, rhs: Cx) -> Cx {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}
impl Mul for Cx {
    type Output = Cx;
    fn mul(self, rhs: Cx) -> Cx {
        Cx::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}
impl Div for Cx {
    type Output = Cx;
    fn div(self, rhs: Cx) -> Cx {
        self * rhs.recip()
    }
}
impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}
impl Mul<f64> for Cx {
    type Output = Cx;
    fn mul(self, rhs: f64) -> Cx {
        Cx::new(self.re * rhs, self.im * rhs)
    }
}

impl Field for Cx {
    fn zero() -> Self {
        Cx::new(0.0, 0.0)
    }
    fn one() -> Self {
        Cx::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn inv(&self) -> Option<Self> {
        if self.abs_sq() == 0.0 {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Cx::new(v as f64, 0.0)
    }
}
