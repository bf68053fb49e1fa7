//! Complex numbers over binary arbitrary-precision floats.

use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;

pub type Real = FBig<HalfEven, 2>;

/// Binary digits needed to carry `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize
}

fn real(v: f64, bits: usize) -> Real {
    Real::try_from(v).expect("finite sample value").with_precision(bits).value()
}

fn to_f64(v: &Real) -> f64 {
    v.to_f64().value()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn from_c64(z: Complex64, bits: usize) -> Self {
        BigComplex { re: real(z.re, bits), im: real(z.im, bits) }
    }

    pub fn from_f64(v: f64, bits: usize) -> Self {
        Self::from_c64(Complex64::new(v, 0.0), bits)
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_f64(0.0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_f64(1.0, bits)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn recip(&self) -> Self {
        let den = &self.re * &self.re + &self.im * &self.im;
        BigComplex { re: &self.re / &den, im: -(&self.im / &den) }
    }

    pub fn powi(&self, n: i64) -> Self {
        let bits = self.re.precision().max(self.im.precision());
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = BigComplex::one(bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: Self) -> BigComplex {
        BigComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: Self) -> BigComplex {
        BigComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: Self) -> BigComplex {
        BigComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: Self) -> BigComplex {
        let den = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        BigComplex {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &den,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &den,
        }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops_match_f64() {
        let bits = bits_for_digits(40);
        let a = Complex64::new(0.3, -1.25);
        let b = Complex64::new(-2.5, 0.75);
        let (ba, bb) = (BigComplex::from_c64(a, bits), BigComplex::from_c64(b, bits));
        let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-14;
        assert!(close((&ba + &bb).to_c64(), a + b));
        assert!(close((&ba - &bb).to_c64(), a - b));
        assert!(close((&ba * &bb).to_c64(), a * b));
        assert!(close((&ba / &bb).to_c64(), a / b));
        assert!(close(ba.recip().to_c64(), a.inv()));
        assert!(close(ba.powi(-3).to_c64(), a.powi(-3)));
        assert!(close(ba.powi(5).to_c64(), a.powi(5)));
        assert!(close(ba.conj().to_c64(), a.conj()));
    }

    #[test]
    fn carries_more_than_double_precision() {
        let bits = bits_for_digits(50);
        let third = &BigComplex::one(bits) / &BigComplex::from_f64(3.0, bits);
        let residual = &(&third * &BigComplex::from_f64(3.0, bits)) - &BigComplex::one(bits);
        assert!(residual.abs_f64() < 1e-45);
        let tiny = BigComplex::from_f64(1e-30, bits);
        let sum = &(&BigComplex::one(bits) + &tiny) - &BigComplex::one(bits);
        assert!((sum.abs_f64() - 1e-30).abs() < 1e-44);
    }
}
