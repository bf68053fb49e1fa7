//! Truncated formal power series in `q` with exact integer coefficients.
//!
//! An [`IntSeries`] of order `N` is known modulo `q^(N+1)`. Every binary
//! operation returns a series whose order is the minimum of its operands'
//! orders; constructors take the order explicitly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A power series `Σ_{k=0}^{order} c_k q^k (mod q^{order+1})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

/// The first coefficient at which two series disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}: lhs {} != rhs {}", self.exponent, self.lhs, self.rhs)
    }
}

impl IntSeries {
    pub fn zero(order: usize) -> Self {
        IntSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c·q^exponent`, which is zero when `exponent > order`.
    pub fn monomial(c: BigInt, exponent: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exponent <= order {
            s.coeffs[exponent] = c;
        }
        s
    }

    /// Builds a series from its leading coefficients. Missing coefficients
    /// are zero; coefficients beyond `order` are dropped.
    pub fn from_coeffs<I, T>(coeffs: I, order: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().take(order + 1).enumerate() {
            s.coeffs[k] = c.into();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^k`. Panics if `k` exceeds the known order.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut BigInt {
        &mut self.coeffs[k]
    }

    /// Adds `c` to the coefficient of `q^k` when `k` is within the order.
    pub fn add_term(&mut self, k: usize, c: &BigInt) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot += c;
        }
    }

    /// Adds the machine integer `c` at `q^k` when `k` is within the order.
    pub fn add_small(&mut self, k: usize, c: i64) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot += c;
        }
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        IntSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Coefficient-wise sum; order is the minimum of the operand orders.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        IntSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        IntSeries {
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    /// Truncated Cauchy product (schoolbook convolution).
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntSeries { coeffs: out }
    }

    /// Multiplicative inverse over the integers.
    ///
    /// Requires the constant term to be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NotInvertible(c0.clone()));
        }
        let order = self.order();
        let mut inv = vec![BigInt::zero(); order + 1];
        inv[0] = c0.clone();
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc += a * &inv[n - k];
                }
            }
            // c0 = ±1 is its own inverse
            inv[n] = -(acc * c0);
        }
        Ok(IntSeries { coeffs: inv })
    }

    /// Integer power; negative exponents go through [`IntSeries::invert`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = IntSeries::one(self.order());
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Multiplies in place by `1 + sign·q^m` (`sign` is `±1`), which is a
    /// no-op modulo `q^(order+1)` when `m > order`.
    pub(crate) fn mul_binomial_in_place(&mut self, m: usize, sign: i32) {
        assert!(m > 0);
        let order = self.order();
        if m > order {
            return;
        }
        for k in (m..=order).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(k);
            if sign < 0 {
                hi[0] -= &lo[k - m];
            } else {
                hi[0] += &lo[k - m];
            }
        }
    }

    /// Compares coefficients `0..=order` and reports the first disagreement.
    pub fn equal_to_order(&self, other: &Self, order: usize) -> Result<Option<Mismatch>> {
        let available = self.order().min(other.order());
        if order > available {
            return Err(Error::OrderExceeded { requested: order, available });
        }
        Ok((0..=order).find_map(|k| {
            (self.coeffs[k] != other.coeffs[k]).then(|| Mismatch {
                exponent: k,
                lhs: self.coeffs[k].clone(),
                rhs: other.coeffs[k].clone(),
            })
        }))
    }
}

impl fmt::Debug for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntSeries({self})")
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sep = if first {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            first = false;
            let mag = c.abs();
            f.write_str(sep)?;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{k}")?,
                (_, false) => write!(f, "{mag}q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;
    fn add(self, rhs: Self) -> IntSeries {
        IntSeries::add(self, rhs)
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;
    fn sub(self, rhs: Self) -> IntSeries {
        IntSeries::sub(self, rhs)
    }
}

impl Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, rhs: Self) -> IntSeries {
        IntSeries::mul(self, rhs)
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;
    fn neg(self) -> IntSeries {
        IntSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn product(a: usize, b: usize, e: i64, order: usize, sign: i32) -> IntSeries {
    assert!(a >= 1 && b >= 1, "pochhammer base exponents must be positive");
    let mut s = IntSeries::one(order);
    if e == 0 {
        return s;
    }
    let mut m = a;
    while m <= order {
        s.mul_binomial_in_place(m, sign);
        m += b;
    }
    // the constant term is 1, so the power is always defined
    s.pow(e).expect("unit constant term")
}

/// `(q^a; q^b)_∞^e` truncated at `order`.
pub fn pochhammer(a: usize, b: usize, e: i64, order: usize) -> IntSeries {
    product(a, b, e, order, -1)
}

/// `(-q^a; q^b)_∞^e` truncated at `order`.
pub fn neg_pochhammer(a: usize, b: usize, e: i64, order: usize) -> IntSeries {
    product(a, b, e, order, 1)
}

/// `Σ_{m∈ℤ} (-1)^m q^{m²}`.
pub fn theta_signed(order: usize) -> IntSeries {
    let mut s = IntSeries::one(order);
    let mut m = 1usize;
    while m * m <= order {
        s.add_small(m * m, if m % 2 == 0 { 2 } else { -2 });
        m += 1;
    }
    s
}
