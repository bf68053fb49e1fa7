//! Arbitrary-precision numeric checks of the multivariate identities:
//! Kronecker's identity in three forms, the double-sum analogue with its
//! Appell–Lerch sums and theta quotient, and the partial-fraction expansion
//! of the reciprocal theta product.
//!
//! Every infinite sum or product is truncated at an index chosen from an
//! explicit geometric tail bound, and that bound travels with the value as
//! an absolute error certificate (see [`Certified`]). A check passes when
//! the relative difference between the two sides is below the tolerance and
//! the combined certificate is too.

mod battery;
mod bigc;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use battery::{frozen_battery, generate_battery, Battery, SamplePoint, DEFAULT_SEED};
pub use bigc::{bits_for_digits, BigComplex, Real};

pub const DEFAULT_PRECISION: u32 = 50;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Relative closeness at which a parameter counts as an integral power of q.
const POWER_OF_Q_EPS: f64 = 1e-8;

/// Evaluation environment for one sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalContext {
    /// Decimal digits carried by every arithmetic operation.
    pub precision: u32,
    /// Relative error below which two sides are considered equal.
    pub tolerance: f64,
    /// Error allowance shared by all truncations in one evaluation.
    pub tail_budget: f64,
    pub q: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext::new(DEFAULT_PRECISION, DEFAULT_TOLERANCE)
    }
}

impl EvalContext {
    pub fn new(precision: u32, tolerance: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        EvalContext {
            precision,
            tolerance,
            tail_budget: tolerance / 10.0,
            q: zero,
            x: zero,
            y: zero,
            z: zero,
        }
    }

    pub fn with_point(mut self, p: &SamplePoint) -> Self {
        self.q = p.q;
        self.x = p.x;
        self.y = p.y;
        self.z = p.z;
        self
    }

    pub fn with_q(mut self, q: Complex64) -> Self {
        self.q = q;
        self
    }

    pub fn with_xyz(mut self, x: Complex64, y: Complex64, z: Complex64) -> Self {
        self.x = x;
        self.y = y;
        self.z = z;
        self
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn with_tail_budget(mut self, budget: f64) -> Self {
        self.tail_budget = budget;
        self
    }

    pub fn bits(&self) -> usize {
        bits_for_digits(self.precision)
    }

    fn big(&self, v: Complex64) -> BigComplex {
        BigComplex::from_c64(v, self.bits())
    }

    fn one(&self) -> BigComplex {
        BigComplex::one(self.bits())
    }

    /// Budget for each elementary truncation; a single evaluation combines
    /// a few dozen of them.
    fn piece_budget(&self) -> f64 {
        self.tail_budget / 100.0
    }
}

/// A value together with an absolute bound on its truncation error.
#[derive(Debug, Clone, PartialEq)]
pub struct Certified {
    pub value: BigComplex,
    pub error: f64,
}

impl Certified {
    pub fn exact(value: BigComplex) -> Self {
        Certified { value, error: 0.0 }
    }

    pub fn abs(&self) -> f64 {
        self.value.abs_f64()
    }

    pub fn add(&self, other: &Certified) -> Certified {
        Certified { value: &self.value + &other.value, error: self.error + other.error }
    }

    pub fn sub(&self, other: &Certified) -> Certified {
        Certified { value: &self.value - &other.value, error: self.error + other.error }
    }

    pub fn mul(&self, other: &Certified) -> Certified {
        Certified {
            value: &self.value * &other.value,
            error: self.abs() * other.error + other.abs() * self.error + self.error * other.error,
        }
    }

    pub fn div(&self, other: &Certified) -> Certified {
        let denom = other.abs() - other.error;
        let quotient = &self.value / &other.value;
        let error = if denom > 0.0 {
            (self.error + quotient.abs_f64() * other.error) / denom
        } else {
            f64::INFINITY
        };
        Certified { value: quotient, error }
    }

    pub fn scale(&self, c: &BigComplex) -> Certified {
        Certified { value: &self.value * c, error: self.error * c.abs_f64() }
    }
}

/// Smallest `n` with `lead·ratio^n / (1 - ratio) ≤ budget`, i.e. the number
/// of leading terms of a geometrically dominated series to keep.
fn geometric_terms(lead: f64, ratio: f64, budget: f64) -> Result<usize> {
    if !(ratio < 1.0) || !lead.is_finite() {
        return Err(Error::Domain(format!("series does not converge (ratio {ratio})")));
    }
    if lead == 0.0 || ratio == 0.0 {
        return Ok(if lead / (1.0 - ratio) <= budget { 0 } else { 1 });
    }
    let target = budget * (1.0 - ratio) / lead;
    if target >= 1.0 {
        return Ok(0);
    }
    Ok((target.ln() / ratio.ln()).ceil().max(0.0) as usize)
}

fn geometric_tail(lead: f64, ratio: f64, n: usize) -> f64 {
    lead * ratio.powi(n as i32) / (1.0 - ratio)
}

fn pole_guard(den: &BigComplex, ctx: &EvalContext, what: &str) -> Result<()> {
    let d = den.abs_f64();
    if d < 10.0 * ctx.tail_budget {
        return Err(Error::PoleProximity(format!("|{what}| = {d:e}")));
    }
    Ok(())
}

/// `(w; p)_∞ = Π_{k≥0} (1 - w p^k)`.
///
/// The product stops at the first `K` with `|w||p|^K ≤ 1/2` and
/// `t = |w||p|^K / (1 - |p|)` small enough that `e^{2t} - 1` is within
/// budget; `2t` bounds the modulus of the logarithm of the omitted tail.
pub fn eval_pochhammer_with_base(w: Complex64, p: Complex64, ctx: &EvalContext) -> Result<Certified> {
    let ap = p.norm();
    if !(ap < 1.0) {
        return Err(Error::Domain(format!("|base| = {ap} is not < 1")));
    }
    let aw = w.norm();
    let budget = ctx.piece_budget();
    let mut k = 0usize;
    let mut head = aw;
    let rel = loop {
        let t = head / (1.0 - ap);
        if head <= 0.5 {
            let rel = (2.0 * t).exp_m1();
            if rel <= budget {
                break rel;
            }
        }
        k += 1;
        head *= ap;
    };
    let one = ctx.one();
    let pb = ctx.big(p);
    let mut term = ctx.big(w);
    let mut acc = ctx.one();
    for _ in 0..k {
        acc = &acc * &(&one - &term);
        term = &term * &pb;
    }
    let error = acc.abs_f64() * rel;
    Ok(Certified { value: acc, error })
}

/// `(x; q)_∞` at the context's `q`.
pub fn eval_pochhammer_num(x: Complex64, q: Complex64, ctx: &EvalContext) -> Result<Certified> {
    eval_pochhammer_with_base(x, q, ctx)
}

fn product_of(factors: &[(Complex64, Complex64)], ctx: &EvalContext) -> Result<Certified> {
    let mut acc = Certified::exact(ctx.one());
    for &(w, p) in factors {
        acc = acc.mul(&eval_pochhammer_with_base(w, p, ctx)?);
    }
    Ok(acc)
}

/// Which algebraic form of Kronecker's identity to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KroneckerVariant {
    /// `Σ_r x^r / (1 - y q^r)` against the theta quotient.
    Original,
    /// `(Σ_{r,s≥0} - Σ_{r,s<0}) q^{rs} x^r y^s`.
    Symmetric,
    /// The form normalised by `(1-x)(1-y)/(1-xy)`.
    Rewritten,
}

/// Which left-hand side of the double-sum identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DoubleSumLhs {
    /// `(Σ_{s,t≥0} - Σ_{s,t<0}) q^{st} y^s z^t / (1 - x q^{s+t})`.
    Kernel,
    /// `(Σ_{r,s,t≥0} + Σ_{r,s,t<0}) q^{st+rs+rt} x^r y^s z^t`; needs `|q| < |x| < 1`.
    Symmetric,
}

/// Outcome of one numeric identity check at one sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericCheck {
    pub passed: bool,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`.
    pub relative_difference: f64,
    /// Certified relative truncation error of the two sides combined.
    pub certificate: f64,
    #[serde(skip)]
    pub lhs: Complex64,
    #[serde(skip)]
    pub rhs: Complex64,
}

impl fmt::Display for NumericCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} rel.diff {:.3e} cert {:.3e}",
            if self.passed { "pass" } else { "FAIL" },
            self.relative_difference,
            self.certificate
        )
    }
}

fn compare(lhs: &Certified, rhs: &Certified, ctx: &EvalContext) -> NumericCheck {
    let scale = lhs.abs().max(rhs.abs());
    let diff = (&lhs.value - &rhs.value).abs_f64();
    let relative_difference = if scale > 0.0 { diff / scale } else { diff };
    let certificate = if scale > 0.0 { (lhs.error + rhs.error) / scale } else { f64::INFINITY };
    NumericCheck {
        passed: relative_difference < ctx.tolerance && certificate < ctx.tolerance,
        relative_difference,
        certificate,
        lhs: lhs.value.to_c64(),
        rhs: rhs.value.to_c64(),
    }
}

fn require(cond: bool, what: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(what.into()))
    }
}

/// True when `v` lies within relative distance `eps` of some `q^k`.
pub fn near_power_of_q(v: Complex64, q: Complex64, eps: f64) -> bool {
    let (av, aq) = (v.norm(), q.norm());
    if av == 0.0 || aq == 0.0 || aq >= 1.0 {
        return false;
    }
    // only exponents with |q|^k within a factor 2 of |v| can be close
    let k_mid = av.ln() / aq.ln();
    let spread = (2f64.ln() / -aq.ln()).ceil() as i64 + 1;
    let k0 = k_mid.round() as i64;
    (k0 - spread..=k0 + spread).any(|k| (v - q.powi(k as i32)).norm() <= eps * av)
}

fn in_annulus(v: Complex64, q: Complex64) -> bool {
    q.norm() < v.norm() && v.norm() < 1.0
}

fn check_q(ctx: &EvalContext) -> Result<()> {
    let aq = ctx.q.norm();
    require(aq > 0.0 && aq < 1.0, format!("need 0 < |q| < 1, got {aq}"))
}

fn check_not_power(name: &str, v: Complex64, ctx: &EvalContext) -> Result<()> {
    require(
        v.norm() > 0.0 && !near_power_of_q(v, ctx.q, POWER_OF_Q_EPS),
        format!("{name} must be nonzero and not an integral power of q"),
    )
}

fn check_annulus(name: &str, v: Complex64, ctx: &EvalContext) -> Result<()> {
    require(in_annulus(v, ctx.q), format!("need |q| < |{name}| < 1"))
}

/// Validates the hypotheses of a Kronecker variant.
pub fn kronecker_hypotheses(ctx: &EvalContext, variant: KroneckerVariant) -> Result<()> {
    check_q(ctx)?;
    check_annulus("x", ctx.x, ctx)?;
    match variant {
        KroneckerVariant::Original => check_not_power("y", ctx.y, ctx),
        KroneckerVariant::Symmetric | KroneckerVariant::Rewritten => {
            check_annulus("y", ctx.y, ctx)?;
            // xy = q^k would put a zero of the theta quotient on the normaliser
            check_not_power("xy", ctx.x * ctx.y, ctx)
        }
    }
}

/// Validates the hypotheses of the double-sum identity for a given LHS.
pub fn double_sum_hypotheses(ctx: &EvalContext, lhs: DoubleSumLhs) -> Result<()> {
    check_q(ctx)?;
    check_annulus("y", ctx.y, ctx)?;
    check_annulus("z", ctx.z, ctx)?;
    check_not_power("x", ctx.x, ctx)?;
    if lhs == DoubleSumLhs::Symmetric {
        check_annulus("x", ctx.x, ctx)?;
    }
    Ok(())
}

/// `Σ_{r∈ℤ} x^r / (1 - y q^r)`.
fn kronecker_original_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, q) = (ctx.x, ctx.y, ctx.q);
    let (ax, ay, aq) = (x.norm(), y.norm(), q.norm());
    let b = ctx.piece_budget();

    // r ≥ 0: |term| ≤ 2|x|^r once |y||q|^r ≤ 1/2
    let settle = settle_index(ay, aq, 0.5);
    let pos = geometric_terms(2.0, ax, b / 2.0)?.max(settle);
    // r = -m: |term| ≤ 2|q/x|^m / |y| once |q|^m ≤ |y|/2
    let ratio = aq / ax;
    let settle_neg = settle_index(1.0, aq, ay / 2.0).max(1);
    let neg = geometric_terms(2.0 / ay, ratio, b / 2.0)?.max(settle_neg);
    let error = geometric_tail(2.0, ax, pos) + geometric_tail(2.0 / ay, ratio, neg);

    let one = ctx.one();
    let (xb, yb, qb) = (ctx.big(x), ctx.big(y), ctx.big(q));
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));
    let (mut xr, mut qr) = (ctx.one(), ctx.one());
    for _ in 0..pos {
        let den = &one - &(&yb * &qr);
        pole_guard(&den, ctx, "1 - y q^r")?;
        sum = &sum + &(&xr / &den);
        xr = &xr * &xb;
        qr = &qr * &qb;
    }
    let q_over_x = &qb / &xb;
    let (mut ratio_m, mut qm) = (q_over_x.clone(), qb.clone());
    for _ in 1..neg {
        let den = &qm - &yb;
        pole_guard(&den, ctx, "q^m - y")?;
        sum = &sum + &(&ratio_m / &den);
        ratio_m = &ratio_m * &q_over_x;
        qm = &qm * &qb;
    }
    Ok(Certified { value: sum, error })
}

/// Smallest `k` with `lead·base^k ≤ target`.
fn settle_index(lead: f64, base: f64, target: f64) -> usize {
    let mut k = 0;
    let mut v = lead;
    while v > target {
        v *= base;
        k += 1;
    }
    k
}

/// `(q)²_∞ (xy, q/xy; q)_∞ / (x, q/x, y, q/y; q)_∞`.
fn kronecker_theta(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, q) = (ctx.x, ctx.y, ctx.q);
    let num = product_of(&[(q, q), (q, q), (x * y, q), (q / (x * y), q)], ctx)?;
    let den = product_of(&[(x, q), (q / x, q), (y, q), (q / y, q)], ctx)?;
    Ok(num.div(&den))
}

/// `(Σ_{r,s≥0} - Σ_{r,s<0}) q^{rs} x^r y^s`, summed row by row.
fn kronecker_symmetric_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (ax, ay, aq) = (ctx.x.norm(), ctx.y.norm(), ctx.q.norm());
    let positive = quadrant_sum(ctx, ctx.x, ctx.y, 0)?;
    let negative = negative_quadrant(ctx, ax, ay, aq)?;
    Ok(positive.sub(&negative))
}

/// `Σ_{r≥r0} Σ_{s≥r0} q^{rs} x^r y^s` with `|x|, |y| < 1`.
///
/// Row `r` is geometric in `s` with ratio `q^r y`; rows beyond `R` are
/// bounded by `|x|^r / (1 - |y|)` in total.
fn quadrant_sum(ctx: &EvalContext, x: Complex64, y: Complex64, r0: usize) -> Result<Certified> {
    let (ax, ay, aq) = (x.norm(), y.norm(), ctx.q.norm());
    let b = ctx.piece_budget();
    let row_total = |r: usize| ax.powi(r as i32) * (aq.powi(r as i32) * ay).powi(r0 as i32) / (1.0 - aq.powi(r as i32) * ay);
    // Σ_{r>R} |x|^r / (1 - |y|)
    let rows = r0 + geometric_terms(ax.powi(r0 as i32) / (1.0 - ay), ax, b / 2.0)?;
    let mut error = geometric_tail(ax.powi(r0 as i32) / (1.0 - ay), ax, rows - r0);
    let row_budget = b / (2.0 * (rows + 1) as f64);

    let (xb, yb, qb) = (ctx.big(x), ctx.big(y), ctx.big(ctx.q));
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));
    let mut xr = xb.powi(r0 as i64);
    let mut qr = qb.powi(r0 as i64);
    for r in r0..rows {
        let ratio_f = aq.powi(r as i32) * ay;
        let lead = row_total(r) * (1.0 - ratio_f);
        let cols = geometric_terms(lead, ratio_f, row_budget)?;
        error += geometric_tail(lead, ratio_f, cols);
        let ratio = &qr * &yb;
        let mut term = &xr * &ratio.powi(r0 as i64);
        for _ in 0..cols {
            sum = &sum + &term;
            term = &term * &ratio;
        }
        xr = &xr * &xb;
        qr = &qr * &qb;
    }
    Ok(Certified { value: sum, error })
}

/// `Σ_{a,b≥1} q^{ab} x^{-a} y^{-b}` with `|q| < |x|, |y|`.
///
/// Row `a` is geometric in `b` with ratio `q^a / y`; the row total is at
/// most `|q/x|^a / (|y| - |q|)`.
fn negative_quadrant(ctx: &EvalContext, ax: f64, ay: f64, aq: f64) -> Result<Certified> {
    let b = ctx.piece_budget();
    let rho = aq / ay;
    let qx = aq / ax;
    let outer_lead = qx / (ay * (1.0 - rho));
    let rows = 1 + geometric_terms(outer_lead, qx, b / 2.0)?;
    let mut error = geometric_tail(outer_lead, qx, rows - 1);
    let row_budget = b / (2.0 * (rows + 1) as f64);

    let (xb, yb, qb) = (ctx.big(ctx.x), ctx.big(ctx.y), ctx.big(ctx.q));
    let inv_x = xb.recip();
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));
    let mut xa = inv_x.clone();
    let mut qa = qb.clone();
    for a in 1..rows {
        let ratio_f = aq.powi(a as i32) / ay;
        // first term of the row: |x|^{-a} |q^a/y|
        let lead = ratio_f / ax.powi(a as i32);
        let cols = geometric_terms(lead, ratio_f, row_budget)?;
        error += geometric_tail(lead, ratio_f, cols);
        let ratio = &qa / &yb;
        let mut term = &xa * &ratio;
        for _ in 0..cols {
            sum = &sum + &term;
            term = &term * &ratio;
        }
        xa = &xa * &inv_x;
        qa = &qa * &qb;
    }
    Ok(Certified { value: sum, error })
}

/// `1 + (1-x)(1-y)/(1-xy) Σ_{r,s≥1} q^{rs}(x^r y^s - x^{-r} y^{-s})`.
fn kronecker_rewritten_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (ax, ay, aq) = (ctx.x.norm(), ctx.y.norm(), ctx.q.norm());
    let positive = quadrant_sum(ctx, ctx.x, ctx.y, 1)?;
    let negative = negative_quadrant(ctx, ax, ay, aq)?;
    let one = ctx.one();
    let (xb, yb) = (ctx.big(ctx.x), ctx.big(ctx.y));
    let pref = &(&(&one - &xb) * &(&one - &yb)) / &(&one - &(&xb * &yb));
    Ok(Certified::exact(one).add(&positive.sub(&negative).scale(&pref)))
}

/// `(xyq)_∞ (q/xy)_∞ (q)²_∞ / ((xq)_∞ (q/x)_∞ (yq)_∞ (q/y)_∞)`.
fn kronecker_rewritten_rhs(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, q) = (ctx.x, ctx.y, ctx.q);
    let num = product_of(&[(x * y * q, q), (q / (x * y), q), (q, q), (q, q)], ctx)?;
    let den = product_of(&[(x * q, q), (q / x, q), (y * q, q), (q / y, q)], ctx)?;
    Ok(num.div(&den))
}

/// Both sides of the chosen Kronecker form.
pub fn kronecker_sides(ctx: &EvalContext, variant: KroneckerVariant) -> Result<(Certified, Certified)> {
    kronecker_hypotheses(ctx, variant)?;
    Ok(match variant {
        KroneckerVariant::Original => (kronecker_original_lhs(ctx)?, kronecker_theta(ctx)?),
        KroneckerVariant::Symmetric => (kronecker_symmetric_lhs(ctx)?, kronecker_theta(ctx)?),
        KroneckerVariant::Rewritten => (kronecker_rewritten_lhs(ctx)?, kronecker_rewritten_rhs(ctx)?),
    })
}

pub fn check_kronecker(ctx: &EvalContext, variant: KroneckerVariant) -> Result<NumericCheck> {
    let (lhs, rhs) = kronecker_sides(ctx, variant)?;
    Ok(compare(&lhs, &rhs, ctx))
}

/// `Σ_{k∈ℤ} (-1)^k q^{k²} w^k / (1 + q^{2k} z)`.
///
/// For `k ≥ K` with `|q|^{2K}|z| ≤ 1/2` the terms are at most
/// `2|q|^{k²}|w|^k`, whose successive ratios `|q|^{2k+1}|w|` only shrink;
/// the negative side is handled the same way with `k = -m`.
pub fn appell_lerch_sum(w: Complex64, z: Complex64, ctx: &EvalContext) -> Result<Certified> {
    let q = ctx.q;
    let (aq, aw, az) = (q.norm(), w.norm(), z.norm());
    if !(aq < 1.0) || aw == 0.0 || az == 0.0 {
        return Err(Error::Domain("appell-lerch sum needs |q| < 1 and nonzero w, z".into()));
    }
    let b = ctx.piece_budget() / 2.0;
    let lq = aq.ln();

    // k ≥ 0
    let mut pos = settle_index(az, aq * aq, 0.5);
    let pos_tail = loop {
        let k = pos as f64;
        let ratio = aq.powf(2.0 * k + 1.0) * aw;
        if ratio < 1.0 {
            let lead = 2.0 * (k * k * lq + k * aw.ln()).exp();
            let tail = lead / (1.0 - ratio);
            if tail <= b {
                break tail;
            }
        }
        pos += 1;
    };
    // k = -m, m ≥ 1
    let mut neg = settle_index(1.0, aq * aq, az / 2.0).max(1);
    let neg_tail = loop {
        let m = neg as f64;
        let ratio = aq.powf(2.0 * m + 3.0) / aw;
        if ratio < 1.0 {
            let lead = 2.0 * ((m * m + 2.0 * m) * lq - m * aw.ln()).exp() / az;
            let tail = lead / (1.0 - ratio);
            if tail <= b {
                break tail;
            }
        }
        neg += 1;
    };

    let one = ctx.one();
    let (qb, wb, zb) = (ctx.big(q), ctx.big(w), ctx.big(z));
    let q2 = &qb * &qb;
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));

    // t_k = (-1)^k q^{k²} w^k, t_{k+1} = -t_k q^{2k+1} w
    let mut term = ctx.one();
    let mut step = &qb * &wb;
    let mut q2k = ctx.one();
    for _ in 0..pos {
        let den = &one + &(&q2k * &zb);
        pole_guard(&den, ctx, "1 + q^{2k} z")?;
        sum = &sum + &(&term / &den);
        term = -&(&term * &step);
        step = &step * &q2;
        q2k = &q2k * &q2;
    }
    // u_m = (-1)^m q^{m²+2m} w^{-m} over denominator q^{2m} + z
    let inv_w = wb.recip();
    let mut term = -&(&(&q2 * &qb) * &inv_w);
    let mut step = &(&q2 * &(&q2 * &qb)) * &inv_w;
    let mut q2m = q2.clone();
    for _ in 1..neg {
        let den = &q2m + &zb;
        pole_guard(&den, ctx, "q^{2m} + z")?;
        sum = &sum + &(&term / &den);
        term = -&(&term * &step);
        step = &step * &q2;
        q2m = &q2m * &q2;
    }
    Ok(Certified { value: sum, error: pos_tail + neg_tail })
}

/// One Appell–Lerch term of the double-sum identity, with `c` as the
/// distinguished variable:
/// `(ab, q²/ab; q²)_∞ / (a, b, q/a, q/b; q)_∞ · (q;q)²_∞/(q²;q²)_∞ · Σ_k (-1)^k q^{k²}(ab)^k/(1+q^{2k}c)`.
fn appell_lerch_block(a: Complex64, b: Complex64, c: Complex64, ctx: &EvalContext) -> Result<Certified> {
    let q = ctx.q;
    let q2 = q * q;
    let num = product_of(&[(a * b, q2), (q2 / (a * b), q2), (q, q), (q, q)], ctx)?;
    let den = product_of(&[(a, q), (b, q), (q / a, q), (q / b, q), (q2, q2)], ctx)?;
    Ok(num.div(&den).mul(&appell_lerch_sum(a * b, c, ctx)?))
}

/// The Appell–Lerch block together with its two variable swaps.
pub fn appell_lerch_symmetrized(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, z) = (ctx.x, ctx.y, ctx.z);
    let first = appell_lerch_block(x, y, z, ctx)?;
    let swap_zx = appell_lerch_block(z, y, x, ctx)?;
    let swap_zy = appell_lerch_block(x, z, y, ctx)?;
    Ok(first.add(&swap_zx).add(&swap_zy))
}

/// `-2 (q²;q²)³ / (x,y,z,q/x,q/y,q/z;q)_∞ · (xy,xz,yz,q²/xy,q²/xz,q²/yz;q²)_∞ / (-x,-y,-z,-q²/x,-q²/y,-q²/z;q²)_∞`.
pub fn double_sum_theta_quotient(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, z, q) = (ctx.x, ctx.y, ctx.z, ctx.q);
    let q2 = q * q;
    let num = product_of(
        &[
            (q2, q2),
            (q2, q2),
            (q2, q2),
            (x * y, q2),
            (x * z, q2),
            (y * z, q2),
            (q2 / (x * y), q2),
            (q2 / (x * z), q2),
            (q2 / (y * z), q2),
        ],
        ctx,
    )?;
    let den = product_of(
        &[
            (x, q),
            (y, q),
            (z, q),
            (q / x, q),
            (q / y, q),
            (q / z, q),
            (-x, q2),
            (-y, q2),
            (-z, q2),
            (-q2 / x, q2),
            (-q2 / y, q2),
            (-q2 / z, q2),
        ],
        ctx,
    )?;
    Ok(num.div(&den).scale(&ctx.big(Complex64::new(-2.0, 0.0))))
}

fn double_sum_rhs(ctx: &EvalContext) -> Result<Certified> {
    Ok(appell_lerch_symmetrized(ctx)?.add(&double_sum_theta_quotient(ctx)?))
}

/// `(Σ_{s,t≥0} - Σ_{s,t<0}) q^{st} y^s z^t / (1 - x q^{s+t})`.
fn double_sum_kernel_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, z, q) = (ctx.x, ctx.y, ctx.z, ctx.q);
    let (ax, ay, az, aq) = (x.norm(), y.norm(), z.norm(), q.norm());
    let b = ctx.piece_budget();
    let one = ctx.one();
    let (xb, yb, zb, qb) = (ctx.big(x), ctx.big(y), ctx.big(z), ctx.big(q));
    let zero = ctx.big(Complex64::new(0.0, 0.0));

    // s, t ≥ 0. The kernel is at most 2 once |x||q|^{s+t} ≤ 1/2.
    let kernel_settle = settle_index(ax, aq, 0.5);
    let rows = geometric_terms(2.0 / ((1.0 - ay) * (1.0 - az)), ay, b / 4.0)?.max(kernel_settle);
    let mut error = geometric_tail(2.0 / ((1.0 - ay) * (1.0 - az)), ay, rows);
    let row_budget = b / (4.0 * (rows + 1) as f64);
    let mut positive = zero.clone();
    let (mut ys, mut qs) = (ctx.one(), ctx.one());
    for s in 0..rows {
        let ratio_f = aq.powi(s as i32) * az;
        let lead = 2.0 * ay.powi(s as i32);
        let cols = geometric_terms(lead, ratio_f, row_budget)?.max(kernel_settle.saturating_sub(s));
        error += geometric_tail(lead, ratio_f, cols);
        // term = q^{st} y^s z^t, kernel power x q^{s+t}
        let ratio = &qs * &zb;
        let mut term = ys.clone();
        let mut xq = &xb * &qs;
        for _ in 0..cols {
            let den = &one - &xq;
            pole_guard(&den, ctx, "1 - x q^{s+t}")?;
            positive = &positive + &(&term / &den);
            term = &term * &ratio;
            xq = &xq * &qb;
        }
        ys = &ys * &yb;
        qs = &qs * &qb;
    }

    // s = -a, t = -b: q^{ab+a+b} y^{-a} z^{-b} / (q^{a+b} - x)
    //   = (q/y)^a (q^{a+1}/z)^b / (q^{a+b} - x); the kernel is at most
    //   2/|x| once |q|^{a+b} ≤ |x|/2.
    let kappa = 2.0 / ax;
    let kernel_settle = settle_index(1.0, aq, ax / 2.0);
    let qy = aq / ay;
    let rho1 = aq * aq / az;
    let outer_lead = kappa * qy * rho1 / (1.0 - rho1);
    let rows = 1 + geometric_terms(outer_lead, qy, b / 4.0)?.max(kernel_settle);
    error += geometric_tail(outer_lead, qy, rows - 1);
    let row_budget = b / (4.0 * (rows + 1) as f64);
    let mut negative = zero;
    let q_over_y = &qb / &yb;
    let mut qya = q_over_y.clone();
    let mut qa = qb.clone();
    for a in 1..rows {
        let ratio_f = aq.powi(a as i32 + 1) / az;
        let lead = kappa * qy.powi(a as i32) * ratio_f;
        let cols = geometric_terms(lead, ratio_f, row_budget)?.max(kernel_settle.saturating_sub(a));
        error += geometric_tail(lead, ratio_f, cols);
        let ratio = &(&qa * &qb) / &zb;
        let mut term = &qya * &ratio;
        let mut qab = &qa * &qb;
        for _ in 0..cols {
            let den = &qab - &xb;
            pole_guard(&den, ctx, "q^{a+b} - x")?;
            negative = &negative + &(&term / &den);
            term = &term * &ratio;
            qab = &qab * &qb;
        }
        qya = &qya * &q_over_y;
        qa = &qa * &qb;
    }
    Ok(Certified { value: &positive - &negative, error })
}

/// `(Σ_{r,s,t≥0} + Σ_{r,s,t<0}) q^{st+rs+rt} x^r y^s z^t` as a literal
/// triple sum. For a fixed pair `(r, s)` the `t`-sum is geometric.
fn double_sum_symmetric_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (x, y, z, q) = (ctx.x, ctx.y, ctx.z, ctx.q);
    let (ax, ay, az, aq) = (x.norm(), y.norm(), z.norm(), q.norm());
    let b = ctx.piece_budget();
    let (xb, yb, zb, qb) = (ctx.big(x), ctx.big(y), ctx.big(z), ctx.big(q));
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));

    // r, s, t ≥ 0: pair (r, s) totals at most |q|^{rs}|x|^r|y|^s / (1 - |z|).
    let c = 1.0 / (1.0 - az);
    let rows = geometric_terms(c / (1.0 - ay), ax, b / 6.0)?;
    let mut error = geometric_tail(c / (1.0 - ay), ax, rows);
    let mut cols_per_row = Vec::with_capacity(rows);
    for r in 0..rows {
        let ratio = aq.powi(r as i32) * ay;
        let lead = c * ax.powi(r as i32);
        let cols = geometric_terms(lead, ratio, b / (6.0 * (rows + 1) as f64))?;
        error += geometric_tail(lead, ratio, cols);
        cols_per_row.push(cols);
    }
    let pairs: usize = cols_per_row.iter().sum::<usize>().max(1);
    let pair_budget = b / (6.0 * pairs as f64);
    let mut xr = ctx.one();
    let mut qr = ctx.one();
    for (r, &cols) in cols_per_row.iter().enumerate() {
        let mut ys = ctx.one();
        let mut qs = ctx.one();
        let mut qrs = ctx.one(); // q^{rs}
        for s in 0..cols {
            let w_f = aq.powi((r + s) as i32) * az;
            let lead = aq.powi((r * s) as i32) * ax.powi(r as i32) * ay.powi(s as i32);
            let depth = geometric_terms(lead, w_f, pair_budget)?;
            error += geometric_tail(lead, w_f, depth);
            let w = &(&qr * &qs) * &zb;
            let mut term = &(&qrs * &xr) * &ys;
            for _ in 0..depth {
                sum = &sum + &term;
                term = &term * &w;
            }
            ys = &ys * &yb;
            qs = &qs * &qb;
            qrs = &qrs * &qr;
        }
        xr = &xr * &xb;
        qr = &qr * &qb;
    }

    // r, s, t = -a, -b, -c (a, b, c ≥ 1): q^{ab+bc+ca} x^{-a} y^{-b} z^{-c}.
    // Pair (a, b) gives q^{ab} x^{-a} y^{-b} Σ_c (q^{a+b}/z)^c, whose total is
    // at most (|q|/|x|)^a (|q|^{a+1}/|y|)^b · K with K = 1/(|z| - |q|²).
    let k = 1.0 / (az - aq * aq);
    let qx = aq / ax;
    let sigma1 = aq * aq / ay;
    let outer_lead = k * qx * sigma1 / (1.0 - sigma1);
    let rows = 1 + geometric_terms(outer_lead, qx, b / 6.0)?;
    error += geometric_tail(outer_lead, qx, rows - 1);
    let mut cols_per_row = Vec::with_capacity(rows);
    for a in 1..rows {
        let sigma = aq.powi(a as i32 + 1) / ay;
        let lead = k * qx.powi(a as i32) * sigma;
        let cols = geometric_terms(lead, sigma, b / (6.0 * (rows + 1) as f64))?;
        error += geometric_tail(lead, sigma, cols);
        cols_per_row.push(cols);
    }
    let pairs: usize = cols_per_row.iter().sum::<usize>().max(1);
    let pair_budget = b / (6.0 * pairs as f64);
    let (inv_x, inv_y, inv_z) = (xb.recip(), yb.recip(), zb.recip());
    let mut xa = inv_x.clone();
    let mut qa = qb.clone();
    for (i, &cols) in cols_per_row.iter().enumerate() {
        let a = i + 1;
        let mut yb_pow = inv_y.clone();
        let mut qb_pow = qb.clone();
        let mut qab = qa.clone(); // q^{ab} at b = 1
        for bb in 1..=cols {
            let w_f = aq.powi((a + bb) as i32) / az;
            let lead = aq.powi((a * bb) as i32) / (ax.powi(a as i32) * ay.powi(bb as i32)) * w_f;
            let depth = geometric_terms(lead, w_f, pair_budget)?;
            error += geometric_tail(lead, w_f, depth);
            let w = &(&qa * &qb_pow) * &inv_z;
            let mut term = &(&(&qab * &xa) * &yb_pow) * &w;
            for _ in 0..depth {
                sum = &sum + &term;
                term = &term * &w;
            }
            yb_pow = &yb_pow * &inv_y;
            qb_pow = &qb_pow * &qb;
            qab = &qab * &qa;
        }
        xa = &xa * &inv_x;
        qa = &qa * &qb;
    }
    Ok(Certified { value: sum, error })
}

/// Both sides of the double-sum identity.
pub fn double_sum_sides(ctx: &EvalContext, lhs: DoubleSumLhs) -> Result<(Certified, Certified)> {
    double_sum_hypotheses(ctx, lhs)?;
    let left = match lhs {
        DoubleSumLhs::Kernel => double_sum_kernel_lhs(ctx)?,
        DoubleSumLhs::Symmetric => double_sum_symmetric_lhs(ctx)?,
    };
    Ok((left, double_sum_rhs(ctx)?))
}

pub fn check_theorem_1_1(ctx: &EvalContext, lhs: DoubleSumLhs) -> Result<NumericCheck> {
    let (l, r) = double_sum_sides(ctx, lhs)?;
    Ok(compare(&l, &r, ctx))
}

/// Both left-hand forms of the double-sum identity, compared with each
/// other; requires `|q| < |x| < 1`.
pub fn check_double_sum_lhs_forms(ctx: &EvalContext) -> Result<NumericCheck> {
    double_sum_hypotheses(ctx, DoubleSumLhs::Symmetric)?;
    Ok(compare(&double_sum_kernel_lhs(ctx)?, &double_sum_symmetric_lhs(ctx)?, ctx))
}

pub fn partial_fraction_hypotheses(ctx: &EvalContext) -> Result<()> {
    check_q(ctx)?;
    check_not_power("z", ctx.z, ctx)
}

/// `Σ_{n∈ℤ} (-1)^n q^{n(n+1)/2} / (1 - q^n z)`.
fn partial_fraction_lhs(ctx: &EvalContext) -> Result<Certified> {
    let (q, z) = (ctx.q, ctx.z);
    let (aq, az) = (q.norm(), z.norm());
    let b = ctx.piece_budget() / 2.0;
    let lq = aq.ln();
    // n ≥ 0: ≤ 2|q|^{n(n+1)/2} once |q|^n|z| ≤ 1/2, ratio |q|^{n+1}
    let mut pos = settle_index(az, aq, 0.5);
    let pos_tail = loop {
        let n = pos as f64;
        let tail = 2.0 * (n * (n + 1.0) / 2.0 * lq).exp() / (1.0 - aq.powf(n + 1.0));
        if tail <= b {
            break tail;
        }
        pos += 1;
    };
    // n = -m: (-1)^m q^{m(m+1)/2} / (q^m - z), ≤ 2|q|^{m(m+1)/2}/|z| once |q|^m ≤ |z|/2
    let mut neg = settle_index(1.0, aq, az / 2.0).max(1);
    let neg_tail = loop {
        let m = neg as f64;
        let tail = 2.0 * (m * (m + 1.0) / 2.0 * lq).exp() / (az * (1.0 - aq.powf(m + 1.0)));
        if tail <= b {
            break tail;
        }
        neg += 1;
    };

    let one = ctx.one();
    let (qb, zb) = (ctx.big(q), ctx.big(z));
    let mut sum = ctx.big(Complex64::new(0.0, 0.0));
    // (-1)^n q^{n(n+1)/2}, advanced by -q^{n+1}
    let mut term = ctx.one();
    let mut qn = ctx.one();
    for _ in 0..pos {
        let den = &one - &(&qn * &zb);
        pole_guard(&den, ctx, "1 - q^n z")?;
        sum = &sum + &(&term / &den);
        qn = &qn * &qb;
        term = -&(&term * &qn);
    }
    let mut term = -&qb;
    let mut qm = qb.clone();
    for _ in 1..neg {
        let den = &qm - &zb;
        pole_guard(&den, ctx, "q^m - z")?;
        sum = &sum + &(&term / &den);
        qm = &qm * &qb;
        term = -&(&term * &qm);
    }
    Ok(Certified { value: sum, error: pos_tail + neg_tail })
}

/// `(q;q)²_∞ / (z, q/z; q)_∞`.
pub fn partial_fraction_rhs(ctx: &EvalContext) -> Result<Certified> {
    let (q, z) = (ctx.q, ctx.z);
    let num = product_of(&[(q, q), (q, q)], ctx)?;
    let den = product_of(&[(z, q), (q / z, q)], ctx)?;
    Ok(num.div(&den))
}

pub fn check_partial_fraction(ctx: &EvalContext) -> Result<NumericCheck> {
    partial_fraction_hypotheses(ctx)?;
    Ok(compare(&partial_fraction_lhs(ctx)?, &partial_fraction_rhs(ctx)?, ctx))
}

/// The numeric identities, by CLI name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NumericIdentity {
    Kronecker(KroneckerVariant),
    DoubleSum(DoubleSumLhs),
    PartialFraction,
}

impl NumericIdentity {
    pub const ALL: [NumericIdentity; 6] = [
        NumericIdentity::Kronecker(KroneckerVariant::Original),
        NumericIdentity::Kronecker(KroneckerVariant::Symmetric),
        NumericIdentity::Kronecker(KroneckerVariant::Rewritten),
        NumericIdentity::DoubleSum(DoubleSumLhs::Kernel),
        NumericIdentity::DoubleSum(DoubleSumLhs::Symmetric),
        NumericIdentity::PartialFraction,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NumericIdentity::Kronecker(KroneckerVariant::Original) => "kronecker",
            NumericIdentity::Kronecker(KroneckerVariant::Symmetric) => "kronecker-sym",
            NumericIdentity::Kronecker(KroneckerVariant::Rewritten) => "kronecker-alt",
            NumericIdentity::DoubleSum(DoubleSumLhs::Kernel) => "theorem-1-1",
            NumericIdentity::DoubleSum(DoubleSumLhs::Symmetric) => "theorem-1-1-sym",
            NumericIdentity::PartialFraction => "partial-fraction",
        }
    }

    pub fn check(&self, ctx: &EvalContext) -> Result<NumericCheck> {
        match *self {
            NumericIdentity::Kronecker(v) => check_kronecker(ctx, v),
            NumericIdentity::DoubleSum(l) => check_theorem_1_1(ctx, l),
            NumericIdentity::PartialFraction => check_partial_fraction(ctx),
        }
    }

    pub fn hypotheses(&self, ctx: &EvalContext) -> Result<()> {
        match *self {
            NumericIdentity::Kronecker(v) => kronecker_hypotheses(ctx, v),
            NumericIdentity::DoubleSum(l) => double_sum_hypotheses(ctx, l),
            NumericIdentity::PartialFraction => partial_fraction_hypotheses(ctx),
        }
    }
}

/// Whether a check's agreement survives extra working precision: the
/// relative difference at `precision + extra` digits may not exceed ten
/// times the one at `precision` (floored at the rounding level).
pub fn precision_stable(id: NumericIdentity, ctx: &EvalContext, extra: u32) -> Result<(bool, NumericCheck, NumericCheck)> {
    let base = id.check(ctx)?;
    let high = id.check(&ctx.with_precision(ctx.precision + extra))?;
    let floor = 10f64.powi(-(ctx.precision as i32));
    let ok = high.relative_difference <= 10.0 * base.relative_difference.max(floor);
    Ok((ok, base, high))
}

/// Result at one battery point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PointOutcome {
    Checked {
        check: NumericCheck,
        /// Whether the check survived the precision-escalation rerun.
        stable: bool,
    },
    /// Rejected by the pole guard; reported, never counted as a pass.
    Skipped(String),
}

/// Outcome of one identity over a list of sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryRun {
    pub identity: &'static str,
    pub outcomes: Vec<PointOutcome>,
}

impl BatteryRun {
    /// At least one point was checked and every checked point passed;
    /// skipped points are counted by [`BatteryRun::skipped`].
    pub fn passed(&self) -> bool {
        self.checks().next().is_some() && self.first_failure().is_none()
    }

    pub fn skipped(&self) -> usize {
        self.outcomes.iter().filter(|o| matches!(o, PointOutcome::Skipped(_))).count()
    }

    /// Largest relative difference among checked points.
    pub fn worst_relative_difference(&self) -> f64 {
        self.checks().map(|c| c.relative_difference).fold(0.0, f64::max)
    }

    pub fn worst_certificate(&self) -> f64 {
        self.checks().map(|c| c.certificate).fold(0.0, f64::max)
    }

    /// First checked point that failed, with its index.
    pub fn first_failure(&self) -> Option<(usize, &NumericCheck)> {
        self.outcomes.iter().enumerate().find_map(|(i, o)| match o {
            PointOutcome::Checked { check, stable } if !(check.passed && *stable) => Some((i, check)),
            _ => None,
        })
    }

    fn checks(&self) -> impl Iterator<Item = &NumericCheck> {
        self.outcomes.iter().filter_map(|o| match o {
            PointOutcome::Checked { check, .. } => Some(check),
            PointOutcome::Skipped(_) => None,
        })
    }
}

/// Extra digits used by the precision-escalation rerun.
pub const ESCALATION_DIGITS: u32 = 20;

/// Evaluates one point, including the precision-escalation rerun.
pub fn run_point(id: NumericIdentity, point: &SamplePoint, base: &EvalContext) -> Result<PointOutcome> {
    let ctx = base.with_point(point);
    match precision_stable(id, &ctx, ESCALATION_DIGITS) {
        Ok((stable, check, _)) => Ok(PointOutcome::Checked { check, stable }),
        Err(Error::PoleProximity(msg)) => Ok(PointOutcome::Skipped(msg)),
        Err(e) => Err(e),
    }
}

/// Evaluates `id` at every point on `jobs` threads; outcomes keep the
/// order of `points`.
pub fn run_battery(id: NumericIdentity, points: &[SamplePoint], base: &EvalContext, jobs: usize) -> Result<BatteryRun> {
    let jobs = jobs.max(1).min(points.len().max(1));
    let chunk = points.len().div_ceil(jobs).max(1);
    let results: Vec<Result<Vec<PointOutcome>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|p| run_point(id, p, base)).collect::<Result<Vec<_>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("battery worker panicked")).collect()
    });
    let mut outcomes = Vec::with_capacity(points.len());
    for part in results {
        outcomes.extend(part?);
    }
    Ok(BatteryRun { identity: id.name(), outcomes })
}
