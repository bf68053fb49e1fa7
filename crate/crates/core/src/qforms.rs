//! Positive definite binary quadratic forms `ax² + bxy + cy²`.
//!
//! Covers reduced-form enumeration, the type I–IV classification of reduced
//! forms, class numbers `h(D)`, Hurwitz class numbers `H(N)` (computed both
//! from the weighted form count and from the divisor-square sum over `h`),
//! Dirichlet's conductor formula for `h(D)/ω(D)`, and the correspondence
//! between solutions of `rs + rt + st = n` and reduced forms of
//! discriminant `-4n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::RwLock;

use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counts::{self, DecompositionCounts, Triple};
use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rat = Ratio<i64>;

/// Position of a reduced form in the type I–IV partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FormType {
    /// `0 = b < a ≤ c`
    I,
    /// `0 < |b| < a < c`
    II,
    /// `0 < b = a < c` or `0 < b < a = c`
    III,
    /// `0 < b = a = c`
    IV,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::I => "I",
            FormType::II => "II",
            FormType::III => "III",
            FormType::IV => "IV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `gcd(a, b, c)`.
    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        self.is_positive_definite()
            && b.abs() <= a
            && a <= c
            && ((b.abs() != a && a != c) || b >= 0)
    }

    /// Type tag; `None` for forms that are not reduced.
    pub fn form_type(&self) -> Option<FormType> {
        if !self.is_reduced() {
            return None;
        }
        let QuadForm { a, b, c } = *self;
        Some(if b == 0 {
            FormType::I
        } else if b.abs() < a && a < c {
            FormType::II
        } else if b == a && a == c {
            FormType::IV
        } else {
            FormType::III
        })
    }

    /// Weight in the Hurwitz class number: `1/2` on multiples of
    /// `x² + y²`, `1/3` on multiples of `x² + xy + y²`, `1` otherwise.
    ///
    /// For reduced forms equivalence to `g·(1,0,1)` or `g·(1,1,1)` is
    /// decided by equality, since the reduced representative of a class is
    /// unique.
    pub fn hurwitz_weight(&self) -> Rat {
        let g = self.content();
        if *self == QuadForm::new(g, 0, g) {
            Rat::new(1, 2)
        } else if *self == QuadForm::new(g, g, g) {
            Rat::new(1, 3)
        } else {
            Rat::one()
        }
    }
}

/// Validates a negative discriminant.
pub fn check_discriminant(d: i64) -> Result<()> {
    if d < 0 && matches!(d.rem_euclid(4), 0 | 1) {
        Ok(())
    } else {
        Err(Error::NotADiscriminant(d))
    }
}

/// All reduced positive definite forms of discriminant `d`, primitive or
/// not, sorted by `(a, b, c)`.
pub fn enumerate_reduced(d: i64) -> Result<Vec<QuadForm>> {
    check_discriminant(d)?;
    let n = -d;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadForm::new(a, b, c);
            if f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Number of primitive reduced forms of discriminant `d`.
pub fn class_number_h(d: i64) -> Result<i64> {
    Ok(enumerate_reduced(d)?.iter().filter(|f| f.is_primitive()).count() as i64)
}

/// Number of roots of unity in the order of discriminant `d`.
pub fn omega(d: i64) -> Result<i64> {
    check_discriminant(d)?;
    Ok(match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    })
}

/// `h(d) / (ω(d)/2)`.
pub fn h_prime(d: i64) -> Result<Rat> {
    Ok(Rat::new(2 * class_number_h(d)?, omega(d)?))
}

/// Hurwitz class number from its definition as a weighted count of all
/// reduced forms of discriminant `-n`.
pub fn hurwitz_direct(n: u64) -> Rat {
    match n % 4 {
        1 | 2 => Rat::zero(),
        _ if n == 0 => Rat::new(-1, 12),
        _ => enumerate_reduced(-(n as i64))
            .expect("-n is a discriminant")
            .iter()
            .map(QuadForm::hurwitz_weight)
            .sum(),
    }
}

/// Hurwitz class number as `Σ_{d² | n} h'(-n/d²)`, skipping the terms whose
/// argument is not a discriminant.
pub fn hurwitz_divisor_sum(n: u64) -> Rat {
    assert!(n >= 1, "divisor-sum route needs n ≥ 1");
    if matches!(n % 4, 1 | 2) {
        return Rat::zero();
    }
    let mut total = Rat::zero();
    for d in 1..=n.sqrt() {
        if n % (d * d) != 0 {
            continue;
        }
        let disc = -((n / (d * d)) as i64);
        if check_discriminant(disc).is_ok() {
            total += h_prime(disc).expect("checked discriminant");
        }
    }
    total
}

fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// `d ≠ 1` and either `d ≡ 1 (mod 4)` squarefree, or `d ≡ 0 (mod 4)` with
/// `d/4` squarefree and `d/4 ≡ 2, 3 (mod 4)`.
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let e = d / 4;
            is_squarefree(e.unsigned_abs()) && matches!(e.rem_euclid(4), 2 | 3)
        }
        _ => false,
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker–Jacobi symbol `(d/m)` for `m ≥ 1`.
///
/// At `2`: `0` for even `d`, `+1` for `d ≡ ±1 (mod 8)`, `-1` for
/// `d ≡ ±3 (mod 8)`.
pub fn kronecker(d: i64, m: u64) -> i32 {
    assert!(m >= 1);
    let twos = m.trailing_zeros();
    let odd = m >> twos;
    let at_two = match d.rem_euclid(8) {
        _ if twos == 0 => 1,
        0 | 2 | 4 | 6 => 0,
        1 | 7 => 1,
        _ => if twos % 2 == 0 { 1 } else { -1 },
    };
    at_two * jacobi(d, odd)
}

/// Both sides of `h(D)/ω(D) = h(D0)/ω(D0) · f · Π_{p|f} (1 - (D0/p)/p)` for
/// `D = D0 f²`.
pub fn dirichlet_ratio_sides(d0: i64, f: u64) -> Result<(Rat, Rat)> {
    if d0 >= 0 || !is_fundamental(d0) {
        return Err(Error::NotFundamental(d0));
    }
    assert!(f >= 1);
    let d = d0 * (f * f) as i64;
    let lhs = Rat::new(class_number_h(d)?, omega(d)?);
    let mut rhs = Rat::new(class_number_h(d0)?, omega(d0)?) * Rat::from_integer(f as i64);
    for p in prime_factors(f) {
        let p = p as i64;
        rhs *= Rat::one() - Rat::new(kronecker(d0, p as u64) as i64, p);
    }
    Ok((lhs, rhs))
}

pub fn dirichlet_ratio_check(d0: i64, f: u64) -> Result<bool> {
    let (lhs, rhs) = dirichlet_ratio_sides(d0, f)?;
    Ok(lhs == rhs)
}

/// `H(4n) = 4H(n)` for `n ≡ 3 (mod 8)` and `H(4n) = 2H(n)` for
/// `n ≡ 7 (mod 8)`.
pub fn hurwitz_4n_lemma_check(n: u64) -> Result<bool> {
    let multiplier = match n % 8 {
        3 => 4,
        7 => 2,
        _ => return Err(Error::HypothesisViolated(format!("n = {n} is not 3 mod 4"))),
    };
    Ok(hurwitz_direct(4 * n) == hurwitz_direct(n) * multiplier)
}

/// The reduced form `(s+t, 2t, r+t)` of discriminant `-4(rs+rt+st)`.
pub fn triple_to_form(t: Triple) -> QuadForm {
    let Triple { r, s, t } = t;
    let (r, s, t) = (r as i64, s as i64, t as i64);
    let f = QuadForm::new(s + t, 2 * t, r + t);
    assert_eq!(f.discriminant(), -4 * (r * s + r * t + s * t));
    assert!(f.is_reduced(), "{f} is not reduced");
    f
}

/// Reduced forms of one discriminant, counted by type and by content.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FormCensus {
    pub discriminant: i64,
    pub by_type: BTreeMap<FormType, usize>,
    pub primitive: usize,
    pub even_content: usize,
    /// `A(D)`: imprimitive forms whose content is odd.
    pub odd_content: usize,
}

impl FormCensus {
    pub fn count(&self, ty: FormType) -> usize {
        self.by_type.get(&ty).copied().unwrap_or(0)
    }
}

pub fn classify_forms(d: i64) -> Result<FormCensus> {
    let forms = enumerate_reduced(d)?;
    let mut census = FormCensus { discriminant: d, ..Default::default() };
    for f in &forms {
        *census.by_type.entry(f.form_type().expect("reduced")).or_default() += 1;
        match f.content() {
            1 => census.primitive += 1,
            g if g % 2 == 0 => census.even_content += 1,
            _ => census.odd_content += 1,
        }
    }
    Ok(census)
}

/// The triple-to-form map for one `n`, with the census it must reproduce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionReport {
    pub n: u64,
    pub pairs: Vec<(Triple, QuadForm, FormType)>,
    pub decomposition: DecompositionCounts,
    pub census: FormCensus,
    /// Reduced forms of discriminant `-4n` with `b > 0`.
    pub positive_middle: BTreeSet<QuadForm>,
}

impl BijectionReport {
    fn count_of(&self, ty: FormType) -> usize {
        self.pairs.iter().filter(|p| p.2 == ty).count()
    }

    /// Injective, onto the `b > 0` forms, and type-by-type in agreement
    /// with the solution counts.
    pub fn holds(&self) -> bool {
        let image: BTreeSet<QuadForm> = self.pairs.iter().map(|p| p.1).collect();
        let d = &self.decomposition;
        let type_two_positive = self
            .positive_middle
            .iter()
            .filter(|f| f.form_type() == Some(FormType::II))
            .count();
        image.len() == self.pairs.len()
            && image == self.positive_middle
            && self.count_of(FormType::II) as u64 == d.strict
            && type_two_positive as u64 == d.strict
            && self.count_of(FormType::III) as u64 == d.two_equal
            && self.census.count(FormType::III) as u64 == d.two_equal
            && self.count_of(FormType::IV) as u64 == d.all_equal
            && self.census.count(FormType::IV) as u64 == d.all_equal
            && self.count_of(FormType::I) == 0
    }
}

pub fn bijection_report(n: u64) -> Result<BijectionReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let d = -4 * n as i64;
    let pairs = counts::sorted_triples(n)
        .into_iter()
        .map(|t| {
            let f = triple_to_form(t);
            (t, f, f.form_type().expect("reduced"))
        })
        .collect();
    let positive_middle = enumerate_reduced(d)?.into_iter().filter(|f| f.b > 0).collect();
    Ok(BijectionReport {
        n,
        pairs,
        decomposition: counts::decompose_solutions(n),
        census: classify_forms(d)?,
        positive_middle,
    })
}

/// Which clause of the `r_3`/Hurwitz formula applies, and its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussR3Evaluation {
    pub n: u64,
    /// `n` with all factors of 4 removed.
    pub base: u64,
    pub clause: &'static str,
    pub predicted: Rat,
    pub brute_force: u64,
}

impl GaussR3Evaluation {
    pub fn holds(&self) -> bool {
        self.predicted.is_integer() && self.predicted == Rat::from_integer(self.brute_force as i64)
    }
}

pub fn gauss_r3_evaluate(n: u64, brute_force: u64) -> GaussR3Evaluation {
    assert!(n >= 1);
    let mut base = n;
    while base % 4 == 0 {
        base /= 4;
    }
    let (clause, predicted) = match base % 8 {
        1 | 2 | 5 | 6 => ("12 H(4n)", hurwitz_direct(4 * base) * 12),
        3 => ("24 H(n)", hurwitz_direct(base) * 24),
        7 => ("0", Rat::zero()),
        _ => unreachable!("4 ∤ base"),
    };
    GaussR3Evaluation { n, base, clause, predicted, brute_force }
}

/// `r_3(n)` against the Hurwitz class number formula, recursing through
/// `r_3(4m) = r_3(m)`.
pub fn gauss_r3_check(n: u64) -> bool {
    gauss_r3_evaluate(n, counts::r_squares(3, n)).holds()
}

/// `δ_n`: `1/2` at `n = 1`, `1/3` at `n = 3`, `1` otherwise.
pub fn gauss_delta(n: u64) -> Rat {
    match n {
        1 => Rat::new(1, 2),
        3 => Rat::new(1, 3),
        _ => Rat::one(),
    }
}

/// The class-number prediction for `N_3(n)`; errors for `n ≡ 0, 4, 7 (mod 8)`.
pub fn gauss_n3_predicted(n: u64) -> Result<Rat> {
    let n_i = n as i64;
    match n % 8 {
        1 | 2 | 5 | 6 => Ok(gauss_delta(n) * 12 * class_number_h(-4 * n_i)?),
        3 => Ok(gauss_delta(n) * 24 * class_number_h(-n_i)?),
        _ => Err(Error::TheoremDoesNotApply(n)),
    }
}

pub fn gauss_n3_check(n: u64) -> Result<bool> {
    let predicted = gauss_n3_predicted(n)?;
    Ok(predicted == Rat::from_integer(counts::n3_primitive(n) as i64))
}

/// In-process memo of `h(D)` and `H(N)`, safe for concurrent use.
#[derive(Debug, Default)]
pub struct ClassNumberCache {
    h: RwLock<BTreeMap<i64, i64>>,
    hurwitz: RwLock<BTreeMap<u64, Rat>>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn h(&self, d: i64) -> Result<i64> {
        if let Some(&v) = self.h.read().unwrap().get(&d) {
            return Ok(v);
        }
        let v = class_number_h(d)?;
        self.h.write().unwrap().insert(d, v);
        Ok(v)
    }

    pub fn hurwitz(&self, n: u64) -> Rat {
        if let Some(&v) = self.hurwitz.read().unwrap().get(&n) {
            return v;
        }
        let v = hurwitz_direct(n);
        self.hurwitz.write().unwrap().insert(n, v);
        v
    }

    pub fn insert_h(&self, d: i64, v: i64) {
        self.h.write().unwrap().insert(d, v);
    }

    pub fn insert_hurwitz(&self, n: u64, v: Rat) {
        self.hurwitz.write().unwrap().insert(n, v);
    }

    pub fn h_entries(&self) -> Vec<(i64, i64)> {
        self.h.read().unwrap().iter().map(|(&k, &v)| (k, v)).collect()
    }

    pub fn hurwitz_entries(&self) -> Vec<(u64, Rat)> {
        self.hurwitz.read().unwrap().iter().map(|(&k, &v)| (k, v)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.h.read().unwrap().is_empty() && self.hurwitz.read().unwrap().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::new(a, b, c)
    }

    /// Reduced forms by scanning a box around the reduction bounds, used as
    /// an oracle for the enumerator.
    fn reduced_by_scan(d: i64) -> Vec<QuadForm> {
        let n = -d;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in -a..=a {
                for c in a..=n {
                    let g = f(a, b, c);
                    if g.discriminant() == d && g.is_reduced() {
                        out.push(g);
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_reduced(-4).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(enumerate_reduced(-3).unwrap(), vec![f(1, 1, 1)]);
        assert_eq!(
            enumerate_reduced(-44).unwrap(),
            vec![f(1, 0, 11), f(2, 2, 6), f(3, -2, 4), f(3, 2, 4)]
        );
        assert!(matches!(enumerate_reduced(-5), Err(Error::NotADiscriminant(-5))));
        assert!(enumerate_reduced(0).is_err());
        assert!(enumerate_reduced(5).is_err());
        assert!(enumerate_reduced(-6).is_err());
    }

    #[test]
    fn enumerate_matches_scan() {
        for n in (3..=160).filter(|n| matches!(n % 4, 0 | 3)) {
            assert_eq!(enumerate_reduced(-n).unwrap(), reduced_by_scan(-n), "D=-{n}");
        }
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number_h(-3).unwrap(), 1);
        assert_eq!(class_number_h(-4).unwrap(), 1);
        assert_eq!(class_number_h(-20).unwrap(), 2);
        assert_eq!(class_number_h(-44).unwrap(), 3);
        assert_eq!(class_number_h(-23).unwrap(), 3);
        assert_eq!(omega(-3).unwrap(), 6);
        assert_eq!(omega(-4).unwrap(), 4);
        assert_eq!(omega(-44).unwrap(), 2);
        assert!(omega(-2).is_err());
    }

    #[test]
    fn hurwitz_values() {
        assert_eq!(hurwitz_direct(0), Rat::new(-1, 12));
        assert_eq!(hurwitz_direct(3), Rat::new(1, 3));
        assert_eq!(hurwitz_direct(4), Rat::new(1, 2));
        assert_eq!(hurwitz_direct(12), Rat::new(4, 3));
        assert_eq!(hurwitz_direct(11), Rat::from_integer(1));
        assert_eq!(hurwitz_direct(20), Rat::from_integer(2));
        assert_eq!(hurwitz_direct(44), Rat::from_integer(4));
        assert_eq!(hurwitz_direct(5), Rat::zero());
        assert_eq!(hurwitz_direct(6), Rat::zero());
        assert_eq!(hurwitz_divisor_sum(12), Rat::new(4, 3));
        assert_eq!(hurwitz_divisor_sum(44), Rat::from_integer(4));
        assert_eq!(hurwitz_divisor_sum(3), Rat::new(1, 3));
        assert_eq!(hurwitz_divisor_sum(9), Rat::zero());
        for n in 1..=400 {
            assert_eq!(hurwitz_direct(n), hurwitz_divisor_sum(n), "N={n}");
        }
    }

    #[test]
    fn rational_display() {
        assert_eq!(Rat::new(2, 6).to_string(), "1/3");
        assert_eq!(Rat::new(4, 2).to_string(), "2");
        assert_eq!(Rat::new(1, -12).to_string(), "-1/12");
    }

    #[test]
    fn fundamental_discriminants() {
        let fund: Vec<i64> = (-40..0).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(fund, vec![-40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3]);
        assert!(!is_fundamental(1));
        assert!(is_fundamental(5));
        assert!(!is_fundamental(-12));
    }

    #[test]
    fn kronecker_symbol() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(-3, 4), 1);
        assert_eq!(kronecker(-20, 1), 1);
        // Legendre symbols by Euler's criterion
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for a in -30i64..30 {
                let e = (p - 1) / 2;
                let mut acc = 1u64;
                let base = a.rem_euclid(p as i64) as u64;
                for _ in 0..e {
                    acc = acc * base % p;
                }
                let euler = match acc {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(a, p), euler, "({a}/{p})");
            }
        }
    }

    #[test]
    fn dirichlet_examples() {
        let (l, r) = dirichlet_ratio_sides(-3, 2).unwrap();
        assert_eq!((l, r), (Rat::new(1, 2), Rat::new(1, 2)));
        assert!(dirichlet_ratio_check(-4, 1).unwrap());
        assert!(dirichlet_ratio_check(-3, 3).unwrap());
        assert!(matches!(dirichlet_ratio_check(-12, 2), Err(Error::NotFundamental(-12))));
    }

    #[test]
    fn lemma_4n() {
        assert!(hurwitz_4n_lemma_check(11).unwrap());
        assert!(hurwitz_4n_lemma_check(3).unwrap());
        assert!(hurwitz_4n_lemma_check(7).unwrap());
        assert_eq!(hurwitz_direct(28), Rat::from_integer(2));
        assert!(hurwitz_4n_lemma_check(5).is_err());
    }

    #[test]
    fn triples_to_forms() {
        let t = |r, s, u| triple_to_form(Triple::new(r, s, u).unwrap());
        assert_eq!(t(3, 2, 1), f(3, 2, 4));
        assert_eq!(t(1, 1, 1), f(2, 2, 2));
        assert_eq!(t(5, 1, 1), f(2, 2, 6));
        assert_eq!(f(2, 2, 2).form_type(), Some(FormType::IV));
        assert_eq!(f(2, 2, 6).form_type(), Some(FormType::III));
        assert_eq!(f(3, 2, 4).form_type(), Some(FormType::II));
        assert_eq!(f(3, -2, 4).form_type(), Some(FormType::II));
        assert_eq!(f(1, 0, 11).form_type(), Some(FormType::I));
        assert_eq!(f(3, 2, 3).form_type(), Some(FormType::III));
        assert_eq!(f(3, -2, 3).form_type(), None);
    }

    #[test]
    fn bijection_examples() {
        let r = bijection_report(11).unwrap();
        let shown: Vec<String> = r.pairs.iter().map(|(t, f, ty)| format!("({},{},{})->{f}[{ty}]", t.r, t.s, t.t)).collect();
        assert_eq!(shown, vec!["(3,2,1)->(3,2,4)[II]", "(5,1,1)->(2,2,6)[III]"]);
        assert!(r.holds());
        let r = bijection_report(3).unwrap();
        assert_eq!(r.pairs[0].1, QuadForm::new(2, 2, 2));
        assert!(r.holds());
        let r = bijection_report(1).unwrap();
        assert!(r.pairs.is_empty() && r.holds());
        assert_eq!((r.decomposition.total, r.decomposition.strict), (0, 0));
        assert!(bijection_report(0).is_err());
    }

    #[test]
    fn census_examples() {
        let c = classify_forms(-44).unwrap();
        assert_eq!(
            (c.count(FormType::I), c.count(FormType::II), c.count(FormType::III), c.count(FormType::IV)),
            (1, 2, 1, 0)
        );
        assert_eq!((c.primitive, c.even_content, c.odd_content), (3, 1, 0));
        let c4 = classify_forms(-4).unwrap();
        assert_eq!(c4.by_type, BTreeMap::from([(FormType::I, 1)]));
        let c36 = classify_forms(-36).unwrap();
        assert!(enumerate_reduced(-36).unwrap().contains(&f(3, 0, 3)));
        assert!(c36.odd_content >= 1);
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_r3_evaluate(1, 6).predicted, Rat::from_integer(6));
        assert_eq!(gauss_r3_evaluate(11, 24).predicted, Rat::from_integer(24));
        assert_eq!(gauss_r3_evaluate(5, 24).predicted, Rat::from_integer(24));
        let e = gauss_r3_evaluate(28, 0);
        assert_eq!((e.base, e.clause), (7, "0"));
        for n in 1..=200 {
            assert!(gauss_r3_check(n), "n={n}");
        }
        assert_eq!(gauss_n3_predicted(1).unwrap(), Rat::from_integer(6));
        assert_eq!(gauss_n3_predicted(3).unwrap(), Rat::from_integer(8));
        assert_eq!(gauss_n3_predicted(5).unwrap(), Rat::from_integer(24));
        assert!(gauss_n3_check(5).unwrap());
        assert!(matches!(gauss_n3_check(7), Err(Error::TheoremDoesNotApply(7))));
        assert!(gauss_n3_check(4).is_err());
    }

    #[test]
    fn cache_memoizes() {
        let cache = ClassNumberCache::new();
        assert!(cache.is_empty());
        assert_eq!(cache.h(-44).unwrap(), 3);
        assert_eq!(cache.hurwitz(12), Rat::new(4, 3));
        assert_eq!(cache.h_entries(), vec![(-44, 3)]);
        assert_eq!(cache.hurwitz_entries(), vec![(12, Rat::new(4, 3))]);
        assert!(cache.h(-5).is_err());
    }
}
