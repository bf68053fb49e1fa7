//! Brute-force arithmetic functions and the lattice-sum bookkeeping for
//! solutions of `rs + rt + st = n`.
//!
//! The `r_*` counters here are the independent oracles for every identity
//! check in the crate: they enumerate lattice points directly and share no
//! code with the series or class-number routines.

use num_integer::{Integer, Roots};

use crate::error::{Error, Result};

/// A solution of `rs + rt + st = n` with `r ≥ s ≥ t ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub r: u64,
    pub s: u64,
    pub t: u64,
}

impl Triple {
    pub fn new(r: u64, s: u64, t: u64) -> Option<Self> {
        (r >= s && s >= t && t >= 1).then_some(Triple { r, s, t })
    }

    pub fn value(&self) -> u64 {
        self.r * self.s + self.r * self.t + self.s * self.t
    }

    /// Number of ordered triples with this multiset of entries.
    pub fn permutations(&self) -> u64 {
        match (self.r == self.s, self.s == self.t) {
            (true, true) => 1,
            (false, false) => 6,
            _ => 3,
        }
    }

    fn parity_sign(&self) -> i64 {
        sign((self.r + self.s + self.t) as i64)
    }
}

/// Solution census for `rs + rt + st = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionCounts {
    pub n: u64,
    /// Ordered solutions `r, s, t ≥ 1`.
    pub total: u64,
    /// Solutions with `r > s > t > 0`.
    pub strict: u64,
    /// Solutions `r, t ≥ 1`, `r ≠ t` of `r² + 2rt = n`.
    pub two_equal: u64,
    /// Solutions `r ≥ 1` of `3r² = n`.
    pub all_equal: u64,
}

impl DecompositionCounts {
    pub fn is_consistent(&self) -> bool {
        self.total == 6 * self.strict + 3 * self.two_equal + self.all_equal
    }
}

#[inline]
fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn is_square(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Number of ordered integer `s`-tuples whose squares sum to `n`, signs
/// counted. `r_s(0) = 1`.
///
/// Loops over the first `s - 1` coordinates and tests whether the remainder
/// is a square.
pub fn r_squares(s: u32, n: u64) -> u64 {
    assert!((1..=4).contains(&s), "r_squares supports 1 ≤ s ≤ 4");
    fn go(s: u32, n: u64) -> u64 {
        if s == 1 {
            return match is_square(n) {
                Some(0) => 1,
                Some(_) => 2,
                None => 0,
            };
        }
        let m = n.sqrt();
        let mut total = go(s - 1, n);
        for x in 1..=m {
            total += 2 * go(s - 1, n - x * x);
        }
        total
    }
    go(s, n)
}

/// `r_s(n)` for every `0 ≤ n ≤ max`, by enumerating all lattice points in the
/// ball of radius `√max`.
pub fn r_squares_upto(s: u32, max: u64) -> Vec<u64> {
    assert!((1..=4).contains(&s), "r_squares_upto supports 1 ≤ s ≤ 4");
    let m = max.sqrt() as i64;
    let mut out = vec![0u64; max as usize + 1];
    fn walk(depth: u32, s: u32, acc: u64, max: u64, m: i64, out: &mut [u64]) {
        if depth == s {
            out[acc as usize] += 1;
            return;
        }
        for x in -m..=m {
            let next = acc + (x * x) as u64;
            if next <= max {
                walk(depth + 1, s, next, max, m, out);
            }
        }
    }
    walk(0, s, 0, max, m, &mut out);
    out
}

fn gcd3(x: i64, y: i64, z: i64) -> i64 {
    x.gcd(&y).gcd(&z)
}

/// Representations `n = x² + y² + z²` with `gcd(x, y, z) = 1`.
pub fn n3_primitive(n: u64) -> u64 {
    let m = n.sqrt() as i64;
    let mut count = 0;
    for x in -m..=m {
        for y in -m..=m {
            let rest = n as i64 - x * x - y * y;
            if rest < 0 {
                continue;
            }
            if let Some(z) = is_square(rest as u64) {
                let z = z as i64;
                if gcd3(x, y, z) == 1 {
                    count += if z == 0 { 1 } else { 2 };
                }
            }
        }
    }
    count
}

fn triangular_numbers(max: u64) -> Vec<u64> {
    (0u64..).map(|k| k * (k + 1) / 2).take_while(|&t| t <= max).collect()
}

/// Ordered triples of triangular numbers `0, 1, 3, 6, …` summing to `n`.
pub fn r_triangular3(n: u64) -> u64 {
    let tri = triangular_numbers(n);
    let mut count = 0;
    for &a in &tri {
        for &b in &tri {
            if a + b > n {
                break;
            }
            let c = n - a - b;
            // 8c + 1 is an odd square exactly when c is triangular
            if is_square(8 * c + 1).is_some() {
                count += 1;
            }
        }
    }
    count
}

/// `r_3Δ(n)` for all `0 ≤ n ≤ max` by full enumeration.
pub fn r_triangular3_upto(max: u64) -> Vec<u64> {
    let tri = triangular_numbers(max);
    let mut out = vec![0u64; max as usize + 1];
    for &a in &tri {
        for &b in &tri {
            if a + b > max {
                break;
            }
            for &c in &tri {
                let v = a + b + c;
                if v > max {
                    break;
                }
                out[v as usize] += 1;
            }
        }
    }
    out
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n.sqrt()).filter(move |d| n % d == 0).flat_map(move |d| {
        let e = n / d;
        if e == d {
            vec![d]
        } else {
            vec![d, e]
        }
    })
}

/// Number of divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    divisors(n).count() as u64
}

/// Number of divisors `d | n` with `d ≡ k (mod 4)`.
pub fn divisor_count_mod4(n: u64, k: u64) -> u64 {
    assert!(n >= 1);
    divisors(n).filter(|d| d % 4 == k % 4).count() as u64
}

/// Sum of the divisors of `n` not divisible by 4.
pub fn sigma_no4(n: u64) -> u64 {
    assert!(n >= 1);
    divisors(n).filter(|d| d % 4 != 0).sum()
}

/// `Σ_{rs = n} (-1)^{r+s}` over ordered pairs.
pub fn signed_pair_sum(n: u64) -> i64 {
    assert!(n >= 1);
    divisors(n).map(|r| sign((r + n / r) as i64)).sum()
}

/// Solutions of `rs + rt + st = n` with `r ≥ s ≥ t ≥ 1`, sorted.
///
/// For each `t ≤ √(n/3)` and `s ≥ t` with `s² + 2st ≤ n`, the remaining
/// entry is `r = (n - st)/(s + t)` when that division is exact.
pub fn sorted_triples(n: u64) -> Vec<Triple> {
    let mut out = Vec::new();
    let mut t = 1;
    while 3 * t * t <= n {
        let mut s = t;
        while s * s + 2 * s * t <= n {
            let (r, rem) = (n - s * t).div_rem(&(s + t));
            if rem == 0 && r >= s {
                out.push(Triple { r, s, t });
            }
            s += 1;
        }
        t += 1;
    }
    out.sort();
    out
}

/// `Σ (-1)^{r+s+t}` over ordered `r, s, t ≥ 1` with `rs + rt + st = n`.
pub fn signed_triple_sum(n: u64) -> i64 {
    assert!(n >= 1);
    sorted_triples(n)
        .iter()
        .map(|tr| tr.parity_sign() * tr.permutations() as i64)
        .sum()
}

/// The Andrews–Crandall expression for `r_3(n)`.
pub fn andrews_crandall_r3(n: u64) -> i64 {
    assert!(n >= 1);
    let eps = sign(n as i64 + 1);
    6 * eps * signed_pair_sum(n) + 4 * eps * signed_triple_sum(n)
}

/// All four solution counts by direct enumeration.
///
/// `total` is counted over ordered `(r, s)` with `t` solved, independently of
/// [`sorted_triples`].
pub fn decompose_solutions(n: u64) -> DecompositionCounts {
    assert!(n >= 1);
    let mut total = 0;
    let mut strict = 0;
    for r in 1..n {
        for s in 1..n {
            if r * s >= n {
                break;
            }
            let (t, rem) = (n - r * s).div_rem(&(r + s));
            if rem == 0 && t >= 1 {
                total += 1;
                if r > s && s > t {
                    strict += 1;
                }
            }
        }
    }
    let mut two_equal = 0;
    for r in 1..=n.sqrt() {
        for t in 1..n {
            let v = r * r + 2 * r * t;
            if v > n {
                break;
            }
            if v == n && r != t {
                two_equal += 1;
            }
        }
    }
    let all_equal = (n % 3 == 0 && is_square(n / 3).is_some_and(|r| r >= 1)) as u64;
    let counts = DecompositionCounts { n, total, strict, two_equal, all_equal };
    assert!(counts.is_consistent(), "decomposition identity failed at n = {n}: {counts:?}");
    counts
}

/// For `n ≡ 1, 2 (mod 4)`, checks that `(-1)^{n+1} Σ (-1)^{r+s+t}` equals
/// the unsigned number of ordered solutions.
pub fn parity_lemma_check(n: u64) -> Result<bool> {
    if !matches!(n % 4, 1 | 2) {
        return Err(Error::HypothesisViolated(format!("n = {n} is not 1 or 2 mod 4")));
    }
    let signed = sign(n as i64 + 1) * signed_triple_sum(n);
    Ok(signed == decompose_solutions(n).total as i64)
}

/// Which rewritten forms of `r_3(n)` apply to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropositionReport {
    pub n: u64,
    pub r3: u64,
    /// `(statement, value)` for every statement applicable to `n`.
    pub evaluations: Vec<(&'static str, i64)>,
}

impl PropositionReport {
    pub fn holds(&self) -> bool {
        self.evaluations.iter().all(|&(_, v)| v == self.r3 as i64)
    }
}

/// Evaluates every rewritten `r_3` formula that applies to `n`.
pub fn proposition_report(n: u64, r3: u64) -> PropositionReport {
    assert!(n >= 1);
    let dec = decompose_solutions(n);
    let mut evaluations = Vec::new();
    match n % 4 {
        1 => evaluations.push((
            "n = 4m+1",
            (6 * divisor_count(n) + 24 * dec.strict + 12 * dec.two_equal) as i64,
        )),
        2 => evaluations.push(("n = 4m+2", (12 * divisor_count(n / 2) + 24 * dec.strict) as i64)),
        _ => {}
    }
    let triple = signed_triple_sum(n);
    if n % 2 == 1 {
        evaluations.push(("n odd", 6 * divisor_count(n) as i64 + 4 * triple));
    } else {
        let k = n.trailing_zeros();
        let odd = n >> k;
        evaluations.push(("n even", 6 * (3 - k as i64) * divisor_count(odd) as i64 - 4 * triple));
    }
    PropositionReport { n, r3, evaluations }
}

/// Checks the applicable rewritten formulas against brute-force `r_3(n)`.
pub fn proposition_checks(n: u64) -> bool {
    proposition_report(n, r_squares(3, n)).holds()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_squares_examples() {
        assert_eq!(r_squares(3, 1), 6);
        assert_eq!(r_squares(3, 7), 0);
        assert_eq!(r_squares(3, 11), 24);
        for s in 1..=4 {
            assert_eq!(r_squares(s, 0), 1);
        }
        assert_eq!(r_squares(2, 5), 8);
        assert_eq!(r_squares(4, 1), 8);
    }

    #[test]
    fn tables_match_pointwise() {
        for s in 1..=4 {
            let table = r_squares_upto(s, 120);
            for n in 0..=120 {
                assert_eq!(table[n as usize], r_squares(s, n), "s={s} n={n}");
            }
        }
        let tri = r_triangular3_upto(300);
        for n in 0..=300 {
            assert_eq!(tri[n as usize], r_triangular3(n));
        }
    }

    #[test]
    fn n3_examples() {
        assert_eq!(n3_primitive(1), 6);
        assert_eq!(n3_primitive(4), 0);
        assert_eq!(n3_primitive(3), 8);
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(r_triangular3(0), 1);
        assert_eq!(r_triangular3(3), 4);
        assert_eq!(r_triangular3(1), 3);
        assert_eq!(r_triangular3(2), 3);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisor_count_mod4(5, 1), 2);
        assert_eq!(divisor_count_mod4(3, 3), 1);
        assert_eq!(
            r_squares(2, 5) as i64,
            4 * (divisor_count_mod4(5, 1) as i64 - divisor_count_mod4(5, 3) as i64)
        );
        assert_eq!(sigma_no4(1), 1);
        assert_eq!(8 * sigma_no4(1), r_squares(4, 1));
        assert_eq!(sigma_no4(4), 3);
        assert_eq!(sigma_no4(2), 3);
        assert_eq!(divisor_count(36), 9);
    }

    #[test]
    fn signed_sums() {
        assert_eq!(signed_pair_sum(1), 1);
        assert_eq!(signed_pair_sum(3), 2);
        assert_eq!(signed_pair_sum(2), -2);
        assert_eq!(signed_triple_sum(3), -1);
        assert_eq!(signed_triple_sum(1), 0);
        assert_eq!(signed_triple_sum(2), 0);
        // n = 11: sorted solutions (3,2,1) and (5,1,1)
        assert_eq!(sorted_triples(11), vec![Triple { r: 3, s: 2, t: 1 }, Triple { r: 5, s: 1, t: 1 }]);
        assert_eq!(signed_triple_sum(11), 6 + 3 * -1);
        assert_eq!(6 * signed_pair_sum(11) + 4 * signed_triple_sum(11), 24);
    }

    #[test]
    fn andrews_crandall_examples() {
        assert_eq!(andrews_crandall_r3(1), 6);
        assert_eq!(andrews_crandall_r3(3), 8);
        assert_eq!(andrews_crandall_r3(2), 12);
        for n in 1..300 {
            assert_eq!(andrews_crandall_r3(n), r_squares(3, n) as i64, "n={n}");
        }
    }

    #[test]
    fn decomposition_examples() {
        let d3 = decompose_solutions(3);
        assert_eq!((d3.total, d3.strict, d3.two_equal, d3.all_equal), (1, 0, 0, 1));
        let d11 = decompose_solutions(11);
        // (3,2,1) in 6 orders; (1,1,5) with r = s = 1, t = 5 in 3 orders
        assert_eq!((d11.total, d11.strict, d11.two_equal, d11.all_equal), (9, 1, 1, 0));
        let d1 = decompose_solutions(1);
        assert_eq!((d1.total, d1.strict, d1.two_equal, d1.all_equal), (0, 0, 0, 0));
    }

    #[test]
    fn brute_force_total_matches_sorted_enumeration() {
        for n in 1..400 {
            let from_sorted: u64 = sorted_triples(n).iter().map(Triple::permutations).sum();
            assert_eq!(from_sorted, decompose_solutions(n).total, "n={n}");
            assert!(sorted_triples(n).iter().all(|t| t.value() == n));
        }
    }

    #[test]
    fn parity_lemma() {
        assert!(parity_lemma_check(5).unwrap());
        assert!(parity_lemma_check(2).unwrap());
        assert!(parity_lemma_check(6).unwrap());
        assert!(matches!(parity_lemma_check(3), Err(Error::HypothesisViolated(_))));
        assert!(parity_lemma_check(8).is_err());
    }

    #[test]
    fn propositions() {
        let p5 = proposition_report(5, r_squares(3, 5));
        assert_eq!(p5.evaluations[0], ("n = 4m+1", 24));
        let p2 = proposition_report(2, r_squares(3, 2));
        assert_eq!(p2.evaluations[0], ("n = 4m+2", 12));
        let p9 = proposition_report(9, 30);
        assert_eq!(p9.evaluations, vec![("n = 4m+1", 30), ("n odd", 30)]);
        assert!(p9.holds());
        for n in 1..200 {
            assert!(proposition_checks(n), "n={n}");
        }
    }

    #[test]
    fn triple_permutations() {
        assert_eq!(Triple::new(3, 2, 1).unwrap().permutations(), 6);
        assert_eq!(Triple::new(5, 1, 1).unwrap().permutations(), 3);
        assert_eq!(Triple::new(2, 2, 1).unwrap().permutations(), 3);
        assert_eq!(Triple::new(1, 1, 1).unwrap().permutations(), 1);
        assert!(Triple::new(1, 2, 3).is_none());
    }
}
