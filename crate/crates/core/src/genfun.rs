//! Both sides of the exact single-variable `q`-series identities, expanded
//! as [`IntSeries`] and compared coefficient by coefficient.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::counts;
use crate::error::{Error, Result};
use crate::series::{neg_pochhammer, pochhammer, theta_signed, IntSeries, Mismatch};

/// Stable identifiers for the series identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum IdentityId {
    /// Andrews's Lambert-type expansion of `Σ r_3(n)(-q)^n`.
    Andrews516,
    /// The lattice-sum expansion of `R_3(q)` obtained at `x = y = z → -1`.
    GaussGen,
    /// The sum-of-three-triangular-numbers expansion.
    Eyphka,
    /// `r_4(n) = 8 Σ_{4∤d|n} d`.
    Jacobi4,
    /// `r_2(n) = 4(d_1(n) - d_3(n))`.
    TwoSquare,
    /// `Σ (-1)^m q^{m²} = (q;q)_∞ / (-q;q)_∞`.
    TripleProduct,
    /// Eta-quotient forms of the limiting values.
    EtaLimits,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::Andrews516,
        IdentityId::GaussGen,
        IdentityId::Eyphka,
        IdentityId::Jacobi4,
        IdentityId::TwoSquare,
        IdentityId::TripleProduct,
        IdentityId::EtaLimits,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Andrews516 => "andrews516",
            IdentityId::GaussGen => "gauss-gen",
            IdentityId::Eyphka => "eyphka",
            IdentityId::Jacobi4 => "jacobi4",
            IdentityId::TwoSquare => "two-square",
            IdentityId::TripleProduct => "triple-product",
            IdentityId::EtaLimits => "eta-limits",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown series identity '{s}'")))
    }
}

/// Outcome of one coefficient-by-coefficient comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheckResult {
    pub identity_id: IdentityId,
    /// Which sub-identity, for checks that bundle several.
    pub label: &'static str,
    pub order: usize,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
}

impl IdentityCheckResult {
    pub fn compare(
        identity_id: IdentityId,
        label: &'static str,
        lhs: &IntSeries,
        rhs: &IntSeries,
        order: usize,
    ) -> Result<Self> {
        let first_mismatch = lhs.equal_to_order(rhs, order)?;
        Ok(IdentityCheckResult {
            identity_id,
            label,
            order,
            passed: first_mismatch.is_none(),
            first_mismatch,
        })
    }
}

/// `R_s(q) = Σ r_s(n)(-q)^n`, as the `s`-th power of the signed theta series.
pub fn series_r(s: u32, order: usize) -> IntSeries {
    assert!((2..=4).contains(&s), "R_s is built for s in 2..=4");
    theta_signed(order).pow(s as i64).expect("non-negative power")
}

/// `(Σ_{n≥0} q^{n(n+1)/2})³`, checked against `((q²;q²)²/(q;q))³`.
pub fn series_triangular3(order: usize) -> Result<IntSeries> {
    let mut tri = IntSeries::zero(order);
    let mut k = 0usize;
    while k * (k + 1) / 2 <= order {
        tri.add_small(k * (k + 1) / 2, 1);
        k += 1;
    }
    let cube = tri.pow(3)?;
    let eta = pochhammer(2, 2, 6, order).mul(&pochhammer(1, 1, -3, order));
    if let Some(m) = cube.equal_to_order(&eta, order)? {
        return Err(Error::CrossCheck(format!("triangular cube vs eta quotient at {m}")));
    }
    Ok(cube)
}

/// `1 + 4 Σ_{n≥1} (-1)^n q^n/(1+q^n) - 2 Σ_{n≥1, |j|<n} q^{n²-j²}(1-q^n)(-1)^j/(1+q^n)`.
///
/// `q^n/(1+q^n) = Σ_{k≥1} (-1)^{k-1} q^{nk}` and
/// `(1-q^n)/(1+q^n) = 1 + 2 Σ_{k≥1} (-1)^k q^{nk}`, both cut at `nk ≤ order`.
pub fn series_andrews_rhs(order: usize) -> IntSeries {
    let mut out = IntSeries::one(order);
    for n in 1..=order {
        let outer = if n % 2 == 0 { 4 } else { -4 };
        let mut k = 1;
        while n * k <= order {
            let inner = if k % 2 == 1 { 1 } else { -1 };
            out.add_small(n * k, outer * inner);
            k += 1;
        }
    }
    // the smallest exponent n² - j² with |j| < n is 2n - 1
    let mut n = 1usize;
    while 2 * n - 1 <= order {
        for j in -(n as i64 - 1)..=(n as i64 - 1) {
            let base = n * n - (j * j) as usize;
            if base > order {
                continue;
            }
            let sj: i64 = if j.rem_euclid(2) == 0 { -2 } else { 2 };
            out.add_small(base, sj);
            let mut k = 1;
            while base + n * k <= order {
                let sk = if k % 2 == 0 { 2 } else { -2 };
                out.add_small(base + n * k, sj * sk);
                k += 1;
            }
        }
        n += 1;
    }
    out
}

fn parity(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `1 + 6 Σ (-q)^{rs}(-1)^{rs+r+s+1} + 4 Σ (-q)^{m}(-1)^{m+r+s+t+1}` with
/// `m = rs + rt + st`, summed over `r, s, t ≥ 1` directly.
pub fn series_gauss_gen_rhs(order: usize) -> IntSeries {
    let mut out = IntSeries::one(order);
    for r in 1..=order {
        for s in 1..=order / r {
            let e = r * s;
            out.add_small(e, 6 * parity(e) * parity(e + r + s + 1));
        }
    }
    for r in 1..=order {
        for s in 1..=order {
            if r * s + r + s > order {
                break;
            }
            for t in 1..=order {
                let m = r * s + r * t + s * t;
                if m > order {
                    break;
                }
                out.add_small(m, 4 * parity(m) * parity(m + r + s + t + 1));
            }
        }
    }
    out
}

/// `1 + 3 Σ_{r≥1} q^r + 3 Σ_{r,s≥1} q^{2rs+r+s} + (Σ_{r,s,t>0} + Σ_{r,s,t<0}) q^{2rs+2rt+2st+r+s+t}`.
///
/// The negative branch is summed as `r, s, t > 0` with exponent
/// `2(rs+rt+st) - (r+s+t)`, which is increasing in each index.
pub fn series_eyphka_rhs(order: usize) -> IntSeries {
    let mut out = IntSeries::one(order);
    for r in 1..=order {
        out.add_small(r, 3);
    }
    for r in 1..=order {
        for s in 1..=order {
            let e = 2 * r * s + r + s;
            if e > order {
                break;
            }
            out.add_small(e, 3);
        }
    }
    for sign in [1i64, -1] {
        for r in 1..=order as i64 {
            if 4 * r + 2 + sign * (r + 2) > order as i64 {
                break;
            }
            for s in 1..=order as i64 {
                let first = 2 * (r * s + r + s) + sign * (r + s + 1);
                if first > order as i64 {
                    break;
                }
                for t in 1..=order as i64 {
                    let e = 2 * (r * s + r * t + s * t) + sign * (r + s + t);
                    if e > order as i64 {
                        break;
                    }
                    out.add_small(e as usize, 1);
                }
            }
        }
    }
    out
}

/// The eta-quotient identities the limiting computations reduce to.
pub fn series_eta_limit_checks(order: usize) -> Result<Vec<IdentityCheckResult>> {
    let r3 = series_r(3, order);
    let q2 = |e| pochhammer(2, 2, e, order);
    let q1 = |e| pochhammer(1, 1, e, order);
    let mq = |e| neg_pochhammer(1, 1, e, order);

    let theta_quotient = q2(3).mul(&mq(-6));
    let appell_lerch = q2(2).mul(&q1(2)).mul(&mq(-4)).mul(&q2(-1));
    let triangular = q2(6).mul(&q1(-3));
    let tri3 = series_triangular3(order)?;

    Ok(vec![
        IdentityCheckResult::compare(
            IdentityId::EtaLimits,
            "(q2;q2)^3/(-q;q)^6 = R3",
            &theta_quotient,
            &r3,
            order,
        )?,
        IdentityCheckResult::compare(
            IdentityId::EtaLimits,
            "(q2;q2)^2 (q;q)^2/((-q;q)^4 (q2;q2)) = R3",
            &appell_lerch,
            &r3,
            order,
        )?,
        IdentityCheckResult::compare(
            IdentityId::EtaLimits,
            "(q2;q2)^6/(q;q)^3 = sum r3tri(n) q^n",
            &triangular,
            &tri3,
            order,
        )?,
    ])
}

fn signed_series(order: usize, f: impl Fn(u64) -> i64) -> IntSeries {
    let mut out = IntSeries::one(order);
    for n in 1..=order {
        *out.coeff_mut(n) = BigInt::from(parity(n) * f(n as u64));
    }
    out
}

/// Runs one series identity at `order`.
pub fn check_identity(id: IdentityId, order: usize) -> Result<Vec<IdentityCheckResult>> {
    let single = |label, lhs: IntSeries, rhs: IntSeries| {
        IdentityCheckResult::compare(id, label, &lhs, &rhs, order).map(|r| vec![r])
    };
    match id {
        IdentityId::Andrews516 => single("R3 = andrews rhs", series_r(3, order), series_andrews_rhs(order)),
        IdentityId::GaussGen => single("R3 = lattice sums", series_r(3, order), series_gauss_gen_rhs(order)),
        IdentityId::Eyphka => {
            single("triangular cube = eyphka rhs", series_triangular3(order)?, series_eyphka_rhs(order))
        }
        IdentityId::Jacobi4 => single(
            "R4 = 8 sigma_no4",
            series_r(4, order),
            signed_series(order, |n| 8 * counts::sigma_no4(n) as i64),
        ),
        IdentityId::TwoSquare => single(
            "R2 = 4(d1 - d3)",
            series_r(2, order),
            signed_series(order, |n| {
                4 * (counts::divisor_count_mod4(n, 1) as i64 - counts::divisor_count_mod4(n, 3) as i64)
            }),
        ),
        IdentityId::TripleProduct => single(
            "theta = (q;q)/(-q;q)",
            theta_signed(order),
            pochhammer(1, 1, 1, order).mul(&neg_pochhammer(1, 1, -1, order)),
        ),
        IdentityId::EtaLimits => series_eta_limit_checks(order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(s: &IntSeries, upto: usize) -> Vec<i64> {
        (0..=upto).map(|k| i64::try_from(s.coeff(k)).unwrap()).collect()
    }

    #[test]
    fn r_series_examples() {
        assert_eq!(coeffs(&series_r(3, 10), 3), vec![1, -6, 12, -8]);
        assert_eq!(coeffs(&series_r(2, 4), 1), vec![1, -4]);
        assert_eq!(coeffs(&series_r(4, 4), 0), vec![1]);
    }

    #[test]
    fn triangular_examples() {
        let t = series_triangular3(20).unwrap();
        assert_eq!(coeffs(&t, 3), vec![1, 3, 3, 4]);
    }

    #[test]
    fn andrews_examples() {
        let a = series_andrews_rhs(10);
        assert_eq!(coeffs(&a, 2), vec![1, -6, 12]);
        assert_eq!(series_andrews_rhs(0), IntSeries::one(0));
    }

    #[test]
    fn gauss_gen_examples() {
        let g = series_gauss_gen_rhs(10);
        assert_eq!(coeffs(&g, 1), vec![1, -6]);
    }

    #[test]
    fn eyphka_examples() {
        let e = series_eyphka_rhs(10);
        assert_eq!(coeffs(&e, 2), vec![1, 3, 3]);
        // q^3 collects 3q^3 from the linear sum and 1 from r = s = t = -1;
        // every other term starts at q^4 or later
        assert_eq!(coeffs(&e, 3), vec![1, 3, 3, 4]);
    }

    #[test]
    fn eta_limits_pass_and_harness_detects_injection() {
        let results = series_eta_limit_checks(60).unwrap();
        assert_eq!(results.len(), 3);
        assert!(results.iter().all(|r| r.passed && r.first_mismatch.is_none()));

        let r3 = series_r(3, 0);
        let mut broken = r3.clone();
        broken.add_small(0, 1);
        let res = IdentityCheckResult::compare(IdentityId::EtaLimits, "inject", &r3, &broken, 0).unwrap();
        assert!(!res.passed);
        assert_eq!(res.first_mismatch.unwrap().exponent, 0);
    }

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("bogus".parse::<IdentityId>().is_err());
    }

    #[test]
    fn all_identities_small_order() {
        for id in IdentityId::ALL {
            for r in check_identity(id, 80).unwrap() {
                assert!(r.passed, "{id} {}: {:?}", r.label, r.first_mismatch);
            }
        }
    }
}
