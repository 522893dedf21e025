//! Closed forms and bounds for collision counts.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::exact::{rat, rat_pow};
use super::formulas::{one_minus_inv, valuation};
use super::serialize_display;
use crate::error::{usage, Result};
use crate::field::{is_prime, prime_power};

/// What is known in closed form about `t = #(D_{lm,l} ∩ D_{lm,m})`,
/// restricted to non-Frobenius polynomials when `p | lm`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntersectionFormula {
    Exact {
        #[serde(serialize_with = "serialize_display")]
        value: BigUint,
    },
    Bounds {
        #[serde(serialize_with = "serialize_opt_display")]
        lower: Option<BigRational>,
        #[serde(serialize_with = "serialize_display")]
        upper: BigRational,
    },
    Unsupported {
        reason: String,
    },
}

fn serialize_opt_display<S: serde::Serializer>(
    v: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl IntersectionFormula {
    /// Whether `t` (counted over all of degree `d`) is consistent.
    pub fn admits(&self, t: &BigUint) -> Option<bool> {
        let t = BigRational::from_integer(t.clone().into());
        match self {
            IntersectionFormula::Exact { value } => {
                Some(BigRational::from_integer(value.clone().into()) == t)
            }
            IntersectionFormula::Bounds { lower, upper } => {
                Some(lower.as_ref().map_or(true, |lo| lo <= &t) && t <= *upper)
            }
            IntersectionFormula::Unsupported { .. } => None,
        }
    }
}

fn q_big(q: u64, k: u32) -> BigUint {
    BigUint::from(q).pow(k)
}

/// Lower bound factor `1 - q^-1(1 + q^(-p+2)(1 - q^-1)²/(1 - q^-p))`
/// shared by the wild split estimates.
fn wild_factor(q: u64, p: u64) -> BigRational {
    let omi = one_minus_inv(q);
    rat(1)
        - rat_pow(q, -1)
            * (rat(1)
                + rat_pow(q, -(p as i64) + 2) * &omi * &omi / (rat(1) - rat_pow(q, -(p as i64))))
}

/// Closed form for `#(D_{lm,l} ∩ D_{lm,m})` over `F_q`, `m > l ≥ 2`.
///
/// * `p ∤ lm`: exact, with `i = gcd(l, m)` and `s = ⌊m/l⌋`.
/// * `gcd(l, m) = 1` and `p | l`: no non-Frobenius members.
/// * `gcd(l, m) = 1` and `p | m`: an upper bound.
/// * `l` prime, `l | m`, `p | lm`: upper and, where available, lower bounds.
pub fn intersection_count_exact(q: u64, l: usize, m: usize) -> Result<IntersectionFormula> {
    let (p, _) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
    let p = p as usize;
    if l < 2 || m <= l {
        return Err(usage(format!("need m > l ≥ 2, got l = {l}, m = {m}")));
    }
    let d = l * m;
    let s = (m / l) as i64;
    let i = l.gcd(&m);
    if d % p != 0 {
        let value = if m % l == 0 {
            q_big(q, (2 * l as i64 + s - 2) as u32) * (q - 1)
        } else {
            let second = if l / i == 2 {
                BigUint::from(0u32)
            } else {
                BigUint::from(q * q - q)
            };
            q_big(q, 2 * i as u32 - 1) * (q - 1) * (q_big(q, s as u32 + 1) + second)
        };
        return Ok(IntersectionFormula::Exact { value });
    }
    let omi = one_minus_inv(q);
    if i == 1 {
        if l % p == 0 {
            return Ok(IntersectionFormula::Exact {
                value: BigUint::from(0u32),
            });
        }
        let upper = (rat_pow(q, s + 3) - rat_pow(q, s / p as i64 + 3)) * &omi;
        return Ok(IntersectionFormula::Bounds { lower: None, upper });
    }
    if !(is_prime(l as u64) && m % l == 0) {
        return Ok(IntersectionFormula::Unsupported {
            reason: format!("no closed form for l = {l}, m = {m} over GF({q})"),
        });
    }
    let (pi, li, mi) = (p as i64, l as i64, m as i64);
    let upper = if l % p != 0 {
        rat_pow(q, mi + Integer::div_ceil(&li, &pi)) * &omi
    } else {
        let c = Integer::div_ceil(&(mi - li + 1), &li);
        rat_pow(q, mi + li - c + Integer::div_ceil(&c, &pi)) * &omi
    };
    let lower = if l != p {
        let dd = valuation(m as u64, p as u64);
        let r = (p as i64).pow(dd);
        let base = rat_pow(q, 2 * li + mi / li - 1) * &omi;
        let wf = wild_factor(q, p as u64);
        let tail = rat(1) - rat_pow(q, -(mi / li));
        if (r - 1) % li != 0 {
            Some(base * tail * wf)
        } else {
            let mu = (r - 1).gcd(&li);
            let r_star = (r - 1) / mu;
            let sub = rat_pow(q, -(mi / li) - r_star + 2)
                * &omi
                * &omi
                * (rat(1) - rat_pow(q, -r_star * (mu - 1)))
                / (rat(1) - rat_pow(q, -r_star))
                * (rat(1) + rat_pow(q, -r_star * (pi - 2)));
            Some(base * (wf * tail - sub))
        }
    } else {
        let cofactor = m / p;
        let small_prime = (2..p).any(|k| m % k == 0);
        (cofactor % p != 0 && !small_prime).then(|| {
            rat_pow(q, 2 * pi + mi / pi - 1) * &omi * &omi * (rat(1) - rat_pow(q, -pi + 1))
        })
    };
    Ok(IntersectionFormula::Bounds { lower, upper })
}

/// `2q⁴`: the refined cap on monic original members of
/// `D_{12,2} ∩ D_{12,6}` in characteristic 2.
pub fn degree_twelve_char_two_cap(q: u64) -> BigUint {
    BigUint::from(2u32) * q_big(q, 4)
}

/// Which of the three lower bounds for wild splits applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WildBoundCase {
    /// `r ≠ m` and `gcd(r - 1, m) = 1`.
    Coprime,
    /// `r ≠ m` in general.
    General,
    /// `r = m`.
    Balanced,
}

/// Lower bound on the number of non-Frobenius polynomials `g∘h` over `F_q`
/// with `deg g = l = a·r`, `r = p^d_exp`, `p ∤ a`, and `deg h = m`.
pub fn lower_bound_wild(
    q: u64,
    d_exp: u32,
    a: u64,
    m: u64,
) -> Result<(WildBoundCase, BigRational)> {
    let (p, e) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
    let p64 = p as u64;
    if d_exp == 0 || a == 0 || a % p64 == 0 || m < 2 {
        return Err(usage(format!(
            "need r = p^k with k ≥ 1, p ∤ a and m ≥ 2; got k = {d_exp}, a = {a}, m = {m}"
        )));
    }
    let r = p64.pow(d_exp);
    let l = (a * r) as i64;
    let (mi, pi) = (m as i64, p as i64);
    let omi = one_minus_inv(q);
    let lead = rat_pow(q, l + mi) * &omi;
    let wf = wild_factor(q, p64);
    let tail = rat(1) - rat_pow(q, -l);
    if r == m {
        let z = p64.pow(d_exp.gcd(&e)) as i64;
        let one_minus_qp = rat(1) - rat_pow(q, -pi);
        let bracket = BigRational::new(1.into(), 2.into())
            + (rat(1) + rat_pow(q, -1)) / rat(2 * z + 2)
            + rat_pow(q, -1) / rat(2)
            - rat_pow(q, -l) * (rat(1) - rat_pow(q, -pi + 1)) / &one_minus_qp
            - rat_pow(q, -pi + 1) * &omi / &one_minus_qp;
        return Ok((WildBoundCase::Balanced, lead * &omi * bracket));
    }
    let mu = (r - 1).gcd(&m) as i64;
    if mu == 1 {
        return Ok((WildBoundCase::Coprime, lead * tail * wf));
    }
    let r_star = (r as i64 - 1) / mu;
    let c = d_exp.gcd(&e) as i64;
    let p_c = rat_pow(p64, -c);
    let sub = rat_pow(q, -l - r_star + 2)
        * &p_c
        * &omi
        * &omi
        * (rat(1) - rat_pow(q, -r_star * (mu - 1)))
        / ((rat(1) - &p_c) * (rat(1) - rat_pow(q, -r_star)))
        * (rat(1) + rat_pow(q, -r_star * (pi - 2)));
    Ok((WildBoundCase::General, lead * (wf * tail - sub)))
}
