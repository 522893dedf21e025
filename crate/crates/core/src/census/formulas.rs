use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use serde::Serialize;

use super::exact::{rat, rat_pow, PowerSum, QScale};
use super::serialize_display;
use crate::error::{usage, Result};
use crate::field::prime_power;

/// Divisors `e` of `d` with `1 < e < d`, ascending.
pub fn proper_divisors(d: usize) -> Vec<usize> {
    (2..d).filter(|e| d % e == 0).collect()
}

/// Exponent of the prime `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Field and degree parameters shared by the counting formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusFormulaInputs {
    pub q: u64,
    pub p: u32,
    pub e: u32,
    pub d: usize,
    /// Smallest prime divisor of `d`.
    pub l: usize,
    /// Second smallest divisor strictly between 1 and `d`, or 1 when `d` is
    /// `l` or `l²`.
    pub l2: usize,
    /// `⌊d/l²⌋`.
    pub s: usize,
    /// `(d - l·l2)(l2 - l)/(l·l2)`.
    #[serde(serialize_with = "serialize_display")]
    pub c: Ratio<i64>,
}

impl CensusFormulaInputs {
    pub fn new(q: u64, d: usize) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))?;
        if d < 2 {
            return Err(usage(format!("degree {d} is below 2")));
        }
        let divisors = proper_divisors(d);
        let l = divisors.first().copied().unwrap_or(d);
        let l2 = if d == l * l {
            1
        } else {
            divisors.get(1).copied().unwrap_or(1)
        };
        let c = Ratio::new(
            (d as i64 - (l * l2) as i64) * (l2 as i64 - l as i64),
            (l * l2) as i64,
        );
        Ok(CensusFormulaInputs {
            q,
            p,
            e,
            d,
            l,
            l2,
            s: d / (l * l),
            c,
        })
    }

    pub fn scale(&self) -> QScale {
        QScale {
            p: self.p,
            e: self.e,
        }
    }

    pub fn is_prime_degree(&self) -> bool {
        self.l == self.d
    }

    pub fn is_l_squared(&self) -> bool {
        self.d == self.l * self.l
    }

    pub fn is_l_cubed(&self) -> bool {
        self.d == self.l * self.l * self.l
    }

    /// Whether `p` divides `d`.
    pub fn wild(&self) -> bool {
        self.d % self.p as usize == 0
    }
}

/// The main term `α_d` of the count of decomposables: 0 for prime `d`,
/// `q^(2l)(1 - 1/q)` for `d = l²` and `2q^(l+d/l)(1 - 1/q)` otherwise.
pub fn alpha(q: u64, d: usize) -> Result<BigUint> {
    Ok(alpha_of(&CensusFormulaInputs::new(q, d)?))
}

pub fn alpha_of(inputs: &CensusFormulaInputs) -> BigUint {
    let q = BigUint::from(inputs.q);
    let (l, d) = (inputs.l as u32, inputs.d as u32);
    if inputs.is_prime_degree() {
        BigUint::zero()
    } else if inputs.is_l_squared() {
        q.pow(2 * l - 1) * (inputs.q - 1)
    } else {
        q.pow(l + d / l - 1) * (inputs.q - 1) * 2u32
    }
}

/// Relative error term `β_d`: zero for `d ∈ {l, l², l³, l·l2}` and
/// `q^(-c)/(1 - 1/q)` otherwise. The exponent `c` may be fractional.
pub fn beta(q: u64, d: usize) -> Result<PowerSum> {
    Ok(beta_of(&CensusFormulaInputs::new(q, d)?))
}

pub fn beta_of(inputs: &CensusFormulaInputs) -> PowerSum {
    let sc = inputs.scale();
    let (l, d) = (inputs.l, inputs.d);
    if d == l || d == l * l || d == l * l * l || d == l * inputs.l2 {
        return PowerSum::zero(inputs.p);
    }
    let q = inputs.q as i64;
    sc.q_pow(BigRational::new(q.into(), (q - 1).into()), -inputs.c)
}

/// `β*_d = q^(-l - d/l + s + 3)`.
pub fn beta_star(q: u64, d: usize) -> Result<BigRational> {
    Ok(beta_star_of(&CensusFormulaInputs::new(q, d)?))
}

pub fn beta_star_of(inputs: &CensusFormulaInputs) -> BigRational {
    let (l, d, s) = (inputs.l as i64, inputs.d as i64, inputs.s as i64);
    rat_pow(inputs.q, -l - d / l + s + 3)
}

/// Dimension `l + d/l` of the variety of decomposables, or `None` when `d`
/// is prime and there are no decomposables.
pub fn dim_decomposables(d: usize) -> Option<usize> {
    let l = proper_divisors(d).first().copied()?;
    Some(l + d / l)
}

/// Number `q^(d/p+1)(1 - 1/q)` of Frobenius compositions of degree `d`,
/// or `None` when `p ∤ d` (there are none).
pub fn frobenius_count(q: u64, d: usize) -> Result<Option<BigUint>> {
    let inputs = CensusFormulaInputs::new(q, d)?;
    if !inputs.wild() {
        return Ok(None);
    }
    let k = d / inputs.p as usize;
    if k < 2 {
        return Ok(Some(BigUint::zero()));
    }
    Ok(Some(BigUint::from(q).pow(k as u32) * (q - 1)))
}

/// `1 - 1/q` as an exact rational.
pub(crate) fn one_minus_inv(q: u64) -> BigRational {
    rat(1) - rat_pow(q, -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        let a = |q, d| alpha(q, d).unwrap();
        assert_eq!(a(2, 4), 8u32.into());
        assert_eq!(a(2, 12), 256u32.into());
        assert_eq!(a(3, 9), 486u32.into());
        assert_eq!(a(5, 25), 7_812_500u32.into());
        assert_eq!(a(8, 12), 29_360_128u32.into());
        assert_eq!(a(256, 4), 4_278_190_080u64.into());
        assert_eq!(a(7, 7), 0u32.into());
    }

    #[test]
    fn inputs_and_betas() {
        let i = CensusFormulaInputs::new(2, 12).unwrap();
        assert_eq!((i.l, i.l2, i.s, i.c), (2, 3, 3, Ratio::from_integer(1)));
        assert_eq!(beta(2, 12).unwrap().to_rational(), Some(rat(1)));
        let i = CensusFormulaInputs::new(3, 9).unwrap();
        assert_eq!((i.l, i.l2, i.s), (3, 1, 1));
        assert_eq!(beta(3, 9).unwrap(), PowerSum::zero(3));
        assert_eq!(beta_star(2, 6).unwrap(), rat_pow(2, -1));
        let i = CensusFormulaInputs::new(2, 8).unwrap();
        assert_eq!((i.l2, i.c), (4, Ratio::new(0, 1)));
        assert_eq!(beta(2, 8).unwrap(), PowerSum::zero(2));
    }

    #[test]
    fn c_is_integral_and_beta_shrinks() {
        for d in 4..400 {
            let i = CensusFormulaInputs::new(2, d).unwrap();
            assert!(i.c.is_integer(), "d = {d}");
        }
        let i = CensusFormulaInputs::new(2, 20).unwrap();
        assert_eq!((i.l2, i.c), (4, Ratio::from_integer(3)));
        assert_eq!(beta(2, 20).unwrap().to_rational(), Some(rat_pow(2, -2)));
    }

    #[test]
    fn dimension_and_frobenius() {
        assert_eq!(dim_decomposables(12), Some(8));
        assert_eq!(dim_decomposables(4), Some(4));
        assert_eq!(dim_decomposables(15), Some(8));
        assert_eq!(dim_decomposables(13), None);
        assert_eq!(frobenius_count(2, 4).unwrap(), Some(4u32.into()));
        assert_eq!(frobenius_count(3, 9).unwrap(), Some(54u32.into()));
        assert_eq!(frobenius_count(5, 12).unwrap(), None);
    }
}
