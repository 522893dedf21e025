//! Exact sign tests for sums of rational powers of a prime.
//!
//! Bounds with exponents such as `d/l²` or `d/2` are not rational numbers, so
//! they cannot be compared as `BigRational`s. A sum `Σ c_i·p^(x_i)` with
//! rational `x_i` is a polynomial in `y = p^(1/D)` for the common denominator
//! `D`. Since `y^D - p` is irreducible over the rationals, such a sum is zero
//! exactly when every reduced coefficient vanishes; otherwise its sign is
//! settled by evaluating on shrinking dyadic intervals around `y`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Σ c·p^x` over rational coefficients `c` and rational exponents `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSum {
    p: u32,
    terms: Vec<(BigRational, Ratio<i64>)>,
}

/// Rational `n` as a `BigRational`.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `b^k` for a possibly negative integer `k`.
pub fn rat_pow(b: u64, k: i64) -> BigRational {
    let mag = BigInt::from(b).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

impl PowerSum {
    pub fn zero(p: u32) -> Self {
        PowerSum {
            p,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u32, c: BigRational) -> Self {
        Self::term(p, c, Ratio::from_integer(0))
    }

    /// The single term `c·p^x`.
    pub fn term(p: u32, c: BigRational, x: Ratio<i64>) -> Self {
        let mut s = PowerSum {
            p,
            terms: vec![(c, x)],
        };
        s.normalize();
        s
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> &[(BigRational, Ratio<i64>)] {
        &self.terms
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut s = self.clone();
        for t in &mut s.terms {
            t.0 = &t.0 * c;
        }
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.terms.sort_by_key(|t| t.1);
        let mut merged: Vec<(BigRational, Ratio<i64>)> = Vec::with_capacity(self.terms.len());
        for (c, x) in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.1 == x => last.0 += c,
                _ => merged.push((c, x)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.terms = merged;
    }

    /// The exact value when every exponent is an integer.
    pub fn to_rational(&self) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (c, x) in &self.terms {
            if !x.is_integer() {
                return None;
            }
            acc += c * rat_pow(self.p as u64, x.to_integer());
        }
        Some(acc)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(c, x)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                c * (self.p as f64).powf(*x.numer() as f64 / *x.denom() as f64)
            })
            .sum()
    }

    /// Sign of the sum relative to zero.
    pub fn signum(&self) -> Ordering {
        if self.terms.is_empty() {
            return Ordering::Equal;
        }
        let den = self
            .terms
            .iter()
            .fold(1i64, |acc, (_, x)| acc.lcm(x.denom()));
        let ks: Vec<i64> = self
            .terms
            .iter()
            .map(|(_, x)| x.numer() * (den / x.denom()))
            .collect();
        let kmin = *ks.iter().min().expect("nonempty");
        let width = den as usize;
        let mut reduced = vec![BigRational::zero(); width];
        for ((c, _), k) in self.terms.iter().zip(&ks) {
            let u = (k - kmin) as u64;
            let lift = BigInt::from(self.p).pow((u / den as u64) as u32);
            reduced[(u % den as u64) as usize] += c * BigRational::from_integer(lift);
        }
        let common = reduced
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coeffs: Vec<BigInt> = reduced
            .iter()
            .map(|c| (c * BigRational::from_integer(common.clone())).to_integer())
            .collect();
        if coeffs.iter().all(Zero::is_zero) {
            return Ordering::Equal;
        }
        if width == 1 {
            return if coeffs[0].is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let mut prec: u64 = 32;
        loop {
            let scaled = BigUint::from(self.p) << (prec as usize * width);
            let lo = BigInt::from(scaled.nth_root(width as u32));
            let hi = &lo + BigInt::one();
            let (mut low_sum, mut high_sum) = (BigInt::zero(), BigInt::zero());
            for (j, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let shift = prec as usize * (width - 1 - j);
                let at_lo = (a * lo.pow(j as u32)) << shift;
                let at_hi = (a * hi.pow(j as u32)) << shift;
                if a.is_positive() {
                    low_sum += at_lo;
                    high_sum += at_hi;
                } else {
                    low_sum += at_hi;
                    high_sum += at_lo;
                }
            }
            if low_sum.is_positive() {
                return Ordering::Greater;
            }
            if high_sum.is_negative() {
                return Ordering::Less;
            }
            prec *= 2;
        }
    }

    /// Compares `self` with `other`.
    pub fn cmp_exact(&self, other: &PowerSum) -> Ordering {
        (self - other).signum()
    }
}

impl Add<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: &PowerSum) -> PowerSum {
        assert_eq!(self.p, rhs.p, "power sums over different primes");
        let mut s = self.clone();
        s.terms.extend(rhs.terms.iter().cloned());
        s.normalize();
        s
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        self.scale(&rat(-1))
    }
}

impl Sub<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: &PowerSum) -> PowerSum {
        self + &-rhs
    }
}

impl Mul<&PowerSum> for &PowerSum {
    type Output = PowerSum;
    fn mul(self, rhs: &PowerSum) -> PowerSum {
        assert_eq!(self.p, rhs.p, "power sums over different primes");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                terms.push((a * b, x + y));
            }
        }
        let mut s = PowerSum { p: self.p, terms };
        s.normalize();
        s
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<PowerSum> for PowerSum {
            type Output = PowerSum;
            fn $m(self, rhs: PowerSum) -> PowerSum {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        -&self
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, x)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let c = c.abs();
            if x.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            if x.is_integer() {
                write!(f, "{}^{}", self.p, x)?;
            } else {
                write!(f, "{}^({})", self.p, x)?;
            }
        }
        Ok(())
    }
}

/// Builds power sums in terms of `q = p^e`.
#[derive(Clone, Copy, Debug)]
pub struct QScale {
    pub p: u32,
    pub e: u32,
}

impl QScale {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }

    /// `c·q^x`.
    pub fn q_pow(&self, c: BigRational, x: Ratio<i64>) -> PowerSum {
        PowerSum::term(self.p, c, x * self.e as i64)
    }

    /// `q^k` for an integer `k`.
    pub fn q_int(&self, k: i64) -> PowerSum {
        self.q_pow(rat(1), Ratio::from_integer(k))
    }

    pub fn constant(&self, c: BigRational) -> PowerSum {
        PowerSum::constant(self.p, c)
    }

    pub fn int(&self, n: i64) -> PowerSum {
        self.constant(rat(n))
    }
}

/// Compares `c·q^(2√d)` with the rational `other`, for `c > 0`.
pub fn cmp_sqrt_power(q: u64, d: u64, c: &BigRational, other: &BigRational) -> Ordering {
    assert!(c.is_positive(), "coefficient must be positive");
    if !other.is_positive() {
        return Ordering::Greater;
    }
    let target = other / c;
    let root = d.sqrt();
    if root * root == d {
        return rat_pow(q, 2 * root as i64).cmp(&target);
    }
    let (num, den) = (target.numer().clone(), target.denom().clone());
    let qb = BigInt::from(q);
    let mut bits = 4u32;
    loop {
        let b = 1u64 << bits;
        let a_lo = (BigUint::from(d) * BigUint::from(b).pow(2)).sqrt();
        let a_lo = a_lo.to_u64().expect("small");
        let rhs = num.pow(b as u32);
        let den_b = den.pow(b as u32);
        if qb.pow((2 * a_lo) as u32) * &den_b >= rhs {
            return Ordering::Greater;
        }
        if qb.pow((2 * (a_lo + 1)) as u32) * &den_b <= rhs {
            return Ordering::Less;
        }
        bits += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn integer_sums_are_exact() {
        let s = PowerSum::term(2, rat(3), r(2, 1)) - PowerSum::constant(2, rat(12));
        assert_eq!(s.signum(), Ordering::Equal);
        assert_eq!(s.to_rational(), Some(rat(0)));
        let t = PowerSum::term(3, rat(1), r(-1, 1)) - PowerSum::term(3, rat(1), r(-2, 1));
        assert_eq!(t.signum(), Ordering::Greater);
    }

    #[test]
    fn irrational_powers() {
        // 2^(1/2) vs 1.4142 and 1.4143.
        let root2 = PowerSum::term(2, rat(1), r(1, 2));
        let lo = PowerSum::constant(2, BigRational::new(14142.into(), 10000.into()));
        let hi = PowerSum::constant(2, BigRational::new(14143.into(), 10000.into()));
        assert_eq!(root2.cmp_exact(&lo), Ordering::Greater);
        assert_eq!(root2.cmp_exact(&hi), Ordering::Less);
        // 2^(3/2) = 2·2^(1/2) exactly.
        let a = PowerSum::term(2, rat(1), r(3, 2));
        let b = PowerSum::term(2, rat(2), r(1, 2));
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
        // 3^(1/3) + 3^(2/3) vs 3.52.
        let s = PowerSum::term(3, rat(1), r(1, 3)) + PowerSum::term(3, rat(1), r(2, 3));
        let v = s.to_f64();
        let below = PowerSum::constant(3, BigRational::new(351.into(), 100.into()));
        assert!(v > 3.51 && v < 3.53);
        assert_eq!(s.cmp_exact(&below), Ordering::Greater);
    }

    #[test]
    fn product_expands() {
        let q = QScale { p: 2, e: 2 };
        let a = q.int(1) - q.q_int(-1);
        let b = q.int(1) + q.q_int(-1);
        let prod = &a * &b;
        assert_eq!(
            prod.to_rational(),
            Some(BigRational::new(15.into(), 16.into()))
        );
        assert_eq!(prod.to_string(), "1 - 2^-4");
    }

    #[test]
    fn sqrt_power_comparison() {
        // 2^(2√6) ≈ 29.85.
        assert_eq!(cmp_sqrt_power(2, 6, &rat(1), &rat(29)), Ordering::Greater);
        assert_eq!(cmp_sqrt_power(2, 6, &rat(1), &rat(30)), Ordering::Less);
        assert_eq!(cmp_sqrt_power(3, 4, &rat(1), &rat(81)), Ordering::Equal);
        assert_eq!(cmp_sqrt_power(3, 4, &rat(1), &rat(-5)), Ordering::Greater);
    }
}
