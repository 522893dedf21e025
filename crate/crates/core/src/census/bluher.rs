//! Root statistics of `t^(r+1) - u·t + u` over `F_q`, with `r = p^k`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use super::formulas::valuation;
use crate::error::{usage, Result};
use crate::field::{prime_power, Fe, FieldSpec};

/// How many `u ∈ F_q^×` give each possible number of nonzero roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BluherStats {
    pub q: u64,
    /// Exponent `k` with `r = p^k`.
    pub d_exp: u32,
    pub r: u64,
    /// `gcd(k, e)` for `q = p^e`.
    pub c: u32,
    /// `p^c`, the order of `F_q ∩ F_r`.
    pub z: u64,
    pub gamma: u64,
    pub c0: u64,
    pub c1: u64,
    pub c2: u64,
    /// Number of `u` with exactly `z + 1` roots.
    pub c_z_plus_1: u64,
}

impl BluherStats {
    /// `Σ c_i = q - 1` and `2 + Σ i·c_i = q`.
    pub fn closure_holds(&self) -> bool {
        let total = self.c0 + self.c1 + self.c2 + self.c_z_plus_1;
        let weighted = self.c1 + 2 * self.c2 + (self.z + 1) * self.c_z_plus_1;
        total + 1 == self.q && weighted + 2 == self.q
    }

    /// The statistics as a map from root count to number of `u`, omitting
    /// zero entries.
    pub fn as_histogram(&self) -> BTreeMap<u64, u64> {
        [
            (0, self.c0),
            (1, self.c1),
            (2, self.c2),
            (self.z + 1, self.c_z_plus_1),
        ]
        .into_iter()
        .filter(|&(_, c)| c > 0)
        .collect()
    }
}

fn split_q(q: u64, d_exp: u32) -> Result<(u32, u32)> {
    if d_exp == 0 {
        return Err(usage("the exponent of r = p^k must be at least 1"));
    }
    prime_power(q).ok_or_else(|| usage(format!("{q} is not a prime power")))
}

/// Closed-form root statistics for `q` and `r = p^d_exp`.
pub fn bluher_counts(q: u64, d_exp: u32) -> Result<BluherStats> {
    let (p, e) = split_q(q, d_exp)?;
    let c = d_exp.gcd(&e);
    let z = (p as u64).pow(c);
    let gamma = u64::from(p == 2 && (e / c) % 2 == 1);
    let c1 = q / z - gamma;
    let c_z_plus_1 = q / (z * z * z - z);
    let twice_c2 = q - 2 - c1 - (z + 1) * c_z_plus_1;
    debug_assert!(twice_c2 % 2 == 0);
    let c2 = twice_c2 / 2;
    Ok(BluherStats {
        q,
        d_exp,
        r: (p as u64).pow(d_exp),
        c,
        z,
        gamma,
        c0: 1 + c2 + z * c_z_plus_1,
        c1,
        c2,
        c_z_plus_1,
    })
}

fn r_plus_one_powers(field: &FieldSpec, d_exp: u32) -> Vec<Fe> {
    let r = (field.p() as u64).pow(d_exp);
    field.elements().map(|t| field.pow(t, r + 1)).collect()
}

/// Number of `t ∈ F_q^×` with `t^(r+1) - u·t + u = 0`, by scanning.
pub fn count_t(field: &FieldSpec, d_exp: u32, u: Fe) -> Result<usize> {
    if u.is_zero() {
        return Err(usage("count_t needs u ≠ 0"));
    }
    split_q(field.q() as u64, d_exp)?;
    let powers = r_plus_one_powers(field, d_exp);
    Ok(count_t_with(field, &powers, u))
}

fn count_t_with(field: &FieldSpec, powers: &[Fe], u: Fe) -> usize {
    field
        .nonzero_elements()
        .filter(|&t| {
            let lin = field.mul(u, field.sub(Fe::ONE, t));
            field.add(powers[t.index() as usize], lin).is_zero()
        })
        .count()
}

/// Number of `s ∈ F_q^×` with `s^(r+1) - v·s - w = 0`, by scanning.
pub fn count_s(field: &FieldSpec, d_exp: u32, v: Fe, w: Fe) -> Result<usize> {
    if w.is_zero() {
        return Err(usage("count_s needs w ≠ 0"));
    }
    split_q(field.q() as u64, d_exp)?;
    let powers = r_plus_one_powers(field, d_exp);
    Ok(field
        .nonzero_elements()
        .filter(|&s| {
            let rest = field.add(field.mul(v, s), w);
            field.sub(powers[s.index() as usize], rest).is_zero()
        })
        .count())
}

/// Tallies `count_t` over all `u ∈ F_q^×`: root count to number of `u`.
pub fn bluher_brute(field: &FieldSpec, d_exp: u32) -> Result<BTreeMap<u64, u64>> {
    split_q(field.q() as u64, d_exp)?;
    let powers = r_plus_one_powers(field, d_exp);
    let mut tally = BTreeMap::new();
    for u in field.nonzero_elements() {
        *tally
            .entry(count_t_with(field, &powers, u) as u64)
            .or_insert(0) += 1;
    }
    Ok(tally)
}

/// 2-adic data describing `b = gcd(q - 1, r + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcdStructure {
    pub b: u64,
    pub z: u64,
    pub lambda: u32,
    pub mu: u32,
    /// `ν(k)` for `r = p^k`.
    pub delta: u32,
    /// `ν(e)` for `q = p^e`.
    pub epsilon: u32,
    /// `ν(r² - 1)`.
    pub alpha_v: u32,
    /// `ν(q - 1)`.
    pub beta_v: u32,
}

impl GcdStructure {
    /// `(z^λ - 1)·2^μ/(z - 1)`.
    pub fn predicted_b(&self) -> u64 {
        (self.z.pow(self.lambda) - 1) * (1 << self.mu) / (self.z - 1)
    }
}

/// Computes `b` directly and the valuations that predict it.
pub fn gcd_structure(q: u64, d_exp: u32) -> Result<GcdStructure> {
    let (p, e) = split_q(q, d_exp)?;
    let r = (p as u128).pow(d_exp);
    let z = (p as u64).pow(d_exp.gcd(&e));
    let nu = |n: u128| valuation_u128(n);
    let delta = valuation(d_exp as u64, 2);
    let epsilon = valuation(e as u64, 2);
    let alpha_v = nu(r * r - 1);
    let beta_v = nu(q as u128 - 1);
    Ok(GcdStructure {
        b: (q as u128 - 1).gcd(&(r + 1)) as u64,
        z,
        lambda: if delta < epsilon { 2 } else { 1 },
        mu: u32::from(alpha_v > beta_v),
        delta,
        epsilon,
        alpha_v,
        beta_v,
    })
}

fn valuation_u128(mut n: u128) -> u32 {
    let mut v = 0;
    while n > 0 && n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    v
}

/// `#{s ≠ 0 : s^(r+1) = w}`: `b` when `w^((q-1)/b) = 1`, else 0.
pub fn s_zero_count(field: &FieldSpec, d_exp: u32, w: Fe) -> Result<u64> {
    if w.is_zero() {
        return Err(usage("s_zero_count needs w ≠ 0"));
    }
    let q = field.q() as u64;
    let g = gcd_structure(q, d_exp)?;
    Ok(if field.pow(w, (q - 1) / g.b) == Fe::ONE {
        g.b
    } else {
        0
    })
}
