use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use super::{
    dickson, dickson_value, first_case_build, first_case_violation, CollisionTuple,
    FirstCaseParams, SecondCaseParams,
};
use crate::decompose::{
    brute_decompose, tame_decompose, NormalDecomposition, DEFAULT_BRUTE_BUDGET,
};
use crate::field::Fe;
use crate::poly::Poly;

/// Why a composite did not yield collision parameters.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum RecoveryFailed {
    #[error("input outside the supported range: {0}")]
    Precondition(String),
    #[error("polynomial does not decompose at both degree splits")]
    NotDecomposableBothWays,
    #[error("polynomial is not an exponential-form collision")]
    NotFirstCase,
    #[error("polynomial is not a Dickson-form collision")]
    NotSecondCase,
}

/// Parameters recovered from an exponential-form collision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstCaseRecovery {
    /// The least witness, ordered by `w` from the top coefficient down and
    /// then by `shift`.
    pub params: FirstCaseParams,
    /// Whether that witness is the only one.
    pub unique: bool,
}

/// Monic `w` of degree `s` with `w^l = c`, if `c` is such a power.
fn lth_root(c: &Poly, l: usize) -> Option<Poly> {
    let field = c.field();
    let n = c.degree()?;
    if !c.is_monic() || n % l != 0 {
        return None;
    }
    let s = n / l;
    let inv_l = field.inv(field.from_int(l as i64)).ok()?;
    let mut w = vec![Fe::ZERO; s + 1];
    w[s] = Fe::ONE;
    for t in 1..=s {
        let partial = Poly::new(field, w.clone()).pow(l as u64);
        w[s - t] = field.mul(field.sub(c.coeff(n - t), partial.coeff(n - t)), inv_l);
    }
    let w = Poly::new(field, w);
    (&w.pow(l as u64) == c).then_some(w)
}

/// Recovers `(w, shift)` from a composite `f` of degree `l·m`, `m > l`,
/// `gcd(l, m) = 1`, `p ∤ l`.
///
/// Every decomposition with a right component of degree `l` is tried;
/// when `p ∤ m` there is at most one and the witness is unique. Otherwise
/// the least valid witness is returned with `unique` telling whether others
/// exist.
pub fn first_case_recover(f: &Poly, l: usize) -> Result<FirstCaseRecovery, RecoveryFailed> {
    let field = f.field();
    let p = field.p() as usize;
    let n = f
        .degree()
        .filter(|_| f.is_monic_original())
        .ok_or_else(|| RecoveryFailed::Precondition(format!("{f} is not monic original")))?;
    if l < 2 || n % l != 0 {
        return Err(RecoveryFailed::Precondition(format!(
            "{l} does not divide {n}"
        )));
    }
    let m = n / l;
    if m <= l || l.gcd(&m) != 1 {
        return Err(RecoveryFailed::Precondition(format!(
            "need coprime m > l, got l = {l}, m = {m}"
        )));
    }
    if l % p == 0 {
        return Err(RecoveryFailed::Precondition(format!(
            "p = {p} divides l = {l}"
        )));
    }
    let precondition = |e: crate::Error| RecoveryFailed::Precondition(e.to_string());
    if tame_decompose(f, l).map_err(precondition)?.is_none() {
        return Err(RecoveryFailed::NotDecomposableBothWays);
    }
    let with_right_l: Vec<NormalDecomposition> = if m % p != 0 {
        tame_decompose(f, m)
            .map_err(precondition)?
            .into_iter()
            .collect()
    } else {
        brute_decompose(f, m, DEFAULT_BRUTE_BUDGET).map_err(precondition)?
    };
    if with_right_l.is_empty() {
        return Err(RecoveryFailed::NotDecomposableBothWays);
    }

    let (k, s) = (m % l, m / l);
    let inv_l = field
        .inv(field.from_int(l as i64))
        .expect("p does not divide l");
    let mut found: Vec<FirstCaseParams> = Vec::new();
    for nd in &with_right_l {
        let shift = field.mul(nd.h().coeff(l - 1), inv_l);
        let a_l = field.pow(shift, l as u64);
        let g = nd.g();
        let shifted = g.shift(field.neg(a_l));
        let big_g = shifted.add_const(field.neg(g.eval(field.neg(a_l))));
        if big_g.coeffs().iter().take(k).any(|c| !c.is_zero()) {
            continue;
        }
        let cofactor = Poly::new(field, big_g.coeffs()[k..].to_vec());
        let Some(w) = lth_root(&cofactor, l) else {
            continue;
        };
        if w.degree() != Some(s) || first_case_violation(&w, l, m).is_some() {
            continue;
        }
        match first_case_build(l, m, &w, shift) {
            Ok(t) if t.f() == f => found.push(FirstCaseParams { w, shift, k, s }),
            _ => {}
        }
    }
    found.sort_by(|x, y| {
        let key = |fp: &FirstCaseParams| {
            let mut v: Vec<u32> = fp.w.coeffs().iter().rev().map(|c| c.index()).collect();
            v.push(fp.shift.index());
            v
        };
        key(x).cmp(&key(y))
    });
    found.dedup();
    let unique = found.len() == 1;
    found
        .into_iter()
        .next()
        .map(|params| FirstCaseRecovery { params, unique })
        .ok_or(RecoveryFailed::NotFirstCase)
}

/// Recovers `(z, shift)` from `f = T_n(x + shift, z) - T_n(shift, z)` using
/// the top three coefficients, then rebuilds `f` to confirm.
pub fn second_case_recover(f: &Poly) -> Result<SecondCaseParams, RecoveryFailed> {
    let field = f.field();
    let n = f
        .degree()
        .filter(|_| f.is_monic_original())
        .ok_or_else(|| RecoveryFailed::Precondition(format!("{f} is not monic original")))?;
    let n_fe = field.from_int(n as i64);
    if n < 2 || n_fe.is_zero() {
        return Err(RecoveryFailed::Precondition(format!(
            "degree {n} must be at least 2 and prime to p = {}",
            field.p()
        )));
    }
    let inv_n = field.inv(n_fe).expect("nonzero");
    let shift = field.mul(f.coeff(n - 1), inv_n);
    let binom = field.from_int(((n * (n - 1) / 2) % field.p() as usize) as i64);
    let z = field.mul(
        field.sub(field.mul(binom, field.mul(shift, shift)), f.coeff(n - 2)),
        inv_n,
    );
    if z.is_zero() {
        return Err(RecoveryFailed::NotSecondCase);
    }
    let rebuilt = dickson(field, n, z)
        .shift(shift)
        .add_const(field.neg(dickson_value(field, n, shift, z)));
    if &rebuilt != f {
        return Err(RecoveryFailed::NotSecondCase);
    }
    Ok(SecondCaseParams { z, shift })
}

/// Which normal forms a collision admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    FirstOnly,
    SecondOnly,
    Both,
    Neither,
}

/// Runs both recoverers on the composite of `tuple` at split `l`.
pub fn mutual_exclusion_check(l: usize, tuple: &CollisionTuple) -> Classification {
    let first = first_case_recover(tuple.f(), l).is_ok();
    let second = second_case_recover(tuple.f()).is_ok();
    match (first, second) {
        (true, true) => Classification::Both,
        (true, false) => Classification::FirstOnly,
        (false, true) => Classification::SecondOnly,
        (false, false) => Classification::Neither,
    }
}
