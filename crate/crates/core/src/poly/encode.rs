//! Fixed-width byte encoding of monic original polynomials.
//!
//! A monic original `f` of degree `d` is determined by its free coefficients
//! `f_1, …, f_{d-1}`. Reading their field indices as the digits of a
//! little-endian base-`q` integer gives a bijection onto `[0, q^(d-1))`; the
//! integer is stored little-endian in [`canonical_width`] bytes.

use num_bigint::BigUint;
use num_traits::Zero;

use super::Poly;
use crate::error::{usage, Result};
use crate::field::{Fe, FieldSpec};

/// Number of bytes needed to hold `q^(d-1) - 1`.
pub fn canonical_width(q: u32, d: usize) -> usize {
    if d <= 1 {
        return 0;
    }
    let top = BigUint::from(q).pow((d - 1) as u32) - 1u32;
    (top.bits() as usize).div_ceil(8)
}

/// Encodes a monic original polynomial of degree at least 1.
pub fn encode_canonical(f: &Poly) -> Result<Vec<u8>> {
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic_original() => d,
        _ => return Err(usage(format!("{f} is not a monic original polynomial"))),
    };
    let q = f.field().q();
    let mut n = BigUint::zero();
    for i in (1..d).rev() {
        n = n * q + f.coeff(i).index();
    }
    let width = canonical_width(q, d);
    let mut bytes = n.to_bytes_le();
    if n.is_zero() {
        bytes.clear();
    }
    bytes.resize(width, 0);
    Ok(bytes)
}

/// Inverse of [`encode_canonical`] for a known degree `d`.
pub fn decode_canonical(field: &FieldSpec, d: usize, bytes: &[u8]) -> Result<Poly> {
    if d == 0 {
        return Err(usage("monic original polynomials have degree at least 1"));
    }
    let q = field.q();
    let width = canonical_width(q, d);
    if bytes.len() != width {
        return Err(usage(format!(
            "expected {width} bytes for degree {d} over GF({q}), got {}",
            bytes.len()
        )));
    }
    let mut n = BigUint::from_bytes_le(bytes);
    let mut coeffs = vec![Fe::ZERO; d + 1];
    coeffs[d] = Fe::ONE;
    let qb = BigUint::from(q);
    for c in coeffs.iter_mut().take(d).skip(1) {
        let digit = (&n % &qb).iter_u32_digits().next().unwrap_or(0);
        *c = field.elem(digit)?;
        n /= &qb;
    }
    if !n.is_zero() {
        return Err(usage(format!("encoding exceeds GF({q})^{}", d - 1)));
    }
    Ok(Poly::new(field, coeffs))
}
