use super::{check_monic_original, NormalDecomposition};
use crate::error::{usage, Result};
use crate::field::Fe;
use crate::poly::Poly;

/// The unique normal decomposition `f = g ∘ h` with `deg g = left_degree`,
/// for `left_degree` coprime to the characteristic.
///
/// The top `deg h - 1` coefficients of `f` below the leading one only see
/// `h^left_degree`, and each of them is linear in one new coefficient of
/// `h` with slope `left_degree`. Solving them from the top fixes `h`; the
/// Taylor expansion of `f` in base `h` then yields `g`, and the result is
/// checked by composing.
pub fn tame_decompose(f: &Poly, left_degree: usize) -> Result<Option<NormalDecomposition>> {
    let (d, n) = check_monic_original(f, left_degree)?;
    let field = f.field();
    let slope = field.from_int(left_degree as i64);
    if slope.is_zero() {
        return Err(usage(format!(
            "left degree {left_degree} is divisible by the characteristic {}",
            field.p()
        )));
    }
    let inv_slope = field.inv(slope)?;
    let mut h = vec![Fe::ZERO; n + 1];
    h[n] = Fe::ONE;
    for k in 1..n {
        let partial = Poly::new(field, h.clone()).pow(left_degree as u64);
        let rest = field.sub(f.coeff(d - k), partial.coeff(d - k));
        h[n - k] = field.mul(rest, inv_slope);
    }
    let h = Poly::new(field, h);
    let Some(g) = f.left_factor(&h)? else {
        return Ok(None);
    };
    if g.degree() != Some(left_degree) {
        return Ok(None);
    }
    Ok(NormalDecomposition::new(f, g, h).ok())
}
