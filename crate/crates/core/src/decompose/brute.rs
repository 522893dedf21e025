use super::{check_monic_original, NormalDecomposition};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::poly::Poly;

/// Default cap on the number of candidate right components scanned.
pub const DEFAULT_BRUTE_BUDGET: u64 = 1 << 24;

/// Every normal decomposition with `deg g = left_degree`, found by trying
/// all `q^(m-1)` monic original right components of degree `m`.
///
/// Refuses with [`Error::Budget`] instead of returning a partial answer.
pub fn brute_decompose(
    f: &Poly,
    left_degree: usize,
    budget: u64,
) -> Result<Vec<NormalDecomposition>> {
    let (_, m) = check_monic_original(f, left_degree)?;
    let field = f.field();
    let q = field.q() as u64;
    let candidates = q
        .checked_pow((m - 1) as u32)
        .filter(|&c| c <= budget)
        .ok_or_else(|| {
            Error::Budget(format!(
                "{q}^{} candidate right components exceed the budget of {budget}",
                m - 1
            ))
        })?;
    let mut digits = vec![0u32; m - 1];
    let mut out = Vec::new();
    for _ in 0..candidates {
        let mut coeffs = Vec::with_capacity(m + 1);
        coeffs.push(Fe::ZERO);
        coeffs.extend(
            digits
                .iter()
                .map(|&i| field.elem(i).expect("index below q")),
        );
        coeffs.push(Fe::ONE);
        let h = Poly::new(field, coeffs);
        if let Some(g) = f.left_factor(&h)? {
            if g.degree() == Some(left_degree) {
                out.push(NormalDecomposition::new(f, g, h)?);
            }
        }
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit < q as u32 {
                break;
            }
            *digit = 0;
        }
    }
    out.sort();
    Ok(out)
}
