//! Functional decomposition `f = g ∘ h` with `h` monic and original.
//!
//! Three engines are provided. [`tame_decompose`] handles left degrees
//! coprime to the characteristic and finds the unique decomposition by
//! coefficient comparison. [`wild_decompose`] handles left degrees divisible
//! by `p`; it may decline with a [`FailureReason`]. [`brute_decompose`]
//! scans every candidate right component and is exact within its budget.

mod brute;
mod tame;
mod wild;

pub use brute::{brute_decompose, DEFAULT_BRUTE_BUDGET};
pub use tame::tame_decompose;
pub use wild::{wild_decompose, FailureReason, Regime, WildOutcome, WildParams, WildVerdict};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::poly::Poly;

/// A decomposition `(g, h)` of a fixed polynomial with `h` monic and
/// original and both components of degree at least 2.
///
/// Sets of decompositions are kept sorted by `(deg g, h, g)` with
/// coefficients compared by field index from the top down, so printed
/// output is reproducible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalDecomposition {
    g: Poly,
    h: Poly,
}

impl NormalDecomposition {
    /// Checks the shape of `(g, h)` and that `g ∘ h = f`.
    pub fn new(f: &Poly, g: Poly, h: Poly) -> Result<Self> {
        let nd = Self::from_parts(g, h)?;
        if &nd.compose() != f {
            return Err(usage(format!(
                "({}) ∘ ({}) does not compose to {f}",
                nd.g, nd.h
            )));
        }
        Ok(nd)
    }

    /// Accepts any well-shaped pair; the composite is whatever it yields.
    pub fn from_parts(g: Poly, h: Poly) -> Result<Self> {
        if g.field() != h.field() {
            return Err(usage("decomposition components over different fields"));
        }
        if !g.degree().is_some_and(|d| d >= 2) || !h.degree().is_some_and(|d| d >= 2) {
            return Err(usage(format!(
                "components {g} and {h} must both have degree at least 2"
            )));
        }
        if !h.is_monic_original() {
            return Err(usage(format!("right component {h} is not monic original")));
        }
        Ok(NormalDecomposition { g, h })
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn compose(&self) -> Poly {
        self.g.compose(&self.h).expect("components share a field")
    }

    /// `(deg g, deg h)`.
    pub fn split(&self) -> (usize, usize) {
        (
            self.g.degree().expect("nonzero"),
            self.h.degree().expect("nonzero"),
        )
    }
}

fn poly_key(p: &Poly) -> impl Iterator<Item = u32> + '_ {
    p.coeffs().iter().rev().map(|c| c.index())
}

impl Ord for NormalDecomposition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.split()
            .cmp(&other.split())
            .then_with(|| poly_key(&self.h).cmp(poly_key(&other.h)))
            .then_with(|| poly_key(&self.g).cmp(poly_key(&other.g)))
    }
}

impl PartialOrd for NormalDecomposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for NormalDecomposition {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "({}) o ({})", self.g, self.h)
    }
}

impl Serialize for NormalDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NormalDecomposition", 2)?;
        st.serialize_field("g", &self.g.to_string())?;
        st.serialize_field("h", &self.h.to_string())?;
        st.end()
    }
}

/// Result of decomposing at one left degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "decompositions", rename_all = "lowercase")]
pub enum SplitOutcome {
    /// Every normal decomposition at this split.
    Complete(Vec<NormalDecomposition>),
    /// Decompositions the wild algorithm found when the exhaustive scan was
    /// over budget; more may exist.
    Partial(Vec<NormalDecomposition>),
    /// Nothing could be established within budget.
    Unknown,
}

impl SplitOutcome {
    pub fn decompositions(&self) -> &[NormalDecomposition] {
        match self {
            SplitOutcome::Complete(v) | SplitOutcome::Partial(v) => v,
            SplitOutcome::Unknown => &[],
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, SplitOutcome::Complete(_))
    }
}

/// Decomposes a monic original `f` at every left degree `e` with
/// `1 < e < deg f` and `e | deg f`.
///
/// Tame splits are always complete. For wild splits the wild algorithm runs
/// first and the exhaustive scan settles the answer whenever its
/// `q^(d/e - 1)` candidates fit `budget`.
pub fn decompose_all(f: &Poly, budget: u64) -> Result<BTreeMap<usize, SplitOutcome>> {
    let d = match f.degree() {
        Some(d) if f.is_monic_original() => d,
        _ => return Err(usage(format!("{f} is not a monic original polynomial"))),
    };
    let p = f.field().p() as usize;
    let mut out = BTreeMap::new();
    for e in (2..d).filter(|e| d % e == 0) {
        let outcome = if e % p != 0 {
            SplitOutcome::Complete(tame_decompose(f, e)?.into_iter().collect())
        } else {
            let wild = wild_decompose(f, e)?;
            match brute_decompose(f, e, budget) {
                Ok(all) => SplitOutcome::Complete(all),
                Err(Error::Budget(_)) => match wild.verdict {
                    WildVerdict::Found(v) => SplitOutcome::Partial(v),
                    WildVerdict::Failure(_) => SplitOutcome::Unknown,
                },
                Err(other) => return Err(other),
            }
        };
        out.insert(e, outcome);
    }
    Ok(out)
}

pub(crate) fn check_monic_original(f: &Poly, left_degree: usize) -> Result<(usize, usize)> {
    let d = match f.degree() {
        Some(d) if f.is_monic_original() => d,
        _ => return Err(usage(format!("{f} is not a monic original polynomial"))),
    };
    if left_degree < 2 || left_degree >= d || d % left_degree != 0 {
        return Err(usage(format!(
            "left degree {left_degree} is not a proper divisor of {d}"
        )));
    }
    Ok((d, d / left_degree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn constructor_checks_composition() {
        let f3 = FieldSpec::prime(3).unwrap();
        let f = p(&f3, "x^9-x");
        assert!(NormalDecomposition::new(&f, p(&f3, "x^3+x"), p(&f3, "x^3-x")).is_ok());
        assert!(NormalDecomposition::new(&f, p(&f3, "x^3"), p(&f3, "x^3-x")).is_err());
        assert!(NormalDecomposition::from_parts(p(&f3, "x^3"), p(&f3, "2*x^3")).is_err());
        assert!(NormalDecomposition::from_parts(p(&f3, "x"), p(&f3, "x^3")).is_err());
    }

    #[test]
    fn decompose_all_examples() {
        let f3 = FieldSpec::prime(3).unwrap();
        let all = decompose_all(&p(&f3, "x^9+x^5+x"), DEFAULT_BRUTE_BUDGET).unwrap();
        assert_eq!(all.len(), 1);
        let split = &all[&3];
        assert!(split.is_complete());
        let shown: Vec<String> = split
            .decompositions()
            .iter()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(
            shown,
            vec!["(x^3+2*x^2+x) o (x^3+x^2+x)", "(x^3+x^2+x) o (x^3+2*x^2+x)"]
        );

        let f7 = FieldSpec::prime(7).unwrap();
        assert!(decompose_all(&p(&f7, "x^7+x^2"), DEFAULT_BRUTE_BUDGET)
            .unwrap()
            .is_empty());

        let f2 = FieldSpec::prime(2).unwrap();
        let quartic = decompose_all(&p(&f2, "x^4+x^3+x"), DEFAULT_BRUTE_BUDGET).unwrap();
        assert_eq!(quartic.len(), 1);
        assert_eq!(quartic[&2], SplitOutcome::Complete(vec![]));
    }

    #[test]
    fn decompose_all_marks_budget_exhaustion() {
        let f3 = FieldSpec::prime(3).unwrap();
        let all = decompose_all(&p(&f3, "x^9-x"), 1).unwrap();
        assert_eq!(all[&3], SplitOutcome::Unknown);
        let all = decompose_all(&p(&f3, "x^9+x^5-x^4+x^3+x^2"), 1).unwrap();
        assert!(matches!(all[&3], SplitOutcome::Partial(ref v) if v.len() == 2));
    }
}
