#![allow(dead_code)]

use std::collections::BTreeSet;

use polycount::decompose::{brute_decompose, wild_decompose, WildParams, DEFAULT_BRUTE_BUDGET};
use polycount::{Fe, FieldSpec, NormalDecomposition, Poly};

/// Every monic original polynomial of degree `d` over `field`, in odometer
/// order on the coefficients `c_1, …, c_{d-1}`.
pub fn monic_originals(field: &FieldSpec, d: usize) -> Vec<Poly> {
    let q = field.q() as usize;
    let total = q.pow(d as u32 - 1);
    (0..total)
        .map(|mut n| {
            let mut coeffs = vec![Fe::ZERO; d + 1];
            coeffs[d] = Fe::ONE;
            for c in coeffs.iter_mut().take(d).skip(1) {
                *c = field.elem((n % q) as u32).unwrap();
                n /= q;
            }
            Poly::new(field, coeffs)
        })
        .collect()
}

pub fn gf(q: u64) -> FieldSpec {
    FieldSpec::with_order(q).unwrap()
}

pub fn poly(field: &FieldSpec, text: &str) -> Poly {
    Poly::parse(field, text).unwrap()
}

/// Runs the wild algorithm on every `g ∘ h` at one split and checks it
/// against the exhaustive scan. Returns the regimes visited and how many
/// pairs qualified for the completeness check.
pub fn wild_against_brute(q: u64, d: usize, l: usize) -> (BTreeSet<String>, usize) {
    let field = gf(q);
    let p = field.p() as usize;
    let m = d / l;
    let mut regimes = BTreeSet::new();
    let mut qualified = 0;
    for g in monic_originals(&field, l) {
        for h in monic_originals(&field, m) {
            let f = g.compose(&h).unwrap();
            let out = wild_decompose(&f, l).unwrap();
            let brute = brute_decompose(&f, l, DEFAULT_BRUTE_BUDGET).unwrap();
            let params = WildParams::of_components(&g, &h).unwrap();
            if let Some(found) = out.decompositions() {
                for nd in found {
                    assert!(brute.contains(nd), "{nd} not in brute set for {f}");
                }
                assert!(found.len() as u64 <= params.r + 1);
                if let Some(used) = &out.params {
                    assert!(found.len() <= used.sigma);
                }
            }
            if let Some(r) = out.regime {
                regimes.insert(format!("{r:?}"));
            }
            let kappa_ok = params.kappa == 0 || params.kappa % p != 0;
            let g_kappa = g.coeff(params.kappa);
            if kappa_ok
                && !h.coeff(m - 1).is_zero()
                && (params.kappa == 0 || params.mixed_condition(&field, g_kappa))
            {
                qualified += 1;
                let nd = NormalDecomposition::new(&f, g.clone(), h.clone()).unwrap();
                let found = out
                    .decompositions()
                    .unwrap_or_else(|| panic!("failure on qualified {nd}: {:?}", out.trace));
                assert!(found.contains(&nd), "{nd} missing: {:?}", out.trace);
            }
        }
    }
    (regimes, qualified)
}
