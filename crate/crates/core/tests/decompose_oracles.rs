mod common;

use common::{gf, monic_originals, wild_against_brute};
use polycount::decompose::{
    brute_decompose, tame_decompose, wild_decompose, Regime, DEFAULT_BRUTE_BUDGET,
};
use polycount::NormalDecomposition;

#[test]
fn tame_agrees_with_brute_exhaustively() {
    for q in [2u64, 3] {
        let field = gf(q);
        let p = field.p() as usize;
        for d in [4usize, 6, 8, 9] {
            for m in (2..d).filter(|m| d % m == 0 && m % p != 0) {
                for f in monic_originals(&field, d) {
                    let tame: Vec<NormalDecomposition> =
                        tame_decompose(&f, m).unwrap().into_iter().collect();
                    let brute = brute_decompose(&f, m, DEFAULT_BRUTE_BUDGET).unwrap();
                    assert_eq!(tame, brute, "q = {q}, f = {f}, m = {m}");
                }
            }
        }
    }
}

#[test]
fn wild_complete_on_qualified_pairs() {
    for (q, d, l) in [(2, 4, 2), (2, 8, 2), (3, 9, 3), (4, 4, 2)] {
        let (_, qualified) = wild_against_brute(q, d, l);
        assert!(qualified > 0);
    }
}

#[test]
fn wild_mixed_equation_paths() {
    let cases = [
        (2, 12, 4, "Edge"),
        (4, 12, 4, "Edge"),
        (3, 6, 3, "Edge"),
        (9, 6, 3, "Edge"),
        (2, 24, 4, "Low"),
        (3, 12, 3, "Low"),
    ];
    for (q, d, l, regime) in cases {
        let (seen, qualified) = wild_against_brute(q, d, l);
        assert!(seen.contains(regime), "({q},{d},{l}) visited {seen:?}");
        assert!(qualified > 0);
    }
}

#[test]
fn coupled_regime_sizes_stay_within_r_plus_one() {
    let field = gf(3);
    let mut biggest = 0;
    for f in monic_originals(&field, 9) {
        let out = wild_decompose(&f, 3).unwrap();
        if out.regime == Some(Regime::Coupled) {
            biggest = biggest.max(out.params.unwrap().sigma);
        }
    }
    assert!(biggest <= 4);
    assert!(biggest >= 2);
}

#[test]
fn frobenius_inputs_lift_inner_decompositions() {
    let mut lifted = 0;
    for q in [2u64, 3, 4] {
        let field = gf(q);
        let p = field.p() as usize;
        let l = p * p;
        for h in monic_originals(&field, 2) {
            for gs in monic_originals(&field, p) {
                let g = gs.pow(p as u64);
                let f = g.compose(&h).unwrap();
                let out = wild_decompose(&f, l).unwrap();
                assert!(out.frobenius_depth >= 1);
                let Some(found) = out.decompositions() else {
                    continue;
                };
                lifted += found.len();
                let brute = brute_decompose(&f, l, DEFAULT_BRUTE_BUDGET).unwrap();
                for nd in found {
                    assert!(brute.contains(nd));
                    assert!(nd.g().is_frobenius_composition());
                }
            }
        }
    }
    assert!(lifted > 0);
}
