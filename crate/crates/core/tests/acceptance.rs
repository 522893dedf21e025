//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero when any criterion fails for a reason not listed in
//! `KNOWN_FAILURES`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{gf, monic_originals, poly, wild_against_brute};
use num_bigint::BigUint;
use num_rational::BigRational;
use polycount::census::intersect::degree_twelve_char_two_cap;
use polycount::census::{
    alpha, bluher_brute, bluher_counts, enumerate_decomposables, enumerate_intersection,
    frobenius_count, intersection_count_exact, lower_bound_wild, verify_bounds, CensusOptions,
    IntersectionFormula,
};
use polycount::decompose::{brute_decompose, DEFAULT_BRUTE_BUDGET};
use polycount::field::prime_power;
use polycount::ritt::{
    dickson, dickson_value, first_case_build, first_case_recover, first_case_violation,
    mutual_exclusion_check, second_case_build, second_case_recover, Classification,
    SecondCaseParams,
};
use polycount::{Fe, FieldSpec, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Bound checks that fail on enumerated data because the listed value is
/// false. The criterion still reports FAIL; the run only stops on
/// anything else.
const KNOWN_FAILURES: &[&str] = &["α(1-(q^-1-q^-p)/2)"];
const KNOWN_PREFIX: &str = "known:";

fn options() -> CensusOptions {
    CensusOptions::default()
}

fn count(q: u64, d: usize) -> u128 {
    enumerate_decomposables(&gf(q), d, &options())
        .unwrap()
        .count
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let table: [(u64, usize, u128); 13] = [
        (2, 4, 6),
        (2, 8, 36),
        (2, 12, 236),
        (2, 16, 762),
        (2, 20, 3264),
        (2, 24, 14264),
        (3, 9, 414),
        (4, 4, 132),
        (8, 4, 2408),
        (9, 9, 450_792),
        (4, 12, 100_848),
        (8, 12, 30_382_016),
        (2, 36, 821_600),
    ];
    let mut slowest = (0.0f64, 0, 0);
    for (q, d, expected) in table {
        let start = Instant::now();
        let got = count(q, d);
        let secs = start.elapsed().as_secs_f64();
        if secs > slowest.0 {
            slowest = (secs, q, d);
        }
        ensure(got == expected, || {
            format!("#D at ({q},{d}) is {got}, expected {expected}")
        })?;
    }
    Ok(format!(
        "{} table rows exact, slowest ({},{}) in {:.2}s",
        table.len(),
        slowest.1,
        slowest.2,
        slowest.0
    ))
}

fn criterion_2() -> Outcome {
    for (q, d) in [(3u64, 4usize), (5, 4), (2, 9)] {
        let a = alpha(q, d).unwrap();
        let got = count(q, d);
        ensure(BigUint::from(got) == a, || {
            format!("#D at ({q},{d}) is {got}, α = {a}")
        })?;
    }
    ensure(count(3, 4) == 54 && count(5, 4) == 500, || {
        "l² values".into()
    })?;
    for (q, d, l) in [(3u64, 8usize, 2i64), (5, 8, 2)] {
        let a = BigRational::from_integer(alpha(q, d).unwrap().into());
        let dip = BigRational::new(
            1.into(),
            num_bigint::BigInt::from(q).pow(((l - 1) * (l - 1)) as u32),
        );
        let expected =
            a * (BigRational::from_integer(1.into()) - dip / BigRational::from_integer(2.into()));
        let got = BigRational::from_integer(count(q, d).into());
        ensure(got == expected, || {
            format!("#D at ({q},{d}) is {got}, expected {expected}")
        })?;
    }
    Ok("#D = α at (3,4), (5,4), (2,9); l³ formula at (3,8), (5,8)".into())
}

fn criterion_3() -> Outcome {
    let field = gf(3);
    let listed = [
        ("x^9-x", "x^3+x", "x^3-x", "x^3-x", "x^3+x"),
        (
            "x^9+x^5-x^4+x^3+x^2",
            "x^3+x^2",
            "x^3-x^2-x",
            "x^3-x^2+x",
            "x^3+x^2",
        ),
        (
            "x^9+x^5+x^4+x^3-x^2",
            "x^3+x^2+x",
            "x^3-x^2",
            "x^3-x^2",
            "x^3+x^2-x",
        ),
        (
            "x^9+x^5+x",
            "x^3+x^2+x",
            "x^3-x^2+x",
            "x^3-x^2+x",
            "x^3+x^2+x",
        ),
    ];
    let mut expected: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
    for (f, g, h, gs, hs) in listed {
        let f = poly(&field, f);
        let (g, h, gs, hs) = (
            poly(&field, g),
            poly(&field, h),
            poly(&field, gs),
            poly(&field, hs),
        );
        ensure(
            g.compose(&h).unwrap() == f && gs.compose(&hs).unwrap() == f,
            || format!("listed collision for {f} does not compose"),
        )?;
        expected.insert(
            f.to_string(),
            [
                (g.to_string(), h.to_string()),
                (gs.to_string(), hs.to_string()),
            ]
            .into(),
        );
    }
    let mut found = BTreeMap::new();
    let mut frobenius = 0;
    for f in monic_originals(&field, 9) {
        let decs = brute_decompose(&f, 3, DEFAULT_BRUTE_BUDGET).unwrap();
        if decs.len() < 2 {
            continue;
        }
        if f.is_frobenius_composition() {
            ensure(decs.len() == 2, || {
                format!("{f} has {} decompositions", decs.len())
            })?;
            frobenius += 1;
        } else {
            let set: BTreeSet<(String, String)> = decs
                .iter()
                .map(|nd| (nd.g().to_string(), nd.h().to_string()))
                .collect();
            found.insert(f.to_string(), set);
        }
    }
    ensure(found == expected, || {
        format!("non-Frobenius collisions {found:?}")
    })?;
    ensure(frobenius == 8, || {
        format!("{frobenius} Frobenius collisions")
    })?;
    Ok("4 listed two-way collisions and 8 Frobenius collisions, nothing else".into())
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    for (q, d, l) in [(2, 4, 2), (2, 8, 2), (3, 9, 3), (4, 4, 2)] {
        let (_, qualified) = wild_against_brute(q, d, l);
        ensure(qualified > 0, || {
            format!("no qualifying pairs at ({q},{d},{l})")
        })?;
        total += qualified;
    }
    Ok(format!(
        "{total} qualifying pairs recovered; outputs within brute and of size ≤ r+1"
    ))
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for q in 2..=343u64 {
        if prime_power(q).is_none() {
            continue;
        }
        let field = gf(q);
        for d_exp in 1..=3 {
            let stats = bluher_counts(q, d_exp).unwrap();
            ensure(stats.closure_holds(), || {
                format!("closure fails at ({q},{d_exp})")
            })?;
            let brute = bluher_brute(&field, d_exp).unwrap();
            ensure(brute == stats.as_histogram(), || {
                format!(
                    "({q},{d_exp}): formula {:?}, brute {brute:?}",
                    stats.as_histogram()
                )
            })?;
            cases += 1;
        }
    }
    let s = bluher_counts(125, 1).unwrap();
    ensure((s.c0, s.c1, s.c2, s.c_z_plus_1) == (52, 25, 46, 1), || {
        format!("{s:?}")
    })?;
    Ok(format!(
        "{cases} (q, k) pairs agree with brute force; q = 125 gives (52,25,46,1)"
    ))
}

fn random_fe(field: &FieldSpec, rng: &mut ChaCha8Rng) -> Fe {
    field.elem(rng.gen_range(0..field.q())).unwrap()
}

fn random_monic(field: &FieldSpec, degree: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut coeffs: Vec<Fe> = (0..degree).map(|_| random_fe(field, rng)).collect();
    coeffs.push(Fe::ONE);
    Poly::new(field, coeffs)
}

fn splits_for(p: usize) -> Vec<(usize, usize)> {
    [
        (2, 3),
        (2, 5),
        (3, 4),
        (3, 5),
        (2, 7),
        (3, 7),
        (4, 5),
        (4, 7),
        (5, 7),
    ]
    .into_iter()
    .filter(|&(l, m)| l % p != 0 && m % p != 0)
    .collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fields: Vec<FieldSpec> = [5u64, 7, 9].into_iter().map(gf).collect();
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    let mut firsts = 0;
    while firsts < 500 {
        let field = &fields[firsts % fields.len()];
        let splits = splits_for(field.p() as usize);
        let (l, m) = splits[rng.gen_range(0..splits.len())];
        let w = random_monic(field, m / l, &mut rng);
        if first_case_violation(&w, l, m).is_some() {
            continue;
        }
        let shift = random_fe(field, &mut rng);
        let tuple = first_case_build(l, m, &w, shift).unwrap();
        let rec = first_case_recover(tuple.f(), l)
            .map_err(|e| format!("first case ({l},{m}) w = {w}, shift {shift:?}: {e}"))?;
        ensure(
            rec.params.w == w && rec.params.shift == shift && rec.unique,
            || format!("first case ({l},{m}) w = {w}: recovered {:?}", rec.params),
        )?;
        let class = mutual_exclusion_check(l, &tuple);
        let allowed =
            class == Classification::FirstOnly || (l == 2 && class == Classification::Both);
        ensure(allowed, || {
            format!("first case ({l},{m}) w = {w} classified {class:?}")
        })?;
        *tally.entry(format!("first/{class:?}")).or_default() += 1;
        firsts += 1;
    }
    for i in 0..500 {
        let field = &fields[i % fields.len()];
        let splits = splits_for(field.p() as usize);
        let (l, m) = splits[rng.gen_range(0..splits.len())];
        let z = loop {
            let z = random_fe(field, &mut rng);
            if !z.is_zero() {
                break z;
            }
        };
        let params = SecondCaseParams {
            z,
            shift: random_fe(field, &mut rng),
        };
        let tuple = second_case_build(field, l, m, params).unwrap();
        let rec = second_case_recover(tuple.f())
            .map_err(|e| format!("second case ({l},{m}) {params:?}: {e}"))?;
        ensure(rec == params, || {
            format!("second case ({l},{m}): {params:?} became {rec:?}")
        })?;
        let class = mutual_exclusion_check(l, &tuple);
        let expected = if l == 2 {
            Classification::Both
        } else {
            Classification::SecondOnly
        };
        ensure(class == expected, || {
            format!("second case ({l},{m}) classified {class:?}")
        })?;
        *tally.entry(format!("second/{class:?}")).or_default() += 1;
    }
    let summary: Vec<String> = tally.iter().map(|(key, n)| format!("{key}={n}")).collect();
    Ok(format!(
        "500 + 500 round trips exact; {}",
        summary.join(", ")
    ))
}

fn criterion_7() -> Outcome {
    let mut checks = 0u64;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let field = gf(q);
        let p = field.p() as usize;
        let elements: Vec<Fe> = field.elements().collect();
        for &z in &elements {
            for l in 1..=24usize {
                for m in 1..=24 / l {
                    let lm = dickson(&field, l * m, z);
                    let left = dickson(&field, m, field.pow(z, l as u64))
                        .compose(&dickson(&field, l, z))
                        .unwrap();
                    let right = dickson(&field, l, field.pow(z, m as u64))
                        .compose(&dickson(&field, m, z))
                        .unwrap();
                    ensure(left == lm && right == lm, || {
                        format!("composition fails over GF({q}), z = {z:?}, l = {l}, m = {m}")
                    })?;
                    checks += 1;
                }
            }
            for d in 1..=24usize {
                let t_d = dickson(&field, d, z);
                let two = field.from_int(2);
                let value = dickson_value(&field, d, field.mul(two, z), field.mul(z, z));
                ensure(value == field.mul(two, field.pow(z, d as u64)), || {
                    format!("T_{d}(2z, z²) ≠ 2z^{d} over GF({q})")
                })?;
                for &t in elements.iter().filter(|t| !t.is_zero()) {
                    let scaled = t_d.scale(field.pow(t, d as u64));
                    let tx = Poly::monomial(&field, t, 1);
                    let other = dickson(&field, d, field.mul(field.mul(t, t), z))
                        .compose(&tx)
                        .unwrap();
                    ensure(scaled == other, || {
                        format!("scaling fails over GF({q}), d = {d}")
                    })?;
                    checks += 1;
                }
            }
            let mut pj = p;
            while pj <= 24 {
                ensure(
                    dickson(&field, pj, z) == Poly::monomial(&field, Fe::ONE, pj),
                    || format!("T_{pj} ≠ x^{pj} over GF({q})"),
                )?;
                pj *= p;
            }
            for n in (p..=24).step_by(p) {
                ensure(dickson(&field, n, z).derivative().is_zero(), || {
                    format!("T_{n} has nonzero derivative over GF({q})")
                })?;
            }
        }
    }
    Ok(format!("{checks} identities over every z in fields q ≤ 9"))
}

fn composite_grid() -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for d in 4..=16usize {
            if (2..d).any(|k| d % k == 0) {
                out.push((q, d));
            }
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut known: Vec<String> = Vec::new();
    for (q, d) in composite_grid() {
        let report = verify_bounds(&gf(q), d, &options()).unwrap();
        ensure(!report.bounds.is_empty(), || {
            format!("no bounds at ({q},{d})")
        })?;
        for b in report.failed_bounds() {
            if KNOWN_FAILURES.contains(&b.left.as_str()) {
                known.push(format!(
                    "({q},{d}): {} {} {}",
                    b.left_value, b.relation, b.right_value
                ));
            } else {
                return Err(format!(
                    "({q},{d}) leaf {:?}: {b}",
                    report.leaf.map(|l| l.to_string())
                ));
            }
        }
        checked += report.bounds.len();
    }
    let (_, wild) = lower_bound_wild(3, 1, 1, 3).unwrap();
    let with_frob =
        wild + BigRational::from_integer(frobenius_count(3, 9).unwrap().unwrap().into());
    let chain = [
        with_frob.clone(),
        BigRational::from_integer(306.into()),
        BigRational::from_integer(count(3, 9).into()),
        BigRational::from_integer(alpha(3, 9).unwrap().into()),
    ];
    ensure(chain.windows(2).all(|w| w[0] < w[1]), || {
        format!("chain {chain:?}")
    })?;
    ensure(with_frob == BigRational::from_integer(288.into()), || {
        format!("wild bound plus Frobenius is {with_frob}")
    })?;
    let detail = format!(
        "{checked} exact checks over {} grid cells; chain 288 < 306 < 414 < 486 holds",
        composite_grid().len()
    );
    if known.is_empty() {
        Ok(detail)
    } else {
        Err(format!(
            "{KNOWN_PREFIX} {detail}; the listed II.B.i.b value 1-(q^-1-q^-p)/2 exceeds #D/α in {} cells: {}",
            known.len(),
            known.join("; ")
        ))
    }
}

fn criterion_9() -> Outcome {
    let (mut exact, mut bounded) = (0, 0);
    for (q, d) in composite_grid() {
        let field = gf(q);
        let p = field.p() as usize;
        for l in (2..d).filter(|l| d % l == 0 && l * l < d) {
            let m = d / l;
            let tally = enumerate_intersection(&field, d, l, &options()).unwrap();
            let scale = BigUint::from(q * (q - 1));
            let formula = intersection_count_exact(q, l, m).unwrap();
            let observed = if d % p != 0 {
                exact += 1;
                BigUint::from(tally.distinct) * &scale
            } else {
                bounded += 1;
                BigUint::from(tally.non_frobenius) * &scale
            };
            match (&formula, d % p != 0) {
                (IntersectionFormula::Exact { .. }, true) => {}
                (IntersectionFormula::Unsupported { reason }, _) => {
                    return Err(format!("({q},{d},{l}): {reason}"))
                }
                (_, true) => return Err(format!("({q},{d},{l}) lacks an exact value")),
                _ => {}
            }
            ensure(formula.admits(&observed) == Some(true), || {
                format!("({q},{d},{l}): observed {observed}, formula {formula:?}")
            })?;
        }
    }
    for q in [2u64, 4] {
        let tally = enumerate_intersection(&gf(q), 12, 2, &options()).unwrap();
        let cap = degree_twelve_char_two_cap(q);
        ensure(BigUint::from(tally.non_frobenius) <= cap, || {
            format!(
                "t₁ = {} exceeds 2q⁴ = {cap} over GF({q})",
                tally.non_frobenius
            )
        })?;
    }
    Ok(format!(
        "{exact} tame splits exact, {bounded} wild splits within bounds, t₁ ≤ 2q⁴ at (2,12), (4,12)"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("census ground truth", criterion_1),
        ("exact-formula cases", criterion_2),
        ("degree-9 collisions over F_3", criterion_3),
        ("wild algorithm", criterion_4),
        ("root statistics", criterion_5),
        ("collision round trips", criterion_6),
        ("Dickson identities", criterion_7),
        ("bound verification", criterion_8),
        ("intersection formulas", criterion_9),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name} ({secs:.1}s): {detail}", i + 1);
                if !detail.starts_with(KNOWN_PREFIX) {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
