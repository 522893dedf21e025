use std::io::Write;

use polycount::census::{
    bluher_brute, bluher_counts, enumerate_decomposables, verify_bounds, BluherStats, Budget,
    CensusOptions, CensusReport,
};
use polycount::decompose::{
    brute_decompose, tame_decompose, wild_decompose, NormalDecomposition, WildVerdict,
};
use polycount::ritt::{
    self, first_case_build, first_case_recover, mutual_exclusion_check, second_case_build,
    second_case_recover, Classification, CollisionTuple, RecoveryFailed, SecondCaseParams,
};
use polycount::{Error, FieldSpec, Poly};
use serde::Serialize;

use crate::args::{
    Algorithm, BluherArgs, Case, CensusArgs, DecomposeArgs, DicksonArgs, RittAction, RittArgs,
    RittBuildArgs, RittRecoverArgs,
};
use crate::{CliError, Status};

type CmdResult = Result<Status, CliError>;

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Monic original representative `(f - f(0))/lc(f)`.
fn normalize(f: &Poly) -> Result<Poly, CliError> {
    match f.degree() {
        Some(d) if d >= 2 => {}
        _ => return Err(CliError::usage(format!("{f} has degree below 2"))),
    }
    let field = f.field();
    let inv = field.inv(f.leading_coeff())?;
    let shifted = f.add_const(field.neg(f.coeff(0)));
    Ok(shifted.scale(inv))
}

#[derive(Serialize)]
struct SplitReport {
    left_degree: usize,
    right_degree: usize,
    engine: &'static str,
    complete: bool,
    decompositions: Vec<NormalDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trace: Vec<String>,
}

#[derive(Serialize)]
struct DecomposeReport {
    field: String,
    input: String,
    f: String,
    splits: Vec<SplitReport>,
}

fn run_wild(f: &Poly, l: usize, d: usize) -> Result<SplitReport, Error> {
    let out = wild_decompose(f, l)?;
    let (decompositions, failure) = match out.verdict {
        WildVerdict::Found(v) => (v, None),
        WildVerdict::Failure(reason) => (Vec::new(), Some(reason.to_string())),
    };
    Ok(SplitReport {
        left_degree: l,
        right_degree: d / l,
        engine: "wild",
        complete: false,
        decompositions,
        failure,
        trace: out.trace,
    })
}

fn decompose_split(f: &Poly, l: usize, a: &DecomposeArgs) -> Result<SplitReport, Error> {
    let d = f.degree().unwrap_or(0);
    let p = f.field().p() as usize;
    let exact = |engine, decompositions| SplitReport {
        left_degree: l,
        right_degree: d / l,
        engine,
        complete: true,
        decompositions,
        failure: None,
        trace: Vec::new(),
    };
    match a.algorithm {
        Algorithm::Tame => Ok(exact("tame", tame_decompose(f, l)?.into_iter().collect())),
        Algorithm::Wild => run_wild(f, l, d),
        Algorithm::Brute => Ok(exact("brute", brute_decompose(f, l, a.brute_budget)?)),
        Algorithm::Auto if l % p != 0 => {
            Ok(exact("tame", tame_decompose(f, l)?.into_iter().collect()))
        }
        Algorithm::Auto => match brute_decompose(f, l, a.brute_budget) {
            Ok(all) => Ok(exact("brute", all)),
            Err(Error::Budget(_)) => run_wild(f, l, d),
            Err(e) => Err(e),
        },
    }
}

pub fn decompose(a: DecomposeArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let input = Poly::parse(&field, &a.poly)?;
    let f = normalize(&input)?;
    let d = f.degree().unwrap_or(0);
    let lefts: Vec<usize> = match a.left_degree {
        Some(l) => vec![l],
        None => (2..d).filter(|e| d % e == 0).collect(),
    };
    let splits = lefts
        .into_iter()
        .map(|l| decompose_split(&f, l, &a))
        .collect::<Result<Vec<_>, _>>()?;
    let status = if splits.iter().any(|s| s.failure.is_some()) {
        Status::Failure
    } else {
        Status::Ok
    };
    let report = DecomposeReport {
        field: field.designator(),
        input: input.to_string(),
        f: f.to_string(),
        splits,
    };
    if a.json {
        print_json(&report)?;
        return Ok(status);
    }
    if f != input {
        println!("normalized {input} to {f}");
    }
    println!("f = {f} over {field}");
    if report.splits.is_empty() {
        println!("degree {d} admits no split: indecomposable");
    }
    for s in &report.splits {
        let head = format!(
            "deg g = {}, deg h = {} ({})",
            s.left_degree, s.right_degree, s.engine
        );
        if let Some(reason) = &s.failure {
            println!("{head}: failure: {reason}");
        } else if s.decompositions.is_empty() {
            println!("{head}: indecomposable at this split");
        } else {
            let n = s.decompositions.len();
            let noun = if n == 1 {
                "decomposition"
            } else {
                "decompositions"
            };
            println!("{head}: {n} {noun}");
            for nd in &s.decompositions {
                println!("  {nd}");
            }
        }
        if a.verbose {
            for line in &s.trace {
                println!("    . {line}");
            }
        }
    }
    Ok(status)
}

fn census_options(a: &CensusArgs) -> Result<CensusOptions, CliError> {
    let budget = match &a.budget {
        Some(text) => Budget::parse(text)?,
        None => Budget::from_env()?,
    };
    Ok(CensusOptions {
        budget,
        workers: a.workers,
    })
}

fn print_census(r: &CensusReport, verify: bool) {
    println!("census of degree {} over GF({})", r.d, r.q);
    println!("  #D            {}", r.count);
    println!("  alpha         {}", r.alpha);
    if let Some(ratio) = r.ratio_truncated(4) {
        println!("  #D/alpha      {ratio}");
    }
    println!("  frobenius     {}", r.frobenius);
    if let Some(leaf) = r.leaf {
        println!("  leaf          {leaf}");
    }
    println!("  beta          {}", r.beta_text());
    println!("  beta*         {}", r.beta_star);
    if let Some(dim) = r.dimension {
        println!("  dimension     {dim}");
    }
    for s in &r.tally.splits {
        println!(
            "  split {}∘{}     {} compositions, {} distinct, {} colliding, {} frobenius",
            s.left_degree,
            s.right_degree,
            s.compositions,
            s.distinct,
            s.colliding(),
            s.frobenius
        );
    }
    if let Some(t) = r.tally.intersection {
        println!(
            "  D({},{}) ∩ D({},{})  {} distinct, {} not frobenius",
            r.d, t.l, r.d, t.m, t.distinct, t.non_frobenius
        );
    }
    println!("  counts above the splits are monic original; scale by q(q-1) for all");
    println!("  time          {:.3}s", r.elapsed.as_secs_f64());
    if verify {
        if let Some(floor) = r.wild_floor() {
            println!("chain: {floor} < #D = {} < alpha = {}", r.count, r.alpha);
        }
        let failed = r.failed_bounds().count();
        if failed == 0 {
            println!("bounds: {} checked, all hold", r.bounds.len());
        } else {
            println!("bounds: {} checked, {failed} FAIL", r.bounds.len());
        }
        for b in &r.bounds {
            println!("  {b}");
        }
    }
}

pub fn census(a: CensusArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let options = census_options(&a)?;
    let mut reports = Vec::new();
    for &d in &a.degree {
        let report = if a.verify {
            verify_bounds(&field, d, &options)?
        } else {
            enumerate_decomposables(&field, d, &options)?
        };
        reports.push(report);
    }
    if a.table {
        let stdout = std::io::stdout();
        let mut w = csv::Writer::from_writer(stdout.lock());
        for r in &reports {
            w.serialize(r.csv_row())?;
        }
        w.flush().map_err(|e| CliError::usage(e.to_string()))?;
    } else if a.json {
        for r in &reports {
            println!("{}", serde_json::to_string(r)?);
        }
    } else {
        for r in &reports {
            print_census(r, a.verify);
        }
    }
    let all_hold = reports.iter().all(CensusReport::all_bounds_hold);
    Ok(if all_hold {
        Status::Ok
    } else {
        Status::Failure
    })
}

#[derive(Serialize)]
struct BuildReport<'a> {
    tuple: &'a CollisionTuple,
    classification: Classification,
}

fn recovery_error(e: RecoveryFailed) -> CliError {
    let status = match e {
        RecoveryFailed::Precondition(_) => Status::Usage,
        _ => Status::Failure,
    };
    CliError {
        status,
        message: e.to_string(),
    }
}

fn ritt_build(a: RittBuildArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let shift = field.parse_element(&a.shift)?;
    let tuple = match a.case {
        Case::First => {
            let w =
                a.w.as_deref()
                    .ok_or_else(|| CliError::usage("--w is required"))?;
            first_case_build(a.l, a.m, &Poly::parse(&field, w)?, shift)?
        }
        Case::Second => {
            let z =
                a.z.as_deref()
                    .ok_or_else(|| CliError::usage("--z is required"))?;
            let z = field.parse_element(z)?;
            second_case_build(&field, a.l, a.m, SecondCaseParams { z, shift })?
        }
    };
    let classification = mutual_exclusion_check(a.l, &tuple);
    if a.json {
        print_json(&BuildReport {
            tuple: &tuple,
            classification,
        })?;
    } else {
        println!("f  = {}", tuple.f());
        println!("g  = {}", tuple.g());
        println!("h  = {}", tuple.h());
        println!("g* = {}", tuple.g_star());
        println!("h* = {}", tuple.h_star());
        println!("classification: {classification:?}");
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct FirstRecovery {
    w: String,
    shift: String,
    k: usize,
    s: usize,
    unique: bool,
}

#[derive(Serialize)]
struct SecondRecovery {
    z: String,
    shift: String,
}

fn ritt_recover(a: RittRecoverArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let f = Poly::parse(&field, &a.poly)?;
    match a.case {
        Case::First => {
            let l = a.l.ok_or_else(|| CliError::usage("--l is required"))?;
            let rec = first_case_recover(&f, l).map_err(recovery_error)?;
            let out = FirstRecovery {
                w: rec.params.w.to_string(),
                shift: field.format_element(rec.params.shift),
                k: rec.params.k,
                s: rec.params.s,
                unique: rec.unique,
            };
            if a.json {
                print_json(&out)?;
            } else {
                println!("w = {}", out.w);
                println!("shift = {}", out.shift);
                println!("k = {}, s = {}", out.k, out.s);
                println!("unique = {}", out.unique);
            }
        }
        Case::Second => {
            let rec = second_case_recover(&f).map_err(recovery_error)?;
            let out = SecondRecovery {
                z: field.format_element(rec.z),
                shift: field.format_element(rec.shift),
            };
            if a.json {
                print_json(&out)?;
            } else {
                println!("z = {}", out.z);
                println!("shift = {}", out.shift);
            }
        }
    }
    Ok(Status::Ok)
}

pub fn ritt(a: RittArgs) -> CmdResult {
    match a.action {
        RittAction::Build(b) => ritt_build(b),
        RittAction::Recover(r) => ritt_recover(r),
    }
}

pub fn dickson(a: DicksonArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let z = field.parse_element(&a.z)?;
    println!("{}", ritt::dickson(&field, a.n, z));
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct BluherReport {
    stats: BluherStats,
    closure_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute: Option<std::collections::BTreeMap<u64, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_agrees: Option<bool>,
}

pub fn bluher(a: BluherArgs) -> CmdResult {
    let field = FieldSpec::parse(&a.field)?;
    let stats = bluher_counts(u64::from(field.q()), a.dexp)?;
    let brute = if a.brute_check {
        Some(bluher_brute(&field, a.dexp)?)
    } else {
        None
    };
    let report = BluherReport {
        closure_holds: stats.closure_holds(),
        brute_agrees: brute.as_ref().map(|b| *b == stats.as_histogram()),
        brute,
        stats,
    };
    let ok = report.closure_holds && report.brute_agrees != Some(false);
    if a.json {
        print_json(&report)?;
    } else {
        let s = &report.stats;
        println!("q = {}, r = {}, z = {}, gamma = {}", s.q, s.r, s.z, s.gamma);
        println!(
            "c = ({},{},{},{}) for root counts 0, 1, 2, {}",
            s.c0,
            s.c1,
            s.c2,
            s.c_z_plus_1,
            s.z + 1
        );
        println!(
            "closure {}",
            if report.closure_holds {
                "holds"
            } else {
                "FAILS"
            }
        );
        match (&report.brute, report.brute_agrees) {
            (Some(_), Some(true)) => println!("brute agrees"),
            (Some(b), _) => println!("brute disagrees: {b:?}"),
            _ => {}
        }
    }
    let _ = std::io::stdout().flush();
    Ok(if ok { Status::Ok } else { Status::Failure })
}
