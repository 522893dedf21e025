//! Exhaustive enumeration of monic original compositions.
//!
//! Each composite is packed into a `u64` as the little-endian base-`q`
//! number formed by its free coefficients `f_1, …, f_{d-1}`. For each degree
//! split every composition is written into one buffer, which is sorted and
//! run-length collapsed; the splits are then merged.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::formulas::proper_divisors;
use crate::error::{usage, Error, Result};
use crate::field::{Fe, FieldSpec};

/// Environment variable holding the default census budget.
pub const BUDGET_ENV: &str = "POLYCOUNT_BUDGET";

/// Limits on census work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Total number of compositions `g∘h` to evaluate.
    pub compositions: u64,
    /// Bytes of packed keys held at once.
    pub bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            compositions: 1 << 28,
            bytes: 1 << 31,
        }
    }
}

fn parse_count(text: &str) -> Result<u64> {
    let text = text.trim().replace('_', "");
    let bad = || usage(format!("cannot read budget figure {text:?}"));
    match text.split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.parse().map_err(|_| bad())?;
            let exp: u32 = exp.parse().map_err(|_| bad())?;
            base.checked_pow(exp).ok_or_else(bad)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

impl Budget {
    /// Reads `COMPOSITIONS[,BYTES]`, where each figure is an integer or
    /// `b^k`. A missing byte figure keeps the default.
    pub fn parse(text: &str) -> Result<Budget> {
        let mut budget = Budget::default();
        let mut parts = text.split(',');
        budget.compositions = parse_count(parts.next().unwrap_or_default())?;
        if let Some(bytes) = parts.next() {
            budget.bytes = parse_count(bytes)?;
        }
        if parts.next().is_some() {
            return Err(usage(format!("budget {text:?} has more than two figures")));
        }
        Ok(budget)
    }

    /// The budget named by [`BUDGET_ENV`], or the default when unset.
    pub fn from_env() -> Result<Budget> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => Budget::parse(&v),
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// Knobs for a census run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusOptions {
    pub budget: Budget,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

/// Exact counts for one degree split, over monic original polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCount {
    pub left_degree: usize,
    pub right_degree: usize,
    /// Pairs `(g, h)` of monic original components evaluated.
    pub compositions: u64,
    /// Distinct composites.
    pub distinct: u64,
    /// Distinct composites with vanishing derivative.
    pub frobenius: u64,
    /// Number of decompositions at this split to the number of composites
    /// having exactly that many.
    pub multiplicities: BTreeMap<u64, u64>,
}

impl SplitCount {
    /// Composites with more than one decomposition at this split.
    pub fn colliding(&self) -> u64 {
        self.multiplicities
            .iter()
            .filter(|(&k, _)| k > 1)
            .map(|(_, &n)| n)
            .sum()
    }
}

/// Size of `D_{d,l} ∩ D_{d,d/l}` among monic original polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionTally {
    pub l: usize,
    pub m: usize,
    pub distinct: u64,
    pub non_frobenius: u64,
}

/// Raw census counts over monic original polynomials of degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusTally {
    pub q: u64,
    pub d: usize,
    pub splits: Vec<SplitCount>,
    /// Distinct decomposable monic original polynomials.
    pub distinct: u64,
    /// Those among them with vanishing derivative.
    pub frobenius: u64,
    /// Intersection of the splits at the smallest prime `l` and `d/l`, when
    /// these differ.
    pub intersection: Option<IntersectionTally>,
}

trait Arith: Sync {
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
}

struct Tables {
    q: usize,
    add: Vec<u32>,
    sub: Vec<u32>,
    mul: Vec<u32>,
}

const TABLE_LIMIT: u32 = 1 << 10;

impl Tables {
    fn new(field: &FieldSpec) -> Self {
        let q = field.q() as usize;
        let mut t = Tables {
            q,
            add: vec![0; q * q],
            sub: vec![0; q * q],
            mul: vec![0; q * q],
        };
        for a in field.elements() {
            for b in field.elements() {
                let i = a.index() as usize * q + b.index() as usize;
                t.add[i] = field.add(a, b).index();
                t.sub[i] = field.sub(a, b).index();
                t.mul[i] = field.mul(a, b).index();
            }
        }
        t
    }
}

impl Arith for Tables {
    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }
    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.sub[a as usize * self.q + b as usize]
    }
    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }
}

struct Direct<'a>(&'a FieldSpec);

impl Arith for Direct<'_> {
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        self.0.add(Fe::from_index(a), Fe::from_index(b)).index()
    }
    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.0.sub(Fe::from_index(a), Fe::from_index(b)).index()
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.0.mul(Fe::from_index(a), Fe::from_index(b)).index()
    }
}

/// Number of monic original pairs `(g, h)` with `deg g = e`, `deg h = d/e`.
pub fn split_size(q: u64, d: usize, e: usize) -> Option<u64> {
    q.checked_pow((e + d / e - 2) as u32)
}

fn check_budget(q: u64, d: usize, lefts: &[usize], budget: &Budget) -> Result<()> {
    let key_space = (q as u128).checked_pow((d - 1) as u32);
    if key_space.map_or(true, |k| k > 1u128 << 64) {
        return Err(Error::Budget(format!(
            "packed keys for degree {d} over GF({q}) need {q}^{} values, more than 64 bits",
            d - 1
        )));
    }
    let mut total: u128 = 0;
    let mut terms = Vec::new();
    for &e in lefts {
        terms.push(format!("{q}^{}", e + d / e - 2));
        total += split_size(q, d, e).map_or(u128::MAX / 2, u128::from);
    }
    let bytes = total.saturating_mul(8);
    if total > budget.compositions as u128 || bytes > budget.bytes as u128 {
        return Err(Error::Budget(format!(
            "degree {d} over GF({q}) needs {} = {total} compositions and {bytes} bytes of keys; \
             the budget allows {} compositions and {} bytes",
            terms.join(" + "),
            budget.compositions,
            budget.bytes
        )));
    }
    Ok(())
}

fn poly_mul<A: Arith>(ar: &A, a: &[u32], b: &[u32], out: &mut [u32]) {
    out.fill(0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ar.add(out[i + j], ar.mul(x, y));
        }
    }
}

/// Writes the packed keys of `g∘h` for every monic original `g` of degree
/// `e` and each `h` in the block starting at index `h_start`.
fn fill_block<A: Arith>(ar: &A, q: u32, d: usize, e: usize, h_start: u64, block: &mut [u64]) {
    let m = d / e;
    let g_count = (q as u64).pow((e - 1) as u32) as usize;
    let mut h_digits = vec![0u32; m - 1];
    let mut rest = h_start;
    for digit in h_digits.iter_mut() {
        *digit = (rest % q as u64) as u32;
        rest /= q as u64;
    }
    let mut powers = vec![vec![0u32; d + 1]; e + 1];
    let mut h = vec![0u32; m + 1];
    let mut f = vec![0u32; d + 1];
    let mut g_digits = vec![0u32; e];
    for out in block.chunks_mut(g_count) {
        h[1..m].copy_from_slice(&h_digits);
        h[m] = 1;
        powers[1][..=m].copy_from_slice(&h);
        for k in 2..=e {
            let (done, todo) = powers.split_at_mut(k);
            poly_mul(ar, &done[k - 1][..=(k - 1) * m], &h, &mut todo[0][..=k * m]);
        }
        f.copy_from_slice(&powers[e]);
        g_digits.fill(0);
        for slot in out.iter_mut() {
            let mut key = 0u64;
            for &c in f[1..d].iter().rev() {
                key = key * q as u64 + c as u64;
            }
            *slot = key;
            for i in 1..e {
                let old = g_digits[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                g_digits[i] = new;
                let delta = ar.sub(new, old);
                let pi = &powers[i];
                for j in 1..=i * m {
                    f[j] = ar.add(f[j], ar.mul(delta, pi[j]));
                }
                if new != 0 {
                    break;
                }
            }
        }
        for digit in h_digits.iter_mut() {
            *digit += 1;
            if *digit < q {
                break;
            }
            *digit = 0;
        }
    }
}

fn fill_split<A: Arith>(ar: &A, q: u32, d: usize, e: usize) -> Vec<u64> {
    let m = d / e;
    let g_count = (q as u64).pow((e - 1) as u32) as usize;
    let h_count = (q as u64).pow((m - 1) as u32) as usize;
    let mut keys = vec![0u64; g_count * h_count];
    let per_chunk = (h_count / (rayon::current_num_threads() * 16)).max(1);
    keys.par_chunks_mut(per_chunk * g_count)
        .enumerate()
        .for_each(|(ci, block)| fill_block(ar, q, d, e, (ci * per_chunk) as u64, block));
    keys
}

/// Sorts, collapses runs and returns the run-length histogram.
fn collapse(keys: &mut Vec<u64>) -> BTreeMap<u64, u64> {
    keys.par_sort_unstable();
    let mut hist = BTreeMap::new();
    let (mut write, mut i) = (0, 0);
    while i < keys.len() {
        let x = keys[i];
        let mut j = i + 1;
        while j < keys.len() && keys[j] == x {
            j += 1;
        }
        *hist.entry((j - i) as u64).or_insert(0) += 1;
        keys[write] = x;
        write += 1;
        i = j;
    }
    keys.truncate(write);
    keys.shrink_to_fit();
    hist
}

/// Whether the composite packed in `key` lies in `F_q[x^p]`.
fn is_frobenius_key(mut key: u64, q: u64, d: usize, p: usize) -> bool {
    if d % p != 0 {
        return false;
    }
    for j in 1..d {
        let digit = key % q;
        key /= q;
        if j % p != 0 && digit != 0 {
            return false;
        }
    }
    true
}

struct Context<'a> {
    field: &'a FieldSpec,
    d: usize,
}

impl Context<'_> {
    fn split(&self, e: usize) -> (SplitCount, Vec<u64>) {
        let q = self.field.q();
        let mut keys = if q <= TABLE_LIMIT {
            fill_split(&Tables::new(self.field), q, self.d, e)
        } else {
            fill_split(&Direct(self.field), q, self.d, e)
        };
        let compositions = keys.len() as u64;
        let multiplicities = collapse(&mut keys);
        let frobenius = self.count_frobenius(&keys);
        let count = SplitCount {
            left_degree: e,
            right_degree: self.d / e,
            compositions,
            distinct: keys.len() as u64,
            frobenius,
            multiplicities,
        };
        (count, keys)
    }

    fn count_frobenius(&self, keys: &[u64]) -> u64 {
        let (q, p) = (self.field.q() as u64, self.field.p() as usize);
        if self.d % p != 0 {
            return 0;
        }
        keys.par_iter()
            .filter(|&&k| is_frobenius_key(k, q, self.d, p))
            .count() as u64
    }

    fn intersect(&self, a: &[u64], b: &[u64]) -> (u64, u64) {
        let (q, p) = (self.field.q() as u64, self.field.p() as usize);
        let (mut i, mut j) = (0, 0);
        let (mut all, mut frob) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    all += 1;
                    frob += u64::from(is_frobenius_key(a[i], q, self.d, p));
                    i += 1;
                    j += 1;
                }
            }
        }
        (all, all - frob)
    }
}

/// Counts distinct keys across sorted, duplicate-free lists.
fn union_counts(lists: &[Vec<u64>], q: u64, d: usize, p: usize) -> (u64, u64) {
    let mut heads = vec![0usize; lists.len()];
    let (mut distinct, mut frob) = (0, 0);
    loop {
        let next = lists
            .iter()
            .zip(&heads)
            .filter_map(|(l, &h)| l.get(h).copied())
            .min();
        let Some(x) = next else { break };
        distinct += 1;
        frob += u64::from(is_frobenius_key(x, q, d, p));
        for (l, h) in lists.iter().zip(heads.iter_mut()) {
            if l.get(*h) == Some(&x) {
                *h += 1;
            }
        }
    }
    (distinct, frob)
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(job());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| usage(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(job))
}

/// Enumerates every split of degree `d` and counts the distinct monic
/// original decomposables, per split and overall.
pub fn enumerate_tally(
    field: &FieldSpec,
    d: usize,
    options: &CensusOptions,
) -> Result<CensusTally> {
    if d < 2 {
        return Err(usage(format!("degree {d} is below 2")));
    }
    let q = field.q() as u64;
    let lefts = proper_divisors(d);
    check_budget(q, d, &lefts, &options.budget)?;
    let ctx = Context { field, d };
    with_pool(options.workers, || {
        let mut splits = Vec::with_capacity(lefts.len());
        let mut lists = Vec::with_capacity(lefts.len());
        for &e in &lefts {
            let (count, keys) = ctx.split(e);
            splits.push(count);
            lists.push(keys);
        }
        let (distinct, frobenius) = union_counts(&lists, q, d, field.p() as usize);
        let intersection = lefts.first().and_then(|&l| {
            let m = d / l;
            (m != l).then(|| {
                let a = &lists[0];
                let b = &lists[lefts.iter().position(|&e| e == m).expect("divisor")];
                let (all, non_frobenius) = ctx.intersect(a, b);
                IntersectionTally {
                    l,
                    m,
                    distinct: all,
                    non_frobenius,
                }
            })
        });
        CensusTally {
            q,
            d,
            splits,
            distinct,
            frobenius,
            intersection,
        }
    })
}

/// Exact size of `D_{d,l} ∩ D_{d,d/l}` among monic original polynomials,
/// from the two splits alone.
pub fn enumerate_intersection(
    field: &FieldSpec,
    d: usize,
    l: usize,
    options: &CensusOptions,
) -> Result<IntersectionTally> {
    if l < 2 || l >= d || d % l != 0 {
        return Err(usage(format!("{l} is not a proper divisor of {d}")));
    }
    let m = d / l;
    let q = field.q() as u64;
    let lefts: Vec<usize> = if l == m { vec![l] } else { vec![l, m] };
    check_budget(q, d, &lefts, &options.budget)?;
    let ctx = Context { field, d };
    with_pool(options.workers, || {
        let (_, a) = ctx.split(l);
        let b = if l == m { a.clone() } else { ctx.split(m).1 };
        let (distinct, non_frobenius) = ctx.intersect(&a, &b);
        IntersectionTally {
            l,
            m,
            distinct,
            non_frobenius,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn tally(q: u64, d: usize) -> CensusTally {
        let f = FieldSpec::with_order(q).unwrap();
        enumerate_tally(&f, d, &CensusOptions::default()).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(tally(2, 4).distinct * 2, 6);
        assert_eq!(tally(3, 9).distinct * 6, 414);
        assert_eq!(tally(2, 7).distinct, 0);
    }

    #[test]
    fn keys_match_composition() {
        let f3 = FieldSpec::prime(3).unwrap();
        let ar = Tables::new(&f3);
        let mut block = vec![0u64; 9];
        // h = x^3 + 2x (index 2 in the h enumeration for digits [2, 0]).
        fill_block(&ar, 3, 9, 3, 2, &mut block);
        let h = Poly::parse(&f3, "x^3+2*x").unwrap();
        let mut expected = Vec::new();
        for g1 in 0..3 {
            for g2 in 0..3 {
                let g = Poly::from_ints(&f3, &[0, g1, g2, 1]);
                let f = g.compose(&h).unwrap();
                let mut key = 0u64;
                for c in f.coeffs()[1..9].iter().rev() {
                    key = key * 3 + c.index() as u64;
                }
                expected.push(key);
            }
        }
        let mut got = block.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn budget_refusal_shows_arithmetic() {
        let f2 = FieldSpec::prime(2).unwrap();
        let opts = CensusOptions {
            budget: Budget {
                compositions: 10,
                bytes: 1 << 20,
            },
            workers: 1,
        };
        let err = enumerate_tally(&f2, 8, &opts).unwrap_err();
        let Error::Budget(msg) = err else { panic!() };
        assert!(msg.contains("2^4 + 2^4 = 32 compositions"), "{msg}");
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(Budget::parse("1000").unwrap().compositions, 1000);
        let b = Budget::parse("2^20, 2^30").unwrap();
        assert_eq!((b.compositions, b.bytes), (1 << 20, 1 << 30));
        assert!(Budget::parse("lots").is_err());
        assert!(Budget::parse("1,2,3").is_err());
    }

    #[test]
    fn frobenius_keys() {
        // x^4 + x^2 over F_2 packs as digits (0, 1, 0).
        assert!(is_frobenius_key(2, 2, 4, 2));
        assert!(!is_frobenius_key(1, 2, 4, 2));
        assert!(!is_frobenius_key(0, 5, 4, 5));
    }
}
