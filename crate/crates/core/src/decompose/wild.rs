//! Decomposition when the left degree `l` is divisible by `p`.
//!
//! Write `l = a·r` with `r = p^δ` and `p ∤ a`, `m = d/l`, and
//! `g = x^l + g_κ x^κ + (lower)`. The right component `h` is recovered
//! coefficient by coefficient from the top. At each step the coefficient of
//! `f` under inspection, minus the contribution of the part of `h` already
//! known, is one of
//!
//! * `κ·g_κ·h_i` at `x^((κ-1)m+i)` (the *linear* equation),
//! * `a·h_i^r` at `x^(d-r(m-i))` (the *r-th power* equation),
//! * `a·h_i^r + κ·g_κ·h_i` where both positions coincide, at `i = i0`
//!   (the *mixed* equation, solved by scanning the field),
//!
//! and the order in which they apply is governed by where `κm` sits
//! relative to `d - r`. When `κm = d - r` the two top unknowns `h_{m-1}`
//! and `g_κ` are coupled, and every nonzero root `s` of
//! `a·s^(r+1) - f_{κm}·s - f_{κm-1}` gives a candidate.
//!
//! The method is incomplete by design: it declines with a
//! [`FailureReason`] on inputs outside its reach.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::{check_monic_original, tame_decompose, NormalDecomposition};
use crate::error::{usage, Result};
use crate::field::{Fe, FieldSpec};
use crate::poly::Poly;

/// Integer data attached to a wild decomposition problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WildParams {
    /// Multiplicity of `p` in `l`.
    pub d_exp: u32,
    /// `p^d_exp`.
    pub r: u64,
    /// Cofactor `l / r`, coprime to `p`.
    pub a: usize,
    pub l: usize,
    pub m: usize,
    /// Index of the highest coefficient of `g` below `x^l`, 0 for `g = x^l`.
    pub kappa: usize,
    /// `(κm - d)/(r - 1) + m`, where the linear and r-th power equations
    /// meet.
    #[serde(serialize_with = "ser_ratio")]
    pub i0: Ratio<i64>,
    /// `gcd(d_exp, e)` for the field `GF(p^e)`.
    pub c: u32,
    /// `p^c`.
    pub z: u64,
    /// Number of candidates examined: the root count in the coupled regime,
    /// 1 otherwise.
    pub sigma: usize,
}

fn ser_ratio<S: serde::Serializer>(x: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl WildParams {
    /// Parameters for left degree `l`, right degree `m` and index `kappa`.
    pub fn new(field: &FieldSpec, l: usize, m: usize, kappa: usize) -> Result<Self> {
        let p = field.p() as usize;
        if l % p != 0 || m < 2 {
            return Err(usage(format!(
                "wild parameters need p | l and m >= 2 (p = {p}, l = {l}, m = {m})"
            )));
        }
        let mut a = l;
        let mut d_exp = 0u32;
        while a % p == 0 {
            a /= p;
            d_exp += 1;
        }
        let r = (p as u64).pow(d_exp);
        let d = (l * m) as i64;
        let i0 = Ratio::new((kappa * m) as i64 - d, r as i64 - 1) + Ratio::from_integer(m as i64);
        let c = d_exp.gcd(&field.e());
        Ok(WildParams {
            d_exp,
            r,
            a,
            l,
            m,
            kappa,
            i0,
            c,
            z: (p as u64).pow(c),
            sigma: 1,
        })
    }

    /// Parameters read off a pair `(g, h)`; `kappa` is taken from `g`.
    pub fn of_components(g: &Poly, h: &Poly) -> Result<Self> {
        let l = g.degree().ok_or_else(|| usage("zero left component"))?;
        let m = h.degree().ok_or_else(|| usage("zero right component"))?;
        let kappa = (1..l).rev().find(|&i| !g.coeff(i).is_zero()).unwrap_or(0);
        Self::new(g.field(), l, m, kappa)
    }

    /// `i0` when it is an integer in `[1, m)`.
    pub fn i0_index(&self) -> Option<usize> {
        (self.i0.is_integer() && *self.i0.numer() >= 1 && *self.i0.numer() < self.m as i64)
            .then(|| *self.i0.numer() as usize)
    }

    /// The solvability condition of the mixed equation: when `i0` is an
    /// index in `[1, m)`, `(-κ·g_κ/a)^((q-1)/(z-1)) ≠ 1`.
    pub fn mixed_condition(&self, field: &FieldSpec, g_kappa: Fe) -> bool {
        if self.i0_index().is_none() {
            return true;
        }
        let kg = field.mul(field.from_int(self.kappa as i64), g_kappa);
        let base = field
            .div(field.neg(kg), field.from_int(self.a as i64))
            .expect("p does not divide a");
        let exp = (field.q() as u64 - 1) / (self.z - 1);
        field.pow(base, exp) != Fe::ONE
    }
}

/// Position of `κm` relative to `d - r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `κm ≥ d - r + 2`: linear equations only.
    High,
    /// `κm = d - r + 1`: mixed equation for `h_{m-1}`, then linear.
    Edge,
    /// `κm = d - r`: `h_{m-1}` and `g_κ` coupled through a root set.
    Coupled,
    /// `κm < d - r`: r-th power equations down to `i0`, then linear.
    Low,
}

/// Why the wild algorithm declined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FailureReason {
    /// The top coefficient `f_j` with `p ∤ j` is not where any `κ` would put it.
    NoKappa { j: usize },
    /// The candidate `κ` is divisible by `p`.
    KappaDivisibleByP { kappa: usize },
    /// The mixed equation for `h_i` has `solutions` roots instead of one.
    MixedNotUnique { i: usize, solutions: usize },
    /// A quantity the algorithm divides by vanished.
    ZeroDivisor { what: String },
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureReason::NoKappa { j } => {
                write!(out, "no admissible kappa for top coprime exponent {j}")
            }
            FailureReason::KappaDivisibleByP { kappa } => {
                write!(out, "kappa = {kappa} is divisible by p")
            }
            FailureReason::MixedNotUnique { i, solutions } => {
                write!(out, "mixed equation for h_{i} has {solutions} solutions")
            }
            FailureReason::ZeroDivisor { what } => write!(out, "{what} vanishes"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "decompositions", rename_all = "snake_case")]
pub enum WildVerdict {
    /// A verified, possibly empty, set of decompositions.
    Found(Vec<NormalDecomposition>),
    Failure(FailureReason),
}

/// Verdict of [`wild_decompose`] with the parameters and a readable trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WildOutcome {
    pub verdict: WildVerdict,
    /// Absent when the input is a `p`-th power handled by recursion.
    pub params: Option<WildParams>,
    pub regime: Option<Regime>,
    /// How many `p`-th roots were taken before the main procedure ran.
    pub frobenius_depth: u32,
    pub trace: Vec<String>,
}

impl WildOutcome {
    pub fn decompositions(&self) -> Option<&[NormalDecomposition]> {
        match &self.verdict {
            WildVerdict::Found(v) => Some(v),
            WildVerdict::Failure(_) => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self.verdict, WildVerdict::Failure(_))
    }
}

/// Runs the wild decomposition algorithm for left degree `l` with `p | l`.
pub fn wild_decompose(f: &Poly, l: usize) -> Result<WildOutcome> {
    let (d, m) = check_monic_original(f, l)?;
    let field = f.field();
    let p = field.p() as usize;
    if l % p != 0 {
        return Err(usage(format!(
            "left degree {l} is not divisible by the characteristic {p}"
        )));
    }
    let mut trace = Vec::new();

    let Some(j) = (1..d).rev().find(|&j| j % p != 0 && !f.coeff(j).is_zero()) else {
        return frobenius_branch(f, l, m, trace);
    };
    let kappa = if m % p != 0 {
        if j % m != 0 {
            trace.push(format!(
                "top coprime exponent j = {j} is not a multiple of m = {m}"
            ));
            return Ok(failure(FailureReason::NoKappa { j }, None, None, trace));
        }
        j / m
    } else {
        if (j + 1) % m != 0 {
            trace.push(format!("m = {m} does not divide j + 1 = {}", j + 1));
            return Ok(failure(FailureReason::NoKappa { j }, None, None, trace));
        }
        (j + 1) / m
    };
    let mut params = WildParams::new(field, l, m, kappa)?;
    trace.push(format!(
        "j = {j}, kappa = {kappa}, r = {}, a = {}, i0 = {}",
        params.r, params.a, params.i0
    ));
    if kappa % p == 0 {
        return Ok(failure(
            FailureReason::KappaDivisibleByP { kappa },
            Some(params),
            None,
            trace,
        ));
    }

    let r = params.r as usize;
    let km = kappa * m;
    let regime = match km {
        _ if km + r >= d + 2 => Regime::High,
        _ if km + r == d + 1 => Regime::Edge,
        _ if km + r == d => Regime::Coupled,
        _ => Regime::Low,
    };
    trace.push(format!("kappa*m = {km}, d - r = {}: {regime:?}", d - r));

    let solver = Solver {
        f,
        field,
        params: params.clone(),
        d,
    };
    let mut h = vec![Fe::ZERO; m + 1];
    h[m] = Fe::ONE;
    let mut found = Vec::new();

    match regime {
        Regime::High | Regime::Edge => {
            let g_kappa = f.coeff(km);
            trace.push(format!("g_{kappa} = {}", field.format_element(g_kappa)));
            if let Err(reason) = solver.fill(&mut h, g_kappa, m - 1, &mut trace) {
                return Ok(failure(reason, Some(params), Some(regime), trace));
            }
            found.extend(solver.finish(&h));
        }
        Regime::Coupled => {
            let a = field.from_int(params.a as i64);
            let mut eq = vec![Fe::ZERO; r + 2];
            eq[r + 1] = a;
            eq[1] = field.neg(f.coeff(km));
            eq[0] = field.neg(f.coeff(km - 1));
            let roots: Vec<Fe> = field
                .roots_in_field(&eq)?
                .into_iter()
                .filter(|s| !s.is_zero())
                .collect();
            params.sigma = roots.len();
            trace.push(format!(
                "{} nonzero candidates for h_{}",
                roots.len(),
                m - 1
            ));
            for s in roots {
                h[1..m].fill(Fe::ZERO);
                h[m - 1] = s;
                let g_kappa = field.sub(f.coeff(km), field.mul(a, field.pow(s, r as u64)));
                trace.push(format!(
                    "h_{} = {}: g_{kappa} = {}",
                    m - 1,
                    field.format_element(s),
                    field.format_element(g_kappa)
                ));
                if m >= 3 {
                    if let Err(reason) = solver.fill(&mut h, g_kappa, m - 2, &mut trace) {
                        return Ok(failure(reason, Some(params), Some(regime), trace));
                    }
                }
                found.extend(solver.finish(&h));
            }
        }
        Regime::Low => {
            if let Err(reason) = solver.solve_at(&mut h, Fe::ZERO, m - 1, &mut trace) {
                return Ok(failure(reason, Some(params), Some(regime), trace));
            }
            let g_kappa = if m % r != 0 {
                f.coeff(km)
            } else {
                let slope = field.mul(field.from_int(kappa as i64), h[m - 1]);
                if slope.is_zero() {
                    return Ok(failure(
                        FailureReason::ZeroDivisor {
                            what: format!("h_{}", m - 1),
                        },
                        Some(params),
                        Some(regime),
                        trace,
                    ));
                }
                field.div(f.coeff(km - 1), slope)?
            };
            trace.push(format!("g_{kappa} = {}", field.format_element(g_kappa)));
            if m >= 3 {
                if let Err(reason) = solver.fill(&mut h, g_kappa, m - 2, &mut trace) {
                    return Ok(failure(reason, Some(params), Some(regime), trace));
                }
            }
            found.extend(solver.finish(&h));
        }
    }

    found.sort();
    found.dedup();
    Ok(WildOutcome {
        verdict: WildVerdict::Found(found),
        params: Some(params),
        regime: Some(regime),
        frobenius_depth: 0,
        trace,
    })
}

fn failure(
    reason: FailureReason,
    params: Option<WildParams>,
    regime: Option<Regime>,
    mut trace: Vec<String>,
) -> WildOutcome {
    trace.push(format!("failure: {reason}"));
    WildOutcome {
        verdict: WildVerdict::Failure(reason),
        params,
        regime,
        frobenius_depth: 0,
        trace,
    }
}

/// `f` has no monomial with exponent prime to `p`, so `f = (f*)^p` and every
/// decomposition found for `f*` at left degree `l/p` lifts by raising the
/// left component to the `p`-th power.
fn frobenius_branch(f: &Poly, l: usize, m: usize, mut trace: Vec<String>) -> Result<WildOutcome> {
    let field = f.field();
    let p = field.p() as usize;
    let root = f.pth_root()?;
    let l_star = l / p;
    trace.push(format!("f = ({root})^{p}, left degree {l_star}"));
    let (inner, depth) = if l_star == 1 {
        (vec![(Poly::x(field), root.clone())], 0)
    } else if l_star % p != 0 {
        let found = tame_decompose(&root, l_star)?
            .map(|nd| (nd.g().clone(), nd.h().clone()))
            .into_iter()
            .collect();
        (found, 0)
    } else {
        let sub = wild_decompose(&root, l_star)?;
        trace.extend(sub.trace.iter().map(|line| format!("  {line}")));
        match sub.verdict {
            WildVerdict::Found(v) => (
                v.into_iter()
                    .map(|nd| (nd.g().clone(), nd.h().clone()))
                    .collect(),
                sub.frobenius_depth,
            ),
            WildVerdict::Failure(reason) => {
                let mut out = failure(reason, sub.params, sub.regime, trace);
                out.frobenius_depth = sub.frobenius_depth + 1;
                return Ok(out);
            }
        }
    };
    let mut found = Vec::new();
    for (g_star, h_star) in inner {
        if h_star.degree() != Some(m) {
            continue;
        }
        let g = g_star.pow(p as u64);
        if let Ok(nd) = NormalDecomposition::new(f, g, h_star) {
            found.push(nd);
        }
    }
    found.sort();
    Ok(WildOutcome {
        verdict: WildVerdict::Found(found),
        params: None,
        regime: None,
        frobenius_depth: depth + 1,
        trace,
    })
}

struct Solver<'a> {
    f: &'a Poly,
    field: &'a FieldSpec,
    params: WildParams,
    d: usize,
}

impl Solver<'_> {
    /// `f_j` minus the coefficient of `x^j` in `h̃^l + g_κ·h̃^κ`, where `h̃`
    /// has every not yet determined coefficient set to zero.
    fn residual(&self, h: &[Fe], g_kappa: Fe, j: usize) -> Fe {
        let field = self.field;
        let partial = Poly::new(field, h.to_vec());
        let top = partial.pow(self.params.l as u64).coeff(j);
        let side = if g_kappa.is_zero() {
            Fe::ZERO
        } else {
            field.mul(g_kappa, partial.pow(self.params.kappa as u64).coeff(j))
        };
        field.sub(field.sub(self.f.coeff(j), top), side)
    }

    /// Determines `h_i` for `i = from, from - 1, …, 1`.
    fn fill(
        &self,
        h: &mut [Fe],
        g_kappa: Fe,
        from: usize,
        trace: &mut Vec<String>,
    ) -> std::result::Result<(), FailureReason> {
        for i in (1..=from).rev() {
            self.solve_at(h, g_kappa, i, trace)?;
        }
        Ok(())
    }

    /// Determines `h_i` from whichever equation applies at index `i`.
    fn solve_at(
        &self,
        h: &mut [Fe],
        g_kappa: Fe,
        i: usize,
        trace: &mut Vec<String>,
    ) -> std::result::Result<(), FailureReason> {
        let field = self.field;
        let WildParams { r, a, m, kappa, .. } = self.params;
        let at = Ratio::from_integer(i as i64);
        let a_fe = field.from_int(a as i64);
        let slope = field.mul(field.from_int(kappa as i64), g_kappa);
        let (value, how, j) = if at > self.params.i0 {
            let j = self.d - r as usize * (m - i);
            let y = field
                .div(self.residual(h, g_kappa, j), a_fe)
                .expect("p does not divide a");
            let root = field.pth_power_root(y, r).expect("r is a power of p");
            (root, "r-th power", j)
        } else if at == self.params.i0 {
            let j = (kappa - 1) * m + i;
            let rhs = self.residual(h, g_kappa, j);
            let sols: Vec<Fe> = field
                .elements()
                .filter(|&s| {
                    field.add(field.mul(a_fe, field.pow(s, r)), field.mul(slope, s)) == rhs
                })
                .collect();
            if sols.len() != 1 {
                return Err(FailureReason::MixedNotUnique {
                    i,
                    solutions: sols.len(),
                });
            }
            (sols[0], "mixed", j)
        } else {
            if slope.is_zero() {
                return Err(FailureReason::ZeroDivisor {
                    what: format!("kappa * g_{kappa}"),
                });
            }
            let j = (kappa - 1) * m + i;
            let value = field
                .div(self.residual(h, g_kappa, j), slope)
                .expect("nonzero slope");
            (value, "linear", j)
        };
        h[i] = value;
        trace.push(format!(
            "h_{i} = {} ({how} at x^{j})",
            field.format_element(value)
        ));
        Ok(())
    }

    /// Taylor expansion and final check for a fully determined `h`.
    fn finish(&self, h: &[Fe]) -> Option<NormalDecomposition> {
        let h = Poly::new(self.field, h.to_vec());
        let g = self.f.left_factor(&h).ok()??;
        if g.degree() != Some(self.params.l) {
            return None;
        }
        NormalDecomposition::new(self.f, g, h).ok()
    }
}
