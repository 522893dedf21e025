//! Evaluates every applicable bound on `#D_d` against enumerated counts.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use serde::{Serialize, Serializer};

use super::enumerate::CensusTally;
use super::exact::{cmp_sqrt_power, rat, rat_pow, PowerSum, QScale};
use super::formulas::{
    alpha_of, beta_of, beta_star_of, frobenius_count, valuation, CensusFormulaInputs,
};
use super::intersect::{intersection_count_exact, lower_bound_wild};
use crate::field::is_prime;

/// Leaf of the case tree on `(p, d)` that selects the lower bound on
/// `#D_d/α_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leaf {
    /// `d = l²`, `p ≠ l`.
    IA,
    /// `d = l²`, `p = l`.
    IB,
    /// `p ∤ d`, `l² ∤ d`.
    IIAi,
    /// `p ∤ d`, `l² | d`.
    IIAii,
    /// `p | d`, `l² ∤ d`, `p ≠ l`.
    IIBia,
    /// `p | d`, `l² ∤ d`, `p = l`.
    IIBib,
    /// `p | d`, `l² | d`, `p ≠ l`.
    IIBiia,
    /// `p = l`, `p² | d`, `p³ ∤ d`.
    IIBiibAlpha,
    /// `p = l`, `p³ | d`.
    IIBiibBeta,
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Leaf::IA => "I.A",
            Leaf::IB => "I.B",
            Leaf::IIAi => "II.A.i",
            Leaf::IIAii => "II.A.ii",
            Leaf::IIBia => "II.B.i.a",
            Leaf::IIBib => "II.B.i.b",
            Leaf::IIBiia => "II.B.ii.a",
            Leaf::IIBiibAlpha => "II.B.ii.b.α",
            Leaf::IIBiibBeta => "II.B.ii.b.β",
        })
    }
}

impl Serialize for Leaf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The leaf for composite `d` over a field of characteristic `p`.
pub fn classify_leaf(p: u32, d: usize) -> Option<Leaf> {
    let l = (2..d).find(|k| d % k == 0)?;
    let p = p as usize;
    let p_is_l = p == l;
    Some(if d == l * l {
        if p_is_l {
            Leaf::IB
        } else {
            Leaf::IA
        }
    } else if d % p != 0 {
        if d % (l * l) != 0 {
            Leaf::IIAi
        } else {
            Leaf::IIAii
        }
    } else if d % (l * l) != 0 {
        if p_is_l {
            Leaf::IIBib
        } else {
            Leaf::IIBia
        }
    } else if !p_is_l {
        Leaf::IIBiia
    } else if d % (p * p * p) != 0 {
        Leaf::IIBiibAlpha
    } else {
        Leaf::IIBiibBeta
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "≤",
            Relation::Lt => "<",
            Relation::Eq => "=",
        })
    }
}

/// One inequality `left relation right`, decided exactly.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub left: String,
    pub relation: Relation,
    pub right: String,
    pub left_value: f64,
    pub right_value: f64,
    pub holds: bool,
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {} {}  ({:.6} vs {:.6})",
            if self.holds { "pass" } else { "FAIL" },
            self.left,
            self.relation,
            self.right,
            self.left_value,
            self.right_value
        )
    }
}

enum Quantity {
    Sum(PowerSum),
    /// `c·q^(2√d)`.
    SqrtPower(BigRational),
}

impl From<PowerSum> for Quantity {
    fn from(s: PowerSum) -> Self {
        Quantity::Sum(s)
    }
}

struct Checker<'a> {
    inputs: &'a CensusFormulaInputs,
    out: Vec<BoundCheck>,
}

impl Checker<'_> {
    fn value(&self, x: &Quantity) -> f64 {
        match x {
            Quantity::Sum(s) => s.to_f64(),
            Quantity::SqrtPower(c) => {
                let c: f64 = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
                c * (self.inputs.q as f64).powf(2.0 * (self.inputs.d as f64).sqrt())
            }
        }
    }

    fn compare(&self, a: &Quantity, b: &Quantity) -> Ordering {
        let (q, d) = (self.inputs.q, self.inputs.d as u64);
        let rational = |s: &PowerSum| {
            s.to_rational()
                .expect("only integer exponents are compared with q^(2√d)")
        };
        match (a, b) {
            (Quantity::Sum(x), Quantity::Sum(y)) => x.cmp_exact(y),
            (Quantity::SqrtPower(c), Quantity::Sum(y)) => cmp_sqrt_power(q, d, c, &rational(y)),
            (Quantity::Sum(x), Quantity::SqrtPower(c)) => {
                cmp_sqrt_power(q, d, c, &rational(x)).reverse()
            }
            (Quantity::SqrtPower(_), Quantity::SqrtPower(_)) => {
                unreachable!("no bound compares two such powers")
            }
        }
    }

    fn check(
        &mut self,
        left: &str,
        a: impl Into<Quantity>,
        relation: Relation,
        right: &str,
        b: impl Into<Quantity>,
    ) {
        let (a, b) = (a.into(), b.into());
        let ord = self.compare(&a, &b);
        let holds = match relation {
            Relation::Le => ord != Ordering::Greater,
            Relation::Lt => ord == Ordering::Less,
            Relation::Eq => ord == Ordering::Equal,
        };
        self.out.push(BoundCheck {
            left: left.to_string(),
            relation,
            right: right.to_string(),
            left_value: self.value(&a),
            right_value: self.value(&b),
            holds,
        });
    }
}

fn big(sc: &QScale, n: &BigUint) -> PowerSum {
    sc.constant(BigRational::from_integer(n.clone().into()))
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Lower bound on `#D_d/α_d` at `leaf`.
///
/// At II.B.i.b this is `1 - (q^-1 + q^(-p+1) - q^-p)/2`, the sum of the
/// split contributions. The shorter listed value `1 - (q^-1 - q^-p)/2` is
/// [`listed_wild_prime_square_free`] and does not hold in characteristic 2.
pub fn leaf_lower_bound(inputs: &CensusFormulaInputs, leaf: Leaf) -> PowerSum {
    let sc = inputs.scale();
    let (p, l, d) = (inputs.p as i64, inputs.l as i64, inputs.d as i64);
    let q = |k: i64| sc.q_int(k);
    let one = sc.int(1);
    let d_over_l2 = Ratio::new(d, l * l);
    match leaf {
        Leaf::IA => one,
        Leaf::IB => {
            let front = (rat(1) + BigRational::new(1.into(), (p + 1).into())) * half();
            (&one - &q(-2)).scale(&front) + q(-p)
        }
        Leaf::IIAi => &one - &sc.constant(beta_star_of(inputs)),
        Leaf::IIAii => {
            let x = Ratio::from_integer(-d / l + l - 1) + d_over_l2;
            &one - &sc.q_pow(half(), x)
        }
        Leaf::IIBia => {
            let x = Ratio::from_integer(-d / l - l + 3) + d_over_l2;
            let inner = q(-1) + q(-p + 1) + sc.q_pow(rat(1), x);
            &one - &inner.scale(&half())
        }
        Leaf::IIBib => {
            let inner = q(-1) + q(-p + 1) - q(-p);
            &one - &inner.scale(&half())
        }
        Leaf::IIBiia => {
            let inner = q(-1) + q(-p + 1) - q(-p) + q(-l + 1);
            &one - &inner.scale(&half())
        }
        Leaf::IIBiibAlpha => {
            let qq = inputs.q;
            let v = BigRational::new(3.into(), 2.into())
                + BigRational::new(1.into(), (2 * p + 2).into())
                - rat_pow(qq, -1)
                - rat_pow(qq, -2) * half() * (rat(1) + BigRational::new(1.into(), (p + 1).into()))
                - rat_pow(qq, -p + 1) / (rat(1) - rat_pow(qq, -p));
            sc.constant(v * half())
        }
        Leaf::IIBiibBeta => &(&one - &q(-1)) - &q(-p + 1),
    }
}

/// `1 - (q^-1 - q^-p)/2`.
pub fn listed_wild_prime_square_free(inputs: &CensusFormulaInputs) -> PowerSum {
    let sc = inputs.scale();
    let p = inputs.p as i64;
    &sc.int(1) - &(sc.q_int(-1) - sc.q_int(-p)).scale(&half())
}

/// Whether `#D_d ≤ α_d` is asserted at `leaf`.
pub fn leaf_has_unit_upper(leaf: Leaf) -> bool {
    matches!(leaf, Leaf::IA | Leaf::IB | Leaf::IIBib | Leaf::IIBiibBeta)
}

/// Every bound that applies to `(q, d)`, checked against the counts in
/// `tally`. Counts are scaled from monic original to all polynomials.
pub fn check_bounds(inputs: &CensusFormulaInputs, tally: &CensusTally) -> Vec<BoundCheck> {
    let mut ck = Checker {
        inputs,
        out: Vec::new(),
    };
    if inputs.is_prime_degree() {
        return ck.out;
    }
    let sc = inputs.scale();
    let (qn, p, l, d, s) = (
        inputs.q,
        inputs.p as usize,
        inputs.l,
        inputs.d,
        inputs.s as i64,
    );
    let (li, di) = (l as i64, d as i64);
    let scale = BigUint::from(qn * (qn - 1));
    let count = big(&sc, &(BigUint::from(tally.distinct) * &scale));
    let alpha = big(&sc, &alpha_of(inputs));
    let beta = beta_of(inputs);
    let beta_star = sc.constant(beta_star_of(inputs));
    let q = |k: i64| sc.q_int(k);
    let one = sc.int(1);
    let cube_root_term = sc.q_pow(rat(1), Ratio::new(-di, 3 * li * li));
    let top = sc.q_pow(rat(2), Ratio::new(di, 2) + 2);

    ck.check(
        "q^(2√d)/2",
        Quantity::SqrtPower(half()),
        Relation::Le,
        "α",
        alpha.clone(),
    );
    ck.check("α", alpha.clone(), Relation::Lt, "2q^(d/2+2)", top.clone());
    ck.check(
        "α/2",
        alpha.scale(&half()),
        Relation::Le,
        "#D",
        count.clone(),
    );
    let simple_upper = &alpha * &(&one + &cube_root_term);
    ck.check(
        "#D",
        count.clone(),
        Relation::Le,
        "α(1+q^(-d/3l²))",
        simple_upper.clone(),
    );
    ck.check(
        "α(1+q^(-d/3l²))",
        simple_upper,
        Relation::Lt,
        "2α",
        alpha.scale(&rat(2)),
    );
    ck.check(
        "2α",
        alpha.scale(&rat(2)),
        Relation::Lt,
        "4q^(d/2+2)",
        top.scale(&rat(2)),
    );
    if d != p * p && qn > 5 {
        let lower = &alpha
            * &(sc.int(3) - q(-1).scale(&rat(2))).scale(&BigRational::new(1.into(), 4.into()));
        ck.check(
            "(3-2/q)α/4",
            lower.clone(),
            Relation::Le,
            "#D",
            count.clone(),
        );
        ck.check(
            "q^(2√d)/2",
            Quantity::SqrtPower(half()),
            Relation::Le,
            "(3-2/q)α/4",
            lower,
        );
    }
    if !(p == l && valuation(d as u64, p as u64) == 2) {
        let lower = &alpha * &(&one - &q(-1).scale(&rat(2)));
        ck.check("α(1-2/q)", lower, Relation::Le, "#D", count.clone());
    }
    if !inputs.wild() {
        let err = &alpha * &cube_root_term;
        ck.check(
            "#D-α",
            &count - &alpha,
            Relation::Le,
            "α·q^(-d/3l²)",
            err.clone(),
        );
        ck.check("α-#D", &alpha - &count, Relation::Le, "α·q^(-d/3l²)", err);
    }

    ck.check(
        "#D",
        count.clone(),
        Relation::Le,
        "α(1+β)",
        &alpha * &(&one + &beta),
    );
    ck.check(
        "#D",
        count.clone(),
        Relation::Le,
        "2α",
        alpha.scale(&rat(2)),
    );
    if !(inputs.is_l_squared() || inputs.is_l_cubed()) {
        let t = tally.intersection.map_or(0, |i| i.distinct);
        let t = big(&sc, &(BigUint::from(t) * &scale));
        ck.check(
            "#D",
            count.clone(),
            Relation::Le,
            "α-t+αβ",
            &(&alpha - &t) + &(&alpha * &beta),
        );
    }
    let estimate_floor = &alpha * &(&one - &q(-di / li + li + s - 1));
    let estimate_ceiling = &alpha * &(&(&one - &beta_star.scale(&half())) + &beta);
    if !inputs.wild() && d % (l * l) != 0 {
        let mid = &alpha * &(&one - &beta_star);
        ck.check(
            "α(1-q^(-d/l+l+s-1))",
            estimate_floor.clone(),
            Relation::Le,
            "α(1-β*)",
            mid.clone(),
        );
        ck.check("α(1-β*)", mid, Relation::Le, "#D", count.clone());
        ck.check(
            "#D",
            count.clone(),
            Relation::Le,
            "α(1-β*/2+β)",
            estimate_ceiling.clone(),
        );
    }
    if !inputs.wild() && !inputs.is_l_squared() {
        ck.check(
            "α(1-q^(-d/l+l+s-1))",
            estimate_floor,
            Relation::Le,
            "#D",
            count.clone(),
        );
        ck.check(
            "#D",
            count.clone(),
            Relation::Le,
            "α(1-β*/2+β)",
            estimate_ceiling,
        );
    }
    if p != l && inputs.is_l_squared() {
        ck.check("#D", count.clone(), Relation::Eq, "α", alpha.clone());
    }
    if p != l && inputs.is_l_cubed() {
        let exact = &alpha * &(&one - &q(-(li - 1) * (li - 1)).scale(&half()));
        ck.check(
            "#D",
            count.clone(),
            Relation::Eq,
            "α(1-q^(-(l-1)²)/2)",
            exact,
        );
    }
    if !inputs.wild() && !inputs.is_l_squared() && is_prime((d / l) as u64) {
        let inner = q(s)
            + if l == 2 {
                sc.int(0)
            } else {
                sc.int(qn as i64 - 1)
            };
        let exact = &alpha * &(&one - &(&q(-di / li - li + 3) * &inner).scale(&half()));
        ck.check(
            "#D",
            count.clone(),
            Relation::Eq,
            "α(1-q^(-d/l-l+3)(q^s+[l>2](q-1))/2)",
            exact,
        );
    }

    if let Some(leaf) = classify_leaf(inputs.p, d) {
        let lower = &alpha * &leaf_lower_bound(inputs, leaf);
        ck.check(
            &format!("α·lower({leaf})"),
            lower,
            Relation::Le,
            "#D",
            count.clone(),
        );
        if leaf == Leaf::IIAi {
            let x = Ratio::from_integer(-di / li - li + 3) + Ratio::new(di, li * li);
            let weaker = &alpha * &(&one - &sc.q_pow(rat(1), x));
            let with_star = &alpha * &(&one - &beta_star);
            ck.check(
                "α(1-q^(-d/l-l+d/l²+3))",
                weaker,
                Relation::Le,
                "α(1-β*)",
                with_star,
            );
        }
        if leaf == Leaf::IIBib {
            let listed = &alpha * &listed_wild_prime_square_free(inputs);
            ck.check(
                "α(1-(q^-1-q^-p)/2)",
                listed,
                Relation::Le,
                "#D",
                count.clone(),
            );
        }
        if leaf_has_unit_upper(leaf) {
            ck.check("#D", count.clone(), Relation::Le, "α", alpha.clone());
        }
    }

    if inputs.wild() {
        let expected = frobenius_count(qn, d)
            .expect("valid inputs")
            .unwrap_or_default();
        let frob = big(&sc, &(BigUint::from(tally.frobenius) * &scale));
        ck.check(
            "#Frobenius",
            frob,
            Relation::Eq,
            "q^(d/p+1)(1-1/q)",
            big(&sc, &expected),
        );
        for split in &tally.splits {
            let e = split.left_degree;
            if e % p != 0 {
                continue;
            }
            let k = valuation(e as u64, p as u64);
            let a = (e / p.pow(k)) as u64;
            let (_, bound) =
                lower_bound_wild(qn, k, a, split.right_degree as u64).expect("valid wild split");
            let non_frob = big(
                &sc,
                &(BigUint::from(split.distinct - split.frobenius) * &scale),
            );
            ck.check(
                &format!("wild lower bound, deg g = {e}"),
                sc.constant(bound.clone()),
                Relation::Le,
                &format!("#D+ at deg g = {e}"),
                non_frob,
            );
            if e == p {
                let with_frob = sc.constant(bound) + big(&sc, &expected);
                ck.check(
                    "wild lower bound + #Frobenius",
                    with_frob,
                    Relation::Le,
                    "#D",
                    count.clone(),
                );
            }
        }
    }

    if let Some(inter) = tally.intersection {
        if let Ok(formula) = intersection_count_exact(qn, inter.l, inter.m) {
            let t = BigUint::from(inter.non_frobenius) * &scale;
            let tq = big(&sc, &t);
            match formula {
                super::intersect::IntersectionFormula::Exact { value } => {
                    ck.check("t+", tq, Relation::Eq, "closed form", big(&sc, &value));
                }
                super::intersect::IntersectionFormula::Bounds { lower, upper } => {
                    if let Some(lower) = lower {
                        ck.check(
                            "lower bound on t+",
                            sc.constant(lower),
                            Relation::Le,
                            "t+",
                            tq.clone(),
                        );
                    }
                    ck.check(
                        "t+",
                        tq,
                        Relation::Le,
                        "upper bound on t+",
                        sc.constant(upper),
                    );
                }
                super::intersect::IntersectionFormula::Unsupported { .. } => {}
            }
        }
    }
    ck.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaves() {
        assert_eq!(classify_leaf(3, 4), Some(Leaf::IA));
        assert_eq!(classify_leaf(3, 9), Some(Leaf::IB));
        assert_eq!(classify_leaf(5, 6), Some(Leaf::IIAi));
        assert_eq!(classify_leaf(3, 8), Some(Leaf::IIAii));
        assert_eq!(classify_leaf(3, 6), Some(Leaf::IIBia));
        assert_eq!(classify_leaf(2, 6), Some(Leaf::IIBib));
        assert_eq!(classify_leaf(3, 12), Some(Leaf::IIBiia));
        assert_eq!(classify_leaf(2, 12), Some(Leaf::IIBiibAlpha));
        assert_eq!(classify_leaf(2, 8), Some(Leaf::IIBiibBeta));
        assert_eq!(classify_leaf(2, 7), None);
        assert_eq!(Leaf::IIBiibAlpha.to_string(), "II.B.ii.b.α");
    }

    #[test]
    fn small_field_leaf_values() {
        let v = |q: u64, d: usize| {
            let i = CensusFormulaInputs::new(q, d).unwrap();
            let leaf = classify_leaf(i.p, d).unwrap();
            leaf_lower_bound(&i, leaf).to_rational().unwrap()
        };
        // d = 4·3 in characteristic 2.
        assert_eq!(v(2, 12), BigRational::new(1.into(), 6.into()));
        assert_eq!(v(4, 12), BigRational::new(133.into(), 240.into()));
        // Degree 4 over F_2: 3/4, degree 9 over F_3: 16/27.
        assert_eq!(v(2, 4), BigRational::new(3.into(), 4.into()));
        assert_eq!(v(3, 9), BigRational::new(16.into(), 27.into()));
    }
}
