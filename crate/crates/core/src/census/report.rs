use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::enumerate::{enumerate_tally, CensusOptions, CensusTally};
use super::exact::PowerSum;
use super::formulas::{
    alpha_of, beta_of, beta_star_of, dim_decomposables, frobenius_count, CensusFormulaInputs,
};
use super::intersect::lower_bound_wild;
use super::serialize_display;
use super::verify::{check_bounds, classify_leaf, BoundCheck, Leaf};
use crate::error::Result;
use crate::field::FieldSpec;

/// Census of decomposable polynomials of one degree over one field.
///
/// `count` is `#D_d`, taken over all polynomials of degree `d`. It equals
/// the number of monic original decomposables times `q(q - 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub field: String,
    pub q: u64,
    pub d: usize,
    pub inputs: CensusFormulaInputs,
    pub tally: CensusTally,
    pub count: u128,
    /// Frobenius members of `D_d`, over all polynomials.
    pub frobenius: u128,
    #[serde(serialize_with = "serialize_display")]
    pub alpha: BigUint,
    #[serde(serialize_with = "serialize_power_sum")]
    pub beta: PowerSum,
    #[serde(serialize_with = "serialize_display")]
    pub beta_star: BigRational,
    pub dimension: Option<usize>,
    pub leaf: Option<Leaf>,
    pub bounds: Vec<BoundCheck>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn serialize_power_sum<S: serde::Serializer>(
    v: &PowerSum,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v.to_rational() {
        Some(r) => s.collect_str(&r),
        None => s.collect_str(v),
    }
}

impl CensusReport {
    pub fn from_tally(field: &FieldSpec, tally: CensusTally) -> Result<Self> {
        let q = tally.q;
        let inputs = CensusFormulaInputs::new(q, tally.d)?;
        let scale = u128::from(q) * u128::from(q - 1);
        Ok(CensusReport {
            field: field.designator(),
            q,
            d: tally.d,
            count: u128::from(tally.distinct) * scale,
            frobenius: u128::from(tally.frobenius) * scale,
            alpha: alpha_of(&inputs),
            beta: beta_of(&inputs),
            beta_star: beta_star_of(&inputs),
            dimension: dim_decomposables(tally.d),
            leaf: classify_leaf(inputs.p, tally.d),
            bounds: Vec::new(),
            elapsed: Duration::ZERO,
            inputs,
            tally,
        })
    }

    /// `#D_d/α_d`, or `None` for prime `d`.
    pub fn ratio(&self) -> Option<f64> {
        if self.alpha.is_zero() {
            return None;
        }
        Some(self.count as f64 / self.alpha.to_f64()?)
    }

    /// The ratio truncated (not rounded) to `digits` decimals, computed
    /// exactly.
    pub fn ratio_truncated(&self, digits: u32) -> Option<String> {
        if self.alpha.is_zero() {
            return None;
        }
        let shift = BigUint::from(10u32).pow(digits);
        let scaled = BigUint::from(self.count) * &shift / &self.alpha;
        let whole = &scaled / &shift;
        let frac = &scaled % &shift;
        Some(format!("{whole}.{frac:0>width$}", width = digits as usize))
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            q: self.q,
            d: self.d,
            count: self.count,
            alpha: self.alpha.to_string(),
            ratio: self.ratio_truncated(4).unwrap_or_default(),
        }
    }

    /// Frobenius count predicted in closed form, where `p | d`.
    pub fn frobenius_formula(&self) -> Option<BigUint> {
        frobenius_count(self.q, self.d).ok().flatten()
    }

    /// `β_d` as a plain rational when every exponent is an integer.
    pub fn beta_text(&self) -> String {
        match self.beta.to_rational() {
            Some(r) => r.to_string(),
            None => self.beta.to_string(),
        }
    }

    /// Wild lower bound at the split `deg g = p` plus the Frobenius count,
    /// when `p` is the smallest prime divisor of `d`.
    pub fn wild_floor(&self) -> Option<BigRational> {
        let p = self.inputs.p as usize;
        if self.inputs.l != p || self.d == p {
            return None;
        }
        let (_, bound) = lower_bound_wild(self.q, 1, 1, (self.d / p) as u64).ok()?;
        let frob = self.frobenius_formula()?;
        Some(bound + BigRational::from_integer(frob.into()))
    }

    pub fn all_bounds_hold(&self) -> bool {
        self.bounds.iter().all(|b| b.holds)
    }

    pub fn failed_bounds(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().filter(|b| !b.holds)
    }
}

/// One row of the census table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsvRow {
    pub q: u64,
    pub d: usize,
    pub count: u128,
    pub alpha: String,
    pub ratio: String,
}

/// Enumerates `D_d` exhaustively. No bounds are evaluated.
pub fn enumerate_decomposables(
    field: &FieldSpec,
    d: usize,
    options: &CensusOptions,
) -> Result<CensusReport> {
    let start = Instant::now();
    let tally = enumerate_tally(field, d, options)?;
    let mut report = CensusReport::from_tally(field, tally)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Enumerates `D_d` and checks every applicable bound against the counts.
pub fn verify_bounds(field: &FieldSpec, d: usize, options: &CensusOptions) -> Result<CensusReport> {
    let mut report = enumerate_decomposables(field, d, options)?;
    report.bounds = check_bounds(&report.inputs, &report.tally);
    Ok(report)
}
