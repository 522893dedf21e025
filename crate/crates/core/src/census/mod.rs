//! Exact census of decomposable polynomials and the formulas that predict it.

pub mod bluher;
pub mod enumerate;
pub mod exact;
pub mod formulas;
pub mod intersect;
pub mod report;
pub mod verify;

use std::fmt::Display;

use serde::Serializer;

pub use bluher::{
    bluher_brute, bluher_counts, count_s, count_t, gcd_structure, s_zero_count, BluherStats,
    GcdStructure,
};
pub use enumerate::{
    enumerate_intersection, enumerate_tally, Budget, CensusOptions, CensusTally, IntersectionTally,
    SplitCount, BUDGET_ENV,
};
pub use exact::PowerSum;
pub use formulas::{
    alpha, beta, beta_star, dim_decomposables, frobenius_count, CensusFormulaInputs,
};
pub use intersect::{
    intersection_count_exact, lower_bound_wild, IntersectionFormula, WildBoundCase,
};
pub use report::{enumerate_decomposables, verify_bounds, CensusReport, CsvRow};
pub use verify::{
    check_bounds, classify_leaf, leaf_lower_bound, listed_wild_prime_square_free, BoundCheck, Leaf,
    Relation,
};

pub(crate) fn serialize_display<T: Display, S: Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}
