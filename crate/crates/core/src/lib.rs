//! Densities of subsets of the positive integers.
//!
//! Asymptotic, logarithmic and α-densities, Pólya's minimal and maximal
//! densities, gap density, and finitely additive density measures assembled
//! from limits along explicit index subsequences.

// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod density_core;
pub mod error;
pub mod measures;
pub mod numeric;
pub mod parse;
pub mod polya_range;
pub mod set_algebra;
pub mod tolerances;
pub mod verify;

pub use constructions::{
    corollary_superset, counterexample_set, difference_matching_subset, intermediate_subset,
    ConstructedSet, Construction,
};
pub use density_core::{
    estimate_alpha_density, exact_alpha_extremes, exact_density, fuchs_consistency_check,
    ggm_continuity_check, oscillation_diagnostic, rajagopal_monotonicity_check, DensityEstimate,
    EstimateOptions, Rational,
};
pub use error::{DensityError, Result};
pub use measures::{
    additivity_check, difference_limit_check, evaluate_measure, extension_check, flim, mu_alpha,
    mu_theta, range_witness, Atom, AtomKind, Extreme, FilterSurrogate, FlimOptions, MeasureSpec,
};
pub use parse::{parse_set_expr, ParseError};
pub use polya_range::{
    alpha_envelopes, density_set_sample, gap_density, polya_bounds, GapDensity, PolyaEstimate,
};
pub use set_algebra::{
    contains, count, m_copy, materialize, normalizer, nth_element, weighted_count, CopyRule,
    CountingProfile, MemberTable, SetExpr,
};
