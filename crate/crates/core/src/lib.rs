//! Bivariate stochastic dominance for purely atomic distributions with
//! compact support.
//!
//! The crate decides first- and second-order dominance conditions for the
//! submodular and supermodular increasing utility classes, and carries an
//! exact Riemann–Stieltjes expectation engine used to check those
//! conditions empirically.
//!
//! All coordinates live on a normalized frame `[0, 1]²`. Step CDFs are
//! right-continuous, `F(s, t) = P(X ≤ s, Y ≤ t)`, and every pointwise
//! condition is decided exactly on the merged grid of atom coordinates.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distribution;
pub mod error;
pub mod first_order;
pub mod second_order;
pub mod stieltjes;
pub mod testfuncs;
pub mod univariate;
pub mod verdict;
pub mod verify;

pub use distribution::{
    build_cdf, build_common_frame, merge_grids, BivariateStepCdf, CommonFrame, MergedGrid,
    SampleSet, StepCdf,
};
pub use error::{Error, Result};
pub use first_order::{check_first_order_submodular, check_first_order_supermodular, KSheet};
pub use second_order::{check_second_order_submodular, check_second_order_supermodular, BilinearSheet};
pub use stieltjes::{exact_expectation, partition_sum, Partition, SumDecomposition};
pub use testfuncs::{ModularityClass, TestFunction};
pub use univariate::{sd_check, s_operator, PiecewisePolynomial};
pub use verdict::{DominanceVerdict, Family, Witness};

/// Default absolute tolerance for probability comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
