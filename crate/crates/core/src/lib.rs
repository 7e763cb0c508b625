//! Exact-arithmetic toolkit for k-dimensional multi-transversals, mixed
//! orthogonal arrays (MOAs) and M-part Sperner multi-families.
//!
//! The library works over the profile box `π_M = ∏_j {0,…,n_j−1}`:
//!
//! * [`domain`] — dimensions, profile vectors, multisets over the box,
//!   parameter sets and the shared exact-rational plumbing;
//! * [`transversal`] — the packing inequalities defining multi-transversals,
//!   fullness, and conversion to/from mixed orthogonal arrays;
//! * [`construct`] — fractional-part window constructions, box partitions,
//!   linear combinations and tensor products;
//! * [`sperner`] — multi-families of subsets of a partitioned ground set:
//!   chain-product packing, profile matrices, BLYM sums, traces, shadows;
//! * [`hull`] — profile-matrix polytopes: candidate enumeration, extreme
//!   points by exact linear feasibility, lexicographically maximal orderings;
//! * [`optimize`] — the max-weight packing solver (exhaustive and
//!   branch-and-bound) and closed-form maximum sizes.
//!
//! All arithmetic is exact: multiplicities and counts are integers, every
//! real-valued parameter is a [`Rational`]. There is no floating point
//! anywhere, so equality cases of the inequalities are decidable.

pub mod construct;
pub mod domain;
pub mod error;
pub mod hull;
pub mod optimize;
pub mod sperner;
pub mod transversal;

pub use error::{Error, Result};

pub use domain::{Dimensions, MultiTransversal, ParamSet, ProfileVector, Rational};
pub use transversal::{Moa, ViolationReport};
