//! Exact algebra for valuations of the root data of Suzuki and Ree buildings.
//!
//! * [`scalar`]: exact arithmetic in `Q(sqrt 2)` and `Q(sqrt 3)`, the value groups.
//! * [`roots`]: the root systems B2, G2, F4, their polarity and folding.
//! * [`field`]: finite fields and truncated Hahn series with a Tits endomorphism.
//! * [`groups`]: the groups S and T, their norms R and N, and the involution omega.
//! * [`datum`]: commutator relations, torus and reflection tables, and valuation checks.
//! * [`moufang`]: the Ree Moufang set as a permutation group.
//! * [`report`]: sampled check outcomes.
//! * [`suite`]: the property suites, run configuration and JSON report.

pub mod datum;
pub mod field;
pub mod groups;
pub mod moufang;
pub mod report;
pub mod rng;
pub mod roots;
pub mod scalar;
pub mod suite;

use num_rational::BigRational;

/// Exact element of `Q(sqrt p)`.
pub type Quad = scalar::QuadExt<BigRational>;
/// Exact element of `Q(sqrt p) + {inf}`.
pub type Value = scalar::ExtVal<BigRational>;
