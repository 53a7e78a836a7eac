//! Covering-uniformity dynamics of semigroup actions on finite discretizations.
//!
//! Spaces are finite point samples carrying a metric, an explicit finite
//! topology or a sampled function-space structure. Uniform notions are
//! expressed through indexed families of open coverings: stars, double
//! refinements, the P(O)-valued proximity ρ, a capped star measure of
//! noncompactness, filter-directed limit sets and global attractors.

pub mod attractor;
pub mod compactness;
pub mod covering;
pub mod dynamics;
pub mod pointset;
pub mod proximity;
pub mod report;
pub mod scalar;
pub mod scenarios;
pub mod space;
pub mod suite;

pub use covering::{AdmissibleFamily, Covering, FamilyKind};
pub use pointset::PointSet;
pub use proximity::{PColl, Threshold};
pub use report::{Budget, Check, Verdict};
pub use scalar::Scalar;
pub use space::{MetricKind, Point, Space, SpaceError};

/// Double-precision space.
pub type Space64 = Space<f64>;
/// Single-precision space.
pub type Space32 = Space<f32>;
