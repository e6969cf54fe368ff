//! Boolean functions on {-1,1}^n, threshold representations, input
//! distributions and distance.

pub(crate) mod distance;
mod distribution;
mod kwise;
mod ltf;
pub mod point;
pub mod random;
mod table;

pub use distance::{distance, hoeffding_samples, DistanceMode, DistanceReport, Function};
pub(crate) use distance::ceil_snapped;
pub use distribution::{Distribution, PointSampler};
pub(crate) use distribution::{Mass, MassKind, MassTable, Measure};
pub use kwise::{hadamard_support, parity_support, validate_kwise, KwiseReport, MarginalViolation};
pub(crate) use kwise::binomial;
pub use ltf::{Evaluator, Ltf, Restriction};
pub use table::{TruthTable, MAX_TABLE_N};
