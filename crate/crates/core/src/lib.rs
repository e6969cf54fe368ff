//! Linear threshold functions on the Boolean hypercube.
//!
//! Truth tables, exact rational threshold representations, Fourier analysis,
//! Lévy anti-concentration, an exact simplex engine for gap-structured
//! vertex representations, junta approximation and low-integer-weight
//! approximation pipelines.
//!
//! The crate is `no_std` and needs only `alloc`. All probabilities and
//! weights are exact rationals; floating point appears only in explicitly
//! labelled renderings and in the closed-form sample-size formulas.
#![no_std]

extern crate alloc;

pub mod anticonc;
pub mod caps;
pub mod cube;
pub mod error;
pub mod fourier;
pub mod junta;
pub mod lp;
pub mod rational;
pub mod rng;
pub(crate) mod scaled;
pub mod weights;

pub use caps::{Caps, PipelineConstants};
pub use cube::{
    distance, hoeffding_samples, validate_kwise, DistanceMode, Distribution, Ltf, Restriction,
    TruthTable,
};
pub use error::{Error, Result};
pub use rational::Rational;
