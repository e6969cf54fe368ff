//! Low-weight approximation pipelines.

pub mod compose;
pub mod critical;
pub mod pipelines;
pub mod rounding;

pub use compose::{junta_then_weights, ComposedReport, JuntaSource};
pub use critical::{junta_size, pipeline_critical};
pub use pipelines::{
    erdos_k, halasz_k, pipeline_erdos, pipeline_erdos_from, pipeline_halasz, pipeline_halasz_from, separation_radius,
    spread_radius,
    vertex_representation, CriticalBranch, CriticalTrace, Method, PipelineOptions, PipelineReport, SortedRepresentation,
};
pub use rounding::{integer_form, round_weights, truncate_to_junta, Rounded, RoundingMode, RoundingSpec};
