//! Junta approximation of threshold functions.

pub mod checks;
pub mod pipeline;
pub mod sampler;
pub mod split;
pub mod witness;

pub use checks::{sampled_junta_distance_check, sampled_form_pointwise_check, MeanDistanceReport, PointwiseReport};
pub use pipeline::{
    best_junta_on_set, theorem1_pipeline, JuntaApproximator, JuntaCase, JuntaFunction, JuntaOptions,
};
pub use sampler::{build_g_theta, default_draws, h_theta, is_regular, sample_linear_form, SampledLinearForm};
pub use split::{default_cutoff, head_tail_split, HeadTailSplit, SplitCase};
pub use witness::{prop14_witness, prop17_check, random_regular_weights, JuntaDegreeCheck};
