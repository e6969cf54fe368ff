//! Exact LP representations of threshold functions.

pub mod domain;
pub mod gaps;
pub mod omb;
pub mod repr;
pub mod simplex;

pub use domain::{Coord, DomainFunction, SymmetricDomain};
pub use gaps::{gap_report, weight_floor_check, FloorMode, FloorRow, GapBound, GapReport, GapRow};
pub use omb::{enumerate_threshold_functions, min_weight_search, omb_table, omb_witness, MinWeight};
pub use repr::{
    build_domain_lp, build_ltf_lp, extended_domain_repr, integer_representation, is_threshold, ltf_vertex,
    ltf_vertex_with, LiftRecord, LpInstance, LpOptions, Representation, SolvedRepresentation,
};
pub use simplex::{solve, solve_vertex, BasisRow, FarkasRay, LpOutcome, LpProblem, RowTag, VertexCertificate};
