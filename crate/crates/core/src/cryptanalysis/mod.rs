//! Runnable attacks and exact search-space counts.

pub mod counting;
pub mod forge;
pub mod linear;
pub mod linearize;

pub use counting::{
    binomial, count_monomials, estimate_attack_cost, estimate_keyspace, log2_big, matrix_estimate,
    scrap_estimate, DegreeRange, EstimateReport, KeyspaceEstimate, ReportLine,
};
pub use forge::{
    public_scrap_forgery, query_message, span_forge, toy_forgery_layout, toy_forgery_params,
    ForgeOutcome, TOY_REACHABLE_DIMENSION,
};
pub use linear::{coordinatize, solve_mod6, CoordVector, SpanBasis};
pub use linearize::{
    linearization_attack, linearization_unknowns, LinearizationOutcome, DEFAULT_UNKNOWN_LIMIT,
};
