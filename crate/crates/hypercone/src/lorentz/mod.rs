//! Lorentzian structures: norms on the time-space triangle, the causal order on
//! `R x Q^d`, positive functionals and the directed completion of Minkowski space.

pub mod causal;
pub mod classify;
pub mod triangle;

pub use causal::{
    completeness_pair, lorentz_norm, positive_functional_audit, positive_functional_suite,
    reverse_triangle_audit, BanachNorm, CausalPoint, CompletenessPair, PositiveAuditSummary,
    PositiveFunctional, ReverseTriangleReport,
};
pub use classify::{
    classify_directed, limit_leq, pythagorean_directions, Classification, Detection, Limit,
    MinkowskiClaim, RaySequence,
};
pub use triangle::{
    bidual_fixed_point, is_x_decreasing, tri_bidual, tri_dual, tri_norm, triangle_duality_audit,
    BidualReport, DualityAudit, TriangleNorm,
};
