//! Root finding, Newton solves, region filters and zero-curve tracing.

mod contour;
mod families;
mod newton;
mod one_two_one;
mod regions;

pub use contour::{
    evaluate_tag, trace_zero_curve, write_polylines_csv, CurveTag, Polyline, TraceResult, Window, VERTEX_TOL,
};
pub use families::{
    check_family_masses, find_asymmetric_positive, mirror_asymmetry, pfaffian_on_family,
    pick_asymmetric_positive, solve_symmetric_family, AsymmetricSolution, FamilySolution,
    FamilySolveReport, SeedFailure,
};
pub use newton::{solve_family_newton, solve_full_system, NewtonOptions, NewtonOutcome};
pub use one_two_one::{g_1p2p1, solve_1p2p1, Case1p2p1, RootList};
pub use regions::{
    arc_ordered, is_convex_configuration, identity_bracket, lemma4_identity_check, region_b_check, region_b_report, region_c_check, RegionBReport,
};
