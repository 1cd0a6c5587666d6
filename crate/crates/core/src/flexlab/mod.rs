//! Numerical laboratory for placements and flexes of planar meshes.

pub mod checks;
pub mod curve;
pub mod demo;
pub mod metric;
pub mod placement;
pub mod rigidity;

pub use checks::{
    adaptive_simpson, collision_sampler, injectivity_condition, laminarity_test, mixed_partial,
    mixed_partial_convergence, verify_string_lengths, Axis, CollisionReport, ConeWitness, ConvergenceReport,
    InjectivityReport, LaminarityReport, LengthReport,
};
pub use curve::{validate_unit_speed, Curl, Curve, Sampled, Straight, P2};
pub use demo::{grid_flex_demo, grid_flex_demo_with, placed_frame, FlexDemo, FlexPath, FlexTolerances, StepReport};
pub use metric::{string_path_metric, PathMetric};
pub use placement::{nonisometric_family, FnPlacement, LaminarPlacement, LinearPlacement, Placement};
pub use rigidity::{kagome_rigidity_probe, rigidity_samples, RigidityReport, RigidityVerdict, RigidityWitness, ANGLE_TOL};
