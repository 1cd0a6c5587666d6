//! Certified symmetries: transitivity, figure rotations, regularity,
//! congruence and chirality.

pub mod candidates;
pub mod census;
pub mod certify;
pub mod congruence;
pub mod regular;

pub use candidates::{linear_candidates, map_candidates, Orientation};
pub use certify::{certify, certify_symmetry, CertifiedSymmetry, Status, Witness};
pub use congruence::{
    chirality, congruent, coordinate_mirror, double_ray_figure, strongly_transitive, ChiralityReport,
    Congruence, CongruenceOptions, PairSample, StrongTransitivity,
};
pub use regular::{
    check_transitive, class_representatives, is_regular, local_rotations, rotation_order, Check,
    RegularityReport, TransitivityReport, Verdict,
};
