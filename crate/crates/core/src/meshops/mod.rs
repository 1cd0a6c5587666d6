//! Dense linear meshes: tensor meshes `N ⊗ F`, unions of scalings, grid
//! meshes and their regularity.

pub mod oracle;
pub mod regular;
pub mod tensor;

pub use regular::{
    gap_growth_primes, mesh_is_regular, mesh_label, scaff_collapse, tri_mesh_conformal, Collapse, ConformalCheck,
    ConformalEvidence, MeshRegularityReport,
};
pub use oracle::{GridOracle, ScalingUnionOracle, TensorOracle};
pub use tensor::{
    dilation_maps_into, grid_mesh, scaling_union, tensor, tensor_strings, GapCertificate, MeshKind,
    MeshTruncation, TENSOR_BASES,
};
