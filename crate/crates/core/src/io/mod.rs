//! File formats: JSON descriptors and reports, OBJ geometry, CSV tables.

pub mod csv;
pub mod json;
pub mod obj;

pub use self::csv::flex_csv;
pub use json::{
    mesh_from_spec, motif_from_json, motif_to_json, parse_mesh_arg, report_json, truncation_from_json,
    truncation_to_json, MeshSpec, NetDescriptor, StringDescriptor, TruncationDoc, FORMAT,
};
pub use obj::{fmt_sig, frame_obj, net_obj, OBJ_DIGITS};
