//! Exact construction and desk-scale certification of periodic string-node
//! nets and dense meshes.

pub mod error;
pub mod exact;
pub mod flexlab;
pub mod hull;
pub mod io;
pub mod meshops;
pub mod netlib;
pub mod symmetry;
pub mod supernatural;

pub use error::{Error, Result};
