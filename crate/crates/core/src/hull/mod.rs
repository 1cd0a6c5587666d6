//! Minimal disjoint interval covers and minimal extensions of nets by
//! groups of scalings.

pub mod cover;
pub mod extend;

pub use cover::{epsilon_chain, minimal_cover, Chain, CoverResult, Interval};
pub use extend::{extend_net, scaling_words, ExtensionReport};
