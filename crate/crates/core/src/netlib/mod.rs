//! Periodic string-node nets: motifs, the catalog, truncations and ray figures.

pub mod catalog;
pub mod figure;
pub mod graph;
pub mod motif;
pub mod oracle;
pub mod scaling;
pub mod sierpinski;
pub mod truncation;

pub use catalog::{catalog, CATALOG, CATALOG_2D, CATALOG_3D};
pub use figure::{ray_figure, FigureClass, RayFigure};
pub use graph::{string_graph, EdgeLength, StringGraph};
pub use motif::{Lattice, Motif};
pub use oracle::{NetOracle, PeriodicOracle};
pub use scaling::{scaling_inclusion, ScalingReport};
pub use sierpinski::sierpinski;
pub use truncation::{generate, Assembly, NetTruncation, NodeEntry, StringEntry};
