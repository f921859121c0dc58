//! Current graphs, derived embeddings and triangulation surgery for building
//! minimum-genus triangulations of the complete graphs `K_{12s}`.

pub mod current_graph;
pub mod data;
pub mod derivation;
pub mod family;
pub mod iso;
pub mod label;
pub mod log;
pub mod map;
pub mod rotation;
pub mod surgery;

pub use label::VertexLabel;
pub use log::Log;
pub use rotation::RotationSystem;
