//! Exact computation of the cone complexes attached to a stable graph, a
//! ramification vector and a generic stability condition: twist cones of
//! stable flows, their refinement by orderings, and the refined lattices.

pub mod error;
pub mod fan;
pub mod flow;
pub mod graph;
pub mod oracle;
pub mod polyhedra;
pub mod stability;

pub use error::{Error, Result};
pub use fan::{build_div_fan, build_rub_fan, verify_subdivision, DivFan, RubFan};
pub use flow::{Divisor, Flow};
pub use graph::{Edge, Graph, QuasiStableModel, Subdivision, Vertex};
pub use polyhedra::{Cone, LinearForm, Sublattice};
pub use stability::StabilityCondition;
