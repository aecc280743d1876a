//! Exact polyhedral geometry over the rationals.

pub mod cone;
pub mod form;
pub mod lattice;
pub mod linalg;

pub use cone::Cone;
pub use form::LinearForm;
pub use lattice::Sublattice;
pub use linalg::{Int, Rat};
