//! Twist cones, their refinement by orderings, and the lattices of the refinement.

pub mod lift;
pub mod ordering;
pub mod rub;
pub mod twist;
pub mod universal;
pub mod verify;

pub use lift::{equidimensional_lift, rub_lattice, CombinatorialLine, EquidimensionalLift, RubLattice};
pub use ordering::{enumerate_orderings, ordering_cone, Ordering};
pub use rub::{build_rub_fan, RubCone, RubFan};
pub use twist::{build_div_fan, intersection_pairing, twist_cone, DivCone, DivFan, DivTriple, ProjectedCone};
pub use universal::universal_family_cones;
pub use verify::{verify_subdivision, CheckOutcome, Fan, FanCone, Report};
