//! The Clifford group: tableaux, sampling, enumeration, synthesis and the
//! 2-design check.

pub mod design;
pub mod enumerate;
pub mod pauli;
pub mod synth;
pub mod tableau;

pub use design::{haar_twirl, UnitaryEnsemble};
pub use enumerate::{clifford_group_order, enumerate_clifford};
pub use pauli::Pauli;
pub use synth::clifford_to_unitary;
pub use tableau::{CliffordElement, TableauRecord};
