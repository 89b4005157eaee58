//! Entropies: von Neumann family, conditional min- and max-entropy, and
//! checks of the inequalities relating them.

pub mod lemmas;
pub mod minmax;
pub mod sdp;
pub mod vn;

pub use minmax::{max_entropy, min_entropy, recovery_channel, Recovery};
pub use sdp::{SdpOptions, SdpSolution};
pub use vn::{conditional_vn, mutual_information, ssa_uncertainty_gap, von_neumann};
