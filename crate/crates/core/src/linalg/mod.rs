//! Dense complex linear algebra, states, channels and their I/O.

pub mod channel;
pub mod io;
pub mod matrix;
pub mod random;
pub mod state;

pub use channel::ChoiChannel;
pub use matrix::{ComplexMatrix, C64};
pub use state::DensityOperator;
