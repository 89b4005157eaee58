//! The encryption scheme, cloning attacks, and the dual
//! monogamy-of-entanglement game.

pub mod attack;
pub mod game;
pub mod helstrom;
pub mod povm;
pub mod scheme;
pub mod seesaw;

pub use attack::{choi_swap_symmetry, cloning_success, CloningAttack};
pub use game::{winning_probability, GameKind, MoEGame, Strategy};
pub use helstrom::helstrom_update;
pub use povm::BinaryPovm;
pub use scheme::{Estimate, Key, QecmScheme};
pub use seesaw::{optimize_attack, seesaw_optimize, SeesawConfig, SeesawResult, StateUpdate};
