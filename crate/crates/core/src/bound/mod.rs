//! High-precision evaluation of the security-bound parameter chain.

pub mod formulas;
pub mod hp;
pub mod theorem;

pub use formulas::{
    binary_entropy, delta_aep, epsilon_bound, eta_definetti, gamma_closed_form, gamma_term, theorem1_rhs,
    theorem1_schedule, BoundParams, BoundReport,
};
pub use hp::{precision_bits, Hp, LogScalar};
pub use theorem::{bound_row, log_grid, verify_theorem1, BoundRow, TheoremSummary};
