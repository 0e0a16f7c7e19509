//! Correlators `<J| F_2^dag A F_1 |I>` of strings `A` of creation and annihilation
//! operators: one- and two-point sums, Wick reduction, and the contraction expansion with
//! linear parts.

mod context;
mod operator;
mod wick;


pub use context::CorrelatorContext;
pub use operator::{pair_action_sign, ModeOperator, OperatorString};
pub use wick::{contractions, Contraction, WickExpansion, WickTerm};
