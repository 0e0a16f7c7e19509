//! Linear terms: the one-ancilla embedding, the five-factor decomposition, the induced
//! nonlinear mode transformation and single-mode factor orderings.

mod embed;
mod generalized;
mod linear;
mod nonlinear;
mod project;
mod single;

#[cfg(test)]
mod tests;

pub use embed::{embed, EmbeddedGenerator, EmbeddedTransfer, EMBEDDING_TOL};
pub use generalized::{generalized_bbd, GeneralizedFactored};
pub use linear::LinearGaussianOp;
pub use nonlinear::{conjugate_modes, NonlinearTransform};
pub use project::{ancilla_branch, embedded_configs, project_state, ProjectedState};
pub use single::{factor_orderings, factor_orderings_via_embedding, orderings_from_matrix, OrderedFactors, OrderingType, SingleModeOp};
