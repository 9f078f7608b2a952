//! Construction, transformation and validation of N-split method tables.

mod composition;
mod generators;
mod order;
mod table;

pub use composition::{compose, compose_steps, composition_sigma, CompositionPair};
pub use generators::{clt2, clt3, cstrang3, lie_trotter, strang, two_split_family};
pub use order::{order_residuals, Condition, ConditionResidual, OrderReport};
pub use table::{Flow, FlowSequence, MethodTable};
