//! Sub-flow integrators, the splitting step, and the reference solver.

mod ode;
mod reference;
mod step;
mod tableau;

pub use ode::{EvalCounters, FnOperator, LinearOperator, Operator, SplitOde};
pub use reference::{reference_samples, reference_solve, ReferenceSolver, SolverStats, Tolerances};
pub use step::{
    exact_linear_flow, integrate, integrate_observed, rk_substep, split_step, IntegrationResult, SplitStepper, SubFlow,
    SubIntegratorConfig, BLOW_UP_FACTOR,
};
pub use tableau::ButcherTableau;
