//! Benchmark problems and error metrics.

mod adr;
mod complex_ode;
mod metrics;

pub use adr::{adr_initial, adr_initial_value, adr_split, real_field, trapezoid_weights, AdrConfig, Grid2D};
pub use complex_ode::{
    complex_split, complex_to_realified, realified_split, realified_to_complex, ComplexOdeConfig, OdeForm,
};
pub use metrics::{l2_error, mrms_error};
