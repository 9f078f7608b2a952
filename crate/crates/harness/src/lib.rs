//! Command-line studies for N-split methods: the method catalog, order
//! verification, BCH checks, convergence and work-precision studies, and
//! their CSV and SVG artifacts.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod study;
pub mod svg;

pub use config::StudyConfig;
pub use error::{HarnessError, Result};
pub use study::{Row, Study, StudyResult};
