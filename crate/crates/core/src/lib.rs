//! N-split operator-splitting methods for additively split ODEs
//! `y' = F_1(t, y) + ... + F_N(t, y)`.
//!
//! - [`splitting`]: method tables (Lie-Trotter, Strang, the complex
//!   Lie-Trotter pair and its conjugate compositions), flow sequences, and
//!   first/second-order condition residuals.
//! - [`bch`]: matrix checks of the N-term BCH expansion and empirical order
//!   measurement with exact sub-flows.
//! - [`integrators`]: explicit Runge-Kutta sub-flows over complex steps, the
//!   splitting step and driver, and an adaptive reference solver.
//! - [`problems`]: the 2D advection-diffusion-reaction benchmark, the cubic
//!   complex ODE in complex and realified form, and error metrics.
//!
//! Everything is generic over the scalar type. Coefficient algebra accepts
//! exact rationals; numerics need `f32` or `f64`. The aliases below fix the
//! common choices.

pub mod bch;
pub mod error;
pub mod fit;
pub mod integrators;
pub mod matrix;
pub mod problems;
pub mod scalar;
pub mod serial;
pub mod splitting;

pub use error::{Error, Result};
pub use scalar::{RealScalar, Scalar};

pub use num_complex::Complex;
pub use num_rational::Rational64;

pub type C64 = Complex<f64>;
pub type Table = splitting::MethodTable<f64>;
pub type Table32 = splitting::MethodTable<f32>;
pub type ExactTable = splitting::MethodTable<Rational64>;
pub type Matrix = matrix::CMatrix<f64>;
pub type Matrices = bch::MatrixSet<f64>;
pub type Ode = integrators::SplitOde<f64>;
