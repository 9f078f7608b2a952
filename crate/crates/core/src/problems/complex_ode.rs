//! `u' = i u + 0.05 u - 0.5 u^3`, split as rotation, growth and cubic
//! damping, either directly in `u` or in the real pair `(x, y)`, `u = x + iy`.
//!
//! In the real form the cubic operator is
//!
//! ```text
//! H3(x, y) = [ 1.5 x y^2 - 0.5 x^3 ; -1.5 x^2 y + 0.5 y^3 ]
//! ```
//!
//! which is `-0.5 (x + iy)^3` taken apart into real and imaginary parts.
//! When a complex-coefficient method runs on the real form, `x` and `y`
//! themselves become complex; the polynomial fields extend, and `x + iy`
//! still tracks `u`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{FnOperator, Operator, SplitOde};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OdeForm {
    Complex,
    Realified,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexOdeConfig {
    pub u0: f64,
    pub t_final: f64,
    pub form: OdeForm,
    /// Sample times for the error metric.
    pub samples: Vec<f64>,
}

impl Default for ComplexOdeConfig {
    fn default() -> Self {
        Self {
            u0: 0.1,
            t_final: 100.0,
            form: OdeForm::Complex,
            samples: (1..=100).map(f64::from).collect(),
        }
    }
}

impl ComplexOdeConfig {
    pub fn realified() -> Self {
        Self {
            form: OdeForm::Realified,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u0.is_finite() && self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::Config("u0 and t_final must be finite, t_final positive".into()));
        }
        if self.samples.is_empty() {
            return Err(Error::Config("no sample times".into()));
        }
        let mut prev = 0.0;
        for &t in &self.samples {
            if !(t > prev && t <= self.t_final) {
                return Err(Error::Config(format!(
                    "sample time {t} must be increasing within (0, {}]",
                    self.t_final
                )));
            }
            prev = t;
        }
        Ok(())
    }

    pub fn initial<T: RealScalar>(&self) -> Vec<Complex<T>> {
        let u0 = Complex::new(T::lit(self.u0), T::zero());
        match self.form {
            OdeForm::Complex => vec![u0],
            OdeForm::Realified => vec![u0, Complex::new(T::zero(), T::zero())],
        }
    }

    pub fn split<T: RealScalar>(&self) -> Result<SplitOde<T>> {
        self.validate()?;
        Ok(match self.form {
            OdeForm::Complex => complex_split(),
            OdeForm::Realified => realified_split(),
        })
    }
}

fn boxed<T, F>(f: F) -> Box<dyn Operator<T>>
where
    T: RealScalar,
    F: Fn(Complex<T>, &[Complex<T>], &mut [Complex<T>]) + Send + Sync + 'static,
{
    Box::new(FnOperator(f))
}

/// `G1 = i u`, `G2 = 0.05 u`, `G3 = -0.5 u^3`.
pub fn complex_split<T: RealScalar>() -> SplitOde<T> {
    let i = Complex::new(T::zero(), T::one());
    let growth = T::lit(0.05);
    let cubic = T::lit(-0.5);
    let ops = vec![
        boxed(move |_t, u: &[Complex<T>], out: &mut [Complex<T>]| out[0] = u[0] * i),
        boxed(move |_t, u: &[Complex<T>], out: &mut [Complex<T>]| out[0] = u[0] * growth),
        boxed(move |_t, u: &[Complex<T>], out: &mut [Complex<T>]| out[0] = u[0] * u[0] * u[0] * cubic),
    ];
    let full = boxed(move |_t, u: &[Complex<T>], out: &mut [Complex<T>]| {
        out[0] = u[0] * i + u[0] * growth + u[0] * u[0] * u[0] * cubic
    });
    SplitOde::new("complex-ode", 1, ops).with_full(full)
}

/// `H1 = [-y; x]`, `H2 = 0.05 [x; y]`, `H3` as in the module docs.
pub fn realified_split<T: RealScalar>() -> SplitOde<T> {
    let growth = T::lit(0.05);
    let (a, b) = (T::lit(1.5), T::lit(0.5));
    let cubic = move |x: Complex<T>, y: Complex<T>| (x * y * y * a - x * x * x * b, y * y * y * b - x * x * y * a);
    let ops = vec![
        boxed(move |_t, v: &[Complex<T>], out: &mut [Complex<T>]| {
            out[0] = -v[1];
            out[1] = v[0];
        }),
        boxed(move |_t, v: &[Complex<T>], out: &mut [Complex<T>]| {
            out[0] = v[0] * growth;
            out[1] = v[1] * growth;
        }),
        boxed(move |_t, v: &[Complex<T>], out: &mut [Complex<T>]| {
            let (p, q) = cubic(v[0], v[1]);
            out[0] = p;
            out[1] = q;
        }),
    ];
    let full = boxed(move |_t, v: &[Complex<T>], out: &mut [Complex<T>]| {
        let (p, q) = cubic(v[0], v[1]);
        out[0] = -v[1] + v[0] * growth + p;
        out[1] = v[0] + v[1] * growth + q;
    });
    SplitOde::new("complex-ode-real", 2, ops).with_full(full)
}

/// `u = x + iy` for a realified state (with possibly complex `x`, `y`).
pub fn realified_to_complex<T: RealScalar>(v: &[Complex<T>]) -> Complex<T> {
    v[0] + v[1] * Complex::new(T::zero(), T::one())
}

pub fn complex_to_realified<T: RealScalar>(u: Complex<T>) -> [Complex<T>; 2] {
    [Complex::new(u.re, T::zero()), Complex::new(u.im, T::zero())]
}
