//! Two-term complex conjugate compositions.
//!
//! A method of order `p - 1` run over `sigma1 * dt` and then over
//! `sigma2 * dt` has order `p` when `sigma1 + sigma2 = 1` and
//! `sigma1^p + sigma2^p = 0`. The pair below has the smallest argument
//! solving both, `pi / (2p)`, so arguments accumulate slowly along a chain
//! of compositions; from `p = 7` on the chain starting at a real
//! second-order method acquires coefficients with negative real part.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, RealScalar, Scalar};

use super::order::order_residuals;
use super::MethodTable;

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionPair<T> {
    /// Order reached by composing a method of order `p - 1`.
    pub p: u32,
    pub sigma1: Complex<T>,
    pub sigma2: Complex<T>,
}

impl<T: RealScalar> CompositionPair<T> {
    /// `sigma1 = 1/2 + i sin(pi/p) / (2 + 2 cos(pi/p))`, `sigma2 = conj(sigma1)`,
    /// for any `p >= 2` without the positivity gate of [`composition_sigma`].
    pub fn from_formula(p: u32) -> Self {
        let angle = T::PI() / T::lit(f64::from(p));
        let two = T::lit(2.0);
        let im = angle.sin() / (two + two * angle.cos());
        let sigma1 = c(T::lit(0.5), im);
        Self {
            p,
            sigma2: sigma1.conj(),
            sigma1,
        }
    }

    /// `|sigma1 + sigma2 - 1|`.
    pub fn sum_residual(&self) -> T {
        (self.sigma1 + self.sigma2 - Complex::new(T::one(), T::zero())).norm()
    }

    /// `|sigma1^e + sigma2^e|`.
    pub fn power_residual(&self, exponent: u32) -> T {
        let e = exponent as i32;
        (self.sigma1.powi(e) + self.sigma2.powi(e)).norm()
    }

    /// Residual of the order-raising condition for a base of order `p - 1`,
    /// i.e. `power_residual(p)`.
    pub fn raising_residual(&self) -> T {
        self.power_residual(self.p)
    }
}

/// The conjugate pair for target order `p`, restricted to `3..=6` where the
/// composed methods keep positive real parts.
pub fn composition_sigma<T: RealScalar>(p: u32) -> Result<CompositionPair<T>> {
    if !(3..=6).contains(&p) {
        return Err(Error::CompositionOrder(p));
    }
    Ok(CompositionPair::from_formula(p))
}

/// `Psi_{sigma2 dt} o Psi_{sigma1 dt}`: the base scaled by `sigma1`, followed
/// by the base scaled by `sigma2`, simplified. The result has order `pair.p`.
pub fn compose<T: Scalar>(base: &MethodTable<T>, pair: &CompositionPair<T>) -> Result<MethodTable<T>> {
    if base.design_order() + 1 != pair.p {
        return Err(Error::OrderMismatch {
            base: base.design_order(),
            expected: pair.p - 1,
        });
    }
    let mut out = concatenate(base, &[pair.sigma1.clone(), pair.sigma2.clone()]);
    out.set_design_order(pair.p);
    Ok(out.renamed(format!("{}-p{}", base.name(), pair.p)))
}

/// Runs `base` successively over `fractions[0] * dt`, `fractions[1] * dt`, ...
/// No order gain is assumed: the result keeps the base order as long as the
/// computed first/second-order conditions still agree with it.
pub fn compose_steps<T: Scalar>(base: &MethodTable<T>, fractions: &[Complex<T>]) -> MethodTable<T> {
    let mut out = concatenate(base, fractions);
    let computed = order_residuals(&out).satisfied_through;
    let order = if computed >= base.design_order().min(2) {
        base.design_order()
    } else {
        computed
    };
    out.set_design_order(order);
    out
}

fn concatenate<T: Scalar>(base: &MethodTable<T>, fractions: &[Complex<T>]) -> MethodTable<T> {
    let stages: Vec<_> = fractions
        .iter()
        .flat_map(|s| base.scaled(s).stages().to_vec())
        .collect();
    MethodTable::with_order(base.name(), stages, base.design_order()).simplify()
}
