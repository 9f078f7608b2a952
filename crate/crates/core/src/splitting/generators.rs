use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c, real, RealScalar, Scalar};

use super::composition::{compose, composition_sigma};
use super::MethodTable;

fn require_operators(n: usize, min: usize, reason: &'static str) -> Result<()> {
    if n < min {
        Err(Error::InvalidArity { got: n, reason })
    } else {
        Ok(())
    }
}

/// One stage of unit steps.
pub fn lie_trotter<T: Scalar>(n: usize) -> Result<MethodTable<T>> {
    require_operators(n, 1, "Lie-Trotter needs at least one operator")?;
    Ok(MethodTable::with_order(
        format!("LT-{n}"),
        vec![vec![Complex::one(); n]],
        1,
    ))
}

/// Symmetric Strang splitting packed into N stages: half steps in
/// operators 1..N-1, a full step in N, then the half steps back down, one
/// per stage. `strang(1)` is the single-flow table `[[1]]`.
pub fn strang<T: Scalar>(n: usize) -> Result<MethodTable<T>> {
    require_operators(n, 1, "Strang needs at least one operator")?;
    if n == 1 {
        return Ok(MethodTable::with_order("Strang-1", vec![vec![Complex::one()]], 2));
    }
    let half = real(T::from_ratio(1, 2));
    let mut stages = Vec::with_capacity(n);
    let mut first = vec![half.clone(); n];
    first[n - 1] = Complex::one();
    stages.push(first);
    for k in 2..=n {
        let mut row = vec![Complex::zero(); n];
        row[n - k] = half.clone();
        stages.push(row);
    }
    Ok(MethodTable::with_order(format!("Strang-{n}"), stages, 2))
}

/// The two-stage second-order N-split pair. Stage 1 is `1/2 + i/2` and stage
/// 2 is `1/2 - i/2` in every operator; `conjugate` swaps them.
pub fn clt2<T: Scalar>(n: usize, conjugate: bool) -> Result<MethodTable<T>> {
    require_operators(n, 2, "the complex Lie-Trotter pair is defined for splittings, N >= 2")?;
    let half = T::from_ratio(1, 2);
    let up = c(half.clone(), half.clone());
    let down = c(half.clone(), -half);
    let (first, second, name) = if conjugate {
        (down, up, "CLT2*")
    } else {
        (up, down, "CLT2")
    };
    Ok(MethodTable::with_order(name, vec![vec![first; n], vec![second; n]], 2))
}

/// One-parameter family of two-stage, second-order 2-split methods.
///
/// Operator 2 takes `1 - b` then `b`; operator 1 takes `(2b-1)/(2b-2)` then
/// `1/(2-2b)`, so that both columns sum to one. `b = 1/2 - i/2` gives CLT2.
pub fn two_split_family<T: Scalar>(b: Complex<T>) -> Result<MethodTable<T>> {
    let one: Complex<T> = Complex::one();
    if b == one {
        return Err(Error::SingularParameter);
    }
    let two = real(T::from_ratio(2, 1));
    let denom = two.clone() * b.clone() - two.clone();
    let a11 = (two.clone() * b.clone() - one.clone()) / denom.clone();
    let a21 = one.clone() / (two.clone() - two * b.clone());
    let stages = vec![vec![a11, one - b.clone()], vec![a21, b]];
    Ok(MethodTable::with_order("family2", stages, 2))
}

/// CLT2 composed with the order-3 conjugate pair (four stages).
pub fn clt3<T: RealScalar>(n: usize) -> Result<MethodTable<T>> {
    Ok(compose(&clt2(n, false)?, &composition_sigma(3)?)?.renamed("CLT3"))
}

/// Strang composed with the order-3 conjugate pair, merged to 2N - 1 stages.
pub fn cstrang3<T: RealScalar>(n: usize) -> Result<MethodTable<T>> {
    Ok(compose(&strang(n)?, &composition_sigma(3)?)?.renamed("CStrang3"))
}
