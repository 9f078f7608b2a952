//! Numeric checks of the N-term Baker-Campbell-Hausdorff expansion and
//! empirical order measurement of splitting methods on matrix problems.
//!
//! For matrices `X_1..X_N`,
//! `exp(t X_1) ... exp(t X_N) = exp(t Z1 + t^2 Z2 + t^3 Z3 + O(t^4))` with
//!
//! ```text
//! Z1 = sum_i X_i
//! Z2 = 1/2  sum_{i<j} [X_i, X_j]
//! Z3 = 1/12 sum_{i!=j} [X_i, [X_i, X_j]]
//!    + 1/6  sum_{i<j<k} ([X_i, [X_j, X_k]] + [[X_i, X_j], X_k])
//! ```
//!
//! Nothing here takes a matrix logarithm; truncations are compared through
//! their exponentials.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fit::log_log_slope;
use crate::matrix::CMatrix;
use crate::scalar::RealScalar;
use crate::splitting::MethodTable;

/// Seed used by the reproducible matrix checks unless told otherwise.
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet<T> {
    matrices: Vec<CMatrix<T>>,
    seed: Option<u64>,
}

impl<T: RealScalar> MatrixSet<T> {
    pub fn new(matrices: Vec<CMatrix<T>>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::InvalidArity {
            got: 0,
            reason: "a matrix set needs at least one matrix",
        })?;
        let d = first.dim();
        if d == 0 {
            return Err(Error::DimensionMismatch("matrices must be at least 1x1".into()));
        }
        if let Some((i, m)) = matrices.iter().enumerate().find(|(_, m)| m.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "matrix {} is {}x{}, matrix 1 is {d}x{d}",
                i + 1,
                m.dim(),
                m.dim()
            )));
        }
        Ok(Self { matrices, seed: None })
    }

    /// `n` matrices of size `dim` with entries uniform on [-1, 1] in both
    /// real and imaginary parts.
    pub fn random(n: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrices = (0..n).map(|_| CMatrix::random(dim, &mut rng)).collect();
        Self {
            matrices,
            seed: Some(seed),
        }
    }

    pub fn n_operators(&self) -> usize {
        self.matrices.len()
    }

    pub fn dimension(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn matrices(&self) -> &[CMatrix<T>] {
        &self.matrices
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn sum(&self) -> CMatrix<T> {
        self.matrices
            .iter()
            .skip(1)
            .fold(self.matrices[0].clone(), |acc, m| &acc + m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BchTerms<T> {
    pub z1: CMatrix<T>,
    pub z2: CMatrix<T>,
    pub z3: CMatrix<T>,
}

impl<T: RealScalar> BchTerms<T> {
    /// `t Z1 + t^2 Z2 + t^3 Z3`.
    pub fn truncated(&self, t: Complex<T>) -> CMatrix<T> {
        let t2 = t * t;
        &(&self.z1.scale(t) + &self.z2.scale(t2)) + &self.z3.scale(t2 * t)
    }
}

pub fn bch_terms<T: RealScalar>(ms: &MatrixSet<T>) -> Result<BchTerms<T>> {
    let n = ms.n_operators();
    if n < 2 {
        return Err(Error::InvalidArity {
            got: n,
            reason: "the N-term expansion needs N >= 2",
        });
    }
    let x = ms.matrices();
    let d = ms.dimension();
    let re = |v: f64| Complex::new(T::lit(v), T::zero());

    let z1 = ms.sum();

    let mut z2 = CMatrix::zeros(d);
    for i in 0..n {
        for j in i + 1..n {
            z2 = &z2 + &x[i].commutator(&x[j]);
        }
    }
    let z2 = z2.scale(re(0.5));

    let mut same = CMatrix::zeros(d);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                same = &same + &x[i].commutator(&x[i].commutator(&x[j]));
            }
        }
    }
    let mut triple = CMatrix::zeros(d);
    for i in 0..n {
        for j in i + 1..n {
            let xij = x[i].commutator(&x[j]);
            for k in j + 1..n {
                triple = &triple + &x[i].commutator(&x[j].commutator(&x[k]));
                triple = &triple + &xij.commutator(&x[k]);
            }
        }
    }
    let z3 = &same.scale(re(1.0 / 12.0)) + &triple.scale(re(1.0 / 6.0));

    Ok(BchTerms { z1, z2, z3 })
}

/// `exp(t X_1) exp(t X_2) ... exp(t X_N)`.
pub fn product_of_exponentials<T: RealScalar>(ms: &MatrixSet<T>, t: Complex<T>) -> CMatrix<T> {
    ms.matrices()
        .iter()
        .fold(CMatrix::identity(ms.dimension()), |acc, x| &acc * &x.scale(t).expm())
}

/// Frobenius distance between `exp(t Z1 + t^2 Z2 + t^3 Z3)` and the product
/// of exponentials. Scales as `t^4`.
pub fn truncation_error<T: RealScalar>(ms: &MatrixSet<T>, t: T) -> Result<T> {
    let terms = bch_terms(ms)?;
    let tc = Complex::new(t, T::zero());
    let approx = terms.truncated(tc).expm();
    Ok((&approx - &product_of_exponentials(ms, tc)).frobenius_norm())
}

/// One step of `table` on the linear problem `y' = (X_1 + ... + X_N) y` with
/// exact sub-flows: the matrix `exp(a_last t X_last) ... exp(a_first t X_first)`
/// where the first flow of the method acts first.
pub fn method_propagator<T: RealScalar>(
    table: &MethodTable<T>,
    ms: &MatrixSet<T>,
    t: Complex<T>,
) -> Result<CMatrix<T>> {
    if table.n_operators() != ms.n_operators() {
        return Err(Error::ArityMismatch {
            method: table.n_operators(),
            problem: ms.n_operators(),
        });
    }
    let x = ms.matrices();
    Ok(table
        .to_sequence()
        .flows()
        .iter()
        .fold(CMatrix::identity(ms.dimension()), |acc, flow| {
            &x[flow.operator].scale(flow.fraction * t).expm() * &acc
        }))
}

/// Frobenius distance between one step of the method and `exp(t sum X)`.
pub fn splitting_defect<T: RealScalar>(table: &MethodTable<T>, ms: &MatrixSet<T>, t: T) -> Result<T> {
    let tc = Complex::new(t, T::zero());
    let step = method_propagator(table, ms, tc)?;
    let exact = ms.sum().scale(tc).expm();
    Ok((&step - &exact).frobenius_norm())
}

/// Defects below this are treated as round-off (about 1e-13 in double).
pub fn round_off_floor<T: RealScalar>() -> T {
    T::epsilon() * T::lit(450.0)
}

/// Observed order: the log-log slope of the one-step defect against `t`,
/// minus one.
pub fn empirical_order<T: RealScalar>(table: &MethodTable<T>, ms: &MatrixSet<T>, t_values: &[T]) -> Result<f64> {
    if t_values.len() < 3 || t_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadLadder {
            need: 3,
            got: t_values.len(),
        });
    }
    let mut xs = Vec::with_capacity(t_values.len());
    let mut ys = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let defect = splitting_defect(table, ms, t)?;
        if defect < round_off_floor() {
            return Err(Error::RoundOffDominated {
                t: t.to_f64_lossy(),
                defect: defect.to_f64_lossy(),
            });
        }
        xs.push(t.to_f64_lossy());
        ys.push(defect.to_f64_lossy());
    }
    let slope = log_log_slope(&xs, &ys).ok_or(Error::BadLadder {
        need: 3,
        got: t_values.len(),
    })?;
    Ok(slope - 1.0)
}
