use num_complex::Complex;
use num_traits::Zero;

use crate::bch::MatrixSet;
use crate::matrix::CMatrix;
use crate::scalar::RealScalar;

/// A right-hand side `F(t, y)` over complex time and complex state.
///
/// Implementations must be reentrant; evaluation counts are kept by the
/// caller, not by the operator.
pub trait Operator<T>: Send + Sync {
    fn eval(&self, t: Complex<T>, y: &[Complex<T>], out: &mut [Complex<T>]);

    /// The matrix `A` when the operator is `F(t, y) = A y`.
    fn matrix(&self) -> Option<&CMatrix<T>> {
        None
    }
}

/// Wraps a closure as an [`Operator`].
pub struct FnOperator<F>(pub F);

impl<T, F> Operator<T> for FnOperator<F>
where
    F: Fn(Complex<T>, &[Complex<T>], &mut [Complex<T>]) + Send + Sync,
{
    fn eval(&self, t: Complex<T>, y: &[Complex<T>], out: &mut [Complex<T>]) {
        (self.0)(t, y, out)
    }
}

/// `F(t, y) = A y`.
#[derive(Debug, Clone)]
pub struct LinearOperator<T> {
    pub matrix: CMatrix<T>,
}

impl<T: RealScalar> Operator<T> for LinearOperator<T> {
    fn eval(&self, _t: Complex<T>, y: &[Complex<T>], out: &mut [Complex<T>]) {
        out.copy_from_slice(&self.matrix.mul_vec(y));
    }

    fn matrix(&self) -> Option<&CMatrix<T>> {
        Some(&self.matrix)
    }
}

/// Right-hand-side evaluation counts of one integration run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalCounters {
    pub per_operator: Vec<u64>,
    /// Evaluations of the unsplit right-hand side.
    pub full: u64,
}

impl EvalCounters {
    pub fn new(n_operators: usize) -> Self {
        Self {
            per_operator: vec![0; n_operators],
            full: 0,
        }
    }

    pub fn split_total(&self) -> u64 {
        self.per_operator.iter().sum()
    }
}

/// `y' = F_1(t, y) + ... + F_N(t, y)` on a complex state of length `dim`.
pub struct SplitOde<T> {
    name: String,
    dim: usize,
    operators: Vec<Box<dyn Operator<T>>>,
    full: Option<Box<dyn Operator<T>>>,
}

impl<T: RealScalar> SplitOde<T> {
    pub fn new(name: impl Into<String>, dim: usize, operators: Vec<Box<dyn Operator<T>>>) -> Self {
        assert!(!operators.is_empty(), "a split ODE needs at least one operator");
        Self {
            name: name.into(),
            dim,
            operators,
            full: None,
        }
    }

    /// Supplies a monolithic right-hand side used instead of summing the
    /// operators.
    pub fn with_full(mut self, full: Box<dyn Operator<T>>) -> Self {
        self.full = Some(full);
        self
    }

    /// `y' = (X_1 + ... + X_N) y` with one linear operator per matrix.
    pub fn from_matrices(ms: &MatrixSet<T>) -> Self {
        let operators = ms
            .matrices()
            .iter()
            .map(|m| Box::new(LinearOperator { matrix: m.clone() }) as Box<dyn Operator<T>>)
            .collect();
        Self::new("linear", ms.dimension(), operators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_operators(&self) -> usize {
        self.operators.len()
    }

    pub fn operator(&self, l: usize) -> &dyn Operator<T> {
        self.operators[l].as_ref()
    }

    pub fn eval_operator(
        &self,
        l: usize,
        t: Complex<T>,
        y: &[Complex<T>],
        out: &mut [Complex<T>],
        counters: &mut EvalCounters,
    ) {
        counters.per_operator[l] += 1;
        self.operators[l].eval(t, y, out);
    }

    /// Unsplit right-hand side.
    pub fn eval_sum(&self, t: Complex<T>, y: &[Complex<T>], out: &mut [Complex<T>], counters: &mut EvalCounters) {
        counters.full += 1;
        self.eval(t, y, out);
    }

    /// Largest entrywise gap between the unsplit right-hand side and the sum
    /// of the operators over the given states.
    pub fn sum_consistency(&self, t: Complex<T>, states: &[Vec<Complex<T>>]) -> T {
        let mut worst: T = T::zero();
        let mut full: Vec<Complex<T>> = vec![Complex::zero(); self.dim];
        let mut part = vec![Complex::zero(); self.dim];
        for y in states {
            self.eval(t, y, &mut full);
            let mut acc: Vec<Complex<T>> = vec![Complex::zero(); self.dim];
            for op in &self.operators {
                op.eval(t, y, &mut part);
                for (a, p) in acc.iter_mut().zip(&part) {
                    *a = *a + *p;
                }
            }
            for (a, f) in acc.iter().zip(&full) {
                worst = worst.max((*a - *f).norm());
            }
        }
        worst
    }
}

impl<T: RealScalar> Operator<T> for SplitOde<T> {
    fn eval(&self, t: Complex<T>, y: &[Complex<T>], out: &mut [Complex<T>]) {
        if let Some(full) = &self.full {
            full.eval(t, y, out);
            return;
        }
        let mut part = vec![Complex::zero(); self.dim];
        out.iter_mut().for_each(|o| *o = Complex::zero());
        for op in &self.operators {
            op.eval(t, y, &mut part);
            for (o, p) in out.iter_mut().zip(&part) {
                *o = *o + *p;
            }
        }
    }
}
