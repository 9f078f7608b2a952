//! Small dense complex matrices.
//!
//! Sizes in this crate stay at desk scale (d <= 8 for the BCH oracle), so a
//! row-major `Vec` with naive products is all that is needed. The exponential
//! uses scaling and squaring around a truncated Taylor series.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: RealScalar> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("matrix rows must form a square".into()));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = *e;
        }
        m
    }

    /// Entries with real and imaginary parts uniform on [-1, 1].
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        Self::from_fn(dim, |_, _| {
            let re: f64 = rng.gen_range(-1.0..=1.0);
            let im: f64 = rng.gen_range(-1.0..=1.0);
            Complex::new(T::lit(re), T::lit(im))
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| *x * s).collect(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Induced 1-norm (max column sum).
    pub fn one_norm(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn mul_vec(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(y.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(y)
                    .fold(Complex::zero(), |acc, (a, x)| acc + *a * *x)
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Matrix exponential by scaling and squaring.
    ///
    /// The argument is halved until its 1-norm is at most 1/2, the Taylor
    /// series is summed until terms stop contributing, and the result is
    /// squared back.
    pub fn expm(&self) -> Self {
        let norm = self.one_norm();
        if norm == T::zero() {
            return Self::identity(self.dim);
        }
        let half = T::lit(0.5);
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm > half {
            scaled_norm = scaled_norm * half;
            squarings += 1;
        }
        let a = self.scale(Complex::new(T::lit(2.0).powi(-(squarings as i32)), T::zero()));

        let mut sum = Self::identity(self.dim);
        let mut term = Self::identity(self.dim);
        for k in 1..=40 {
            term = &term * &a;
            let inv_k = Complex::new(T::one() / T::lit(k as f64), T::zero());
            term = term.scale(inv_k);
            sum = &sum + &term;
            if term.one_norm() <= T::epsilon() * T::lit(1e-2) * sum.one_norm() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    /// Solves `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has dimension {n}",
                rhs.len()
            )));
        }
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[i * n + col]
                        .norm()
                        .partial_cmp(&a[j * n + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[pivot * n + col].norm() == T::zero() {
                return Err(Error::DimensionMismatch("singular matrix".into()));
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                b.swap(col, pivot);
            }
            let p = a[col * n + col];
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[row * n + k] = a[row * n + k] - factor * v;
                }
                let bc = b[col];
                b[row] = b[row] - factor * bc;
            }
        }
        let mut x = vec![Complex::zero(); n];
        for row in (0..n).rev() {
            let mut acc = b[row];
            for k in row + 1..n {
                acc = acc - a[row * n + k] * x[k];
            }
            x[row] = acc / a[row * n + row];
        }
        Ok(x)
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: RealScalar> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: RealScalar> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: RealScalar> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = CMatrix<f64>;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(M::zeros(3).expm(), M::identity(3));
    }

    #[test]
    fn exp_of_diagonal_is_elementwise() {
        let d = [cx(0.3, 1.0), cx(-2.0, 0.5), cx(5.0, -3.0)];
        let e = M::diagonal(&d).expm();
        for (i, z) in d.iter().enumerate() {
            assert!((e[(i, i)] - z.exp()).norm() <= 1e-13 * z.exp().norm());
        }
        assert_eq!(e[(0, 1)], Complex::zero());
    }

    #[test]
    fn exp_of_nilpotent_matches_finite_series() {
        // strictly upper triangular 4x4: N^4 = 0, so exp(N) = I + N + N^2/2 + N^3/6
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n = M::random(4, &mut rng);
        for i in 0..4 {
            for j in 0..=i {
                n[(i, j)] = Complex::zero();
            }
        }
        let n = n.scale(cx(3.0, 0.0));
        let n2 = &n * &n;
        let n3 = &n2 * &n;
        let exact = &(&(&M::identity(4) + &n) + &n2.scale(cx(0.5, 0.0))) + &n3.scale(cx(1.0 / 6.0, 0.0));
        assert!(n.expm().max_abs_diff(&exact) < 1e-13);
    }

    #[test]
    fn exp_inverse_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = M::random(5, &mut rng).scale(cx(2.0, 0.0));
        let prod = &a.expm() * &a.scale(cx(-1.0, 0.0)).expm();
        assert!(prod.max_abs_diff(&M::identity(5)) < 1e-12);

        let t = 1.3;
        let gen = M::from_rows(vec![vec![cx(0.0, 0.0), cx(-t, 0.0)], vec![cx(t, 0.0), cx(0.0, 0.0)]]).unwrap();
        let r = gen.expm();
        assert!((r[(0, 0)] - cx(t.cos(), 0.0)).norm() < 1e-15);
        assert!((r[(1, 0)] - cx(t.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn jacobi_identity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = M::random(3, &mut rng);
            let y = M::random(3, &mut rng);
            let z = M::random(3, &mut rng);
            let j = &(&x.commutator(&y.commutator(&z)) + &y.commutator(&z.commutator(&x)))
                + &z.commutator(&x.commutator(&y));
            assert!(j.frobenius_norm() < 1e-13);
        }
    }

    #[test]
    fn solve_recovers_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = M::random(6, &mut rng);
        let x: Vec<_> = (0..6).map(|i| cx(i as f64, 1.0 - i as f64)).collect();
        let b = a.mul_vec(&x);
        let got = a.solve(&b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).norm() < 1e-12);
        }
    }
}
