//! Adaptive Dormand-Prince 5(4) with PI step-size control, used to compute
//! reference solutions of the unsplit problems.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

use super::ode::Operator;
use super::step::state_norm;
use super::tableau::ButcherTableau;

const MAX_STEPS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerances {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: u64,
}

/// Integrates forward in real time, landing exactly on requested times.
pub struct ReferenceSolver<'a, T> {
    f: &'a dyn Operator<T>,
    tab: ButcherTableau<T>,
    err_weights: Vec<T>,
    tol: Tolerances,
    t: T,
    y: Vec<Complex<T>>,
    /// Derivative at `(t, y)`; the last stage of the method is evaluated
    /// there, so it is carried over between steps.
    f_now: Vec<Complex<T>>,
    h: Option<T>,
    err_old: f64,
    pub stats: SolverStats,
}

impl<'a, T: RealScalar> ReferenceSolver<'a, T> {
    pub fn new(f: &'a dyn Operator<T>, t0: T, y0: &[Complex<T>], tol: Tolerances) -> Result<Self> {
        if !(tol.abs >= 0.0 && tol.rel >= 0.0 && tol.abs + tol.rel > 0.0) {
            return Err(Error::Config("tolerances must be nonnegative and not both zero".into()));
        }
        let tab = ButcherTableau::dormand_prince();
        let embedded = tab.b_embedded.clone().expect("embedded pair");
        let err_weights = tab.b.iter().zip(&embedded).map(|(&b, &e)| b - e).collect();
        let mut f_now = vec![Complex::zero(); y0.len()];
        f.eval(Complex::new(t0, T::zero()), y0, &mut f_now);
        Ok(Self {
            f,
            tab,
            err_weights,
            tol,
            t: t0,
            y: y0.to_vec(),
            f_now,
            h: None,
            err_old: 1e-4,
            stats: SolverStats {
                evals: 1,
                ..SolverStats::default()
            },
        })
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn state(&self) -> &[Complex<T>] {
        &self.y
    }

    fn weighted_norm(&self, a: &[Complex<T>], scale_from: &[Complex<T>]) -> f64 {
        let n = a.len().max(1) as f64;
        let sum: f64 = a
            .iter()
            .zip(&self.y)
            .zip(scale_from)
            .map(|((e, y0), y1)| {
                let sc = self.tol.abs + self.tol.rel * y0.norm().to_f64_lossy().max(y1.norm().to_f64_lossy());
                let r = e.norm().to_f64_lossy() / sc;
                r * r
            })
            .sum();
        (sum / n).sqrt()
    }

    fn initial_step(&self, span: T) -> T {
        let zeros = vec![Complex::zero(); self.y.len()];
        let d0 = self.weighted_norm(&self.y, &zeros);
        let d1 = self.weighted_norm(&self.f_now, &zeros);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h = T::lit(h0).min(span);
        // one explicit Euler probe for the second derivative
        let probe: Vec<_> = self.y.iter().zip(&self.f_now).map(|(y, f)| *y + *f * h).collect();
        let mut f1 = vec![Complex::zero(); self.y.len()];
        self.f.eval(Complex::new(self.t + h, T::zero()), &probe, &mut f1);
        let diff: Vec<_> = f1.iter().zip(&self.f_now).map(|(a, b)| *a - *b).collect();
        let d2 = self.weighted_norm(&diff, &zeros) / h.to_f64_lossy();
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        T::lit((100.0 * h0).min(h1)).min(span)
    }

    /// Advances to `t_end` (must not be behind the current time).
    pub fn advance_to(&mut self, t_end: T) -> Result<&[Complex<T>]> {
        if t_end < self.t {
            return Err(Error::Config("reference solver only integrates forward".into()));
        }
        if t_end == self.t {
            return Ok(&self.y);
        }
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(t_end - self.t),
        };
        let s = self.tab.stages();
        let d = self.y.len();
        let norm0 = state_norm(&self.y).to_f64_lossy().max(1.0);
        let mut k = vec![vec![Complex::zero(); d]; s];
        let mut arg = vec![Complex::zero(); d];
        let (beta, expo) = (0.04, 0.2 - 0.04 * 0.75);

        while self.t < t_end {
            if self.stats.accepted + self.stats.rejected > MAX_STEPS {
                return Err(Error::StepSizeUnderflow {
                    t: self.t.to_f64_lossy(),
                    h: h.to_f64_lossy(),
                });
            }
            let last = self.t + h >= t_end;
            let h_try = if last { t_end - self.t } else { h };
            if h_try.to_f64_lossy() <= 10.0 * f64::EPSILON * self.t.to_f64_lossy().abs().max(1e-300) {
                return Err(Error::StepSizeUnderflow {
                    t: self.t.to_f64_lossy(),
                    h: h_try.to_f64_lossy(),
                });
            }
            let hc = Complex::new(h_try, T::zero());

            k[0].copy_from_slice(&self.f_now);
            for j in 1..s {
                arg.copy_from_slice(&self.y);
                for (m, &a) in self.tab.a[j].iter().enumerate() {
                    if a != T::zero() {
                        let ha = hc * a;
                        for (x, km) in arg.iter_mut().zip(&k[m]) {
                            *x = *x + ha * *km;
                        }
                    }
                }
                self.f
                    .eval(Complex::new(self.t + h_try * self.tab.c[j], T::zero()), &arg, &mut k[j]);
            }
            self.stats.evals += (s - 1) as u64;
            // the last stage argument is the fifth-order solution
            let y_new = arg.clone();
            let mut err = vec![Complex::zero(); d];
            for (j, &w) in self.err_weights.iter().enumerate() {
                if w != T::zero() {
                    let hw = hc * w;
                    for (e, kj) in err.iter_mut().zip(&k[j]) {
                        *e = *e + hw * *kj;
                    }
                }
            }
            let err_norm = self.weighted_norm(&err, &y_new);
            if !err_norm.is_finite() {
                return Err(Error::BlowUp {
                    t: self.t.to_f64_lossy(),
                    norm: f64::INFINITY,
                    reason: "non-finite error estimate",
                });
            }

            let fac11 = err_norm.powf(expo);
            if err_norm <= 1.0 {
                let fac = (fac11 / self.err_old.powf(beta) / 0.9).clamp(0.1, 5.0);
                self.err_old = err_norm.max(1e-4);
                self.t = if last { t_end } else { self.t + h_try };
                self.y = y_new;
                self.f_now = k[s - 1].clone();
                self.stats.accepted += 1;
                if state_norm(&self.y).to_f64_lossy() > 1e8 * norm0 {
                    return Err(Error::BlowUp {
                        t: self.t.to_f64_lossy(),
                        norm: state_norm(&self.y).to_f64_lossy(),
                        reason: "reference solution grew past the blow-up limit",
                    });
                }
                if !last {
                    h = h_try / T::lit(fac);
                }
            } else {
                let fac = (fac11 / 0.9).min(5.0);
                h = h_try / T::lit(fac);
                self.stats.rejected += 1;
            }
        }
        self.h = Some(h);
        Ok(&self.y)
    }
}

/// Solution of `y' = f(t, y)` at `tf`.
pub fn reference_solve<T: RealScalar>(
    f: &dyn Operator<T>,
    t0: T,
    y0: &[Complex<T>],
    tf: T,
    tol: Tolerances,
) -> Result<Vec<Complex<T>>> {
    let mut solver = ReferenceSolver::new(f, t0, y0, tol)?;
    Ok(solver.advance_to(tf)?.to_vec())
}

/// Solutions at each of the increasing `times`.
pub fn reference_samples<T: RealScalar>(
    f: &dyn Operator<T>,
    t0: T,
    y0: &[Complex<T>],
    times: &[T],
    tol: Tolerances,
) -> Result<Vec<Vec<Complex<T>>>> {
    let mut solver = ReferenceSolver::new(f, t0, y0, tol)?;
    times.iter().map(|&t| Ok(solver.advance_to(t)?.to_vec())).collect()
}
