use std::time::Instant;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::RealScalar;
use crate::splitting::{FlowSequence, MethodTable};

use super::ode::{EvalCounters, Operator, SplitOde};
use super::tableau::ButcherTableau;

/// Integration stops when the state norm exceeds this multiple of the
/// initial norm.
pub const BLOW_UP_FACTOR: f64 = 1e8;

/// How each sub-flow is advanced.
#[derive(Debug, Clone, PartialEq)]
pub enum SubFlow<T> {
    RungeKutta(ButcherTableau<T>),
    /// `exp(h A) y`; every operator must expose its matrix.
    ExactLinear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubIntegratorConfig<T> {
    pub sub_flow: SubFlow<T>,
    pub substeps_per_flow: usize,
    /// Drop imaginary parts after every full step. Changes the method; off
    /// by default.
    pub project_real: bool,
}

impl<T: RealScalar> SubIntegratorConfig<T> {
    pub fn runge_kutta(tableau: ButcherTableau<T>) -> Self {
        Self {
            sub_flow: SubFlow::RungeKutta(tableau),
            substeps_per_flow: 1,
            project_real: false,
        }
    }

    pub fn rk4() -> Self {
        Self::runge_kutta(ButcherTableau::rk4())
    }

    pub fn kutta3() -> Self {
        Self::runge_kutta(ButcherTableau::kutta3())
    }

    pub fn exact() -> Self {
        Self {
            sub_flow: SubFlow::ExactLinear,
            substeps_per_flow: 1,
            project_real: false,
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps_per_flow = substeps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.substeps_per_flow == 0 {
            return Err(Error::Config("substeps_per_flow must be at least 1".into()));
        }
        if let SubFlow::RungeKutta(tab) = &self.sub_flow {
            tab.validate()?;
        }
        Ok(())
    }

    /// Right-hand-side evaluations per sub-flow.
    pub fn evals_per_flow(&self) -> u64 {
        match &self.sub_flow {
            SubFlow::RungeKutta(tab) => (tab.stages() * self.substeps_per_flow) as u64,
            SubFlow::ExactLinear => 0,
        }
    }
}

/// One explicit Runge-Kutta step of size `h` (possibly complex) from
/// `(t, y)`. Stage abscissae are `t + c_j h`. Adds the stage count to
/// `evals`.
pub fn rk_substep<T: RealScalar>(
    tab: &ButcherTableau<T>,
    f: &dyn Operator<T>,
    t: Complex<T>,
    y: &[Complex<T>],
    h: Complex<T>,
    evals: &mut u64,
) -> Vec<Complex<T>> {
    let s = tab.stages();
    let d = y.len();
    let mut k = vec![vec![Complex::zero(); d]; s];
    let mut arg = vec![Complex::zero(); d];
    for j in 0..s {
        arg.copy_from_slice(y);
        for (m, &a) in tab.a[j].iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            let ha = h * a;
            for (x, km) in arg.iter_mut().zip(&k[m]) {
                *x = *x + ha * *km;
            }
        }
        f.eval(t + h * tab.c[j], &arg, &mut k[j]);
        *evals += 1;
    }
    let mut out = y.to_vec();
    for (j, &b) in tab.b.iter().enumerate() {
        if b == T::zero() {
            continue;
        }
        let hb = h * b;
        for (o, kj) in out.iter_mut().zip(&k[j]) {
            *o = *o + hb * *kj;
        }
    }
    out
}

/// `exp(t A) y`.
pub fn exact_linear_flow<T: RealScalar>(a: &CMatrix<T>, t: Complex<T>, y: &[Complex<T>]) -> Vec<Complex<T>> {
    a.scale(t).expm().mul_vec(y)
}

/// A method bound to a problem and a sub-integrator, ready to take steps.
///
/// Steps follow the table's flow sequence, so a table and its simplified
/// form produce bitwise identical results.
pub struct SplitStepper<'a, T> {
    sequence: FlowSequence<T>,
    ode: &'a SplitOde<T>,
    cfg: &'a SubIntegratorConfig<T>,
    exact_cache: Option<(T, Vec<CMatrix<T>>)>,
}

impl<'a, T: RealScalar> SplitStepper<'a, T> {
    pub fn new(table: &MethodTable<T>, ode: &'a SplitOde<T>, cfg: &'a SubIntegratorConfig<T>) -> Result<Self> {
        if table.n_operators() != ode.n_operators() {
            return Err(Error::ArityMismatch {
                method: table.n_operators(),
                problem: ode.n_operators(),
            });
        }
        cfg.validate()?;
        if cfg.sub_flow == SubFlow::ExactLinear {
            if let Some(l) = (0..ode.n_operators()).find(|&l| ode.operator(l).matrix().is_none()) {
                return Err(Error::NotLinear(l));
            }
        }
        Ok(Self {
            sequence: table.to_sequence(),
            ode,
            cfg,
            exact_cache: None,
        })
    }

    pub fn sequence(&self) -> &FlowSequence<T> {
        &self.sequence
    }

    /// Right-hand-side evaluations one step costs, per operator.
    pub fn evals_per_step(&self) -> Vec<u64> {
        self.sequence
            .flows_per_operator()
            .into_iter()
            .map(|n| n as u64 * self.cfg.evals_per_flow())
            .collect()
    }

    pub fn step(&mut self, t: T, y: &[Complex<T>], dt: T, counters: &mut EvalCounters) -> Result<Vec<Complex<T>>> {
        if y.len() != self.ode.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, problem dimension is {}",
                y.len(),
                self.ode.dim()
            )));
        }
        if counters.per_operator.len() != self.ode.n_operators() {
            *counters = EvalCounters::new(self.ode.n_operators());
        }
        let n = self.ode.n_operators();
        let mut clocks = vec![Complex::new(t, T::zero()); n];
        let mut state = y.to_vec();
        let dtc = Complex::new(dt, T::zero());

        if self.cfg.sub_flow == SubFlow::ExactLinear {
            self.refresh_exact_cache(dt);
        }

        for (i, flow) in self.sequence.flows().iter().enumerate() {
            let l = flow.operator;
            let span = flow.fraction * dtc;
            match &self.cfg.sub_flow {
                SubFlow::RungeKutta(tab) => {
                    let m = self.cfg.substeps_per_flow;
                    let h = span / T::lit(m as f64);
                    let op = self.ode.operator(l);
                    for j in 0..m {
                        let tj = clocks[l] + h * T::lit(j as f64);
                        state = rk_substep(tab, op, tj, &state, h, &mut counters.per_operator[l]);
                    }
                }
                SubFlow::ExactLinear => {
                    let (_, props) = self.exact_cache.as_ref().expect("cache refreshed above");
                    state = props[i].mul_vec(&state);
                }
            }
            clocks[l] = clocks[l] + span;
        }

        if self.cfg.project_real {
            for z in &mut state {
                z.im = T::zero();
            }
        }
        if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BlowUp {
                t: (t + dt).to_f64_lossy(),
                norm: f64::INFINITY,
                reason: "non-finite state",
            });
        }
        Ok(state)
    }

    fn refresh_exact_cache(&mut self, dt: T) {
        if matches!(&self.exact_cache, Some((cached, _)) if *cached == dt) {
            return;
        }
        let dtc = Complex::new(dt, T::zero());
        let props = self
            .sequence
            .flows()
            .iter()
            .map(|flow| {
                let a = self.ode.operator(flow.operator).matrix().expect("checked in new");
                a.scale(flow.fraction * dtc).expm()
            })
            .collect();
        self.exact_cache = Some((dt, props));
    }
}

/// One step of `table` from `(t, y)` with step `dt`.
pub fn split_step<T: RealScalar>(
    table: &MethodTable<T>,
    ode: &SplitOde<T>,
    t: T,
    y: &[Complex<T>],
    dt: T,
    cfg: &SubIntegratorConfig<T>,
    counters: &mut EvalCounters,
) -> Result<Vec<Complex<T>>> {
    if dt <= T::zero() {
        return Err(Error::Config("step size must be positive".into()));
    }
    SplitStepper::new(table, ode, cfg)?.step(t, y, dt, counters)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult<T> {
    pub state: Vec<Complex<T>>,
    pub counters: EvalCounters,
    pub wall_seconds: f64,
    pub steps: usize,
}

pub(crate) fn state_norm<T: RealScalar>(y: &[Complex<T>]) -> T {
    y.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// `n_steps` equal splitting steps from `t0` to `tf`.
pub fn integrate<T: RealScalar>(
    table: &MethodTable<T>,
    ode: &SplitOde<T>,
    t0: T,
    y0: &[Complex<T>],
    tf: T,
    n_steps: usize,
    cfg: &SubIntegratorConfig<T>,
) -> Result<IntegrationResult<T>> {
    integrate_observed(table, ode, t0, y0, tf, n_steps, cfg, |_, _, _| {})
}

/// Like [`integrate`], calling `observe(step, t, y)` after every step
/// (`step` counts from 1).
#[allow(clippy::too_many_arguments)]
pub fn integrate_observed<T: RealScalar>(
    table: &MethodTable<T>,
    ode: &SplitOde<T>,
    t0: T,
    y0: &[Complex<T>],
    tf: T,
    n_steps: usize,
    cfg: &SubIntegratorConfig<T>,
    mut observe: impl FnMut(usize, T, &[Complex<T>]),
) -> Result<IntegrationResult<T>> {
    if n_steps == 0 {
        return Err(Error::Config("n_steps must be at least 1".into()));
    }
    if tf <= t0 {
        return Err(Error::Config("final time must exceed initial time".into()));
    }
    let start = Instant::now();
    let mut stepper = SplitStepper::new(table, ode, cfg)?;
    let mut counters = EvalCounters::new(ode.n_operators());
    let dt = (tf - t0) / T::lit(n_steps as f64);
    let norm0 = state_norm(y0).to_f64_lossy();
    let limit = BLOW_UP_FACTOR * if norm0 > 0.0 { norm0 } else { 1.0 };
    let mut y = y0.to_vec();
    for n in 0..n_steps {
        let t = t0 + dt * T::lit(n as f64);
        y = stepper.step(t, &y, dt, &mut counters)?;
        let norm = state_norm(&y).to_f64_lossy();
        if norm > limit {
            return Err(Error::BlowUp {
                t: (t + dt).to_f64_lossy(),
                norm,
                reason: "state norm grew past the blow-up limit",
            });
        }
        observe(n + 1, t + dt, &y);
    }
    Ok(IntegrationResult {
        state: y,
        counters,
        wall_seconds: start.elapsed().as_secs_f64(),
        steps: n_steps,
    })
}
