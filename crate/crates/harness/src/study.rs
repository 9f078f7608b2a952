//! Convergence and work-precision studies.

use std::collections::BTreeMap;
use std::time::Instant;

use nsplit::fit::log_log_slope;
use nsplit::integrators::{
    integrate_observed, reference_samples, reference_solve, SplitOde, SplitStepper, SubIntegratorConfig, Tolerances,
};
use nsplit::problems::{adr_initial, adr_split, l2_error, mrms_error};
use nsplit::{Table, C64};

use crate::catalog;
use crate::config::{ProblemId, StudyConfig, SubId};
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub method: String,
    pub dt: f64,
    /// `f64::INFINITY` when the run blew up.
    pub error: f64,
    pub rhs_evals_total: u64,
    pub rhs_evals_per_op: Vec<u64>,
    pub wall_seconds: f64,
}

impl Row {
    pub fn blew_up(&self) -> bool {
        !self.error.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyResult {
    pub n_operators: usize,
    pub rows: Vec<Row>,
}

impl StudyResult {
    /// Rows ordered by method id, then by decreasing step.
    pub fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| a.method.cmp(&b.method).then(b.dt.total_cmp(&a.dt)));
    }

    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = self.rows.iter().map(|r| r.method.clone()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn rows_of<'a>(&'a self, method: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.method == method)
    }

    fn fit_points(&self, method: &str, floor: f64) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self
            .rows_of(method)
            .filter(|r| r.error.is_finite() && r.error > floor)
            .map(|r| (r.dt, r.error))
            .collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        pts
    }

    /// Least-squares log-log slope of error against step over all rows that
    /// neither blew up nor sit at the round-off floor.
    pub fn slope(&self, method: &str, floor: f64) -> Option<f64> {
        let pts = self.fit_points(method, floor);
        let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        log_log_slope(&x, &y)
    }

    /// Same fit restricted to the `k` finest usable rows.
    pub fn tail_slope(&self, method: &str, floor: f64, k: usize) -> Option<f64> {
        let pts = self.fit_points(method, floor);
        let start = pts.len().saturating_sub(k);
        let (x, y): (Vec<f64>, Vec<f64>) = pts[start..].iter().copied().unzip();
        log_log_slope(&x, &y)
    }

    pub fn slopes(&self, floor: f64) -> BTreeMap<String, Option<f64>> {
        self.methods()
            .into_iter()
            .map(|m| (m.clone(), self.slope(&m, floor)))
            .collect()
    }

    /// Error the method would reach at `cost` RHS evaluations, read off its
    /// work-precision line (log-log interpolation, or extrapolation from the
    /// two nearest finite rows).
    pub fn error_at_cost(&self, method: &str, cost: f64) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self
            .rows_of(method)
            .filter(|r| r.error.is_finite() && r.error > 0.0)
            .map(|r| ((r.rhs_evals_total as f64).ln(), r.error.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let c = cost.ln();
        let k = pts
            .iter()
            .position(|p| p.0 >= c)
            .unwrap_or(pts.len() - 1)
            .clamp(1, pts.len() - 1);
        let (a, b) = (pts[k - 1], pts[k]);
        Some((a.1 + (c - a.0) * (b.1 - a.1) / (b.0 - a.0)).exp())
    }
}

pub enum Metric {
    L2,
    /// MRMS over the states at these times.
    Mrms(Vec<f64>),
}

pub enum Reference {
    Final(Vec<C64>),
    Samples(Vec<Vec<C64>>),
}

/// A problem instance with its reference solution, reused across rows.
pub struct Study {
    pub config: StudyConfig,
    pub ode: SplitOde<f64>,
    pub y0: Vec<C64>,
    pub t_final: f64,
    pub metric: Metric,
    reference: Option<Reference>,
}

impl Study {
    pub fn new(config: StudyConfig) -> Result<Self> {
        config.validate()?;
        let (ode, y0, metric) = match config.problem {
            ProblemId::Adr2d => (adr_split(&config.adr)?, adr_initial(&config.adr)?, Metric::L2),
            ProblemId::ComplexOde | ProblemId::ComplexOdeReal => {
                let c = config.complex_ode();
                (c.split()?, c.initial(), Metric::Mrms(c.samples.clone()))
            }
        };
        Ok(Self {
            t_final: config.t_final(),
            config,
            ode,
            y0,
            metric,
            reference: None,
        })
    }

    pub fn sub_config(&self) -> SubIntegratorConfig<f64> {
        let base = match self.config.sub() {
            SubId::Rk4 => SubIntegratorConfig::rk4(),
            SubId::Kutta3 => SubIntegratorConfig::kutta3(),
            SubId::Exact => SubIntegratorConfig::exact(),
        };
        base.with_substeps(self.config.substeps)
    }

    pub fn reference(&mut self) -> Result<&Reference> {
        if self.reference.is_none() {
            let tol = Tolerances::new(self.config.reference.atol, self.config.reference.rtol);
            let r = match &self.metric {
                Metric::L2 => Reference::Final(reference_solve(&self.ode, 0.0, &self.y0, self.t_final, tol)?),
                Metric::Mrms(times) => Reference::Samples(reference_samples(&self.ode, 0.0, &self.y0, times, tol)?),
            };
            self.reference = Some(r);
        }
        Ok(self.reference.as_ref().expect("just computed"))
    }

    fn steps_for(&self, dt: f64) -> Result<usize> {
        let n = (self.t_final / dt).round();
        if n < 1.0 || (n * dt - self.t_final).abs() > 1e-9 * self.t_final {
            return Err(HarnessError::Config(format!(
                "step {dt} does not divide the time span {}",
                self.t_final
            )));
        }
        Ok(n as usize)
    }

    /// Integrates `table` with step `dt` and measures its error. A blow-up
    /// becomes a row with infinite error and the planned evaluation count.
    pub fn run_row(&mut self, id: &str, table: &Table, dt: f64) -> Result<Row> {
        self.reference()?;
        self.measure(id, table, dt)
    }

    fn measure(&self, id: &str, table: &Table, dt: f64) -> Result<Row> {
        let n_steps = self.steps_for(dt)?;
        let cfg = self.sub_config();
        let sample_steps: Vec<usize> = match &self.metric {
            Metric::L2 => vec![],
            Metric::Mrms(times) => times
                .iter()
                .map(|&t| {
                    let k = (t / dt).round();
                    if (k * dt - t).abs() > 1e-9 * t.max(1.0) {
                        Err(HarnessError::Config(format!("sample time {t} is not on the {dt} grid")))
                    } else {
                        Ok(k as usize)
                    }
                })
                .collect::<Result<_>>()?,
        };
        let start = Instant::now();
        let mut samples = Vec::with_capacity(sample_steps.len());
        let mut next = 0;
        let run = integrate_observed(
            table,
            &self.ode,
            0.0,
            &self.y0,
            self.t_final,
            n_steps,
            &cfg,
            |step, _, y| {
                if next < sample_steps.len() && sample_steps[next] == step {
                    samples.push(y.to_vec());
                    next += 1;
                }
            },
        );
        let wall = start.elapsed().as_secs_f64();
        let row = match run {
            Ok(r) => {
                let error = match self.reference.as_ref().expect("computed by the caller") {
                    Reference::Final(y) => l2_error(&r.state, y)?,
                    Reference::Samples(ys) => mrms_error(&samples, ys)?,
                };
                Row {
                    method: id.to_string(),
                    dt,
                    error,
                    rhs_evals_total: r.counters.split_total(),
                    rhs_evals_per_op: r.counters.per_operator,
                    wall_seconds: r.wall_seconds,
                }
            }
            Err(nsplit::Error::BlowUp { .. }) => {
                let per_step = SplitStepper::new(table, &self.ode, &cfg)?.evals_per_step();
                let per_op: Vec<u64> = per_step.iter().map(|e| e * n_steps as u64).collect();
                Row {
                    method: id.to_string(),
                    dt,
                    error: f64::INFINITY,
                    rhs_evals_total: per_op.iter().sum(),
                    rhs_evals_per_op: per_op,
                    wall_seconds: wall,
                }
            }
            Err(e) => return Err(e.into()),
        };
        Ok(row)
    }

    /// Runs every method over the ladder. With `jobs > 1` rows are spread
    /// over that many threads; the result is the same apart from wall time.
    pub fn run(&mut self) -> Result<StudyResult> {
        let n = self.ode.n_operators();
        let mut tasks = Vec::new();
        for id in &self.config.methods {
            let table = catalog::build(id, n)?;
            for dt in self.config.ladder() {
                tasks.push((id.clone(), table.clone(), dt));
            }
        }
        self.reference()?;
        let jobs = self.config.jobs.clamp(1, tasks.len().max(1));
        let this = &*self;
        let rows = if jobs == 1 {
            tasks
                .iter()
                .map(|(id, t, dt)| this.measure(id, t, *dt))
                .collect::<Result<Vec<_>>>()?
        } else {
            let chunks: Vec<Vec<&(String, Table, f64)>> = (0..jobs)
                .map(|j| tasks.iter().skip(j).step_by(jobs).collect())
                .collect();
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|chunk| {
                        scope.spawn(move || {
                            chunk
                                .iter()
                                .map(|(id, t, dt)| this.measure(id, t, *dt))
                                .collect::<Result<Vec<_>>>()
                        })
                    })
                    .collect();
                let mut rows = Vec::new();
                for h in handles {
                    rows.extend(h.join().expect("study worker panicked")?);
                }
                Ok::<_, HarnessError>(rows)
            })?
        };
        let mut result = StudyResult { n_operators: n, rows };
        result.sort();
        Ok(result)
    }
}

pub fn format_summary(result: &StudyResult, floor: f64) -> String {
    let mut s = String::new();
    for m in result.methods() {
        let slope = result
            .slope(&m, floor)
            .map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}"));
        let blown = result.rows_of(&m).filter(|r| r.blew_up()).count();
        s.push_str(&format!("{m:<14} slope {slope:>7}"));
        if blown > 0 {
            s.push_str(&format!("  ({blown} blow-up rows excluded)"));
        }
        s.push('\n');
    }
    s
}
