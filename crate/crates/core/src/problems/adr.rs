//! Method-of-lines discretization of
//! `u_t = -alpha (u_x + u_y) + eps (u_xx + u_yy) + gamma u (u - 1/2)(1 - u)`
//! on the unit square with homogeneous Neumann boundaries.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{Operator, SplitOde};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdrConfig {
    pub alpha: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub dx: f64,
    pub dy: f64,
    pub t_final: f64,
}

impl Default for AdrConfig {
    fn default() -> Self {
        Self {
            alpha: -10.0,
            epsilon: 0.01,
            gamma: 100.0,
            dx: 1.0 / 40.0,
            dy: 1.0 / 40.0,
            t_final: 0.1,
        }
    }
}

impl AdrConfig {
    /// Coarser `1/20` grid with the same physics.
    pub fn fast() -> Self {
        Self {
            dx: 1.0 / 20.0,
            dy: 1.0 / 20.0,
            ..Self::default()
        }
    }

    pub fn with_cells(cells: usize) -> Self {
        let h = 1.0 / cells as f64;
        Self {
            dx: h,
            dy: h,
            ..Self::default()
        }
    }

    pub fn grid(&self) -> Result<Grid2D> {
        let finite = [self.alpha, self.epsilon, self.gamma, self.dx, self.dy, self.t_final];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("ADR parameters must be finite".into()));
        }
        if self.dx != self.dy {
            return Err(Error::Config(format!(
                "grid must be square, got dx = {} and dy = {}",
                self.dx, self.dy
            )));
        }
        if !(self.dx > 0.0 && self.dx <= 0.5) {
            return Err(Error::Config(format!(
                "grid spacing {} leaves no interior nodes",
                self.dx
            )));
        }
        let cells = (1.0 / self.dx).round();
        if (cells * self.dx - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "grid spacing {} does not divide the unit interval",
                self.dx
            )));
        }
        if self.t_final <= 0.0 {
            return Err(Error::Config("t_final must be positive".into()));
        }
        Ok(Grid2D::new(cells as usize))
    }
}

/// `(M+1) x (M+1)` nodes including the boundary, flattened row by row:
/// node `(i, j)` at `x = i/M`, `y = j/M` has index `j (M+1) + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid2D {
    cells: usize,
}

impl Grid2D {
    pub fn new(cells: usize) -> Self {
        assert!(cells >= 2, "grid needs at least one interior node");
        Self { cells }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn side(&self) -> usize {
        self.cells + 1
    }

    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.side() && j < self.side());
        j * self.side() + i
    }

    pub fn node(&self, index: usize) -> (usize, usize) {
        (index % self.side(), index / self.side())
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        let m = self.cells as f64;
        (i as f64 / m, j as f64 / m)
    }

    /// Neighbors `(k - 1, k + 1)` along one axis, reflected at the ends.
    pub fn neighbors(&self, k: usize) -> (usize, usize) {
        let last = self.cells;
        let lo = if k == 0 { 1 } else { k - 1 };
        let hi = if k == last { last - 1 } else { k + 1 };
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Advection,
    Diffusion(Axis),
    Reaction,
    Full,
}

struct AdrOperator<T> {
    grid: Grid2D,
    kind: Kind,
    adv: T,
    diff: T,
    gamma: T,
}

impl<T: RealScalar> AdrOperator<T> {
    fn new(grid: Grid2D, cfg: &AdrConfig, kind: Kind) -> Self {
        let h = grid.spacing();
        Self {
            grid,
            kind,
            // -alpha / (2h) in front of the central difference
            adv: T::lit(-cfg.alpha / (2.0 * h)),
            diff: T::lit(cfg.epsilon / (h * h)),
            gamma: T::lit(cfg.gamma),
        }
    }

    fn reaction(&self, u: Complex<T>) -> Complex<T> {
        let half = T::lit(0.5);
        let one = Complex::new(T::one(), T::zero());
        u * (u - half) * (one - u) * self.gamma
    }
}

impl<T: RealScalar> Operator<T> for AdrOperator<T> {
    fn eval(&self, _t: Complex<T>, u: &[Complex<T>], out: &mut [Complex<T>]) {
        let g = &self.grid;
        let two = T::lit(2.0);
        for j in 0..g.side() {
            let (jm, jp) = g.neighbors(j);
            for i in 0..g.side() {
                let (im, ip) = g.neighbors(i);
                let k = g.index(i, j);
                let c = u[k];
                let (w, e) = (u[g.index(im, j)], u[g.index(ip, j)]);
                let (s, n) = (u[g.index(i, jm)], u[g.index(i, jp)]);
                out[k] = match self.kind {
                    Kind::Advection => (e - w + n - s) * self.adv,
                    Kind::Diffusion(Axis::X) => (w + e - c * two) * self.diff,
                    Kind::Diffusion(Axis::Y) => (s + n - c * two) * self.diff,
                    Kind::Reaction => self.reaction(c),
                    Kind::Full => {
                        (e - w + n - s) * self.adv + (w + e + s + n - c * T::lit(4.0)) * self.diff + self.reaction(c)
                    }
                };
            }
        }
    }
}

/// Four operators: advection, x-diffusion, y-diffusion, reaction. The
/// unsplit right-hand side is evaluated in one sweep.
pub fn adr_split<T: RealScalar>(cfg: &AdrConfig) -> Result<SplitOde<T>> {
    let grid = cfg.grid()?;
    let op = |kind| Box::new(AdrOperator::<T>::new(grid, cfg, kind)) as Box<dyn Operator<T>>;
    let ops = vec![
        op(Kind::Advection),
        op(Kind::Diffusion(Axis::X)),
        op(Kind::Diffusion(Axis::Y)),
        op(Kind::Reaction),
    ];
    Ok(SplitOde::new(format!("adr2d-{}", grid.cells()), grid.len(), ops).with_full(op(Kind::Full)))
}

pub fn adr_initial_value(x: f64, y: f64) -> f64 {
    let b = x * y * (1.0 - x) * (1.0 - y);
    256.0 * b * b + 0.3
}

pub fn adr_initial<T: RealScalar>(cfg: &AdrConfig) -> Result<Vec<Complex<T>>> {
    let grid = cfg.grid()?;
    Ok((0..grid.len())
        .map(|k| {
            let (i, j) = grid.node(k);
            let (x, y) = grid.coords(i, j);
            Complex::new(T::lit(adr_initial_value(x, y)), T::zero())
        })
        .collect())
}

/// Trapezoidal quadrature weights; the Neumann diffusion stencils conserve
/// the weighted mean `sum_k w_k u_k`.
pub fn trapezoid_weights(grid: &Grid2D) -> Vec<f64> {
    let w1 = |k: usize| if k == 0 || k == grid.cells() { 0.5 } else { 1.0 };
    (0..grid.len())
        .map(|k| {
            let (i, j) = grid.node(k);
            w1(i) * w1(j)
        })
        .collect()
}

/// Helper for tests and plots: grid values as a real field.
pub fn real_field<T: RealScalar>(u: &[Complex<T>]) -> Vec<f64> {
    u.iter().map(|z| z.re.to_f64_lossy()).collect()
}
