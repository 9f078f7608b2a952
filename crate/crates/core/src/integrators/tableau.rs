use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Explicit Runge-Kutta coefficients, optionally with embedded weights for
/// error estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau<T> {
    pub name: &'static str,
    /// Row `i` holds `a_{i,0..i}` (strictly lower triangular part).
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub b_embedded: Option<Vec<T>>,
    pub order: u32,
}

impl<T: RealScalar> ButcherTableau<T> {
    fn from_f64(
        name: &'static str,
        a: &[&[f64]],
        b: &[f64],
        c: &[f64],
        b_embedded: Option<&[f64]>,
        order: u32,
    ) -> Self {
        let conv = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<_>>();
        Self {
            name,
            a: a.iter().map(|row| conv(row)).collect(),
            b: conv(b),
            c: conv(c),
            b_embedded: b_embedded.map(conv),
            order,
        }
    }

    /// Classical fourth-order method.
    pub fn rk4() -> Self {
        Self::from_f64(
            "rk4",
            &[&[], &[0.5], &[0.0, 0.5], &[0.0, 0.0, 1.0]],
            &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            &[0.0, 0.5, 0.5, 1.0],
            None,
            4,
        )
    }

    /// Kutta's third-order method.
    pub fn kutta3() -> Self {
        Self::from_f64(
            "kutta3",
            &[&[], &[0.5], &[-1.0, 2.0]],
            &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            &[0.0, 0.5, 1.0],
            None,
            3,
        )
    }

    /// Dormand-Prince 5(4); `b` is the fifth-order solution.
    pub fn dormand_prince() -> Self {
        Self::from_f64(
            "dopri5",
            &[
                &[],
                &[1.0 / 5.0],
                &[3.0 / 40.0, 9.0 / 40.0],
                &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
                &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
                &[
                    9017.0 / 3168.0,
                    -355.0 / 33.0,
                    46732.0 / 5247.0,
                    49.0 / 176.0,
                    -5103.0 / 18656.0,
                ],
                &[
                    35.0 / 384.0,
                    0.0,
                    500.0 / 1113.0,
                    125.0 / 192.0,
                    -2187.0 / 6784.0,
                    11.0 / 84.0,
                ],
            ],
            &[
                35.0 / 384.0,
                0.0,
                500.0 / 1113.0,
                125.0 / 192.0,
                -2187.0 / 6784.0,
                11.0 / 84.0,
                0.0,
            ],
            &[0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0],
            Some(&[
                5179.0 / 57600.0,
                0.0,
                7571.0 / 16695.0,
                393.0 / 640.0,
                -92097.0 / 339200.0,
                187.0 / 2100.0,
                1.0 / 40.0,
            ]),
            5,
        )
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Checks explicitness, `sum b = 1` and row sums of `a` equal to `c`.
    pub fn validate(&self) -> Result<()> {
        let s = self.b.len();
        let tol = T::lit(1e-14);
        if self.c.len() != s || self.a.len() != s {
            return Err(Error::Config(format!("tableau {} has inconsistent sizes", self.name)));
        }
        for (i, row) in self.a.iter().enumerate() {
            if row.len() != i {
                return Err(Error::Config(format!(
                    "tableau {} row {i} has {} entries; explicit methods need {i}",
                    self.name,
                    row.len()
                )));
            }
            let sum = row.iter().fold(T::zero(), |acc, &x| acc + x);
            if (sum - self.c[i]).abs() > tol {
                return Err(Error::Config(format!(
                    "tableau {} row {i} does not sum to c",
                    self.name
                )));
            }
        }
        let check_weights = |w: &[T]| (w.iter().fold(T::zero(), |acc, &x| acc + x) - T::one()).abs() <= tol;
        if !check_weights(&self.b) || !self.b_embedded.as_deref().is_none_or(check_weights) {
            return Err(Error::Config(format!(
                "tableau {} weights do not sum to one",
                self.name
            )));
        }
        Ok(())
    }
}
