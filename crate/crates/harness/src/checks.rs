//! Order verification and BCH truncation checks.

use std::fmt::Write;

use nsplit::bch::{empirical_order, round_off_floor, truncation_error, MatrixSet};
use nsplit::splitting::{order_residuals, OrderReport};
use nsplit::Table;

use crate::error::Result;

/// Halving ratios of the truncation error must land here for a `t^4` law.
pub const RATIO_BAND: (f64, f64) = (12.0, 20.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BchStatus {
    Pass,
    Fail,
    /// Every error sits at round-off, as for commuting matrices.
    Exact,
}

#[derive(Debug, Clone)]
pub struct BchReport {
    pub t: Vec<f64>,
    pub errors: Vec<f64>,
    /// `errors[k] / errors[k + 1]`; empty when the status is `Exact`.
    pub ratios: Vec<f64>,
    pub status: BchStatus,
}

/// `t0, t0/2, ...` with `levels` entries.
pub fn halving_ladder(t0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| t0 / 2f64.powi(k as i32)).collect()
}

pub fn bch_check(ms: &MatrixSet<f64>, t: &[f64]) -> Result<BchReport> {
    let errors = t
        .iter()
        .map(|&t| truncation_error(ms, t))
        .collect::<nsplit::Result<Vec<_>>>()?;
    let floor: f64 = round_off_floor();
    if errors.iter().all(|&e| e <= floor) {
        return Ok(BchReport {
            t: t.to_vec(),
            errors,
            ratios: vec![],
            status: BchStatus::Exact,
        });
    }
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = !ratios.is_empty() && ratios.iter().all(|r| (RATIO_BAND.0..=RATIO_BAND.1).contains(r));
    Ok(BchReport {
        t: t.to_vec(),
        errors,
        ratios,
        status: if ok { BchStatus::Pass } else { BchStatus::Fail },
    })
}

pub fn format_bch(r: &BchReport) -> String {
    let mut s = format!("{:>12} {:>14} {:>8}\n", "t", "error", "ratio");
    for (k, (t, e)) in r.t.iter().zip(&r.errors).enumerate() {
        let ratio = if k == 0 || r.ratios.is_empty() {
            "-".to_string()
        } else {
            format!("{:.3}", r.ratios[k - 1])
        };
        let _ = writeln!(s, "{t:>12.6e} {e:>14.6e} {ratio:>8}");
    }
    let status = match r.status {
        BchStatus::Pass => "PASS",
        BchStatus::Fail => "FAIL",
        BchStatus::Exact => "exact (errors at round-off, ratios undefined)",
    };
    let _ = writeln!(s, "status: {status}");
    s
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub method: String,
    pub required_order: u32,
    pub residuals: OrderReport<f64>,
    pub tolerance: f64,
    /// Measured on random matrices when the required order exceeds two.
    pub empirical: Option<f64>,
    pub pass: bool,
}

/// Checks the algebraic conditions up to `min(order, 2)` against
/// `tolerance`; above second order, also measures the one-step defect
/// slope on seeded random matrices and requires it within 0.25 of `order`.
pub fn verify_order(table: &Table, order: u32, tolerance: f64, seed: u64) -> Result<VerifyReport> {
    let residuals = order_residuals(table);
    let mut pass = (1..=order.min(2)).all(|p| residuals.max_residual(p) <= tolerance);
    let mut empirical = None;
    if order > 2 {
        let ms = MatrixSet::<f64>::random(table.n_operators(), 4, seed);
        // higher orders reach round-off quickly, so use a coarser ladder
        let ts: Vec<f64> = if order <= 3 {
            halving_ladder(0.1, 4)
        } else {
            halving_ladder(0.4, 3)
        };
        let q = empirical_order(table, &ms, &ts)?;
        pass &= (q - order as f64).abs() < 0.25;
        empirical = Some(q);
    }
    Ok(VerifyReport {
        method: table.name().to_string(),
        required_order: order,
        residuals,
        tolerance,
        empirical,
        pass,
    })
}

pub fn format_verify(r: &VerifyReport) -> String {
    let mut s = format!(
        "method {} (order {} required, tolerance {:e})\n",
        r.method, r.required_order, r.tolerance
    );
    let _ = writeln!(
        s,
        "{:<10} {:>24} {:>24} {:>11}",
        "condition", "value", "residual", "|residual|"
    );
    for c in r.residuals.all_residuals() {
        let _ = writeln!(
            s,
            "{:<10} {:>24} {:>24} {:>11.3e}",
            c.condition.to_string(),
            format!("{:.6}{:+.6}i", c.value.re, c.value.im),
            format!("{:.3e}{:+.3e}i", c.residual.re, c.residual.im),
            c.magnitude
        );
    }
    let _ = writeln!(s, "recursion gap {:.3e}", r.residuals.recursion_gap);
    if let Some(q) = r.empirical {
        let _ = writeln!(s, "empirical order {q:.3}");
    }
    let _ = writeln!(s, "{}", if r.pass { "PASS" } else { "FAIL" });
    s
}
