//! Log-log charts of study results as SVG 1.1.
//!
//! Output depends only on the rows (never on wall time or the clock), so
//! the same result renders to the same bytes.

use std::fmt::Write;

use crate::error::{HarnessError, Result};
use crate::study::StudyResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// Error against step size.
    Convergence,
    /// Error against RHS evaluations.
    WorkPrecision,
}

impl std::str::FromStr for ChartKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convergence" => Ok(ChartKind::Convergence),
            "work-precision" => Ok(ChartKind::WorkPrecision),
            _ => Err(HarnessError::Render(format!("unknown chart kind `{s}`"))),
        }
    }
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct Series {
    name: String,
    points: Vec<(f64, f64)>,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    /// Whole decades covering the data, in log10 units.
    fn covering(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        let (mut lo, mut hi) = (lo.floor(), hi.ceil());
        if hi <= lo {
            lo -= 1.0;
            hi += 1.0;
        }
        Axis { lo, hi }
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }
}

fn series(result: &StudyResult, kind: ChartKind) -> Result<Vec<Series>> {
    let methods = result.methods();
    if methods.is_empty() {
        return Err(HarnessError::Render("no rows".into()));
    }
    let mut out = Vec::new();
    for m in methods {
        let mut points: Vec<(f64, f64)> = result
            .rows_of(&m)
            .filter(|r| r.error.is_finite() && r.error > 0.0)
            .map(|r| match kind {
                ChartKind::Convergence => (r.dt, r.error),
                ChartKind::WorkPrecision => (r.rhs_evals_total as f64, r.error),
            })
            .filter(|p| p.0 > 0.0)
            .collect();
        if points.len() < 2 {
            return Err(HarnessError::Render(format!(
                "method {m} has {} plottable rows, need 2",
                points.len()
            )));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.push(Series { name: m, points });
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the chart; `guides` are the reference orders drawn as dashed
/// lines (slope `p` against step, `-p` against cost).
pub fn render(result: &StudyResult, kind: ChartKind, guides: &[u32]) -> Result<String> {
    let all = series(result, kind)?;
    let xa = Axis::covering(all.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let ya = Axis::covering(all.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + xa.frac(x) * pw;
    let py = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    // decade ticks and grid
    for d in (xa.lo as i32)..=(xa.hi as i32) {
        let x = px(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            TOP + ph
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"#,
            TOP + ph + 18.0
        );
    }
    for d in (ya.lo as i32)..=(ya.hi as i32) {
        let y = py(10f64.powi(d));
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT + pw
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let xlabel = match kind {
        ChartKind::Convergence => "step size",
        ChartKind::WorkPrecision => "RHS evaluations",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + pw / 2.0,
        H - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">error</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    // guides pass a factor of ten below the first series at its coarse end
    // and span its range; anything leaving the plot box is clipped
    let first = &all[0].points;
    let anchor = match kind {
        ChartKind::Convergence => first[first.len() - 1],
        ChartKind::WorkPrecision => first[0],
    };
    let (ga, gb) = (first[0].0, first[first.len() - 1].0);
    for &p in guides {
        let slope = match kind {
            ChartKind::Convergence => p as f64,
            ChartKind::WorkPrecision => -(p as f64),
        };
        let at = |x: f64| anchor.1 / 10.0 * (x / anchor.0).powf(slope);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888888" stroke-dasharray="6 4" clip-path="url(#plot)"/>"##,
            px(ga),
            py(at(ga)),
            px(gb),
            py(at(gb))
        );
        // label the end away from the shared anchor, where guides separate
        let lx = match kind {
            ChartKind::Convergence => ga,
            ChartKind::WorkPrecision => gb,
        };
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" fill="#555555" text-anchor="end" clip-path="url(#plot)">order {p}</text>"##,
            px(lx) - 4.0,
            py(at(lx)) + 4.0
        );
    }

    for (k, ser) in all.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        for &(x, y) in &ser.points {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            );
        }
        let ly = TOP + 20.0 + 20.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 25.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 32.0,
            ly + 4.0,
            escape(&ser.name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
