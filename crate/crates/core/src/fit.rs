/// Least-squares slope of `ln y` against `ln x`.
///
/// Returns `None` with fewer than two points or when the `x` values do not
/// spread.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 || !sxx.is_finite() || !sxy.is_finite() {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [0.1, 0.05, 0.025, 0.0125];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(3)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn order_of_points_does_not_matter() {
        let xs = [0.1, 0.05, 0.025];
        let ys = [1.0, 0.3, 0.2];
        let a = log_log_slope(&xs, &ys).unwrap();
        let b = log_log_slope(&[0.025, 0.1, 0.05], &[0.2, 1.0, 0.3]).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(log_log_slope(&[1.0], &[1.0]), None);
        assert_eq!(log_log_slope(&[1.0, 1.0], &[1.0, 2.0]), None);
    }
}
