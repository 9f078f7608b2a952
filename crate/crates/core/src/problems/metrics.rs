use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;

/// Euclidean norm of `y - y_ref` (complex moduli).
pub fn l2_error<T: RealScalar>(y: &[Complex<T>], y_ref: &[Complex<T>]) -> Result<f64> {
    if y.len() != y_ref.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} vs {} components",
            y.len(),
            y_ref.len()
        )));
    }
    let sum: f64 = y
        .iter()
        .zip(y_ref)
        .map(|(a, b)| (*a - *b).norm_sqr().to_f64_lossy())
        .sum();
    Ok(sum.sqrt())
}

/// Mixed root-mean-square error over all components of all samples:
/// `sqrt(mean(|X_ref - X|^2 / (1 + |X_ref|)^2))`.
pub fn mrms_error<T: RealScalar>(samples: &[Vec<Complex<T>>], reference: &[Vec<Complex<T>>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::DimensionMismatch("no samples".into()));
    }
    if samples.len() != reference.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} samples vs {} reference samples",
            samples.len(),
            reference.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (x, r) in samples.iter().zip(reference) {
        if x.len() != r.len() {
            return Err(Error::DimensionMismatch(format!(
                "sample of {} vs {} components",
                x.len(),
                r.len()
            )));
        }
        for (a, b) in x.iter().zip(r) {
            let num = (*b - *a).norm().to_f64_lossy();
            let den = 1.0 + b.norm().to_f64_lossy();
            sum += (num / den) * (num / den);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::DimensionMismatch("samples have no components".into()));
    }
    Ok((sum / count as f64).sqrt())
}
