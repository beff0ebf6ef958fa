use alloc::vec::Vec;

use rand::Rng;

use super::LongitudinalData;
use crate::sim::Dynamics;
use crate::{FcmError, Result, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationResult {
    pub in_sample_error: f64,
    pub out_sample_error: f64,
    pub out_sample_std: f64,
}

/// In-sample error: run `w` freely from the first observation and average
/// the absolute deviation over every later observation.
pub fn validate_ise(w: &WeightMatrix, data: &LongitudinalData, dynamics: &Dynamics) -> Result<f64> {
    let n = data.n_concepts();
    if w.len() != n {
        return Err(FcmError::DimensionMismatch { expected: n, actual: w.len() });
    }
    let rows = data.rows();
    let mut state = rows[0].clone();
    let mut next = alloc::vec![0.0; n];
    let mut total = 0.0;
    for observed in &rows[1..] {
        dynamics.step_into(&state, w, &mut next);
        total += observed.iter().zip(&next).map(|(o, p)| libm::fabs(o - p)).sum::<f64>();
        core::mem::swap(&mut state, &mut next);
    }
    Ok(total / ((rows.len() - 1) * n) as f64)
}

/// Out-of-sample error against a known generator: mean and (population)
/// standard deviation over `k` random states of the one-step mean absolute
/// difference between the predictions of `w` and `generator`.
pub fn validate_ose<R: Rng + ?Sized>(
    w: &WeightMatrix,
    generator: &WeightMatrix,
    k: usize,
    low: f64,
    high: f64,
    dynamics: &Dynamics,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !(low < high) {
        return Err(FcmError::InvalidRange { low, high });
    }
    if k == 0 {
        return Err(FcmError::InvalidConfig("k must be positive".into()));
    }
    let n = generator.len();
    if w.len() != n {
        return Err(FcmError::DimensionMismatch { expected: n, actual: w.len() });
    }
    let mut a = alloc::vec![0.0; n];
    let mut b = alloc::vec![0.0; n];
    let errors: Vec<f64> = (0..k)
        .map(|_| {
            let state: Vec<f64> = (0..n).map(|_| rng.gen_range(low..high)).collect();
            dynamics.step_into(&state, w, &mut a);
            dynamics.step_into(&state, generator, &mut b);
            a.iter().zip(&b).map(|(x, y)| libm::fabs(x - y)).sum::<f64>() / n as f64
        })
        .collect();
    let mean = errors.iter().sum::<f64>() / k as f64;
    let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / k as f64;
    Ok((mean, libm::sqrt(var)))
}

/// Both errors at once.
pub fn validate<R: Rng + ?Sized>(
    w: &WeightMatrix,
    generator: &WeightMatrix,
    data: &LongitudinalData,
    k: usize,
    range: (f64, f64),
    dynamics: &Dynamics,
    rng: &mut R,
) -> Result<ValidationResult> {
    let in_sample_error = validate_ise(w, data, dynamics)?;
    let (out_sample_error, out_sample_std) = validate_ose(w, generator, k, range.0, range.1, dynamics, rng)?;
    Ok(ValidationResult { in_sample_error, out_sample_error, out_sample_std })
}
