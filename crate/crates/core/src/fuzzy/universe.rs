use alloc::format;
use alloc::vec::Vec;

use crate::{FcmError, Result};

/// Evenly spaced samples over `[lo, hi]`, both ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct Universe {
    lo: f64,
    hi: f64,
    step: f64,
    samples: Vec<f64>,
}

impl Universe {
    /// `step` must divide `hi - lo` (to within 1e-9 of a whole number of steps).
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FcmError::InvalidUniverse(format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(FcmError::InvalidUniverse(format!("step must be positive, got {step}")));
        }
        let span = (hi - lo) / step;
        let n = libm::round(span);
        if libm::fabs(span - n) > 1e-9 * n.max(1.0) {
            return Err(FcmError::InvalidUniverse(format!("step {step} does not divide [{lo}, {hi}]")));
        }
        let n = n as usize;
        // interpolate instead of accumulating so that round values (apexes) land exactly
        let samples = (0..=n)
            .map(|i| if i == n { hi } else { lo + (hi - lo) * (i as f64) / (n as f64) })
            .collect();
        Ok(Self { lo, hi, step, samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

impl Default for Universe {
    /// `[-1, 1]` in steps of 0.001.
    fn default() -> Self {
        Self::new(-1.0, 1.0, 0.001).expect("valid default universe")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_has_2001_samples() {
        let u = Universe::default();
        assert_eq!(u.len(), 2001);
        assert_eq!(u.samples()[0], -1.0);
        assert_eq!(*u.samples().last().unwrap(), 1.0);
        assert_eq!(u.samples()[1750], 0.75);
        for w in u.samples().windows(2) {
            assert!((w[1] - w[0] - 0.001).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_bounds() {
        assert!(Universe::new(1.0, -1.0, 0.1).is_err());
        assert!(Universe::new(0.0, 1.0, 0.0).is_err());
        assert!(Universe::new(0.0, 1.0, 0.3).is_err());
    }
}
