//! Deterministic summation and the numeric ranges shared by every module.

use crate::error::{DensityError, Result};

/// Smallest supported weight exponent (logarithmic density).
pub const ALPHA_MIN: f64 = -1.0;
/// Largest supported weight exponent; `k^40` stays finite for `k <= 2^24`.
pub const ALPHA_MAX: f64 = 40.0;

/// Neumaier-compensated running sum.
///
/// Terms must be added in a fixed order for the result to be reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (ALPHA_MIN..=ALPHA_MAX).contains(&alpha) {
        Ok(())
    } else {
        Err(DensityError::Domain(format!(
            "alpha = {alpha} outside supported range [{ALPHA_MIN}, {ALPHA_MAX}]"
        )))
    }
}

/// The weight `k^alpha` of a single integer.
#[inline]
pub fn weight(k: u64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else if alpha == -1.0 {
        1.0 / k as f64
    } else if alpha == 1.0 {
        k as f64
    } else {
        (k as f64).powf(alpha)
    }
}

/// 64-bit finalizer from SplitMix64; used to derive per-element random choices.
#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..1000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-13)).abs() < 1e-15);
    }

    #[test]
    fn alpha_range() {
        assert!(check_alpha(-1.0).is_ok());
        assert!(check_alpha(40.0).is_ok());
        assert!(check_alpha(-1.5).is_err());
        assert!(check_alpha(f64::NAN).is_err());
    }
}
