//! Power utility functions u(x) = a x^alpha on the nonnegative half-line.

use crate::error::{Error, Result};
use crate::rv::RegVarProfile;

/// u(x) = scale * x^alpha with alpha, scale > 0. Pure powers by construction,
/// so the second-order auxiliary function is identically zero and
/// utility-driven correction terms drop from the expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerUtility {
    alpha: f64,
    scale: f64,
}

impl PowerUtility {
    pub fn new(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "utility index must be positive, got {alpha}"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!(
                "utility scale must be positive, got {scale}"
            )));
        }
        Ok(PowerUtility { alpha, scale })
    }

    pub fn identity() -> Self {
        PowerUtility { alpha: 1.0, scale: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0, "power utility evaluated at negative {x}");
        if x == 0.0 {
            return 0.0;
        }
        self.scale * x.powf(self.alpha)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.scale * self.alpha * x.powf(self.alpha - 1.0)
    }

    pub fn tail_profile(&self) -> RegVarProfile {
        RegVarProfile::pure_power(self.alpha, self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_evaluation() {
        let u = PowerUtility::new(2.0, 3.0).unwrap();
        assert_eq!(u.eval(0.0), 0.0);
        assert!((u.eval(2.0) - 12.0).abs() < 1e-15);
        assert!((u.derivative(2.0) - 12.0).abs() < 1e-15);
    }

    #[test]
    fn strictly_increasing() {
        let u = PowerUtility::new(0.7, 1.3).unwrap();
        let mut prev = 0.0;
        for i in 1..50 {
            let v = u.eval(i as f64 * 0.3);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PowerUtility::new(0.0, 1.0).is_err());
        assert!(PowerUtility::new(1.0, -1.0).is_err());
    }
}
