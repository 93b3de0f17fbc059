//! Heavy-tailed distribution catalog.
//!
//! Each model exposes mutually consistent cdf / survival / quantile /
//! density closed forms plus the regular-variation metadata of its tail
//! quantile function U(t) = F^-1(1 - 1/t): first-order index gamma, leading
//! scale c, second-order index rho and auxiliary function A with
//! U(t) = c t^gamma (1 + A(t)/rho + o(A(t))).
//!
//! Second-order data per entry:
//!   - Pareto:  U(t) = m t^gamma exactly, so A is identically zero.
//!   - GPD:     U(t) = theta (t^gamma - 1), rho = -gamma, A(t) = gamma t^-gamma.
//!   - Frechet: U(t) = (-ln(1 - 1/t))^-gamma = t^gamma (1 - gamma/(2t) + ...),
//!     so rho = -1 with A(t) = (gamma/2) t^-1; any asymptotically equivalent
//!     choice would serve equally well, this one is the leading correction of
//!     the exact expansion.
//!   - Burr:    U(t) = t^gamma (1 - t^rho)^(-gamma/rho), second-order index
//!     rho as parameterized, A(t) = gamma t^rho.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::rv::{AuxFunction, RegVarProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Pareto,
    Gpd,
    Frechet,
    Burr,
}

/// A named heavy-tailed distribution, optionally rescaled (X -> scale * X).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeavyTailModel {
    kind: ModelKind,
    gamma: f64,
    /// GPD scale parameter theta; 1 for the other models.
    theta: f64,
    /// Burr second-order parameter rho; unused otherwise.
    rho: f64,
    /// Multiplicative rescaling of the variable.
    scale: f64,
}

impl HeavyTailModel {
    /// Pareto with survival (x)^(-1/gamma) on [1, inf).
    pub fn pareto(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(HeavyTailModel { kind: ModelKind::Pareto, gamma, theta: 1.0, rho: 0.0, scale: 1.0 })
    }

    /// Generalized Pareto with cdf 1 - (theta/(x + theta))^(1/gamma) on (0, inf).
    pub fn gpd(gamma: f64, theta: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::Domain(format!("GPD theta must be positive, got {theta}")));
        }
        Ok(HeavyTailModel { kind: ModelKind::Gpd, gamma, theta, rho: 0.0, scale: 1.0 })
    }

    /// Frechet with cdf exp(-x^(-1/gamma)) on (0, inf).
    pub fn frechet(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(HeavyTailModel { kind: ModelKind::Frechet, gamma, theta: 1.0, rho: 0.0, scale: 1.0 })
    }

    /// Burr with cdf 1 - (1 + x^(-rho/gamma))^(1/rho) on (0, inf); rho < 0 is
    /// simultaneously the second-order regular-variation parameter.
    pub fn burr(gamma: f64, rho: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if !(rho < 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("Burr rho must be negative, got {rho}")));
        }
        Ok(HeavyTailModel { kind: ModelKind::Burr, gamma, theta: 1.0, rho, scale: 1.0 })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The same distribution with the variable multiplied by c > 0.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
        }
        let mut m = *self;
        m.scale *= c;
        Ok(m)
    }

    /// Left endpoint of the support.
    pub fn left_endpoint(&self) -> f64 {
        match self.kind {
            ModelKind::Pareto => self.scale,
            _ => 0.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.survival(x)
    }

    pub fn survival(&self, x: f64) -> f64 {
        let z = x / self.scale;
        match self.kind {
            ModelKind::Pareto => {
                if z <= 1.0 {
                    1.0
                } else {
                    z.powf(-1.0 / self.gamma)
                }
            }
            ModelKind::Gpd => {
                if z <= 0.0 {
                    1.0
                } else {
                    (self.theta / (z + self.theta)).powf(1.0 / self.gamma)
                }
            }
            ModelKind::Frechet => {
                if z <= 0.0 {
                    1.0
                } else {
                    -(-z.powf(-1.0 / self.gamma)).exp_m1()
                }
            }
            ModelKind::Burr => {
                if z <= 0.0 {
                    1.0
                } else {
                    (1.0 + z.powf(-self.rho / self.gamma)).powf(1.0 / self.rho)
                }
            }
        }
    }

    /// Quantile at p in [0, 1); p = 0 returns the left endpoint.
    pub fn quantile(&self, p: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&p), "quantile level {p} outside [0,1)");
        match self.kind {
            ModelKind::Frechet => {
                // Direct inversion of exp(-x^(-1/gamma)) = p is stabler near
                // p = 0 than going through the survival form.
                if p == 0.0 {
                    0.0
                } else {
                    self.scale * (-p.ln()).powf(-self.gamma)
                }
            }
            _ => self.quantile_survival(1.0 - p),
        }
    }

    /// Inverse survival function: the x with survival(x) = sv, sv in (0, 1].
    pub fn quantile_survival(&self, sv: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&sv), "survival level {sv} outside [0,1]");
        let z = match self.kind {
            ModelKind::Pareto => sv.powf(-self.gamma),
            ModelKind::Gpd => self.theta * (sv.powf(-self.gamma) - 1.0),
            ModelKind::Frechet => (-(-sv).ln_1p()).powf(-self.gamma),
            ModelKind::Burr => (sv.powf(self.rho) - 1.0).powf(-self.gamma / self.rho),
        };
        self.scale * z
    }

    /// Tail quantile function U(t) = F^-1(1 - 1/t) for t > 1.
    pub fn tail_quantile(&self, t: f64) -> f64 {
        self.quantile_survival(1.0 / t)
    }

    /// Lebesgue density on the interior of the support.
    pub fn density(&self, x: f64) -> f64 {
        let z = x / self.scale;
        let g = self.gamma;
        let d = match self.kind {
            ModelKind::Pareto => {
                if z <= 1.0 {
                    0.0
                } else {
                    z.powf(-1.0 / g - 1.0) / g
                }
            }
            ModelKind::Gpd => {
                if z <= 0.0 {
                    0.0
                } else {
                    self.theta.powf(1.0 / g) * (z + self.theta).powf(-1.0 / g - 1.0) / g
                }
            }
            ModelKind::Frechet => {
                if z <= 0.0 {
                    0.0
                } else {
                    (-z.powf(-1.0 / g)).exp() * z.powf(-1.0 / g - 1.0) / g
                }
            }
            ModelKind::Burr => {
                if z <= 0.0 {
                    0.0
                } else {
                    (1.0 + z.powf(-self.rho / g)).powf(1.0 / self.rho - 1.0)
                        * z.powf(-self.rho / g - 1.0)
                        / g
                }
            }
        };
        d / self.scale
    }

    /// Regular-variation profile of the tail quantile function U.
    pub fn tail_profile(&self) -> RegVarProfile {
        let g = self.gamma;
        match self.kind {
            ModelKind::Pareto => RegVarProfile::pure_power(g, self.scale),
            ModelKind::Gpd => RegVarProfile {
                index: g,
                second_index: -g,
                scale: self.scale * self.theta,
                aux: AuxFunction::Power { coef: g, exponent: -g },
            },
            ModelKind::Frechet => RegVarProfile {
                index: g,
                second_index: -1.0,
                scale: self.scale,
                aux: AuxFunction::Power { coef: 0.5 * g, exponent: -1.0 },
            },
            ModelKind::Burr => RegVarProfile {
                index: g,
                second_index: self.rho,
                scale: self.scale,
                aux: AuxFunction::Power { coef: g, exponent: self.rho },
            },
        }
    }

    /// n i.i.d. draws by inverse transform on uniforms from a deterministic
    /// counter-based generator: identical (seed, n) give identical output.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = SplitMix64::new(seed);
        (0..n).map(|_| self.quantile_survival(rng.next_uniform())).collect()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("tail index gamma must be positive, got {gamma}")));
    }
    Ok(())
}
