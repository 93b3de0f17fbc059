//! The risk specification: utilities, distortions and the model, with the
//! admissibility flags the solver and expansions rely on.

use crate::distortion::Distortion;
use crate::error::{Error, Result};
use crate::model::HeavyTailModel;
use crate::utility::PowerUtility;

/// The quadruple (u1, h1, u2, h2) and the model behind the defining equation
///   tau H_{u1,h1}((X - x)+) = (1 - tau) H_{u2,h2}((X - x)-).
///
/// Construction never fails for valid components; instead the admissibility
/// flags are computed once and checked by the operations that need them:
/// the upper functional requires beta1/gamma > alpha1, the lower functional
/// requires the moment condition beta2/gamma > alpha2 (catalog models are
/// bounded below, so only the right tail matters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskSpec {
    pub u1: PowerUtility,
    pub u2: PowerUtility,
    pub h1: Distortion,
    pub h2: Distortion,
    pub model: HeavyTailModel,
}

impl RiskSpec {
    pub fn new(
        u1: PowerUtility,
        h1: Distortion,
        u2: PowerUtility,
        h2: Distortion,
        model: HeavyTailModel,
    ) -> Self {
        RiskSpec { u1, u2, h1, h2, model }
    }

    /// Plain expectile: u1 = u2 = identity, no distortion.
    pub fn expectile(model: HeavyTailModel) -> Self {
        RiskSpec::new(
            PowerUtility::identity(),
            Distortion::Identity,
            PowerUtility::identity(),
            Distortion::Identity,
            model,
        )
    }

    /// Generalized expectile: u(x) = 2x with TVaR distortions at p and q.
    pub fn gen_expectile(model: HeavyTailModel, p: f64, q: f64) -> Result<Self> {
        if p > q {
            return Err(Error::Domain(format!(
                "generalized expectile requires p <= q, got p = {p}, q = {q}"
            )));
        }
        let u = PowerUtility::new(1.0, 2.0)?;
        Ok(RiskSpec::new(u, Distortion::tvar(p)?, u, Distortion::tvar(q)?, model))
    }

    /// L^p-quantile: u1 = u2 = p x^(p-1), identity distortions.
    pub fn lp_quantile(model: HeavyTailModel, power: f64) -> Result<Self> {
        if !(power >= 1.0) {
            return Err(Error::Domain(format!(
                "Lp-quantile requires power >= 1, got {power}"
            )));
        }
        // power = 1 degenerates to the plain quantile; the utility index
        // must stay strictly positive.
        let u = PowerUtility::new(power - 1.0, power)
            .map_err(|_| Error::Domain("Lp power must exceed 1".into()))?;
        Ok(RiskSpec::new(u, Distortion::Identity, u, Distortion::Identity, model))
    }

    /// Regular-variation index of phi = u2 / (u1 (1 - h1 o F)):
    /// s = alpha2 - alpha1 + beta1/gamma.
    pub fn s(&self) -> f64 {
        self.u2.alpha() - self.u1.alpha() + self.beta1() / self.model.gamma()
    }

    pub fn beta1(&self) -> f64 {
        self.h1.tail_profile().index
    }

    pub fn beta2(&self) -> f64 {
        self.h2.tail_profile().index
    }

    /// Upper-tail admissibility: beta1/gamma > alpha1.
    pub fn plus_admissible(&self) -> bool {
        self.beta1() / self.model.gamma() > self.u1.alpha()
    }

    /// Lower-side moment admissibility: beta2/gamma > alpha2.
    pub fn minus_admissible(&self) -> bool {
        self.beta2() / self.model.gamma() > self.u2.alpha()
    }

    pub fn admissible(&self) -> bool {
        self.plus_admissible() && self.minus_admissible() && self.s() > 0.0
    }

    pub fn require_plus_admissible(&self) -> Result<()> {
        if self.plus_admissible() {
            Ok(())
        } else {
            Err(Error::Divergence(format!(
                "upper functional diverges: beta1/gamma = {} <= alpha1 = {}",
                self.beta1() / self.model.gamma(),
                self.u1.alpha()
            )))
        }
    }

    pub fn require_minus_admissible(&self) -> Result<()> {
        if self.minus_admissible() {
            Ok(())
        } else {
            Err(Error::Divergence(format!(
                "lower functional diverges: beta2/gamma = {} <= alpha2 = {}",
                self.beta2() / self.model.gamma(),
                self.u2.alpha()
            )))
        }
    }

    /// Same spec on the rescaled variable c X.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut s = *self;
        s.model = self.model.scaled(c)?;
        Ok(s)
    }
}
