//! Distortion functions and their tail metadata.

use crate::error::{Error, Result};
use crate::rv::{AuxFunction, RegVarProfile};

/// A distortion function h: \[0,1\] -> \[0,1\], nondecreasing with h(0) = 0 and
/// h(1) = 1 and no jumps at the endpoints.
///
/// The catalog is closed: the identity and the tail-value-at-risk distortion
/// h(x) = (x - p)+ / (1 - p). Both have an exactly power-law tail
/// 1 - h(1 - 1/t) = b / t (for t large enough), so their second-order
/// auxiliary function is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distortion {
    Identity,
    TVaR { p: f64 },
}

impl Distortion {
    pub fn tvar(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "TVaR level must lie in [0, 1), got {p}"
            )));
        }
        Ok(Distortion::TVaR { p })
    }

    /// h(x) for x in [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Distortion::Identity => x,
            Distortion::TVaR { p } => ((x - p).max(0.0) / (1.0 - p)).min(1.0),
        }
    }

    /// Inverse of h at a level in (0, 1); the TVaR distortion is strictly
    /// increasing on [p, 1], which contains every such level's preimage.
    pub fn inverse(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Domain(format!(
                "distortion inverse requires a level in (0,1), got {tau}"
            )));
        }
        Ok(match *self {
            Distortion::Identity => tau,
            Distortion::TVaR { p } => p + (1.0 - p) * tau,
        })
    }

    /// 1 - h(1 - sv) expressed through the survival value sv = 1 - F(x);
    /// this is the distorted tail mass above x, computed without cancellation.
    pub fn tail_mass(&self, survival: f64) -> f64 {
        match *self {
            Distortion::Identity => survival,
            Distortion::TVaR { p } => (survival / (1.0 - p)).min(1.0),
        }
    }

    /// Exact tail decay 1 - h(1 - 1/t).
    pub fn tail_decay(&self, t: f64) -> f64 {
        self.tail_mass(1.0 / t)
    }

    /// Density of h on (0, 1) where it is absolutely continuous, together
    /// with the left end of its support: (weight, lower). dh = weight ds on
    /// (lower, 1) and zero mass below `lower`.
    pub(crate) fn density_window(&self) -> (f64, f64) {
        match *self {
            Distortion::Identity => (1.0, 0.0),
            Distortion::TVaR { p } => (1.0 / (1.0 - p), p),
        }
    }

    /// Profile of t -> 1 - h(1 - 1/t): positive decay rate (`index` = beta),
    /// leading scale b, and auxiliary function (identically zero here).
    pub fn tail_profile(&self) -> RegVarProfile {
        let b = match *self {
            Distortion::Identity => 1.0,
            Distortion::TVaR { p } => 1.0 / (1.0 - p),
        };
        RegVarProfile {
            index: 1.0,
            second_index: 0.0,
            scale: b,
            aux: AuxFunction::Zero,
        }
    }
}
