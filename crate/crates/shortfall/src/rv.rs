//! Regular-variation metadata attached to tails, utilities and distortions.

/// Auxiliary function of a second-order regularly varying object.
///
/// Catalog entries are either exact power functions (`Zero`, the pure-power
/// case, where second-order corrections vanish identically) or decaying
/// powers `coef * t^exponent` with `exponent < 0`. The sign of `coef` is
/// constant, as the representation requires.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxFunction {
    /// Identically zero: the object is a multiple of a pure power and all
    /// correction terms involving it are dropped.
    Zero,
    /// t -> coef * t^exponent with exponent < 0.
    Power { coef: f64, exponent: f64 },
}

impl AuxFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            AuxFunction::Zero => 0.0,
            AuxFunction::Power { coef, exponent } => coef * t.powf(exponent),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AuxFunction::Zero)
    }
}

/// First- and second-order regular-variation metadata.
///
/// `index` is the first-order index in the orientation natural to the object:
/// the tail quantile function varies with index `gamma > 0`, utilities with
/// `alpha > 0`, and distortion tails `t -> 1 - h(1 - 1/t)` store the positive
/// decay rate `beta` (the function itself varies with index `-beta`).
/// `scale` is the leading constant of the second-order representation
/// `f(t) = scale * t^index (1 + aux(t)/second_index + o(aux(t)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegVarProfile {
    pub index: f64,
    pub second_index: f64,
    pub scale: f64,
    pub aux: AuxFunction,
}

impl RegVarProfile {
    /// Pure-power profile: aux identically zero.
    pub fn pure_power(index: f64, scale: f64) -> Self {
        RegVarProfile {
            index,
            second_index: 0.0,
            scale,
            aux: AuxFunction::Zero,
        }
    }

    pub fn is_pure_power(&self) -> bool {
        self.aux.is_zero()
    }
}
