//! Self-contained special functions (log-gamma, Beta) and the expansion
//! constants built from them.
//!
//! `log_gamma` uses a Lanczos approximation (g = 7, 9 terms, Godfrey
//! coefficients) with the reflection formula below 0.5; this keeps the crate
//! free of external special-function dependencies while comfortably meeting
//! the 1e-13 relative accuracy needed by every downstream constant. The Beta
//! function is always computed in log space and exponentiated, because
//! arguments like `beta1/gamma - alpha1` grow quickly as the tail index
//! shrinks.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_TWO_PI: f64 = 0.918_938_533_204_672_74;

/// Validated arguments of the Beta function: both must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaArgs {
    a: f64,
    b: f64,
}

impl BetaArgs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::Domain(format!(
                "Beta function requires positive arguments, got ({a}, {b})"
            )));
        }
        Ok(BetaArgs { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Natural logarithm of the gamma function for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let s = (std::f64::consts::PI * x).sin();
        std::f64::consts::PI.ln() - s.ln() - log_gamma_unchecked(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut series = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            series += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        LN_SQRT_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
    }
}

/// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b).
pub fn log_beta(args: BetaArgs) -> f64 {
    log_gamma_unchecked(args.a) + log_gamma_unchecked(args.b)
        - log_gamma_unchecked(args.a + args.b)
}

/// Beta function B(a, b) = int_0^1 z^(a-1) (1-z)^(b-1) dz for a, b > 0.
///
/// # Example
///
/// ```
/// use shortfall::specfun::beta_fn;
///
/// // B(2, 2) = 1/6
/// assert!((beta_fn(2.0, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
/// ```
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    Ok(log_beta(BetaArgs::new(a, b)?).exp())
}

/// Leading constant of the upper-tail functional: the limit of
/// H_{u1,h1}((X-x)+) / ((1-h1(F(x))) u1(x)) as x grows, for power-type
/// utility index `alpha1`, distortion decay `beta1` and tail index `gamma`.
///
/// Equals (beta1/gamma) B(beta1/gamma - alpha1, alpha1 + 1), which by the
/// Beta recurrence (x+y) B(x, y+1) = y B(x, y) is also
/// alpha1 B(beta1/gamma - alpha1, alpha1); the two routes are kept in
/// agreement by a debug assertion.
pub fn delta0(gamma: f64, alpha1: f64, beta1: f64) -> Result<f64> {
    check_positive("gamma", gamma)?;
    check_positive("alpha1", alpha1)?;
    check_positive("beta1", beta1)?;
    let ratio = beta1 / gamma;
    if ratio <= alpha1 {
        return Err(Error::Divergence(format!(
            "upper-tail functional requires beta1/gamma > alpha1 \
             (got beta1/gamma = {ratio}, alpha1 = {alpha1})"
        )));
    }
    let value = ratio * beta_fn(ratio - alpha1, alpha1 + 1.0)?;
    debug_assert!({
        let alt = alpha1 * beta_fn(ratio - alpha1, alpha1).unwrap();
        (value - alt).abs() <= 1e-12 * value.abs().max(1.0)
    });
    Ok(value)
}

/// Coefficient of the utility second-order correction in the upper-tail
/// functional:
/// (beta1/gamma) (1/eta1) (B(beta1/gamma - alpha1 - eta1, alpha1 + eta1 + 1)
///                          - B(beta1/gamma - alpha1, alpha1 + 1)).
pub fn gamma1_const(gamma: f64, alpha1: f64, beta1: f64, eta1: f64) -> Result<f64> {
    check_positive("gamma", gamma)?;
    check_positive("alpha1", alpha1)?;
    check_positive("beta1", beta1)?;
    if !(eta1 < 0.0) {
        return Err(Error::Domain(format!(
            "gamma1_const requires eta1 < 0, got {eta1}"
        )));
    }
    if alpha1 + eta1 <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma1_const requires alpha1 + eta1 > 0, got {}",
            alpha1 + eta1
        )));
    }
    let ratio = beta1 / gamma;
    if ratio <= alpha1 {
        return Err(Error::Divergence(format!(
            "gamma1_const requires beta1/gamma > alpha1 (got {ratio} <= {alpha1})"
        )));
    }
    let shifted = beta_fn(ratio - alpha1 - eta1, alpha1 + eta1 + 1.0)?;
    let base = beta_fn(ratio - alpha1, alpha1 + 1.0)?;
    Ok(ratio / eta1 * (shifted - base))
}

/// Coefficient of the distorted-tail second-order correction in the
/// upper-tail functional:
/// (1/rho_h) ((beta1/gamma - rho_h) B(beta1/gamma - alpha1 - rho_h, alpha1+1)
///             - (beta1/gamma) B(beta1/gamma - alpha1, alpha1 + 1)).
pub fn gamma2_const(gamma: f64, alpha1: f64, beta1: f64, rho_h: f64) -> Result<f64> {
    check_positive("gamma", gamma)?;
    check_positive("alpha1", alpha1)?;
    check_positive("beta1", beta1)?;
    if !(rho_h < 0.0) {
        return Err(Error::Domain(format!(
            "gamma2_const requires rho_h < 0, got {rho_h}"
        )));
    }
    let ratio = beta1 / gamma;
    if ratio <= alpha1 {
        return Err(Error::Divergence(format!(
            "gamma2_const requires beta1/gamma > alpha1 (got {ratio} <= {alpha1})"
        )));
    }
    let shifted = beta_fn(ratio - alpha1 - rho_h, alpha1 + 1.0)?;
    let base = beta_fn(ratio - alpha1, alpha1 + 1.0)?;
    Ok(((ratio - rho_h) * shifted - ratio * base) / rho_h)
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}
