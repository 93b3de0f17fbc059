//! First- and second-order asymptotic expansions of x_tau as tau -> 1,
//! with closed-form specializations for L^p-quantiles and generalized
//! expectiles used as independent cross-checks of the generic engine.
//!
//! The scale of x_tau is set by the generalized inverse of
//! phi(x) = u2(x) / (u1(x) (1 - h1(F(x)))), which varies regularly with
//! index s = alpha2 - alpha1 + beta1/gamma. The first-order expansion is
//! Delta1 * phi^-1((1 - tau)^-1) with Delta1 = Delta0^(1/s); the
//! second-order expansion adds seven correction terms assembled in
//! [`ExpansionContext`], every o(1) factor set to zero (the only computable
//! truncation).

use crate::distortion::Distortion;
use crate::error::{Error, Result};
use crate::model::HeavyTailModel;
use crate::risk::RiskSpec;
use crate::rv::AuxFunction;
use crate::solver;
use crate::specfun::{beta_fn, delta0, gamma1_const, gamma2_const};

/// phi(x) = u2(x) / (u1(x) (1 - h1(F(x)))).
pub fn phi(spec: &RiskSpec, x: f64) -> Result<f64> {
    if x <= spec.model.left_endpoint() {
        return Err(Error::Domain(format!(
            "phi needs x above the left endpoint {}, got {x}",
            spec.model.left_endpoint()
        )));
    }
    let tail = spec.h1.tail_mass(spec.model.survival(x));
    Ok(spec.u2.eval(x) / (spec.u1.eval(x) * tail))
}

/// Generalized inverse of phi at a large level q: inf{x : phi(x) >= q}.
///
/// When u1 = u2 the inverse collapses to the model's tail quantile function
/// (identity distortion) or U(q/(1-p)) (TVaR(p)); otherwise a monotone
/// bisection on the ultimately increasing branch refines to 1e-10 relative.
pub fn phi_inverse(spec: &RiskSpec, q: f64) -> Result<f64> {
    spec.require_plus_admissible()?;
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Domain(format!(
            "phi_inverse requires a level above 1, got {q}"
        )));
    }
    if spec.u1 == spec.u2 {
        return Ok(match spec.h1 {
            Distortion::Identity => spec.model.tail_quantile(q),
            Distortion::TVaR { p } => spec.model.tail_quantile(q / (1.0 - p)),
        });
    }

    let floor = spec.model.left_endpoint();
    let mut lo = spec.model.quantile(0.5).max(floor + 1e-9 * floor.abs().max(1.0));
    if phi(spec, lo)? >= q {
        // Walk toward the endpoint looking for phi < q.
        let mut found = false;
        for _ in 0..200 {
            lo = floor + 0.5 * (lo - floor);
            if phi(spec, lo)? < q {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Domain(format!(
                "level {q} is below the increasing range of phi"
            )));
        }
    }
    let mut hi = lo;
    let mut expanded = false;
    for _ in 0..400 {
        hi = floor + 2.0 * (hi - floor);
        if phi(spec, hi)? >= q {
            expanded = true;
            break;
        }
    }
    if !expanded {
        return Err(Error::Domain(format!("phi never reaches level {q}")));
    }
    for _ in 0..200 {
        if hi - lo <= 1e-10 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if phi(spec, mid)? >= q {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// All derived constants of the second-order expansion, computed once per
/// spec and reused across tau.
#[derive(Debug, Clone)]
pub struct ExpansionContext {
    pub s: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Leading scales of U, 1 - h1(1 - 1/.), u1 and u2.
    pub c: f64,
    pub b: f64,
    pub a1: f64,
    pub a2: f64,
    pub c_star: f64,
    pub c0: f64,
    /// Second-order index of 1 - h1(F(.)): max(rho, varsigma)/gamma when a
    /// distorted-tail auxiliary is active, else 0 (unused).
    pub rho_h: f64,
    /// max of the active second-order indices {eta1, rho_h, eta2}.
    pub eta_star: f64,
    /// Mean of the h2-distorted distribution, E\[Z\].
    pub ez: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub delta4: f64,
    pub delta5: f64,
    pub delta6: f64,
    spec: RiskSpec,
    /// Auxiliary of U composed with 1/F-bar, scaled into A_h; None when both
    /// A and C vanish identically (pure-power tail and distortion).
    ah_active: bool,
}

impl ExpansionContext {
    pub fn new(spec: &RiskSpec) -> Result<Self> {
        spec.require_plus_admissible()?;
        spec.require_minus_admissible()?;
        let alpha2 = spec.u2.alpha();
        if alpha2 < 1.0 {
            return Err(Error::Domain(format!(
                "second-order expansion requires a u2 index of at least 1, got {alpha2}"
            )));
        }

        let model = &spec.model;
        let gamma = model.gamma();
        let u_profile = model.tail_profile();
        let h1_profile = spec.h1.tail_profile();
        let u1_profile = spec.u1.tail_profile();
        let u2_profile = spec.u2.tail_profile();

        let alpha1 = spec.u1.alpha();
        let beta1 = spec.beta1();
        let beta2 = spec.beta2();
        let s = spec.s();
        let d0 = delta0(gamma, alpha1, beta1)?;
        let d1 = d0.powf(1.0 / s);

        let a_aux = u_profile.aux;
        let c_aux = h1_profile.aux;
        let rho = u_profile.second_index;
        let varsigma = h1_profile.second_index;

        // kappa = lim C/A must avoid -beta1/gamma, otherwise the distorted
        // tail loses its second-order structure.
        let ah_active = match (&a_aux, &c_aux) {
            (AuxFunction::Zero, AuxFunction::Zero) => false,
            (AuxFunction::Power { .. }, AuxFunction::Zero) => true,
            (AuxFunction::Zero, AuxFunction::Power { .. }) => true,
            (
                AuxFunction::Power { coef: ca, exponent: ea },
                AuxFunction::Power { coef: cc, exponent: ec },
            ) => {
                if ea == ec && (cc / ca + beta1 / gamma).abs() < 1e-12 {
                    return Err(Error::MissingSecondOrder(
                        "distorted-tail auxiliary degenerates: C/A -> -beta1/gamma".into(),
                    ));
                }
                true
            }
        };
        let rho_h = if ah_active {
            let mut second = f64::NEG_INFINITY;
            if !a_aux.is_zero() {
                second = second.max(rho);
            }
            if !c_aux.is_zero() {
                second = second.max(varsigma);
            }
            second / gamma
        } else {
            0.0
        };

        let b1_active = !u1_profile.aux.is_zero();
        let b2_active = !u2_profile.aux.is_zero();
        let astar_active = ah_active || b1_active || b2_active;
        let eta_star = if astar_active {
            let mut m = f64::NEG_INFINITY;
            if b1_active {
                m = m.max(u1_profile.second_index);
            }
            if b2_active {
                m = m.max(u2_profile.second_index);
            }
            if ah_active {
                m = m.max(rho_h);
            }
            m
        } else {
            0.0
        };

        let g1 = if b1_active {
            gamma1_const(gamma, alpha1, beta1, u1_profile.second_index)?
        } else {
            0.0
        };
        let g2 = if ah_active {
            gamma2_const(gamma, alpha1, beta1, rho_h)?
        } else {
            0.0
        };

        let c = u_profile.scale;
        let b = h1_profile.scale;
        let a1 = u1_profile.scale;
        let a2 = u2_profile.scale;
        let c_star = (a1 * b * c.powf(beta1 / gamma) / a2).powf(1.0 / s);
        let c0 = c_star * c.powf(-1.0 / (gamma * s));

        let ez = solver::distorted_mean(model, &spec.h2)?;

        let ctx = ExpansionContext {
            s,
            delta0: d0,
            delta1: d1,
            gamma1: g1,
            gamma2: g2,
            c,
            b,
            a1,
            a2,
            c_star,
            c0,
            rho_h,
            eta_star,
            ez,
            delta2: if b1_active {
                g1 * c0.powf(u1_profile.second_index) * d0.powf(u1_profile.second_index / s - 1.0)
                    / s
            } else {
                0.0
            },
            delta3: if ah_active {
                g2 * c0.powf(rho_h) * d0.powf(rho_h / s - 1.0) / s
            } else {
                0.0
            },
            delta4: c0.powf(-beta2 / gamma) * d0.powf(-beta2 / (gamma * s)) / s,
            delta5: c0.recip() * alpha2 * ez * d0.powf(-1.0 / s) / s,
            delta6: if astar_active {
                c0.powf(eta_star) * d0.powf(eta_star / s) / s
            } else {
                0.0
            },
            spec: *spec,
            ah_active,
        };

        if astar_active {
            // Nondegeneracy of the combined auxiliary at a reference point.
            let t = 1e6;
            if ctx.a_star(t).abs() == 0.0 {
                return Err(Error::MissingSecondOrder(
                    "combined second-order auxiliary vanishes at the reference scale".into(),
                ));
            }
        }

        Ok(ctx)
    }

    /// A_h(x) = gamma^-1 ((beta1/gamma) A(1/F-bar(x)) + C(1/F-bar(x))).
    pub fn a_h(&self, x: f64) -> f64 {
        if !self.ah_active {
            return 0.0;
        }
        let model = &self.spec.model;
        let gamma = model.gamma();
        let t = model.survival(x).recip();
        let a = self.spec.model.tail_profile().aux.eval(t);
        let c = self.spec.h1.tail_profile().aux.eval(t);
        (self.spec.beta1() / gamma * a + c) / gamma
    }

    /// A*(x) = B2(x)/eta2 - B1(x)/eta1 - A_h(x)/rho_h over the active parts.
    pub fn a_star(&self, x: f64) -> f64 {
        let mut total = 0.0;
        let u1p = self.spec.u1.tail_profile();
        let u2p = self.spec.u2.tail_profile();
        if !u2p.aux.is_zero() {
            total += u2p.aux.eval(x) / u2p.second_index;
        }
        if !u1p.aux.is_zero() {
            total -= u1p.aux.eval(x) / u1p.second_index;
        }
        if self.ah_active {
            total -= self.a_h(x) / self.rho_h;
        }
        total
    }

    /// Quantile-normalized leading term c0 Delta1 (F^-1(tau))^(1/(gamma s)):
    /// the first-order expansion in the form the comparison tables plot
    /// (the plain first-order expansion through phi^-1 is [`first_order`]).
    pub fn leading_order(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
        }
        let model = &self.spec.model;
        let x_q = model.quantile(tau).powf(1.0 / (model.gamma() * self.s));
        Ok(self.c0 * self.delta1 * x_q)
    }

    /// Second-order expansion at tau: the leading scale
    /// c0 Delta1 (F^-1(tau))^(1/(gamma s)) times one plus the seven
    /// correction terms.
    pub fn second_order(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
        }
        let model = &self.spec.model;
        let gamma = model.gamma();
        let s = self.s;
        let q_tau = model.quantile(tau);
        let x_q = q_tau.powf(1.0 / (gamma * s));

        let u1p = self.spec.u1.tail_profile();
        let mut correction = 0.0;
        correction += self.delta2 * u1p.aux.eval(x_q);
        correction += self.delta3 * self.a_h(x_q);
        correction += self.delta4 * self.spec.h2.tail_mass(model.survival(x_q));
        correction += self.delta5 / x_q;
        correction -= self.delta6 * self.a_star(x_q);
        let model_aux = model.tail_profile();
        if !model_aux.aux.is_zero() {
            correction -=
                model_aux.aux.eval((1.0 - tau).recip()) / (gamma * s * model_aux.second_index);
        }
        correction -= (1.0 - tau) / s;

        Ok(self.c0 * self.delta1 * x_q * (1.0 + correction))
    }
}

/// First-order expansion: Delta1 * phi^-1((1 - tau)^-1).
pub fn first_order(spec: &RiskSpec, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
    }
    let d0 = delta0(spec.model.gamma(), spec.u1.alpha(), spec.beta1())?;
    let d1 = d0.powf(1.0 / spec.s());
    Ok(d1 * phi_inverse(spec, (1.0 - tau).recip())?)
}

/// Second-order expansion via a freshly assembled context; prefer
/// [`ExpansionContext`] when sweeping over tau.
pub fn second_order(spec: &RiskSpec, tau: f64) -> Result<f64> {
    ExpansionContext::new(spec)?.second_order(tau)
}

/// Closed-form L^p-quantile expansion (independent of the generic engine).
///
/// Order 1: ((1/gamma) B(1/gamma - p + 1, p))^gamma F^-1(tau).
/// Order 2 adds the distorted-tail correction in A((1-tau)^-1), the mean
/// term gamma (p-1) E\[X\] / (Delta1 F^-1(tau)) and the tau-order terms.
pub fn lp_expansion(model: &HeavyTailModel, p: f64, tau: f64, order: u8) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("Lp expansion requires p >= 2, got {p}")));
    }
    let gamma = model.gamma();
    if gamma >= 1.0 / (p - 1.0) {
        return Err(Error::Divergence(format!(
            "Lp expansion requires gamma < 1/(p-1), got gamma = {gamma}"
        )));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
    }
    let q_tau = model.quantile(tau);
    let d0 = beta_fn(1.0 / gamma - p + 1.0, p)? / gamma;
    let d1 = d0.powf(gamma);
    let base = d1 * q_tau;
    match order {
        1 => Ok(base),
        2 => {
            let mean = solver::distorted_mean(model, &Distortion::Identity)?;
            let mut corr = gamma * (p - 1.0) * mean / base;
            corr += gamma * (d0.recip() - 1.0) * (1.0 - tau);
            let profile = model.tail_profile();
            if !profile.aux.is_zero() {
                let rho = profile.second_index;
                let g2 = ((1.0 - rho) * beta_fn((1.0 - rho) / gamma - p + 1.0, p)?
                    - beta_fn(1.0 / gamma - p + 1.0, p)?)
                    / rho;
                let coef = g2 * d0.powf(rho - 1.0) / gamma + (d0.powf(rho) - 1.0) / rho;
                corr += coef * profile.aux.eval((1.0 - tau).recip());
            }
            Ok(base * (1.0 + corr))
        }
        _ => Err(Error::Domain(format!("expansion order must be 1 or 2, got {order}"))),
    }
}

/// Closed-form generalized-expectile expansion (u(x) = 2x, TVaR distortions
/// at p <= q), independent of the generic engine.
pub fn gen_expectile_expansion(
    model: &HeavyTailModel,
    p: f64,
    q: f64,
    tau: f64,
    order: u8,
) -> Result<f64> {
    let gamma = model.gamma();
    if !(gamma < 1.0) {
        return Err(Error::Divergence(format!(
            "generalized expectile expansion requires gamma < 1, got {gamma}"
        )));
    }
    if p > q {
        return Err(Error::Domain(format!("requires p <= q, got p = {p}, q = {q}")));
    }
    if !(0.0..1.0).contains(&p) || !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!("levels must lie in [0,1): p = {p}, q = {q}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
    }

    let q_tau = model.quantile(tau);
    let inv_odds = 1.0 / gamma - 1.0;
    let d1 = inv_odds.powf(-gamma);
    let base = d1 * (1.0 - p).powf(-gamma) * q_tau;
    match order {
        1 => Ok(base),
        2 => {
            let h2 = if q == 0.0 { Distortion::Identity } else { Distortion::tvar(q)? };
            let ez = solver::distorted_mean(model, &h2)?;
            let mut corr =
                (1.0 - p).powf(gamma) * gamma * inv_odds.powf(gamma) * ez / q_tau;
            // tau-order terms, kept for exact agreement with the generic
            // engine: the distorted h2 mass plus the -(1/s)(1-tau) term.
            corr += (1.0 - gamma) * (1.0 - p) * ((1.0 - tau) / (1.0 - q)).min(1.0)
                - gamma * (1.0 - tau);
            let profile = model.tail_profile();
            if !profile.aux.is_zero() {
                let rho = profile.second_index;
                let pw = (1.0 - p).powf(-rho);
                let ow = inv_odds.powf(-rho);
                let coef = pw * (ow / (1.0 - gamma - rho) + (ow - 1.0) / rho) + (pw - 1.0) / rho;
                corr += coef * profile.aux.eval((1.0 - tau).recip());
            }
            Ok(base * (1.0 + corr))
        }
        _ => Err(Error::Domain(format!("expansion order must be 1 or 2, got {order}"))),
    }
}
