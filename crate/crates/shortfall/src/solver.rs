//! Exact evaluation of the two tail functionals and bracketed root-finding
//! on the defining equation.
//!
//! Both functionals are integrated in probability space, where the distorted
//! measure dh(F(y)) becomes plain dh(s):
//!
//! ```text
//! H+(x) = int_{F(x)}^1  u1(F^-1(s) - x) dh1(s)
//! H-(x) = int_0^{F(x)}  u2(x - F^-1(s)) dh2(s)
//! ```
//!
//! The s -> 1 endpoint behaves like a power of (1 - s); the substitution
//! s = 1 - e^(-w) turns it into an exponentially decaying integrand handled
//! by width-doubling panels. The s -> 0 endpoint of H- is bounded for the
//! catalog models (all bounded below) and the mirrored substitution
//! s = e^(-v) removes the quantile's derivative blow-up there.

use serde::Serialize;

use crate::distortion::Distortion;
use crate::error::{Error, Result};
use crate::model::HeavyTailModel;
use crate::quad::{self, QuadResult};
use crate::risk::RiskSpec;

/// Relative tolerance passed to the quadrature layer; two digits of headroom
/// over the tightest tolerance any caller asks of the root itself.
const QUAD_REL_TOL: f64 = 1e-12;

/// Outcome of a root solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveReport {
    pub x_tau: f64,
    /// Value of tau H+ - (1 - tau) H- at the returned root.
    pub residual: f64,
    /// Number of residual evaluations performed.
    pub iterations: usize,
    /// Final bracket around the root (endpoints straddle the sign change).
    pub bracket: (f64, f64),
    /// Accumulated quadrature error bound at the final evaluation.
    pub quadrature_error_estimate: f64,
}

/// Upper tail functional H_{u1,h1}((X - x)+), with its quadrature error bound.
pub fn h_plus(spec: &RiskSpec, x: f64) -> Result<QuadResult> {
    spec.require_plus_admissible()?;
    let (weight, support_lo) = spec.h1.density_window();
    let model = &spec.model;
    let u1 = spec.u1;

    // Lower integration limit in survival coordinates: s ranges over
    // [max(support_lo, F(x)), 1), i.e. survival values in (0, sv_hi].
    let sv_hi = model.survival(x).min(1.0 - support_lo);
    if sv_hi <= 0.0 {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let w0 = -sv_hi.ln();
    let integrand = |w: f64| {
        let sv = (-w).exp();
        let q = model.quantile_survival(sv);
        // Once U overflows f64 the true contribution has long underflowed
        // (the decay exponent 1 - gamma*alpha1 is positive by admissibility).
        if !q.is_finite() {
            return 0.0;
        }
        let z = q - x;
        if z <= 0.0 {
            return 0.0;
        }
        u1.eval(z) * sv
    };
    let r = quad::integrate_decaying(integrand, w0, QUAD_REL_TOL)?;
    Ok(QuadResult { value: weight * r.value, error: weight * r.error })
}

/// Lower tail functional H_{u2,h2}((X - x)-), with its quadrature error bound.
pub fn h_minus(spec: &RiskSpec, x: f64) -> Result<QuadResult> {
    spec.require_minus_admissible()?;
    let (weight, support_lo) = spec.h2.density_window();
    let model = &spec.model;
    let u2 = spec.u2;

    let hi = model.cdf(x);
    if hi <= support_lo {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }

    let integrand_s = |s: f64| u2.eval((x - model.quantile(s)).max(0.0));

    let mut total = QuadResult { value: 0.0, error: 0.0 };
    if support_lo > 0.0 {
        let r = quad::integrate(integrand_s, support_lo, hi, 1e-300, QUAD_REL_TOL, 800)?;
        total.value += r.value;
        total.error += r.error;
    } else {
        // Split so the s -> 0 end is handled by s = e^(-v); the quantile is
        // smooth in v even where its s-derivative diverges (Frechet).
        let cut = hi.min(0.25);
        let r0 = quad::integrate_decaying(
            |v| {
                let s = (-v).exp();
                integrand_s(s) * s
            },
            -cut.ln(),
            QUAD_REL_TOL,
        )?;
        total.value += r0.value;
        total.error += r0.error;
        if hi > cut {
            let r1 = quad::integrate(integrand_s, cut, hi, 1e-300, QUAD_REL_TOL, 800)?;
            total.value += r1.value;
            total.error += r1.error;
        }
    }
    total.value *= weight;
    total.error *= weight;
    Ok(total)
}

/// Residual G(x) = tau H+(x) - (1 - tau) H-(x) and its quadrature error bound.
pub fn residual(spec: &RiskSpec, tau: f64, x: f64) -> Result<QuadResult> {
    let plus = h_plus(spec, x)?;
    let minus = h_minus(spec, x)?;
    Ok(QuadResult {
        value: tau * plus.value - (1.0 - tau) * minus.value,
        error: tau * plus.error + (1.0 - tau) * minus.error,
    })
}

/// Mean of the distorted distribution, E\[Z\] = int z dh(F(z)) for Z ~ h(F).
///
/// For the identity this is E\[X\]; for the TVaR distortion at q it is the
/// conditional tail expectation E[X | X > F^-1(q)].
pub fn distorted_mean(model: &HeavyTailModel, h: &Distortion) -> Result<f64> {
    let (weight, support_lo) = h.density_window();

    // Upper part via s = 1 - e^(-w): integrable because gamma < beta2 under
    // the moment admissibility every caller has already established.
    let cut_hi = 0.5f64.max(support_lo);
    let upper = quad::integrate_decaying(
        |w| {
            let sv = (-w).exp();
            let q = model.quantile_survival(sv);
            if !q.is_finite() {
                return 0.0;
            }
            q * sv
        },
        -(1.0 - cut_hi).ln(),
        QUAD_REL_TOL,
    )?;

    let mut value = upper.value;
    if support_lo < cut_hi {
        // Lower part via s = e^(-v), bounded integrand.
        let lo_cut = 0.25f64.min(cut_hi);
        let lower = quad::integrate_decaying(
            |v| {
                let s = (-v).exp();
                model.quantile(s) * s
            },
            -lo_cut.ln(),
            QUAD_REL_TOL,
        )?;
        value += lower.value;
        if cut_hi > lo_cut {
            let mid = quad::integrate(
                |s| model.quantile(s),
                lo_cut,
                cut_hi,
                1e-300,
                QUAD_REL_TOL,
                800,
            )?;
            value += mid.value;
        }
    }
    Ok(weight * value)
}

/// Solves tau H+(x) = (1 - tau) H-(x) for x by geometric bracket expansion
/// from the model quantile at tau, then a hybrid bisection / inverse
/// quadratic iteration on the strictly decreasing residual.
///
/// Converges when the bracket width falls below `tol * max(1, |x|)` and the
/// residual magnitude below `tol`.
pub fn solve_x_tau(spec: &RiskSpec, tau: f64, tol: f64) -> Result<SolveReport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    spec.require_plus_admissible()?;
    spec.require_minus_admissible()?;

    let floor = spec.model.left_endpoint();
    let evals = std::cell::Cell::new(0usize);
    let g = |x: f64| -> Result<QuadResult> {
        evals.set(evals.get() + 1);
        residual(spec, tau, x)
    };

    // The quantile at tau has the right scale for the root.
    let guess = spec.model.quantile(tau).max(floor + 1e-12 * floor.abs().max(1.0));
    let g_guess = g(guess)?;
    debug_assert!(
        g_guess.value.is_finite(),
        "residual not finite at initial guess {guess}"
    );
    // Catalog models have unbounded support, so the upper functional is
    // strictly positive everywhere; a degenerate tau * H+ = 0 problem
    // cannot be bracketed.
    debug_assert!(
        h_plus(spec, guess)?.value > 0.0,
        "upper functional vanished at the initial guess {guess}"
    );

    // Expand geometrically (relative to the left endpoint) until the
    // residual changes sign; G is positive near the endpoint and negative at
    // infinity.
    let (mut lo, mut g_lo, mut hi, mut g_hi);
    if g_guess.value > 0.0 {
        lo = guess;
        g_lo = g_guess;
        let mut step = (guess - floor).max(1e-6 * guess.abs().max(1.0));
        let mut candidate = guess;
        loop {
            step *= 2.0;
            candidate = floor + (candidate - floor) + step;
            let val = g(candidate)?;
            if val.value <= 0.0 {
                hi = candidate;
                g_hi = val;
                break;
            }
            lo = candidate;
            g_lo = val;
            if evals.get() > 200 {
                return Err(Error::Bracketing(format!(
                    "no sign change above the initial guess after {} expansions",
                    evals.get()
                )));
            }
        }
    } else {
        hi = guess;
        g_hi = g_guess;
        let mut candidate = guess;
        loop {
            candidate = floor + 0.5 * (candidate - floor);
            let val = g(candidate)?;
            if val.value > 0.0 {
                lo = candidate;
                g_lo = val;
                break;
            }
            hi = candidate;
            g_hi = val;
            if evals.get() > 200 {
                return Err(Error::Bracketing(format!(
                    "no sign change between the left endpoint and the guess after {} halvings",
                    evals.get()
                )));
            }
        }
    }

    // Hybrid refinement: inverse quadratic / secant step when it lands
    // safely inside the bracket, bisection otherwise.
    let mut best;
    let mut g_best;
    if g_lo.value.abs() <= g_hi.value.abs() {
        best = lo;
        g_best = g_lo;
    } else {
        best = hi;
        g_best = g_hi;
    }

    for _ in 0..200 {
        let width = hi - lo;
        if width <= tol * best.abs().max(1.0) && g_best.value.abs() <= tol {
            return Ok(SolveReport {
                x_tau: best,
                residual: g_best.value,
                iterations: evals.get(),
                bracket: (lo, hi),
                quadrature_error_estimate: g_best.error,
            });
        }
        if width <= f64::EPSILON * best.abs().max(f64::MIN_POSITIVE) {
            // Bracket exhausted in f64; accept if the residual is within the
            // quadrature noise, otherwise report the stall.
            if g_best.value.abs() <= tol.max(8.0 * g_best.error) {
                return Ok(SolveReport {
                    x_tau: best,
                    residual: g_best.value,
                    iterations: evals.get(),
                    bracket: (lo, hi),
                    quadrature_error_estimate: g_best.error,
                });
            }
            return Err(Error::Convergence(format!(
                "bracket collapsed at x = {best} with residual {}",
                g_best.value
            )));
        }

        // Secant proposal from the bracket endpoints.
        let denom = g_lo.value - g_hi.value;
        let mut x_new = if denom != 0.0 {
            lo + (hi - lo) * g_lo.value / denom
        } else {
            0.5 * (lo + hi)
        };
        let margin = 0.01 * width;
        if !(x_new > lo + margin && x_new < hi - margin) {
            x_new = 0.5 * (lo + hi);
        }
        let g_new = g(x_new)?;
        if g_new.value > 0.0 {
            lo = x_new;
            g_lo = g_new;
        } else {
            hi = x_new;
            g_hi = g_new;
        }
        if g_new.value.abs() <= g_best.value.abs() {
            best = x_new;
            g_best = g_new;
        }
    }

    Err(Error::Convergence(format!(
        "no convergence after {} residual evaluations; bracket ({lo}, {hi})",
        evals.get()
    )))
}
