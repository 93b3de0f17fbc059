//! Sample-based extreme-level estimation: order statistics, the Hill tail
//! index, Weissman quantile extrapolation, and the plug-in generalized
//! shortfall estimator.
//!
//! Estimators take a [`SortedSample`]; sorting is paid once and the k-sweep
//! used by the simulation harness becomes O(1) per k through [`TailSweep`]'s
//! precomputed log-spacing sums.

use serde::Serialize;

use crate::distortion::Distortion;
use crate::error::{Error, Result};
use crate::specfun::beta_fn;

/// Sample sorted ascending; X_{i,n} is 1-based, X_{1,n} the minimum.
#[derive(Debug, Clone)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("sample must not be empty".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(SortedSample { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// 1-based order statistic X_{i,n}.
    pub fn order_statistic(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Result of one shortfall estimation. When the estimated tail index is too
/// heavy for the utility (1/gamma_hat <= alpha) the estimate is marked
/// inadmissible and `x_hat` is absent rather than NaN.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimationResult {
    pub gamma_hat: f64,
    /// Weissman quantile at the distortion-adjusted level h1^-1(tau).
    pub q_hat: f64,
    pub x_hat: Option<f64>,
    pub k: usize,
    pub n: usize,
    pub tau: f64,
    pub admissible: bool,
}

/// Hill estimator: mean log-spacing of the top k order statistics over the
/// threshold X_{n-k,n}.
///
/// # Example
///
/// ```
/// use shortfall::estimation::{hill, SortedSample};
///
/// let s = SortedSample::from_unsorted(vec![1.0, 1f64.exp(), 2f64.exp()]).unwrap();
/// assert!((hill(&s, 2).unwrap() - 1.5).abs() < 1e-12);
/// ```
pub fn hill(sample: &SortedSample, k: usize) -> Result<f64> {
    let n = sample.n();
    if k < 1 || k > n - 1 {
        return Err(Error::Domain(format!(
            "hill requires 1 <= k <= n-1, got k = {k}, n = {n}"
        )));
    }
    let threshold = sample.order_statistic(n - k);
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!(
            "hill requires a positive threshold order statistic, got {threshold}"
        )));
    }
    let log_threshold = threshold.ln();
    let sum: f64 = (1..=k)
        .map(|i| sample.order_statistic(n - i + 1).ln() - log_threshold)
        .sum();
    Ok(sum / k as f64)
}

/// Weissman extrapolation of the intermediate order statistic X_{n-k,n} to
/// the quantile at level tau: (k/(n(1-tau)))^gamma_hat X_{n-k,n}.
pub fn weissman_quantile(sample: &SortedSample, k: usize, tau: f64, gamma_hat: f64) -> Result<f64> {
    let n = sample.n();
    if k < 1 || k > n - 1 {
        return Err(Error::Domain(format!(
            "weissman requires 1 <= k <= n-1, got k = {k}, n = {n}"
        )));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("tau must lie in (0,1), got {tau}")));
    }
    let exceedances = n as f64 * (1.0 - tau);
    if exceedances > k as f64 {
        return Err(Error::Domain(format!(
            "weissman extrapolates beyond the sample: n(1-tau) = {exceedances} > k = {k}"
        )));
    }
    Ok((k as f64 / exceedances).powf(gamma_hat) * sample.order_statistic(n - k))
}

/// Plug-in estimator of the generalized shortfall risk measure at tau for
/// the u1 = u2 regime with utility index alpha:
///
/// ```text
/// x_hat = (k/(n(1 - h1^-1(tau))))^gamma_hat
///         * (gamma_hat^-1 B(1/gamma_hat - alpha, alpha + 1))^gamma_hat
///         * X_{n-k,n}
/// ```
///
/// Inadmissibility (1/gamma_hat <= alpha) is a result state, not an error.
pub fn shortfall_estimate(
    sample: &SortedSample,
    k: usize,
    tau: f64,
    alpha: f64,
    h1: &Distortion,
) -> Result<EstimationResult> {
    let gamma_hat = hill(sample, k)?;
    let adjusted = h1.inverse(tau)?;
    let q_hat = weissman_quantile(sample, k, adjusted, gamma_hat)?;
    assemble_estimate(gamma_hat, q_hat, k, sample.n(), tau, alpha)
}

fn assemble_estimate(
    gamma_hat: f64,
    q_hat: f64,
    k: usize,
    n: usize,
    tau: f64,
    alpha: f64,
) -> Result<EstimationResult> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("utility index must be positive, got {alpha}")));
    }
    // Zero log-spacings (tied top order statistics) degenerate to the
    // threshold itself: the Beta factor's gamma_hat -> 0 limit is 1.
    let x_hat = if gamma_hat == 0.0 {
        Some(q_hat)
    } else if 1.0 / gamma_hat <= alpha {
        None
    } else {
        let factor = (beta_fn(1.0 / gamma_hat - alpha, alpha + 1.0)? / gamma_hat).powf(gamma_hat);
        Some(factor * q_hat)
    };
    Ok(EstimationResult {
        gamma_hat,
        q_hat,
        admissible: x_hat.is_some(),
        x_hat,
        k,
        n,
        tau,
    })
}

/// Precomputed suffix sums of top-order-statistic logs, making every
/// `hill(k)` (and therefore every estimate in a k-sweep) O(1).
#[derive(Debug)]
pub struct TailSweep<'a> {
    sample: &'a SortedSample,
    /// top_log_sum[k] = sum of ln X_{n-i+1,n} for i = 1..=k.
    top_log_sum: Vec<f64>,
}

impl<'a> TailSweep<'a> {
    pub fn new(sample: &'a SortedSample) -> Result<Self> {
        let n = sample.n();
        if !(sample.order_statistic(1) > 0.0) {
            return Err(Error::Domain(
                "tail sweep requires strictly positive samples".into(),
            ));
        }
        let mut top_log_sum = Vec::with_capacity(n);
        top_log_sum.push(0.0);
        let mut acc = 0.0;
        for i in 1..n {
            acc += sample.order_statistic(n - i + 1).ln();
            top_log_sum.push(acc);
        }
        Ok(TailSweep { sample, top_log_sum })
    }

    pub fn hill(&self, k: usize) -> Result<f64> {
        let n = self.sample.n();
        if k < 1 || k > n - 1 {
            return Err(Error::Domain(format!(
                "hill requires 1 <= k <= n-1, got k = {k}, n = {n}"
            )));
        }
        let threshold = self.sample.order_statistic(n - k).ln();
        Ok(self.top_log_sum[k] / k as f64 - threshold)
    }

    /// Same arithmetic as [`shortfall_estimate`], routed through the O(1)
    /// Hill lookup.
    pub fn shortfall_estimate(
        &self,
        k: usize,
        tau: f64,
        alpha: f64,
        h1: &Distortion,
    ) -> Result<EstimationResult> {
        let gamma_hat = self.hill(k)?;
        let adjusted = h1.inverse(tau)?;
        let q_hat = weissman_quantile(self.sample, k, adjusted, gamma_hat)?;
        assemble_estimate(gamma_hat, q_hat, k, self.sample.n(), tau, alpha)
    }
}
