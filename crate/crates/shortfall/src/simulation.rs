//! Deterministic Monte-Carlo experiments: expansion-accuracy tables and
//! rMSE-versus-k sweeps, persisted as CSV.
//!
//! Replications (and grid points) are independent work items. With the
//! `parallel` feature they run on the rayon pool; results are collected in
//! index order and reduced sequentially, so the output bytes are identical
//! for any worker count. Every replication draws from its own counter-based
//! stream derived from (master_seed, replication index).

use std::io::Write;

use crate::asymptotics::ExpansionContext;
use crate::error::{Error, Result};
use crate::estimation::{SortedSample, TailSweep};
use crate::risk::RiskSpec;
use crate::rng::stream_seed;
use crate::solver::solve_x_tau;

/// Tolerance for the ground-truth solves backing both experiments.
pub const TRUTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
enum Exec {
    /// Rayon pool when the `parallel` feature is enabled, sequential otherwise.
    Default,
    /// Always single-threaded; kept so the benchmark suite can compare the
    /// two executions of the same experiment.
    Sequential,
}

/// Map `f` over 0..n collecting in index order.
fn map_indexed<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        Exec::Sequential => (0..n).map(f).collect(),
        Exec::Default => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

/// Default tau grid of the expansion comparison: 40 points geometric in
/// 1 - tau from 0.05 down to 1e-4.
pub fn default_tau_grid() -> Vec<f64> {
    let (points, hi, lo) = (40usize, 0.05f64, 1e-4f64);
    let ratio = (lo / hi).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| 1.0 - hi * ratio.powi(i as i32)).collect()
}

/// One row of the expansion-accuracy table.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionRow {
    pub tau: f64,
    pub x_exact: f64,
    pub x_first: f64,
    pub x_second: f64,
    pub relerr_first: f64,
    pub relerr_second: f64,
}

/// Expansion-compare experiment configuration.
#[derive(Debug, Clone)]
pub struct ExpansionCompareConfig {
    pub spec: RiskSpec,
    /// Levels to evaluate; empty means the default grid.
    pub taus: Vec<f64>,
}

/// One row of the rMSE sweep.
#[derive(Debug, Clone, Copy)]
pub struct MseRow {
    pub k: usize,
    pub rmse: f64,
    pub n_inadmissible: usize,
    pub n_effective: usize,
}

/// rMSE-sweep experiment configuration.
#[derive(Debug, Clone)]
pub struct MseSweepConfig {
    pub spec: RiskSpec,
    pub n: usize,
    pub replications: usize,
    /// Extreme level; `None` resolves to 1 - 1/n.
    pub tau: Option<f64>,
    pub k_lo: usize,
    pub k_hi: usize,
    pub k_step: usize,
    pub master_seed: u64,
}

impl MseSweepConfig {
    pub fn resolved_tau(&self) -> f64 {
        self.tau.unwrap_or(1.0 - 1.0 / self.n as f64)
    }

    /// Default k grid bounds n/50 .. 2n/3.
    pub fn default_k_bounds(n: usize) -> (usize, usize) {
        ((n / 50).max(1), (2 * n / 3).min(n - 1))
    }

    pub fn k_grid(&self) -> Vec<usize> {
        (self.k_lo..=self.k_hi).step_by(self.k_step.max(1)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replication count must be at least 1".into()));
        }
        if self.n < 3 {
            return Err(Error::Config(format!("sample size too small: {}", self.n)));
        }
        if self.k_lo < 1 || self.k_hi > self.n - 1 || self.k_lo > self.k_hi {
            return Err(Error::Config(format!(
                "k grid [{}, {}] must lie within [1, {}]",
                self.k_lo,
                self.k_hi,
                self.n - 1
            )));
        }
        let tau = self.resolved_tau();
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Config(format!("tau must lie in (0,1), got {tau}")));
        }
        Ok(())
    }
}

/// Exact, first-order and second-order values of x_tau over the tau grid.
pub fn run_expansion_compare(config: &ExpansionCompareConfig) -> Result<Vec<ExpansionRow>> {
    run_expansion_compare_impl(config, Exec::Default)
}

/// Sequential execution of the same experiment (bit-identical output).
pub fn run_expansion_compare_seq(config: &ExpansionCompareConfig) -> Result<Vec<ExpansionRow>> {
    run_expansion_compare_impl(config, Exec::Sequential)
}

fn run_expansion_compare_impl(
    config: &ExpansionCompareConfig,
    exec: Exec,
) -> Result<Vec<ExpansionRow>> {
    let taus = if config.taus.is_empty() { default_tau_grid() } else { config.taus.clone() };
    let spec = &config.spec;
    let ctx = ExpansionContext::new(spec)?;
    let rows = map_indexed(exec, taus.len(), |i| {
        let tau = taus[i];
        let x_exact = solve_x_tau(spec, tau, TRUTH_TOL)?.x_tau;
        // The quantile-normalized expansions, as the accuracy figures plot
        // them: the leading term and the leading term with corrections.
        let x_first = ctx.leading_order(tau)?;
        let x_second = ctx.second_order(tau)?;
        Ok(ExpansionRow {
            tau,
            x_exact,
            x_first,
            x_second,
            relerr_first: (x_first / x_exact - 1.0).abs(),
            relerr_second: (x_second / x_exact - 1.0).abs(),
        })
    });
    rows.into_iter().collect()
}

/// rMSE of the shortfall estimator as a function of k, against the exact
/// x_tau solved once at `TRUTH_TOL`.
pub fn run_mse_sweep(config: &MseSweepConfig) -> Result<Vec<MseRow>> {
    run_mse_sweep_impl(config, Exec::Default)
}

/// Sequential execution of the same sweep (bit-identical output).
pub fn run_mse_sweep_seq(config: &MseSweepConfig) -> Result<Vec<MseRow>> {
    run_mse_sweep_impl(config, Exec::Sequential)
}

fn run_mse_sweep_impl(config: &MseSweepConfig, exec: Exec) -> Result<Vec<MseRow>> {
    config.validate()?;
    let spec = &config.spec;
    if spec.u1 != spec.u2 {
        return Err(Error::Config(
            "the shortfall estimator covers the u1 = u2 regime only".into(),
        ));
    }
    let tau = config.resolved_tau();
    let truth = solve_x_tau(spec, tau, TRUTH_TOL)?.x_tau;
    let ks = config.k_grid();
    let alpha = spec.u1.alpha();
    let h1 = spec.h1;
    let model = spec.model;
    let master = config.master_seed;

    // Squared relative errors per replication and k; NaN marks an
    // inadmissible estimate.
    let per_rep: Vec<Result<Vec<f64>>> = map_indexed(exec, config.replications, |j| {
        let sample = model.sample(config.n, stream_seed(master, j as u64));
        let sorted = SortedSample::from_unsorted(sample)?;
        let sweep = TailSweep::new(&sorted)?;
        ks.iter()
            .map(|&k| {
                let est = sweep.shortfall_estimate(k, tau, alpha, &h1)?;
                Ok(match est.x_hat {
                    Some(x) => {
                        let e = x / truth - 1.0;
                        e * e
                    }
                    None => f64::NAN,
                })
            })
            .collect()
    });

    let per_rep: Vec<Vec<f64>> = per_rep.into_iter().collect::<Result<_>>()?;
    Ok(reduce_sweep(&ks, &per_rep))
}

/// Deterministic reduction of per-replication squared relative errors, in
/// replication order; NaN marks an inadmissible estimate and is excluded
/// from the average with its count reported.
fn reduce_sweep(ks: &[usize], per_rep: &[Vec<f64>]) -> Vec<MseRow> {
    let mut sums = vec![0.0f64; ks.len()];
    let mut inadmissible = vec![0usize; ks.len()];
    for rep in per_rep {
        for (i, sq) in rep.iter().enumerate() {
            if sq.is_nan() {
                inadmissible[i] += 1;
            } else {
                sums[i] += sq;
            }
        }
    }
    ks.iter()
        .enumerate()
        .map(|(i, &k)| {
            let n_effective = per_rep.len() - inadmissible[i];
            MseRow {
                k,
                rmse: if n_effective > 0 { sums[i] / n_effective as f64 } else { f64::NAN },
                n_inadmissible: inadmissible[i],
                n_effective,
            }
        })
        .collect()
}

/// CSV schema: `tau,x_exact,x_first,x_second,relerr_first,relerr_second`,
/// floats in shortest round-trip decimal.
pub fn write_expansion_csv<W: Write>(rows: &[ExpansionRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "tau,x_exact,x_first,x_second,relerr_first,relerr_second")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.tau, r.x_exact, r.x_first, r.x_second, r.relerr_first, r.relerr_second
        )?;
    }
    Ok(())
}

/// CSV schema: `k,rmse,n_inadmissible,n_effective`.
pub fn write_mse_csv<W: Write>(rows: &[MseRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "k,rmse,n_inadmissible,n_effective")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.k, r.rmse, r.n_inadmissible, r.n_effective)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::Distortion;
    use crate::model::HeavyTailModel;

    #[test]
    fn tau_grid_shape() {
        let grid = default_tau_grid();
        assert_eq!(grid.len(), 40);
        assert!((grid[0] - 0.95).abs() < 1e-12);
        assert!((grid[39] - 0.9999).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn expansion_compare_single_tau() {
        let model = HeavyTailModel::gpd(1.0 / 3.0, 1.0).unwrap();
        let config = ExpansionCompareConfig {
            spec: RiskSpec::gen_expectile(model, 0.95, 0.95).unwrap(),
            taus: vec![0.999],
        };
        let rows = run_expansion_compare(&config).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].relerr_second < rows[0].relerr_first);
    }

    #[test]
    fn reduction_of_all_exact_estimates_is_zero() {
        // Every estimate equal to the truth: squared errors all zero, so
        // rmse must be exactly 0 for every k.
        let ks = vec![5, 10, 15];
        let per_rep = vec![vec![0.0; 3]; 7];
        for row in reduce_sweep(&ks, &per_rep) {
            assert_eq!(row.rmse, 0.0);
            assert_eq!(row.n_effective, 7);
            assert_eq!(row.n_inadmissible, 0);
        }
        // Inadmissible replications are excluded from the average, counted.
        let per_rep = vec![vec![0.04, f64::NAN], vec![0.02, 0.09], vec![f64::NAN, 0.01]];
        let rows = reduce_sweep(&[3, 4], &per_rep);
        assert_eq!(rows[0].n_inadmissible, 1);
        assert!((rows[0].rmse - 0.03).abs() < 1e-15);
        assert_eq!(rows[1].n_effective, 2);
        assert!((rows[1].rmse - 0.05).abs() < 1e-15);
    }

    #[test]
    fn mse_sweep_rows_line_up() {
        let model = HeavyTailModel::pareto(0.2).unwrap();
        let config = MseSweepConfig {
            spec: RiskSpec::gen_expectile(model, 0.95, 0.95).unwrap(),
            n: 200,
            replications: 20,
            tau: None,
            k_lo: 5,
            k_hi: 100,
            k_step: 5,
            master_seed: 9,
        };
        let rows = run_mse_sweep(&config).unwrap();
        assert_eq!(rows.len(), 20);
        for (row, k) in rows.iter().zip((5..=100).step_by(5)) {
            assert_eq!(row.k, k);
            assert_eq!(row.n_effective + row.n_inadmissible, 20);
            assert!(row.rmse.is_finite() && row.rmse >= 0.0);
        }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let model = HeavyTailModel::burr(0.2, -2.0).unwrap();
        let config = MseSweepConfig {
            spec: RiskSpec::gen_expectile(model, 0.95, 0.95).unwrap(),
            n: 150,
            replications: 30,
            tau: None,
            k_lo: 3,
            k_hi: 100,
            k_step: 7,
            master_seed: 31,
        };
        let par = run_mse_sweep(&config).unwrap();
        let seq = run_mse_sweep_seq(&config).unwrap();
        assert_eq!(par.len(), seq.len());
        for (a, b) in par.iter().zip(seq.iter()) {
            assert_eq!(a.rmse.to_bits(), b.rmse.to_bits());
            assert_eq!(a.n_inadmissible, b.n_inadmissible);
        }

        let ec = ExpansionCompareConfig {
            spec: RiskSpec::gen_expectile(HeavyTailModel::gpd(0.2, 1.0).unwrap(), 0.95, 0.95)
                .unwrap(),
            taus: vec![0.96, 0.99, 0.999],
        };
        let a = run_expansion_compare(&ec).unwrap();
        let b = run_expansion_compare_seq(&ec).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.x_second.to_bits(), y.x_second.to_bits());
        }
    }

    #[test]
    fn csv_headers_are_exact() {
        let mut buf = Vec::new();
        write_expansion_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "tau,x_exact,x_first,x_second,relerr_first,relerr_second\n"
        );
        let mut buf = Vec::new();
        write_mse_csv(
            &[MseRow { k: 10, rmse: 0.5, n_inadmissible: 0, n_effective: 500 }],
            &mut buf,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,rmse,n_inadmissible,n_effective\n10,0.5,0,500\n"
        );
    }

    #[test]
    fn sweep_rejects_mixed_utilities() {
        let model = HeavyTailModel::pareto(0.2).unwrap();
        let spec = RiskSpec::new(
            crate::utility::PowerUtility::identity(),
            Distortion::Identity,
            crate::utility::PowerUtility::new(1.5, 1.0).unwrap(),
            Distortion::Identity,
            model,
        );
        let config = MseSweepConfig {
            spec,
            n: 100,
            replications: 5,
            tau: None,
            k_lo: 2,
            k_hi: 50,
            k_step: 1,
            master_seed: 0,
        };
        assert!(matches!(run_mse_sweep(&config), Err(Error::Config(_))));
    }
}
