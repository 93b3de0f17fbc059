//! TOML experiment configuration: `[model]`, `[risk]` and `[experiment]`
//! sections with exact key names; unknown keys are hard errors.

use serde::Deserialize;


use crate::error::{Error, Result};
use crate::model::HeavyTailModel;
use crate::risk::RiskSpec;
use crate::simulation::{ExpansionCompareConfig, MseSweepConfig};


#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    pub gamma: f64,
    pub theta: Option<f64>,
    pub rho: Option<f64>,
}

impl ModelConfig {
    pub fn build(&self) -> Result<HeavyTailModel> {
        match self.name.as_str() {
            "pareto" => {
                self.reject_extras(&["theta", "rho"])?;
                HeavyTailModel::pareto(self.gamma)
            }
            "gpd" => {
                self.reject_extras(&["rho"])?;
                HeavyTailModel::gpd(
                    self.gamma,
                    self.theta
                        .ok_or_else(|| Error::Config("gpd model requires `theta`".into()))?,
                )
            }
            "frechet" => {
                self.reject_extras(&["theta", "rho"])?;
                HeavyTailModel::frechet(self.gamma)
            }
            "burr" => {
                self.reject_extras(&["theta"])?;
                HeavyTailModel::burr(
                    self.gamma,
                    self.rho.ok_or_else(|| Error::Config("burr model requires `rho`".into()))?,
                )
            }
            other => Err(Error::Config(format!(
                "unknown model `{other}` (expected pareto, gpd, frechet or burr)"
            ))),
        }
    }

    fn reject_extras(&self, unused: &[&str]) -> Result<()> {
        for key in unused {
            let set = match *key {
                "theta" => self.theta.is_some(),
                "rho" => self.rho.is_some(),
                _ => false,
            };
            if set {
                return Err(Error::Config(format!(
                    "key `{key}` does not apply to model `{}`",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskConfig {
    pub kind: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub power: Option<f64>,
}

impl RiskConfig {
    pub fn build(&self, model: HeavyTailModel) -> Result<RiskSpec> {
        match self.kind.as_str() {
            "expectile" => Ok(RiskSpec::expectile(model)),
            "gen-expectile" => {
                let p = self.p.ok_or_else(|| Error::Config("gen-expectile requires `p`".into()))?;
                let q = self.q.unwrap_or(p);
                RiskSpec::gen_expectile(model, p, q)
            }
            "lp-quantile" => {
                let power = self
                    .power
                    .ok_or_else(|| Error::Config("lp-quantile requires `power`".into()))?;
                RiskSpec::lp_quantile(model, power)
            }
            other => Err(Error::Config(format!(
                "unknown risk kind `{other}` (expected expectile, gen-expectile or lp-quantile)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: String,
    pub n: Option<usize>,
    pub replications: Option<usize>,
    pub master_seed: Option<u64>,
    /// Explicit levels; for the sweep a single value. Absent means the
    /// experiment default (grid for the comparison, 1 - 1/n for the sweep).
    pub tau: Option<Vec<f64>>,
    pub k_lo: Option<usize>,
    pub k_hi: Option<usize>,
    pub k_step: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub model: ModelConfig,
    pub risk: RiskConfig,
    pub experiment: ExperimentSection,
}

/// Parsed experiment ready to run.
#[derive(Debug, Clone)]
pub enum Experiment {
    ExpansionCompare(ExpansionCompareConfig),
    MseSweep(MseSweepConfig),
}

pub fn parse_experiment(text: &str) -> Result<Experiment> {
    let file: ExperimentFile =
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid experiment file: {e}")))?;
    let model = file.model.build()?;
    let spec = file.risk.build(model)?;
    let exp = &file.experiment;
    match exp.kind.as_str() {
        "expansion-compare" => {
            for key in ["n", "replications", "master_seed", "k_lo", "k_hi", "k_step"] {
                let set = match key {
                    "n" => exp.n.is_some(),
                    "replications" => exp.replications.is_some(),
                    "master_seed" => exp.master_seed.is_some(),
                    "k_lo" => exp.k_lo.is_some(),
                    "k_hi" => exp.k_hi.is_some(),
                    "k_step" => exp.k_step.is_some(),
                    _ => false,
                };
                if set {
                    return Err(Error::Config(format!(
                        "key `{key}` does not apply to an expansion-compare experiment"
                    )));
                }
            }
            Ok(Experiment::ExpansionCompare(ExpansionCompareConfig {
                spec,
                taus: exp.tau.clone().unwrap_or_default(),
            }))
        }
        "mse-sweep" => {
            let n = exp.n.ok_or_else(|| Error::Config("mse-sweep requires `n`".into()))?;
            let tau = match exp.tau.as_deref() {
                None | Some([]) => None,
                Some([t]) => Some(*t),
                Some(list) => {
                    return Err(Error::Config(format!(
                        "mse-sweep takes a single tau, got {}",
                        list.len()
                    )))
                }
            };
            let (dflt_lo, dflt_hi) = MseSweepConfig::default_k_bounds(n);
            Ok(Experiment::MseSweep(MseSweepConfig {
                spec,
                n,
                replications: exp.replications.unwrap_or(500),
                tau,
                k_lo: exp.k_lo.unwrap_or(dflt_lo),
                k_hi: exp.k_hi.unwrap_or(dflt_hi),
                k_step: exp.k_step.unwrap_or(1),
                master_seed: exp.master_seed.unwrap_or(0),
            }))
        }
        other => Err(Error::Config(format!(
            "unknown experiment kind `{other}` (expected expansion-compare or mse-sweep)"
        ))),
    }
}

/// Parse just `[model]` and `[risk]` sections (used by solve/expand).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub model: ModelConfig,
    pub risk: RiskConfig,
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    toml::from_str(text).map_err(|e| Error::Config(format!("invalid spec file: {e}")))
}
