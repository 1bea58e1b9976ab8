use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::agents::{AgentError, AgentSpec, Budget};
use crate::envs::make_env;
use crate::wrappers::{NoiseRate, WrapperConfig, WrapperSpec};

pub const DEFAULT_NOISE_RATES: [f64; 6] = [0.01, 0.05, 0.10, 0.20, 0.50, 1.0];

/// A registry name plus parameter overrides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub name: String,
    #[serde(default)]
    pub params: toml::Table,
}

/// Sweep coupling `param = offset + scale * axis_value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coupling {
    pub param: String,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub offset: f64,
}

fn one() -> f64 {
    1.0
}

impl Coupling {
    pub fn value(&self, axis_value: f64) -> f64 {
        self.offset + self.scale * axis_value
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    #[serde(default = "default_name")]
    name: String,
    seeds: Vec<u64>,
    noise_rates: Option<Vec<f64>>,
    budget: Budget,
    eval_interval: u64,
    #[serde(default = "default_eval_episodes")]
    eval_episodes: usize,
    output: Option<PathBuf>,
    workers: Option<usize>,
    env: Component,
    agent: Component,
    wrapper: Option<WrapperSpec>,
    sweep: Option<SweepSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    #[serde(default)]
    couple: Vec<Coupling>,
}

fn default_name() -> String {
    "experiment".into()
}

fn default_eval_episodes() -> usize {
    10
}

/// A validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seeds: Vec<u64>,
    /// Rates applied to `wrapper`; unused for baseline-only experiments.
    pub noise_rates: Vec<NoiseRate>,
    pub budget: Budget,
    pub eval_interval: u64,
    pub eval_episodes: usize,
    pub output: PathBuf,
    pub workers: Option<usize>,
    pub env: Component,
    pub agent: AgentSpec,
    /// Absent for a baseline-only experiment. Its own rate is replaced by each
    /// entry of `noise_rates`.
    pub wrapper: Option<WrapperConfig>,
    pub couplings: Vec<Coupling>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let file: ExperimentFile = toml::from_str(text).map_err(|e| {
            let param = e
                .message()
                .split('`')
                .nth(1)
                .filter(|_| e.message().contains("unknown field"))
                .unwrap_or("config")
                .to_owned();
            HarnessError::config(param, e.to_string().trim_end())
        })?;
        Self::from_file(file)
    }

    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_toml_str(&text)
    }

    fn from_file(file: ExperimentFile) -> Result<Self, HarnessError> {
        let (wrapper, noise_rates) = match &file.wrapper {
            None => {
                if file.noise_rates.is_some() {
                    return Err(HarnessError::config("noise_rates", "noise rates need a [wrapper] section"));
                }
                (None, Vec::new())
            }
            Some(spec) => {
                let config = WrapperConfig::try_from(spec.clone())?;
                let rates = match (&file.noise_rates, spec.p) {
                    (Some(_), Some(_)) => {
                        return Err(HarnessError::config(
                            "wrapper.p",
                            "give either `noise_rates` or `wrapper.p`, not both",
                        ))
                    }
                    (Some(rates), None) => rates.clone(),
                    (None, Some(p)) => vec![p],
                    (None, None) => DEFAULT_NOISE_RATES.to_vec(),
                };
                if rates.is_empty() {
                    return Err(HarnessError::config("noise_rates", "must not be empty"));
                }
                let rates = rates
                    .into_iter()
                    .map(|p| NoiseRate::new(p).map_err(|e| HarnessError::config("noise_rates", e.message)))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut seen = Vec::new();
                for r in &rates {
                    if seen.contains(&r.value()) {
                        return Err(HarnessError::config(
                            "noise_rates",
                            format!("duplicate rate {}", r.value()),
                        ));
                    }
                    seen.push(r.value());
                }
                (Some(config), rates)
            }
        };

        if file.seeds.is_empty() {
            return Err(HarnessError::config("seeds", "must not be empty"));
        }
        let distinct: BTreeSet<u64> = file.seeds.iter().copied().collect();
        if distinct.len() != file.seeds.len() {
            return Err(HarnessError::config("seeds", "seeds must be distinct"));
        }
        if file.budget.total() == 0 {
            return Err(HarnessError::config("budget", "must be at least 1"));
        }
        if file.eval_interval == 0 {
            return Err(HarnessError::config("eval_interval", "must be at least 1"));
        }
        if file.eval_episodes == 0 {
            return Err(HarnessError::config("eval_episodes", "must be at least 1"));
        }
        if file.workers == Some(0) {
            return Err(HarnessError::config("workers", "must be at least 1"));
        }
        make_env(&file.env.name, &file.env.params)?;
        let agent = AgentSpec::from_name(&file.agent.name, &file.agent.params).map_err(|e| match e {
            AgentError::UnknownAgent(name) => HarnessError::UnknownAgent(name),
            other => HarnessError::config("agent.params", other.to_string()),
        })?;
        let couplings = file.sweep.unwrap_or_default().couple;
        if !couplings.is_empty() && wrapper.is_none() {
            return Err(HarnessError::config("sweep.couple", "couplings need a [wrapper] section"));
        }
        for c in &couplings {
            if !(c.scale.is_finite() && c.offset.is_finite()) {
                return Err(HarnessError::config("sweep.couple", "scale and offset must be finite"));
            }
        }

        Ok(ExperimentConfig {
            name: file.name,
            seeds: file.seeds,
            noise_rates,
            budget: file.budget,
            eval_interval: file.eval_interval,
            eval_episodes: file.eval_episodes,
            output: file.output.unwrap_or_else(|| PathBuf::from("results")),
            workers: file.workers,
            env: file.env,
            agent,
            wrapper,
            couplings,
        })
    }
}
