//! Learning agents that see environments only through `reset`, `step` and
//! the two space descriptors.

mod policy;
mod qlearning;
mod random;
mod reinforce;
mod schedule;

pub use policy::{LinearGaussianPolicy, PolicyGradient};
pub use qlearning::{q_learning_train, QTable, TabularQConfig};
pub use random::{random_action, random_agent, EpisodeSummary};
pub use reinforce::{reinforce_train, ReinforceConfig};
pub use schedule::{evaluate, Budget, EvalProtocol};

use serde::{Deserialize, Serialize};

use crate::env::{Environment, Seed};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AgentError {
    #[error("incompatible space: {0}")]
    IncompatibleSpace(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("invalid parameters for `{name}`: {message}")]
    InvalidParams { name: String, message: String },
    #[error(transparent)]
    Env(#[from] crate::env::EnvError),
}

/// One evaluation on the clean environment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Training episodes or steps completed, depending on the budget unit.
    pub progress: u64,
    pub mean_return: f64,
    pub std_return: f64,
}

/// Clean-environment evaluation trace of one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub points: Vec<CurvePoint>,
    pub train_episodes: u64,
    pub train_steps: u64,
}

impl LearningCurve {
    pub fn final_return(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.mean_return)
    }
}

pub const AGENT_NAMES: &[(&str, &str)] = &[
    ("qlearning", "tabular Q-learning with linearly decaying epsilon-greedy exploration"),
    ("reinforce", "REINFORCE with a linear-Gaussian policy and a return baseline"),
    ("random", "uniform random actions"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "lowercase")]
pub enum AgentSpec {
    #[serde(rename = "qlearning")]
    QLearning(TabularQConfig),
    Reinforce(ReinforceConfig),
    Random,
}

impl AgentSpec {
    pub fn from_name(name: &str, params: &toml::Table) -> Result<Self, AgentError> {
        fn parse<T: serde::de::DeserializeOwned>(name: &str, params: &toml::Table) -> Result<T, AgentError> {
            toml::Value::Table(params.clone())
                .try_into()
                .map_err(|e: toml::de::Error| AgentError::InvalidParams {
                    name: name.to_owned(),
                    message: e.message().to_owned(),
                })
        }
        let spec = match name {
            "qlearning" => AgentSpec::QLearning(parse(name, params)?),
            "reinforce" => AgentSpec::Reinforce(parse(name, params)?),
            "random" if params.is_empty() => AgentSpec::Random,
            "random" => {
                return Err(AgentError::InvalidParams {
                    name: name.into(),
                    message: "the random agent takes no parameters".into(),
                })
            }
            other => return Err(AgentError::UnknownAgent(other.to_owned())),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            AgentSpec::QLearning(_) => "qlearning",
            AgentSpec::Reinforce(_) => "reinforce",
            AgentSpec::Random => "random",
        }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        let result = match self {
            AgentSpec::QLearning(c) => c.validate(),
            AgentSpec::Reinforce(c) => c.validate(),
            AgentSpec::Random => Ok(()),
        };
        result.map_err(|message| AgentError::InvalidParams {
            name: self.name().into(),
            message,
        })
    }

    /// Train on `train_env`, evaluating on `eval_env` per `eval`.
    pub fn train(
        &self,
        train_env: &mut dyn Environment,
        eval_env: &mut dyn Environment,
        budget: Budget,
        eval: &EvalProtocol,
        seed: Seed,
    ) -> Result<LearningCurve, AgentError> {
        match self {
            AgentSpec::QLearning(c) => q_learning_train(train_env, c, eval_env, budget, eval, seed).map(|(curve, _)| curve),
            AgentSpec::Reinforce(c) => {
                reinforce_train(train_env, c, eval_env, budget, eval, seed).map(|(curve, _)| curve)
            }
            AgentSpec::Random => random::random_train(train_env, eval_env, budget, eval, seed),
        }
    }
}
