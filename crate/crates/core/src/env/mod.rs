//! Environment interface shared by every environment and wrapper.
//!
//! An environment is an MDP with (optionally) partial observability: the
//! agent only ever sees [`Observation`] vectors, rewards and the two episode
//! end flags of a [`StepResult`]. Episodes end either because a terminal
//! state was reached (`terminated`) or because they were cut off
//! (`truncated`, e.g. at the horizon).

mod rng;
mod space;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use rng::{stream_rng, SeedStream};
pub use space::{ActionSpace, ObservationSpace};

/// Real-valued observation vector emitted to the agent.
pub type Observation = Vec<f64>;

/// String-keyed scalar diagnostics attached to a step.
pub type Info = BTreeMap<String, InfoValue>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InfoValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<f64> for InfoValue {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<i64> for InfoValue {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<bool> for InfoValue {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for InfoValue {
    fn from(v: &str) -> Self {
        Self::Text(v.to_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
}

/// One environment transition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub terminated: bool,
    pub truncated: bool,
    pub info: Info,
}

impl StepResult {
    pub fn done(&self) -> bool {
        self.terminated || self.truncated
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

/// Discount factor. Strictly inside `(0, 1)` unless built with
/// [`Discount::undiscounted`], which is used for reporting raw returns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Discount(f64);

impl Discount {
    pub fn new(gamma: f64) -> Result<Self, EnvError> {
        if gamma > 0.0 && gamma < 1.0 {
            Ok(Self(gamma))
        } else {
            Err(EnvError::InvalidDiscount(gamma))
        }
    }

    pub fn undiscounted() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Discount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let gamma = f64::deserialize(d)?;
        if gamma == 1.0 {
            return Ok(Self::undiscounted());
        }
        Discount::new(gamma).map_err(serde::de::Error::custom)
    }
}

/// Counters kept by noise wrappers. Plain environments report all zeros.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationLog {
    pub steps_total: u64,
    pub steps_perturbed: u64,
    pub episodes_total: u64,
    pub episodes_perturbed: u64,
}

impl PerturbationLog {
    pub fn is_zero(&self) -> bool {
        self.steps_perturbed == 0 && self.episodes_perturbed == 0
    }

    /// Counter-wise sum, used to aggregate a wrapper stack.
    pub fn merged(self, other: Self) -> Self {
        Self {
            steps_total: self.steps_total + other.steps_total,
            steps_perturbed: self.steps_perturbed + other.steps_perturbed,
            episodes_total: self.episodes_total + other.episodes_total,
            episodes_perturbed: self.episodes_perturbed + other.episodes_perturbed,
        }
    }

    pub fn step_fraction(&self) -> f64 {
        if self.steps_total == 0 {
            0.0
        } else {
            self.steps_perturbed as f64 / self.steps_total as f64
        }
    }

    pub fn episode_fraction(&self) -> f64 {
        if self.episodes_total == 0 {
            0.0
        } else {
            self.episodes_perturbed as f64 / self.episodes_total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnvError {
    #[error("action out of space: {0}")]
    ActionOutOfSpace(String),
    #[error("episode already finished; call reset()")]
    EpisodeFinished,
    #[error("step() called before reset()")]
    NotReset,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("discount must lie in (0, 1), got {0}")]
    InvalidDiscount(f64),
}

/// The environment contract.
///
/// A single instance is driven from one thread at a time; distinct instances
/// are independent and may live on different threads.
pub trait Environment: Send {
    fn observation_space(&self) -> ObservationSpace;

    fn action_space(&self) -> ActionSpace;

    /// Start a new episode. `Some(seed)` reseeds the internal RNG; `None`
    /// continues the current stream. May be called mid-episode.
    fn reset(&mut self, seed: Option<Seed>) -> Observation;

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError>;

    /// Aggregate perturbation counters of every wrapper in the stack.
    fn perturbation_log(&self) -> PerturbationLog {
        PerturbationLog::default()
    }

    /// Number of noise wrappers between the caller and the base environment.
    fn wrapper_depth(&self) -> usize {
        0
    }
}

impl<E: Environment + ?Sized> Environment for Box<E> {
    fn observation_space(&self) -> ObservationSpace {
        (**self).observation_space()
    }

    fn action_space(&self) -> ActionSpace {
        (**self).action_space()
    }

    fn reset(&mut self, seed: Option<Seed>) -> Observation {
        (**self).reset(seed)
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        (**self).step(action)
    }

    fn perturbation_log(&self) -> PerturbationLog {
        (**self).perturbation_log()
    }

    fn wrapper_depth(&self) -> usize {
        (**self).wrapper_depth()
    }
}

/// Σ γ^t r_t over a finite reward sequence.
pub fn episodic_return(rewards: &[f64], gamma: Discount) -> f64 {
    let g = gamma.value();
    let mut weight = 1.0;
    let mut total = 0.0;
    for &r in rewards {
        total += weight * r;
        weight *= g;
    }
    total
}

/// Step counter and episode-state bookkeeping for built-in environments.
#[derive(Clone, Debug)]
pub(crate) struct EpisodeClock {
    horizon: usize,
    steps: usize,
    state: ClockState,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum ClockState {
    Fresh,
    Running,
    Finished,
}

impl EpisodeClock {
    pub(crate) fn new(horizon: usize) -> Self {
        Self {
            horizon,
            steps: 0,
            state: ClockState::Fresh,
        }
    }

    pub(crate) fn start(&mut self) {
        self.steps = 0;
        self.state = ClockState::Running;
    }

    pub(crate) fn check_running(&self) -> Result<(), EnvError> {
        match self.state {
            ClockState::Fresh => Err(EnvError::NotReset),
            ClockState::Finished => Err(EnvError::EpisodeFinished),
            ClockState::Running => Ok(()),
        }
    }

    /// Count one step and return `(terminated, truncated)`. Truncation only
    /// applies when the step did not already reach a terminal state.
    pub(crate) fn tick(&mut self, terminal: bool) -> (bool, bool) {
        self.steps += 1;
        let truncated = !terminal && self.steps >= self.horizon;
        if terminal || truncated {
            self.state = ClockState::Finished;
        }
        (terminal, truncated)
    }

    pub(crate) fn steps(&self) -> usize {
        self.steps
    }
}
