use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::schedule::{evaluate, Budget, EvalProtocol, Schedule};
use super::{AgentError, LearningCurve};
use crate::env::{stream_rng, Action, ActionSpace, Environment, Seed, SeedStream};
use crate::envs::planning::greedy;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TabularQConfig {
    /// Learning rate in `(0, 1]`.
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Fraction of the budget over which epsilon decays linearly.
    pub decay_fraction: f64,
    /// Observations are binned as `round(o / resolution)`.
    pub resolution: f64,
}

impl Default for TabularQConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            gamma: 0.99,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            decay_fraction: 0.5,
            resolution: 1.0,
        }
    }
}

impl TabularQConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(format!("gamma must lie in (0, 1], got {}", self.gamma));
        }
        for (name, v) in [("epsilon_start", self.epsilon_start), ("epsilon_end", self.epsilon_end)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(self.decay_fraction > 0.0 && self.decay_fraction <= 1.0) {
            return Err(format!("decay_fraction must lie in (0, 1], got {}", self.decay_fraction));
        }
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(format!("resolution must be finite and > 0, got {}", self.resolution));
        }
        Ok(())
    }

    pub fn epsilon(&self, fraction: f64) -> f64 {
        let t = (fraction / self.decay_fraction).min(1.0);
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * t
    }
}

/// Action values keyed by discretized observation; unseen states read as zero.
#[derive(Clone, Debug, Default)]
pub struct QTable {
    n_actions: usize,
    resolution: f64,
    values: HashMap<Vec<i64>, Vec<f64>>,
}

impl QTable {
    pub fn new(n_actions: usize, resolution: f64) -> Self {
        Self {
            n_actions,
            resolution,
            values: HashMap::new(),
        }
    }

    pub fn key(&self, obs: &[f64]) -> Vec<i64> {
        obs.iter().map(|x| (x / self.resolution).round() as i64).collect()
    }

    pub fn get(&self, obs: &[f64]) -> Vec<f64> {
        self.values
            .get(&self.key(obs))
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.n_actions])
    }

    fn row_mut(&mut self, obs: &[f64]) -> &mut Vec<f64> {
        let key = self.key(obs);
        let n = self.n_actions;
        self.values.entry(key).or_insert_with(|| vec![0.0; n])
    }

    pub fn greedy_action(&self, obs: &[f64]) -> usize {
        greedy(&self.get(obs))
    }

    pub fn max_value(&self, obs: &[f64]) -> f64 {
        self.get(obs).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Target for one transition: terminal steps do not bootstrap, truncated ones do.
pub(crate) fn td_target(reward: f64, gamma: f64, next_max: f64, terminated: bool) -> f64 {
    if terminated {
        reward
    } else {
        reward + gamma * next_max
    }
}

/// Epsilon-greedy tabular Q-learning on a discrete-action environment.
pub fn q_learning_train(
    env: &mut dyn Environment,
    config: &TabularQConfig,
    eval_env: &mut dyn Environment,
    budget: Budget,
    eval: &EvalProtocol,
    seed: Seed,
) -> Result<(LearningCurve, QTable), AgentError> {
    config.validate().map_err(|message| AgentError::InvalidParams {
        name: "qlearning".into(),
        message,
    })?;
    let n_actions = match env.action_space() {
        ActionSpace::Discrete { n } => n,
        ActionSpace::Continuous { .. } => {
            return Err(AgentError::IncompatibleSpace(
                "qlearning needs a discrete action space".into(),
            ))
        }
    };
    if !eval_env.action_space().is_discrete() {
        return Err(AgentError::IncompatibleSpace(
            "qlearning evaluation env must have discrete actions".into(),
        ));
    }
    let mut rng = stream_rng(seed, SeedStream::Agent, 0);
    let mut q = QTable::new(n_actions, config.resolution);
    let mut schedule = Schedule::new(budget, eval.interval);
    let mut env_seed = Some(seed);

    while !schedule.done() {
        let epsilon = config.epsilon(schedule.fraction());
        let mut obs = env.reset(env_seed.take());
        loop {
            // one draw for the coin, one for the random action, every step
            let explore = rng.random::<f64>() < epsilon;
            let random_action = rng.random_range(0..n_actions);
            let a = if explore { random_action } else { q.greedy_action(&obs) };
            let step = env.step(&Action::Discrete(a))?;
            schedule.count_step();
            let next_max = if step.terminated { 0.0 } else { q.max_value(&step.observation) };
            let target = td_target(step.reward, config.gamma, next_max, step.terminated);
            let row = q.row_mut(&obs);
            row[a] += config.alpha * (target - row[a]);
            if step.done() {
                break;
            }
            obs = step.observation;
        }
        if schedule.end_episode() {
            let result = evaluate(eval_env, eval.episodes, eval.seed, |o| {
                Action::Discrete(q.greedy_action(o))
            })?;
            schedule.record(result);
        }
    }
    if schedule.needs_final_eval() {
        let result = evaluate(eval_env, eval.episodes, eval.seed, |o| {
            Action::Discrete(q.greedy_action(o))
        })?;
        schedule.record(result);
    }
    Ok((
        LearningCurve {
            points: schedule.points,
            train_episodes: schedule.episodes,
            train_steps: schedule.steps,
        },
        q,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{GridWorld, GridWorldSpec, PointMass, PointMassSpec};

    #[test]
    fn bootstrap_rule() {
        assert_eq!(td_target(-1.0, 0.9, 5.0, true), -1.0);
        assert_eq!(td_target(-1.0, 0.9, 5.0, false), 3.5);
    }

    #[test]
    fn epsilon_decays_linearly_then_holds() {
        let c = TabularQConfig::default();
        assert_eq!(c.epsilon(0.0), 1.0);
        assert!((c.epsilon(0.25) - 0.525).abs() < 1e-12);
        assert!((c.epsilon(0.5) - 0.05).abs() < 1e-12);
        assert!((c.epsilon(0.9) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn discretizer_rounds() {
        let q = QTable::new(4, 1.0);
        assert_eq!(q.key(&[0.4, 1.6]), vec![0, 2]);
        assert_eq!(q.key(&[-0.4, 3.0004]), vec![0, 3]);
    }

    #[test]
    fn rejects_continuous_actions() {
        let mut env = PointMass::new(PointMassSpec::default()).unwrap();
        let mut eval = PointMass::new(PointMassSpec::default()).unwrap();
        let protocol = EvalProtocol {
            interval: 10,
            episodes: 1,
            seed: Seed(0),
        };
        let err = q_learning_train(
            &mut env,
            &TabularQConfig::default(),
            &mut eval,
            Budget::Episodes(10),
            &protocol,
            Seed(0),
        )
        .unwrap_err();
        assert!(matches!(err, AgentError::IncompatibleSpace(_)));
    }

    #[test]
    fn short_run_records_curve() {
        let mut env = GridWorld::new(GridWorldSpec::default()).unwrap();
        let mut eval = GridWorld::new(GridWorldSpec::default()).unwrap();
        let protocol = EvalProtocol {
            interval: 25,
            episodes: 2,
            seed: Seed(0),
        };
        let (curve, q) = q_learning_train(
            &mut env,
            &TabularQConfig::default(),
            &mut eval,
            Budget::Episodes(60),
            &protocol,
            Seed(1),
        )
        .unwrap();
        let marks: Vec<u64> = curve.points.iter().map(|p| p.progress).collect();
        assert_eq!(marks, vec![25, 50, 60]);
        assert_eq!(curve.train_episodes, 60);
        assert!(!q.is_empty());
    }
}
