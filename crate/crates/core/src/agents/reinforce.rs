use serde::{Deserialize, Serialize};

use super::policy::{LinearGaussianPolicy, PolicyGradient};
use super::schedule::{evaluate, Budget, EvalProtocol, Schedule};
use super::{AgentError, LearningCurve};
use crate::env::{stream_rng, Action, ActionSpace, Environment, Seed, SeedStream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReinforceConfig {
    pub learning_rate: f64,
    pub gamma: f64,
    pub init_log_std: f64,
    pub min_log_std: f64,
    pub max_log_std: f64,
    /// Weight of the newest episode in the per-timestep running-mean baseline.
    pub baseline_rate: f64,
    /// Per-update gradient norm cap; zero disables it.
    pub max_grad_norm: f64,
}

impl Default for ReinforceConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            gamma: 0.99,
            init_log_std: -0.5,
            min_log_std: -2.5,
            max_log_std: 1.0,
            baseline_rate: 0.1,
            max_grad_norm: 10.0,
        }
    }
}

impl ReinforceConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(format!("learning_rate must be finite and >= 0, got {}", self.learning_rate));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(format!("gamma must lie in (0, 1], got {}", self.gamma));
        }
        if !(self.min_log_std <= self.init_log_std && self.init_log_std <= self.max_log_std) {
            return Err(format!(
                "init_log_std must lie in [min_log_std, max_log_std], got {} not in [{}, {}]",
                self.init_log_std, self.min_log_std, self.max_log_std
            ));
        }
        if !(self.baseline_rate > 0.0 && self.baseline_rate <= 1.0) {
            return Err(format!("baseline_rate must lie in (0, 1], got {}", self.baseline_rate));
        }
        if !(self.max_grad_norm >= 0.0) {
            return Err(format!("max_grad_norm must be >= 0, got {}", self.max_grad_norm));
        }
        Ok(())
    }
}

/// Reward-to-go `G_t = sum_k gamma^k r_{t+k}` for every step of an episode.
pub(crate) fn returns_to_go(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut out = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (t, r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        out[t] = acc;
    }
    out
}

fn clip(action: &[f64], lower: &[f64], upper: &[f64]) -> Vec<f64> {
    action
        .iter()
        .zip(lower.iter().zip(upper))
        .map(|(a, (l, u))| a.clamp(*l, *u))
        .collect()
}

/// Episodic REINFORCE with a linear-Gaussian policy on a continuous-action environment.
///
/// Evaluation uses the mean action clipped to the action bounds.
pub fn reinforce_train(
    env: &mut dyn Environment,
    config: &ReinforceConfig,
    eval_env: &mut dyn Environment,
    budget: Budget,
    eval: &EvalProtocol,
    seed: Seed,
) -> Result<(LearningCurve, LinearGaussianPolicy), AgentError> {
    config.validate().map_err(|message| AgentError::InvalidParams {
        name: "reinforce".into(),
        message,
    })?;
    let (lower, upper) = match env.action_space() {
        ActionSpace::Continuous { lower, upper } => (lower, upper),
        ActionSpace::Discrete { .. } => {
            return Err(AgentError::IncompatibleSpace(
                "reinforce needs a continuous action space".into(),
            ))
        }
    };
    if eval_env.action_space() != env.action_space() {
        return Err(AgentError::IncompatibleSpace(
            "reinforce evaluation env must share the training action space".into(),
        ));
    }
    let obs_dims = env.observation_space().dims();
    let mut policy = LinearGaussianPolicy::new(obs_dims, lower.len(), config.init_log_std);
    let mut rng = stream_rng(seed, SeedStream::Agent, 0);
    let mut schedule = Schedule::new(budget, eval.interval);
    let mut baseline: Vec<f64> = Vec::new();
    let mut env_seed = Some(seed);

    let greedy = |policy: &LinearGaussianPolicy, o: &[f64]| Action::Continuous(clip(&policy.mean(o), &lower, &upper));

    while !schedule.done() {
        let mut observations = Vec::new();
        let mut actions = Vec::new();
        let mut rewards = Vec::new();
        let mut obs = env.reset(env_seed.take());
        loop {
            let raw = policy.sample(&obs, &mut rng);
            let step = env.step(&Action::Continuous(clip(&raw, &lower, &upper)))?;
            schedule.count_step();
            observations.push(obs);
            actions.push(raw);
            rewards.push(step.reward);
            if step.done() {
                break;
            }
            obs = step.observation;
        }

        let g = returns_to_go(&rewards, config.gamma);
        if baseline.len() < g.len() {
            baseline.extend_from_slice(&g[baseline.len()..]);
        }
        let mut grad = PolicyGradient::zeros(&policy);
        for t in 0..g.len() {
            let advantage = g[t] - baseline[t];
            grad.add_scaled(&policy.grad_log_prob(&observations[t], &actions[t]), advantage);
        }
        for (b, gt) in baseline.iter_mut().zip(&g) {
            *b += config.baseline_rate * (gt - *b);
        }
        let norm = grad.norm();
        let scale = if config.max_grad_norm > 0.0 && norm > config.max_grad_norm {
            config.max_grad_norm / norm
        } else {
            1.0
        };
        if config.learning_rate > 0.0 && norm.is_finite() {
            policy.apply(&grad, config.learning_rate * scale);
            for ls in &mut policy.log_std {
                *ls = ls.clamp(config.min_log_std, config.max_log_std);
            }
        }

        if schedule.end_episode() {
            let result = evaluate(eval_env, eval.episodes, eval.seed, |o| greedy(&policy, o))?;
            schedule.record(result);
        }
    }
    if schedule.needs_final_eval() {
        let result = evaluate(eval_env, eval.episodes, eval.seed, |o| greedy(&policy, o))?;
        schedule.record(result);
    }
    Ok((
        LearningCurve {
            points: schedule.points,
            train_episodes: schedule.episodes,
            train_steps: schedule.steps,
        },
        policy,
    ))
}
