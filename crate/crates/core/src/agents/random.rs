use rand::Rng;
use serde::{Deserialize, Serialize};

use super::schedule::{evaluate, Budget, EvalProtocol, Schedule};
use super::{AgentError, LearningCurve};
use crate::env::{stream_rng, Action, ActionSpace, Environment, Seed, SeedStream};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub ret: f64,
    pub length: usize,
}

/// A uniform draw from `space`.
pub fn random_action<R: Rng + ?Sized>(space: &ActionSpace, rng: &mut R) -> Action {
    match space {
        ActionSpace::Discrete { n } => Action::Discrete(rng.random_range(0..*n)),
        ActionSpace::Continuous { lower, upper } => Action::Continuous(
            lower
                .iter()
                .zip(upper)
                .map(|(l, u)| l + (u - l) * rng.random::<f64>())
                .collect(),
        ),
    }
}

/// Play `episodes` episodes with uniform random actions; episode `k` resets with `seed + k`.
pub fn random_agent(
    env: &mut dyn Environment,
    episodes: usize,
    seed: Seed,
) -> Result<Vec<EpisodeSummary>, AgentError> {
    let space = env.action_space();
    let mut rng = stream_rng(seed, SeedStream::Agent, 0);
    let mut out = Vec::with_capacity(episodes);
    for k in 0..episodes {
        env.reset(Some(Seed(seed.0.wrapping_add(k as u64))));
        let mut ret = 0.0;
        let mut length = 0;
        loop {
            let step = env.step(&random_action(&space, &mut rng))?;
            ret += step.reward;
            length += 1;
            if step.done() {
                break;
            }
        }
        out.push(EpisodeSummary { ret, length });
    }
    Ok(out)
}

/// The random agent under the common training protocol: it plays out the
/// budget without learning and is evaluated like any other agent.
pub(crate) fn random_train(
    env: &mut dyn Environment,
    eval_env: &mut dyn Environment,
    budget: Budget,
    eval: &EvalProtocol,
    seed: Seed,
) -> Result<LearningCurve, AgentError> {
    let space = env.action_space();
    let mut rng = stream_rng(seed, SeedStream::Agent, 0);
    let mut eval_rng = stream_rng(seed, SeedStream::Agent, 1);
    let mut schedule = Schedule::new(budget, eval.interval);
    let mut env_seed = Some(seed);
    while !schedule.done() {
        env.reset(env_seed.take());
        loop {
            let step = env.step(&random_action(&space, &mut rng))?;
            schedule.count_step();
            if step.done() {
                break;
            }
        }
        if schedule.end_episode() {
            let result = evaluate(eval_env, eval.episodes, eval.seed, |_| random_action(&space, &mut eval_rng))?;
            schedule.record(result);
        }
    }
    if schedule.needs_final_eval() {
        let result = evaluate(eval_env, eval.episodes, eval.seed, |_| random_action(&space, &mut eval_rng))?;
        schedule.record(result);
    }
    Ok(LearningCurve {
        points: schedule.points,
        train_episodes: schedule.episodes,
        train_steps: schedule.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{PointMass, PointMassSpec};

    #[test]
    fn continuous_draws_stay_in_bounds() {
        let space = ActionSpace::continuous(vec![-2.0], vec![0.5]).unwrap();
        let mut rng = stream_rng(Seed(0), SeedStream::Agent, 0);
        for _ in 0..1000 {
            space.check(&random_action(&space, &mut rng)).unwrap();
        }
    }

    #[test]
    fn pointmass_episodes_run_to_horizon() {
        let spec = PointMassSpec::default();
        let horizon = spec.horizon;
        let mut env = PointMass::new(spec).unwrap();
        let runs = random_agent(&mut env, 5, Seed(2)).unwrap();
        assert!(runs.iter().all(|r| r.length == horizon));
    }
}
