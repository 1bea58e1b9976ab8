use serde::Serialize;

use super::config::ExperimentConfig;
use super::record::{fingerprint, RunRecord};
use super::HarnessError;
use crate::agents::{AgentSpec, Budget, EvalProtocol};
use crate::env::{Environment, Seed};
use crate::envs::make_env;
use crate::wrappers::{wrap, WrapperConfig};

const EVAL_SALT: u64 = 0x0e7a_15ee_d5a1_7000;

/// One unit of work: a seed and the wrapper (with its rate) for training.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub seed: u64,
    pub wrapper: Option<WrapperConfig>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn derive_seed(base: u64, run_seed: u64) -> u64 {
    splitmix64(base ^ splitmix64(run_seed))
}

#[derive(Serialize)]
struct ContextKey<'a> {
    env: &'a str,
    env_params: &'a toml::Table,
    agent: &'a AgentSpec,
    budget: Budget,
    eval_interval: u64,
    eval_episodes: usize,
}

#[derive(Serialize)]
struct GroupKey<'a> {
    context: &'a str,
    wrapper: Option<&'a WrapperConfig>,
}

fn context_of(config: &ExperimentConfig) -> String {
    fingerprint(&ContextKey {
        env: &config.env.name,
        env_params: &config.env.params,
        agent: &config.agent,
        budget: config.budget,
        eval_interval: config.eval_interval,
        eval_episodes: config.eval_episodes,
    })
}

/// Baseline runs for every seed, then every rate crossed with every seed.
pub fn plan_runs(config: &ExperimentConfig) -> Vec<RunSpec> {
    let mut plan: Vec<RunSpec> = config
        .seeds
        .iter()
        .map(|&seed| RunSpec { seed, wrapper: None })
        .collect();
    if let Some(wrapper) = &config.wrapper {
        for &rate in &config.noise_rates {
            for &seed in &config.seeds {
                plan.push(RunSpec {
                    seed,
                    wrapper: Some(wrapper.with_rate(rate)),
                });
            }
        }
    }
    plan
}

/// Train and evaluate one run. The training env is wrapped when the spec
/// carries a wrapper; the evaluation env never is.
pub fn execute_run(config: &ExperimentConfig, spec: &RunSpec) -> Result<RunRecord, HarnessError> {
    let context = context_of(config);
    let fp = fingerprint(&GroupKey {
        context: &context,
        wrapper: spec.wrapper.as_ref(),
    });
    let seed = Seed(spec.seed);
    let mut eval_env = make_env(&config.env.name, &config.env.params)?;
    let base = make_env(&config.env.name, &config.env.params)?;
    let mut train_env: Box<dyn Environment> = match &spec.wrapper {
        None => base,
        Some(w) => {
            let mut w = w.clone();
            w.seed = Seed(derive_seed(w.seed.0, spec.seed));
            Box::new(wrap(base, w)?)
        }
    };
    let protocol = EvalProtocol {
        interval: config.eval_interval,
        episodes: config.eval_episodes,
        seed: Seed(derive_seed(EVAL_SALT, spec.seed)),
    };
    let curve = config
        .agent
        .train(train_env.as_mut(), eval_env.as_mut(), config.budget, &protocol, seed)?;
    Ok(RunRecord {
        fingerprint: fp,
        context,
        experiment: config.name.clone(),
        env: config.env.name.clone(),
        agent: config.agent.name().to_owned(),
        wrapper: spec
            .wrapper
            .as_ref()
            .map_or_else(|| RunRecord::BASELINE.to_owned(), |w| w.kind.label()),
        rate: spec.wrapper.as_ref().map(|w| w.rate.value()),
        seed: spec.seed,
        budget: config.budget,
        final_return: curve.final_return(),
        curve,
        train_log: train_env.perturbation_log(),
        eval_log: eval_env.perturbation_log(),
    })
}

/// Execute `plan` with up to `workers` runs in flight. The output order always
/// follows `plan`, whatever the worker count.
pub fn run_plan(
    config: &ExperimentConfig,
    plan: &[RunSpec],
    workers: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    run_plan_impl(config, plan, workers.max(1))
}

#[cfg(feature = "parallel")]
fn run_plan_impl(
    config: &ExperimentConfig,
    plan: &[RunSpec],
    workers: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    use rayon::prelude::*;
    if workers == 1 {
        return run_serial(config, plan);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    pool.install(|| plan.par_iter().map(|spec| execute_run(config, spec)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_plan_impl(
    config: &ExperimentConfig,
    plan: &[RunSpec],
    _workers: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    run_serial(config, plan)
}

fn run_serial(config: &ExperimentConfig, plan: &[RunSpec]) -> Result<Vec<RunRecord>, HarnessError> {
    plan.iter().map(|spec| execute_run(config, spec)).collect()
}

/// Every run of `config`, baselines first.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<Vec<RunRecord>, HarnessError> {
    run_plan(config, &plan_runs(config), workers)
}
