//! Noise-augmentation wrappers.
//!
//! [`wrap`] turns any [`Environment`] into a [`NoisyEnv`] that perturbs
//! observations, rewards or episode length. Every perturbation is gated by
//! the noise rate `p`: an eligible emission is perturbed when a uniform draw
//! from the wrapper's gate stream falls below `p`. Noise values come from a
//! second stream and are drawn for every eligible emission whether or not the
//! gate fires, so changing `p` never shifts which noise a given step sees.
//!
//! Both streams derive from the wrapper seed and the wrapper's position in
//! the stack, so stacked wrappers never share randomness.

mod config;
pub mod noise;
mod presets;

pub use config::{
    ConfigError, EarlyTerminationVariant, NoiseKind, NoiseRate, RewardNoise, WrapperConfig,
    WrapperSpec, KIND_NAMES,
};
pub use noise::{
    apply_dropout_obs, apply_mixup_obs, apply_noisy_reward, apply_normal_noisy_obs,
    apply_uniform_noisy_obs, apply_uniform_scale_obs, early_termination_on_reset,
    early_termination_per_step, gate_fires,
};
pub use presets::{preset, PRESETS};

pub use crate::env::PerturbationLog;

use rand_chacha::ChaCha8Rng;

use crate::env::{
    stream_rng, Action, ActionSpace, EnvError, Environment, Observation, ObservationSpace, Seed,
    SeedStream, StepResult,
};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Phase {
    Fresh,
    Running,
    Finished,
}

/// An environment whose emissions are perturbed according to a [`WrapperConfig`].
#[derive(Debug)]
pub struct NoisyEnv<E> {
    inner: E,
    config: WrapperConfig,
    obs_space: ObservationSpace,
    depth: usize,
    gate_rng: ChaCha8Rng,
    noise_rng: ChaCha8Rng,
    log: PerturbationLog,
    phase: Phase,
    steps: usize,
    cut_at: Option<usize>,
    episode_cut: bool,
    prev_raw: Option<Observation>,
}

/// Wrap `env` with the perturbation described by `config`.
pub fn wrap<E: Environment>(env: E, config: WrapperConfig) -> Result<NoisyEnv<E>, ConfigError> {
    NoisyEnv::new(env, config)
}

impl<E: Environment> NoisyEnv<E> {
    pub fn new(inner: E, config: WrapperConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let depth = inner.wrapper_depth();
        let index = depth as u64;
        Ok(Self {
            obs_space: inner.observation_space(),
            gate_rng: stream_rng(config.seed, SeedStream::WrapperGate, index),
            noise_rng: stream_rng(config.seed, SeedStream::WrapperNoise, index),
            inner,
            config,
            depth,
            log: PerturbationLog::default(),
            phase: Phase::Fresh,
            steps: 0,
            cut_at: None,
            episode_cut: false,
            prev_raw: None,
        })
    }

    pub fn config(&self) -> &WrapperConfig {
        &self.config
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut E {
        &mut self.inner
    }

    pub fn into_inner(self) -> E {
        self.inner
    }

    /// Counters of this wrapper alone, excluding wrappers further in.
    pub fn own_log(&self) -> PerturbationLog {
        self.log
    }

    /// Gate plus noise for the observation kinds other than mixup.
    fn perturb_observation(&mut self, obs: &mut Observation) {
        let rng = &mut self.noise_rng;
        let candidate = match self.config.kind {
            NoiseKind::NormalNoisyObservation { sigma } => apply_normal_noisy_obs(obs, sigma, rng),
            NoiseKind::UniformNoisyObservation { alpha, beta } => {
                apply_uniform_noisy_obs(obs, alpha, beta, rng)
            }
            NoiseKind::UniformScaleObservation {
                alpha,
                beta,
                per_dimension,
            } => apply_uniform_scale_obs(obs, alpha, beta, per_dimension, rng),
            NoiseKind::DropoutObservation { keep_prob } => apply_dropout_obs(obs, keep_prob, rng),
            _ => return,
        };
        let fired = gate_fires(self.config.rate, &mut self.gate_rng);
        self.log.steps_total += 1;
        if fired {
            self.log.steps_perturbed += 1;
            *obs = candidate;
            if self.config.clip_to_space {
                self.obs_space.clip(obs);
            }
        }
    }

    fn cut(&mut self, result: &mut StepResult) {
        if self.config.treat_as_terminal {
            result.terminated = true;
        } else {
            result.truncated = true;
        }
        if !self.episode_cut {
            self.episode_cut = true;
            if matches!(
                self.config.kind,
                NoiseKind::EarlyTermination(EarlyTerminationVariant::PerStep)
            ) {
                self.log.episodes_perturbed += 1;
            }
        }
    }
}

impl<E: Environment> Environment for NoisyEnv<E> {
    fn observation_space(&self) -> ObservationSpace {
        self.inner.observation_space()
    }

    fn action_space(&self) -> ActionSpace {
        self.inner.action_space()
    }

    fn reset(&mut self, seed: Option<Seed>) -> Observation {
        let mut obs = self.inner.reset(seed);
        self.phase = Phase::Running;
        self.steps = 0;
        self.cut_at = None;
        self.episode_cut = false;
        match self.config.kind {
            NoiseKind::MixupObservation { .. } => self.prev_raw = Some(obs.clone()),
            NoiseKind::EarlyTermination(variant) => {
                self.log.episodes_total += 1;
                if let EarlyTerminationVariant::PerEpisode { a, b } = variant {
                    self.cut_at = early_termination_on_reset(
                        a,
                        b,
                        self.config.rate,
                        &mut self.gate_rng,
                        &mut self.noise_rng,
                    );
                    if self.cut_at.is_some() {
                        self.log.episodes_perturbed += 1;
                    }
                }
            }
            kind if kind.is_observation() => self.perturb_observation(&mut obs),
            _ => {}
        }
        obs
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        match self.phase {
            Phase::Fresh => return Err(EnvError::NotReset),
            Phase::Finished => return Err(EnvError::EpisodeFinished),
            Phase::Running => {}
        }
        let mut result = self.inner.step(action)?;
        self.steps += 1;
        match self.config.kind {
            NoiseKind::MixupObservation { lambda } => {
                let fired = gate_fires(self.config.rate, &mut self.gate_rng);
                self.log.steps_total += 1;
                let raw = result.observation.clone();
                if fired {
                    self.log.steps_perturbed += 1;
                    let prev = self.prev_raw.as_deref().unwrap_or(&raw);
                    result.observation = apply_mixup_obs(&raw, prev, lambda);
                    if self.config.clip_to_space {
                        self.obs_space.clip(&mut result.observation);
                    }
                }
                self.prev_raw = Some(raw);
            }
            kind if kind.is_observation() => self.perturb_observation(&mut result.observation),
            NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { .. }) => {
                self.log.steps_total += 1;
                if !result.done() && self.cut_at == Some(self.steps) {
                    self.log.steps_perturbed += 1;
                    self.cut(&mut result);
                }
            }
            NoiseKind::EarlyTermination(EarlyTerminationVariant::PerStep) => {
                let fired = early_termination_per_step(self.config.rate, &mut self.gate_rng);
                self.log.steps_total += 1;
                if fired {
                    self.log.steps_perturbed += 1;
                    if !result.done() {
                        self.cut(&mut result);
                    }
                }
            }
            kind => {
                let noise = kind.reward_noise().expect("remaining kinds perturb rewards");
                let eps = noise::reward_epsilon(noise, &mut self.noise_rng);
                let fired = gate_fires(self.config.rate, &mut self.gate_rng);
                self.log.steps_total += 1;
                if fired {
                    self.log.steps_perturbed += 1;
                    result.reward = noise::perturb_reward(result.reward, noise, eps);
                }
            }
        }
        if result.done() {
            self.phase = Phase::Finished;
        }
        Ok(result)
    }

    fn perturbation_log(&self) -> PerturbationLog {
        self.log.merged(self.inner.perturbation_log())
    }

    fn wrapper_depth(&self) -> usize {
        self.depth + 1
    }
}
