//! Noise augmentation for reinforcement-learning environments.
//!
//! The crate is split into five layers:
//!
//! - [`env`]: the environment interface, spaces, step results and seeding.
//! - [`wrappers`]: nine noise wrappers gated by a noise rate `p`.
//! - [`envs`]: small analyzable environments (grid world, chain, point mass)
//!   plus planning oracles.
//! - [`agents`]: tabular Q-learning, linear-Gaussian REINFORCE and a random
//!   baseline.
//! - [`harness`]: multi-seed augmented-train / clean-test experiments,
//!   sweeps and report aggregation.
//!
//! ```
//! use noisyenv::env::{Action, Environment, Seed};
//! use noisyenv::envs::{GridWorld, GridWorldSpec};
//! use noisyenv::wrappers::{wrap, NoiseKind, NoiseRate, WrapperConfig};
//!
//! let env = GridWorld::new(GridWorldSpec::default()).unwrap();
//! let config = WrapperConfig::new(
//!     NoiseKind::UniformScaleReward { alpha: 0.5, beta: 1.5 },
//!     NoiseRate::new(1.0).unwrap(),
//!     Seed(7),
//! );
//! let mut noisy = wrap(env, config).unwrap();
//! noisy.reset(Some(Seed(1)));
//! let step = noisy.step(&Action::Discrete(0)).unwrap();
//! assert!(step.reward <= -0.5 && step.reward >= -1.5);
//! ```

pub mod agents;
pub mod env;
pub mod envs;
pub mod harness;
pub mod wrappers;
