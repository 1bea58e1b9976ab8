//! Built-in desk-scale environments and their planning oracles.

mod chain;
mod gridworld;
pub mod planning;
mod pointmass;

pub use chain::{Chain, ChainSpec, CHAIN_LEFT, CHAIN_RIGHT};
pub use gridworld::{gridworld_optimal_return, GridWorld, GridWorldSpec, GRID_MOVES};
pub use planning::{value_iteration, FiniteMdp, ValueTable};
pub use pointmass::{PointMass, PointMassSpec};

use serde::de::DeserializeOwned;

use crate::env::{EnvError, Environment};

/// Names accepted by [`make_env`], with a one-line description each.
pub const ENV_NAMES: &[(&str, &str)] = &[
    ("gridworld", "deterministic grid navigation, 4 discrete moves, obs = (x, y)"),
    ("chain", "corridor with a small loop reward at one end and a large terminal reward at the other"),
    ("pointmass", "1-D double integrator, continuous force, obs = (x, v)"),
];

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown environment `{0}`")]
    UnknownEnv(String),
    #[error("invalid parameters for `{name}`: {message}")]
    InvalidParams { name: String, message: String },
}

fn parse_spec<T: DeserializeOwned>(name: &str, params: &toml::Table) -> Result<T, RegistryError> {
    toml::Value::Table(params.clone())
        .try_into()
        .map_err(|e: toml::de::Error| RegistryError::InvalidParams {
            name: name.to_owned(),
            message: e.message().to_owned(),
        })
}

fn invalid(name: &str, e: EnvError) -> RegistryError {
    RegistryError::InvalidParams {
        name: name.to_owned(),
        message: e.to_string(),
    }
}

/// Build a registered environment with parameter overrides.
pub fn make_env(name: &str, params: &toml::Table) -> Result<Box<dyn Environment>, RegistryError> {
    match name {
        "gridworld" => Ok(Box::new(
            GridWorld::new(parse_spec(name, params)?).map_err(|e| invalid(name, e))?,
        )),
        "chain" => Ok(Box::new(
            Chain::new(parse_spec(name, params)?).map_err(|e| invalid(name, e))?,
        )),
        "pointmass" => Ok(Box::new(
            PointMass::new(parse_spec(name, params)?).map_err(|e| invalid(name, e))?,
        )),
        other => Err(RegistryError::UnknownEnv(other.to_owned())),
    }
}
