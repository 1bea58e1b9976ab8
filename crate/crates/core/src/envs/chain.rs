use serde::{Deserialize, Serialize};

use super::planning::FiniteMdp;
use crate::env::{
    Action, ActionSpace, EnvError, EpisodeClock, Environment, Info, Observation, ObservationSpace,
    Seed, StepResult,
};

pub const CHAIN_LEFT: usize = 0;
pub const CHAIN_RIGHT: usize = 1;

/// A corridor of `n_states` cells. Moving left from cell 0 pays
/// `small_reward` and stays put; stepping right into the last cell pays
/// `large_reward` and ends the episode. Every other move pays nothing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainSpec {
    pub n_states: usize,
    pub horizon: usize,
    pub small_reward: f64,
    pub large_reward: f64,
}

impl Default for ChainSpec {
    fn default() -> Self {
        Self {
            n_states: 5,
            horizon: 50,
            small_reward: 1.0,
            large_reward: 10.0,
        }
    }
}

impl ChainSpec {
    pub fn validate(&self) -> Result<(), EnvError> {
        if self.n_states < 3 {
            return Err(EnvError::InvalidSpec("chain n_states must be >= 3".into()));
        }
        if self.horizon == 0 {
            return Err(EnvError::InvalidSpec("chain horizon must be >= 1".into()));
        }
        Ok(())
    }
}

impl FiniteMdp for ChainSpec {
    fn num_states(&self) -> usize {
        self.n_states
    }

    fn num_actions(&self) -> usize {
        2
    }

    fn is_terminal(&self, state: usize) -> bool {
        state == self.n_states - 1
    }

    fn transition(&self, state: usize, action: usize) -> (usize, f64) {
        match action {
            CHAIN_LEFT if state == 0 => (0, self.small_reward),
            CHAIN_LEFT => (state - 1, 0.0),
            _ if state + 2 == self.n_states => (state + 1, self.large_reward),
            _ => (state + 1, 0.0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Chain {
    spec: ChainSpec,
    state: usize,
    clock: EpisodeClock,
}

impl Chain {
    pub fn new(spec: ChainSpec) -> Result<Self, EnvError> {
        spec.validate()?;
        Ok(Self {
            state: 0,
            clock: EpisodeClock::new(spec.horizon),
            spec,
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }
}

impl Environment for Chain {
    fn observation_space(&self) -> ObservationSpace {
        ObservationSpace::bounded(vec![0.0], vec![(self.spec.n_states - 1) as f64])
            .expect("n_states >= 3")
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Discrete { n: 2 }
    }

    fn reset(&mut self, _seed: Option<Seed>) -> Observation {
        self.state = 0;
        self.clock.start();
        vec![0.0]
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check_running()?;
        self.action_space().check(action)?;
        let Action::Discrete(a) = *action else {
            unreachable!("checked against a discrete space")
        };
        let (next, reward) = self.spec.transition(self.state, a);
        self.state = next;
        let (terminated, truncated) = self.clock.tick(self.spec.is_terminal(next));
        let mut info = Info::new();
        info.insert("state".into(), (next as i64).into());
        Ok(StepResult {
            observation: vec![next as f64],
            reward,
            terminated,
            truncated,
            info,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_to_the_end() {
        let mut c = Chain::new(ChainSpec::default()).unwrap();
        c.reset(None);
        let rewards: Vec<f64> = (0..4)
            .map(|_| c.step(&Action::Discrete(CHAIN_RIGHT)).unwrap().reward)
            .collect();
        assert_eq!(rewards, vec![0.0, 0.0, 0.0, 10.0]);
        assert_eq!(c.step(&Action::Discrete(CHAIN_RIGHT)), Err(EnvError::EpisodeFinished));
    }

    #[test]
    fn left_at_origin_pays_small() {
        let mut c = Chain::new(ChainSpec::default()).unwrap();
        c.reset(None);
        let s = c.step(&Action::Discrete(CHAIN_LEFT)).unwrap();
        assert_eq!((s.observation, s.reward), (vec![0.0], 1.0));
    }

    #[test]
    fn too_short() {
        let spec = ChainSpec {
            n_states: 2,
            ..Default::default()
        };
        assert!(Chain::new(spec).is_err());
    }
}
