use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{
    stream_rng, Action, ActionSpace, EnvError, EpisodeClock, Environment, Info, Observation,
    ObservationSpace, Seed, SeedStream, StepResult,
};

/// 1-D double integrator driven towards `goal`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointMassSpec {
    pub dt: f64,
    pub goal: f64,
    pub force_limit: f64,
    pub horizon: usize,
    pub control_cost: f64,
    /// Initial position is drawn from `U(-init_spread, init_spread)`; velocity starts at 0.
    pub init_spread: f64,
}

impl Default for PointMassSpec {
    fn default() -> Self {
        Self {
            dt: 0.1,
            goal: 1.0,
            force_limit: 1.0,
            horizon: 100,
            control_cost: 0.01,
            init_spread: 0.5,
        }
    }
}

impl PointMassSpec {
    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: &str| Err(EnvError::InvalidSpec(m.into()));
        if !(self.dt > 0.0) {
            return bad("pointmass dt must be > 0");
        }
        if !(self.force_limit > 0.0) || !self.force_limit.is_finite() {
            return bad("pointmass force_limit must be finite and > 0");
        }
        if self.horizon == 0 {
            return bad("pointmass horizon must be >= 1");
        }
        if !(self.control_cost >= 0.0) {
            return bad("pointmass control_cost must be >= 0");
        }
        if !(self.init_spread >= 0.0) {
            return bad("pointmass init_spread must be >= 0");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PointMass {
    spec: PointMassSpec,
    x: f64,
    v: f64,
    rng: ChaCha8Rng,
    clock: EpisodeClock,
}

impl PointMass {
    pub fn new(spec: PointMassSpec) -> Result<Self, EnvError> {
        spec.validate()?;
        Ok(Self {
            x: 0.0,
            v: 0.0,
            rng: stream_rng(Seed::default(), SeedStream::EnvDynamics, 0),
            clock: EpisodeClock::new(spec.horizon),
            spec,
        })
    }

    pub fn spec(&self) -> &PointMassSpec {
        &self.spec
    }

    pub fn state(&self) -> (f64, f64) {
        (self.x, self.v)
    }
}

impl Environment for PointMass {
    fn observation_space(&self) -> ObservationSpace {
        ObservationSpace::unbounded(2).expect("two dims")
    }

    fn action_space(&self) -> ActionSpace {
        let f = self.spec.force_limit;
        ActionSpace::Continuous {
            lower: vec![-f],
            upper: vec![f],
        }
    }

    fn reset(&mut self, seed: Option<Seed>) -> Observation {
        if let Some(seed) = seed {
            self.rng = stream_rng(seed, SeedStream::EnvDynamics, 0);
        }
        let spread = self.spec.init_spread;
        // one draw per reset, even when the spread is zero
        let u: f64 = self.rng.random();
        self.x = spread * (2.0 * u - 1.0);
        self.v = 0.0;
        self.clock.start();
        vec![self.x, self.v]
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check_running()?;
        self.action_space().check(action)?;
        let Action::Continuous(a) = action else {
            unreachable!("checked against a continuous space")
        };
        let force = a[0];
        let dt = self.spec.dt;
        self.x += self.v * dt;
        self.v += force * dt;
        let offset = self.x - self.spec.goal;
        let reward = -offset * offset - self.spec.control_cost * force * force;
        let (terminated, truncated) = self.clock.tick(false);
        let mut info = Info::new();
        info.insert("x".into(), self.x.into());
        info.insert("v".into(), self.v.into());
        Ok(StepResult {
            observation: vec![self.x, self.v],
            reward,
            terminated,
            truncated,
            info,
        })
    }
}
