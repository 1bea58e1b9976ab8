use serde::{Deserialize, Serialize};

use super::planning::FiniteMdp;
use crate::env::{
    Action, ActionSpace, EnvError, EpisodeClock, Environment, Info, Observation, ObservationSpace,
    Seed, StepResult,
};

/// Moves: 0 = +x, 1 = +y, 2 = -x, 3 = -y. Bumping a wall leaves the agent in place.
pub const GRID_MOVES: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridWorldSpec {
    pub width: usize,
    pub height: usize,
    pub start: (usize, usize),
    pub goal: (usize, usize),
    pub step_reward: f64,
    pub goal_reward: f64,
    pub horizon: usize,
}

impl Default for GridWorldSpec {
    fn default() -> Self {
        Self {
            width: 5,
            height: 5,
            start: (0, 0),
            goal: (4, 4),
            step_reward: -1.0,
            goal_reward: 0.0,
            horizon: 50,
        }
    }
}

impl GridWorldSpec {
    pub fn validate(&self) -> Result<(), EnvError> {
        let bad = |m: String| Err(EnvError::InvalidSpec(m));
        if self.width == 0 || self.height == 0 {
            return bad("gridworld width and height must be >= 1".into());
        }
        if self.horizon == 0 {
            return bad("gridworld horizon must be >= 1".into());
        }
        for (name, (x, y)) in [("start", self.start), ("goal", self.goal)] {
            if x >= self.width || y >= self.height {
                return bad(format!("gridworld {name} ({x}, {y}) outside the grid"));
            }
        }
        if self.start == self.goal {
            return bad("gridworld start must differ from goal".into());
        }
        Ok(())
    }

    pub fn cell_index(&self, (x, y): (usize, usize)) -> usize {
        y * self.width + x
    }

    pub fn cell(&self, index: usize) -> (usize, usize) {
        (index % self.width, index / self.width)
    }

    pub fn next_cell(&self, (x, y): (usize, usize), action: usize) -> (usize, usize) {
        let (dx, dy) = GRID_MOVES[action];
        let nx = (x as i64 + dx).clamp(0, self.width as i64 - 1) as usize;
        let ny = (y as i64 + dy).clamp(0, self.height as i64 - 1) as usize;
        (nx, ny)
    }
}

/// Optimal undiscounted return from `start`: the shortest path pays
/// `step_reward` per move plus `goal_reward` on arrival. Assumes
/// `step_reward <= 0`, under which wandering never pays.
pub fn gridworld_optimal_return(spec: &GridWorldSpec) -> f64 {
    let distance = spec.start.0.abs_diff(spec.goal.0) + spec.start.1.abs_diff(spec.goal.1);
    distance as f64 * spec.step_reward + spec.goal_reward
}

/// Deterministic grid navigation. Observation is the raw `(x, y)` cell.
#[derive(Clone, Debug)]
pub struct GridWorld {
    spec: GridWorldSpec,
    pos: (usize, usize),
    clock: EpisodeClock,
}

impl GridWorld {
    pub fn new(spec: GridWorldSpec) -> Result<Self, EnvError> {
        spec.validate()?;
        Ok(Self {
            pos: spec.start,
            clock: EpisodeClock::new(spec.horizon),
            spec,
        })
    }

    pub fn spec(&self) -> &GridWorldSpec {
        &self.spec
    }

    fn observe(&self) -> Observation {
        vec![self.pos.0 as f64, self.pos.1 as f64]
    }
}

impl Environment for GridWorld {
    fn observation_space(&self) -> ObservationSpace {
        ObservationSpace::bounded(
            vec![0.0, 0.0],
            vec![(self.spec.width - 1) as f64, (self.spec.height - 1) as f64],
        )
        .expect("validated grid has ordered bounds")
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Discrete { n: GRID_MOVES.len() }
    }

    // Dynamics are deterministic, so the seed has nothing to drive.
    fn reset(&mut self, _seed: Option<Seed>) -> Observation {
        self.pos = self.spec.start;
        self.clock.start();
        self.observe()
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check_running()?;
        self.action_space().check(action)?;
        let Action::Discrete(a) = *action else {
            unreachable!("checked against a discrete space")
        };
        self.pos = self.spec.next_cell(self.pos, a);
        let at_goal = self.pos == self.spec.goal;
        let mut reward = self.spec.step_reward;
        if at_goal {
            reward += self.spec.goal_reward;
        }
        let (terminated, truncated) = self.clock.tick(at_goal);
        let mut info = Info::new();
        info.insert("x".into(), (self.pos.0 as i64).into());
        info.insert("y".into(), (self.pos.1 as i64).into());
        info.insert("t".into(), (self.clock.steps() as i64).into());
        Ok(StepResult {
            observation: self.observe(),
            reward,
            terminated,
            truncated,
            info,
        })
    }
}

impl FiniteMdp for GridWorldSpec {
    fn num_states(&self) -> usize {
        self.width * self.height
    }

    fn num_actions(&self) -> usize {
        GRID_MOVES.len()
    }

    fn is_terminal(&self, state: usize) -> bool {
        state == self.cell_index(self.goal)
    }

    fn transition(&self, state: usize, action: usize) -> (usize, f64) {
        let next = self.next_cell(self.cell(state), action);
        let mut reward = self.step_reward;
        if next == self.goal {
            reward += self.goal_reward;
        }
        (self.cell_index(next), reward)
    }
}
