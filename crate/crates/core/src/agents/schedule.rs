use serde::{Deserialize, Serialize};

use super::CurvePoint;
use crate::env::{Action, EnvError, Environment, Seed};

/// Training length, counted in whole episodes or in environment steps. A
/// step budget is checked between episodes, so the last episode runs to its end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Episodes(u64),
    Steps(u64),
}

impl Budget {
    pub fn total(self) -> u64 {
        match self {
            Budget::Episodes(n) | Budget::Steps(n) => n,
        }
    }

    fn progress(self, episodes: u64, steps: u64) -> u64 {
        match self {
            Budget::Episodes(_) => episodes,
            Budget::Steps(_) => steps,
        }
    }
}

/// How and when the clean environment is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalProtocol {
    /// Evaluate every `interval` units of budget progress (and once at the end).
    pub interval: u64,
    pub episodes: usize,
    /// Evaluation episode `k` resets the clean environment with `seed + k`.
    pub seed: Seed,
}

/// Mean and sample standard deviation of undiscounted returns of `policy`
/// over `episodes` fresh episodes.
pub fn evaluate<F>(
    env: &mut dyn Environment,
    episodes: usize,
    seed: Seed,
    mut policy: F,
) -> Result<(f64, f64), EnvError>
where
    F: FnMut(&[f64]) -> Action,
{
    let mut returns = Vec::with_capacity(episodes);
    for k in 0..episodes {
        let mut obs = env.reset(Some(Seed(seed.0.wrapping_add(k as u64))));
        let mut total = 0.0;
        loop {
            let action = policy(&obs);
            let step = env.step(&action)?;
            total += step.reward;
            if step.done() {
                break;
            }
            obs = step.observation;
        }
        returns.push(total);
    }
    Ok(mean_and_sample_std(&returns))
}

pub(crate) fn mean_and_sample_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Budget and evaluation bookkeeping shared by the trainers.
pub(crate) struct Schedule {
    budget: Budget,
    interval: u64,
    next_eval: u64,
    pub(crate) episodes: u64,
    pub(crate) steps: u64,
    pub(crate) points: Vec<CurvePoint>,
}

impl Schedule {
    pub(crate) fn new(budget: Budget, interval: u64) -> Self {
        let interval = interval.max(1);
        Self {
            budget,
            interval,
            next_eval: interval,
            episodes: 0,
            steps: 0,
            points: Vec::new(),
        }
    }

    fn progress(&self) -> u64 {
        self.budget.progress(self.episodes, self.steps)
    }

    pub(crate) fn done(&self) -> bool {
        self.progress() >= self.budget.total()
    }

    /// Fraction of the budget consumed, in `[0, 1]`.
    pub(crate) fn fraction(&self) -> f64 {
        let total = self.budget.total();
        if total == 0 {
            1.0
        } else {
            (self.progress() as f64 / total as f64).min(1.0)
        }
    }

    pub(crate) fn count_step(&mut self) {
        self.steps += 1;
    }

    /// Close an episode; true when an evaluation is due.
    pub(crate) fn end_episode(&mut self) -> bool {
        self.episodes += 1;
        let progress = self.progress();
        if progress >= self.next_eval {
            while self.next_eval <= progress {
                self.next_eval += self.interval;
            }
            true
        } else {
            false
        }
    }

    pub(crate) fn record(&mut self, (mean_return, std_return): (f64, f64)) {
        self.points.push(CurvePoint {
            progress: self.progress(),
            mean_return,
            std_return,
        });
    }

    /// True when the curve lacks a point at the current progress.
    pub(crate) fn needs_final_eval(&self) -> bool {
        self.points.last().is_none_or(|p| p.progress != self.progress())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn episode_schedule() {
        let mut s = Schedule::new(Budget::Episodes(5), 2);
        let mut due = Vec::new();
        while !s.done() {
            due.push(s.end_episode());
        }
        assert_eq!(due, vec![false, true, false, true, false]);
        assert!(s.needs_final_eval());
        assert_eq!(s.fraction(), 1.0);
    }

    #[test]
    fn step_schedule_skips_missed_marks() {
        let mut s = Schedule::new(Budget::Steps(100), 10);
        for _ in 0..35 {
            s.count_step();
        }
        assert!(s.end_episode());
        assert!(!s.end_episode());
        for _ in 0..5 {
            s.count_step();
        }
        assert!(s.end_episode());
    }

    #[test]
    fn sample_std() {
        let (m, s) = mean_and_sample_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_and_sample_std(&[7.0]), (7.0, 0.0));
    }
}
