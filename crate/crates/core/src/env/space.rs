use serde::{Deserialize, Serialize};

use super::{Action, EnvError};

/// Shape and optional box bounds of the observation vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservationSpace {
    dims: usize,
    bounds: Option<(Vec<f64>, Vec<f64>)>,
}

impl ObservationSpace {
    pub fn unbounded(dims: usize) -> Result<Self, EnvError> {
        if dims == 0 {
            return Err(EnvError::InvalidSpace("observation dims must be >= 1".into()));
        }
        Ok(Self { dims, bounds: None })
    }

    pub fn bounded(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, EnvError> {
        check_box(&lower, &upper, "observation")?;
        Ok(Self {
            dims: lower.len(),
            bounds: Some((lower, upper)),
        })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn bounds(&self) -> Option<(&[f64], &[f64])> {
        self.bounds.as_ref().map(|(l, u)| (l.as_slice(), u.as_slice()))
    }

    /// Clamp `obs` into the box, if this space has one.
    pub fn clip(&self, obs: &mut [f64]) {
        if let Some((lower, upper)) = &self.bounds {
            for ((o, &l), &u) in obs.iter_mut().zip(lower).zip(upper) {
                *o = o.clamp(l, u);
            }
        }
    }
}

/// Discrete or continuous action set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ActionSpace {
    Discrete { n: usize },
    Continuous { lower: Vec<f64>, upper: Vec<f64> },
}

impl ActionSpace {
    pub fn discrete(n: usize) -> Result<Self, EnvError> {
        if n == 0 {
            return Err(EnvError::InvalidSpace("discrete action count must be >= 1".into()));
        }
        Ok(Self::Discrete { n })
    }

    pub fn continuous(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, EnvError> {
        check_box(&lower, &upper, "action")?;
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(EnvError::InvalidSpace("continuous action bounds must be finite".into()));
        }
        Ok(Self::Continuous { lower, upper })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete { .. })
    }

    /// Number of discrete actions, or the dimensionality of a continuous action.
    pub fn dims(&self) -> usize {
        match self {
            Self::Discrete { n } => *n,
            Self::Continuous { lower, .. } => lower.len(),
        }
    }

    pub fn check(&self, action: &Action) -> Result<(), EnvError> {
        match (self, action) {
            (Self::Discrete { n }, Action::Discrete(a)) if a < n => Ok(()),
            (Self::Discrete { n }, Action::Discrete(a)) => Err(EnvError::ActionOutOfSpace(
                format!("discrete action {a} not in 0..{n}"),
            )),
            (Self::Continuous { lower, upper }, Action::Continuous(a)) => {
                if a.len() != lower.len() {
                    return Err(EnvError::ActionOutOfSpace(format!(
                        "expected {} action dims, got {}",
                        lower.len(),
                        a.len()
                    )));
                }
                for (i, ((&v, &l), &u)) in a.iter().zip(lower).zip(upper).enumerate() {
                    // NaN fails both comparisons
                    if !(v >= l && v <= u) {
                        return Err(EnvError::ActionOutOfSpace(format!(
                            "action[{i}] = {v} outside [{l}, {u}]"
                        )));
                    }
                }
                Ok(())
            }
            (Self::Discrete { .. }, Action::Continuous(_)) => Err(EnvError::ActionOutOfSpace(
                "continuous action given to a discrete space".into(),
            )),
            (Self::Continuous { .. }, Action::Discrete(_)) => Err(EnvError::ActionOutOfSpace(
                "discrete action given to a continuous space".into(),
            )),
        }
    }
}

fn check_box(lower: &[f64], upper: &[f64], what: &str) -> Result<(), EnvError> {
    if lower.is_empty() {
        return Err(EnvError::InvalidSpace(format!("{what} dims must be >= 1")));
    }
    if lower.len() != upper.len() {
        return Err(EnvError::InvalidSpace(format!(
            "{what} bounds have different lengths ({} vs {})",
            lower.len(),
            upper.len()
        )));
    }
    if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
        return Err(EnvError::InvalidSpace(format!(
            "{what} bound {i}: lower {} > upper {}",
            lower[i], upper[i]
        )));
    }
    Ok(())
}
