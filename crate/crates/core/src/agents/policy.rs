use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `a ~ N(W o + b, diag(exp(log_std)^2))`.
///
/// `weights` is row-major with shape `action_dims x obs_dims`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearGaussianPolicy {
    pub obs_dims: usize,
    pub action_dims: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub log_std: Vec<f64>,
}

/// Gradient of a scalar with respect to every policy parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct PolicyGradient {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub log_std: Vec<f64>,
}

impl PolicyGradient {
    pub fn zeros(policy: &LinearGaussianPolicy) -> Self {
        Self {
            weights: vec![0.0; policy.weights.len()],
            bias: vec![0.0; policy.bias.len()],
            log_std: vec![0.0; policy.log_std.len()],
        }
    }

    pub fn add_scaled(&mut self, other: &PolicyGradient, scale: f64) {
        for (a, b) in self.iter_mut().zip(other.iter()) {
            *a += scale * b;
        }
    }

    pub fn norm(&self) -> f64 {
        self.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    pub fn flat(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }

    fn iter(&self) -> impl Iterator<Item = &f64> {
        self.weights.iter().chain(&self.bias).chain(&self.log_std)
    }

    fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights
            .iter_mut()
            .chain(self.bias.iter_mut())
            .chain(self.log_std.iter_mut())
    }
}

impl LinearGaussianPolicy {
    pub fn new(obs_dims: usize, action_dims: usize, init_log_std: f64) -> Self {
        Self {
            obs_dims,
            action_dims,
            weights: vec![0.0; obs_dims * action_dims],
            bias: vec![0.0; action_dims],
            log_std: vec![init_log_std; action_dims],
        }
    }

    pub fn mean(&self, obs: &[f64]) -> Vec<f64> {
        (0..self.action_dims)
            .map(|i| {
                let row = &self.weights[i * self.obs_dims..(i + 1) * self.obs_dims];
                row.iter().zip(obs).map(|(w, o)| w * o).sum::<f64>() + self.bias[i]
            })
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, obs: &[f64], rng: &mut R) -> Vec<f64> {
        self.mean(obs)
            .into_iter()
            .zip(&self.log_std)
            .map(|(mu, ls)| {
                let z: f64 = rng.sample(StandardNormal);
                mu + ls.exp() * z
            })
            .collect()
    }

    pub fn log_prob(&self, obs: &[f64], action: &[f64]) -> f64 {
        self.mean(obs)
            .iter()
            .zip(action)
            .zip(&self.log_std)
            .map(|((mu, a), ls)| {
                let z = (a - mu) / ls.exp();
                -0.5 * z * z - ls - HALF_LN_2PI
            })
            .sum()
    }

    /// Analytic gradient of [`log_prob`](Self::log_prob) at `(obs, action)`.
    pub fn grad_log_prob(&self, obs: &[f64], action: &[f64]) -> PolicyGradient {
        let mut grad = PolicyGradient::zeros(self);
        for (i, mu) in self.mean(obs).into_iter().enumerate() {
            let var = (2.0 * self.log_std[i]).exp();
            let diff = action[i] - mu;
            let d_mean = diff / var;
            for (j, o) in obs.iter().enumerate() {
                grad.weights[i * self.obs_dims + j] = d_mean * o;
            }
            grad.bias[i] = d_mean;
            grad.log_std[i] = diff * diff / var - 1.0;
        }
        grad
    }

    pub fn params(&self) -> Vec<f64> {
        self.weights
            .iter()
            .chain(&self.bias)
            .chain(&self.log_std)
            .copied()
            .collect()
    }

    pub fn set_params(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.weights.len() + self.bias.len() + self.log_std.len());
        let (w, rest) = params.split_at(self.weights.len());
        let (b, ls) = rest.split_at(self.bias.len());
        self.weights.copy_from_slice(w);
        self.bias.copy_from_slice(b);
        self.log_std.copy_from_slice(ls);
    }

    pub fn apply(&mut self, grad: &PolicyGradient, step: f64) {
        let mut params = self.params();
        for (p, g) in params.iter_mut().zip(grad.flat()) {
            *p += step * g;
        }
        self.set_params(&params);
    }
}
