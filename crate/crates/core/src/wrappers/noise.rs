//! Pure perturbation functions. Wrappers call these; tests call them directly.

use rand::Rng;
use rand_distr::StandardNormal;

use super::config::{NoiseRate, RewardNoise};

/// One uniform draw, compared against `p`. Always consumes exactly one draw.
pub fn gate_fires<R: Rng + ?Sized>(rate: NoiseRate, rng: &mut R) -> bool {
    let u: f64 = rng.random();
    u < rate.value()
}

pub fn uniform<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    alpha + (beta - alpha) * u
}

pub fn normal<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sigma * z
}

pub fn add_noise(o: &[f64], eps: &[f64]) -> Vec<f64> {
    debug_assert_eq!(o.len(), eps.len());
    o.iter().zip(eps).map(|(x, e)| x + e).collect()
}

pub fn scale_by(o: &[f64], eps: &[f64]) -> Vec<f64> {
    debug_assert_eq!(o.len(), eps.len());
    o.iter().zip(eps).map(|(x, e)| x * e).collect()
}

/// `o + ε`, `ε ~ N(0, σ² I)`.
pub fn apply_normal_noisy_obs<R: Rng + ?Sized>(o: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    o.iter().map(|x| x + normal(sigma, rng)).collect()
}

/// `o + ε`, each `ε_i ~ U(α, β)`.
pub fn apply_uniform_noisy_obs<R: Rng + ?Sized>(o: &[f64], alpha: f64, beta: f64, rng: &mut R) -> Vec<f64> {
    o.iter().map(|x| x + uniform(alpha, beta, rng)).collect()
}

/// `o * ε` with one shared `ε ~ U(α, β)`, or an independent draw per
/// dimension when `per_dimension` is set.
pub fn apply_uniform_scale_obs<R: Rng + ?Sized>(
    o: &[f64],
    alpha: f64,
    beta: f64,
    per_dimension: bool,
    rng: &mut R,
) -> Vec<f64> {
    if per_dimension {
        o.iter().map(|x| x * uniform(alpha, beta, rng)).collect()
    } else {
        let eps = uniform(alpha, beta, rng);
        o.iter().map(|x| x * eps).collect()
    }
}

/// `λ o_t + (1 - λ) o_prev`. The two boundary values return an input exactly.
pub fn apply_mixup_obs(o_t: &[f64], o_prev: &[f64], lambda: f64) -> Vec<f64> {
    assert_eq!(o_t.len(), o_prev.len(), "mixup needs equal-length observations");
    if lambda == 1.0 {
        return o_t.to_vec();
    }
    if lambda == 0.0 {
        return o_prev.to_vec();
    }
    o_t.iter()
        .zip(o_prev)
        .map(|(cur, prev)| lambda * cur + (1.0 - lambda) * prev)
        .collect()
}

/// Bernoulli mask with keep probability `keep_prob`, one draw per dimension.
pub fn dropout_mask<R: Rng + ?Sized>(dims: usize, keep_prob: f64, rng: &mut R) -> Vec<bool> {
    (0..dims)
        .map(|_| {
            let u: f64 = rng.random();
            u < keep_prob
        })
        .collect()
}

pub fn apply_mask(o: &[f64], keep: &[bool]) -> Vec<f64> {
    o.iter().zip(keep).map(|(&x, &k)| if k { x } else { 0.0 }).collect()
}

/// `r ⊙ o`, `r_i ~ Bernoulli(η)` where η is the keep probability.
pub fn apply_dropout_obs<R: Rng + ?Sized>(o: &[f64], keep_prob: f64, rng: &mut R) -> Vec<f64> {
    apply_mask(o, &dropout_mask(o.len(), keep_prob, rng))
}

/// Draw `ε` for a reward perturbation.
pub fn reward_epsilon<R: Rng + ?Sized>(noise: RewardNoise, rng: &mut R) -> f64 {
    match noise {
        RewardNoise::Normal { sigma } => normal(sigma, rng),
        RewardNoise::Uniform { alpha, beta } | RewardNoise::Scale { alpha, beta } => {
            uniform(alpha, beta, rng)
        }
    }
}

/// Combine a reward with an already drawn `ε`: additive for normal/uniform, multiplicative for scale.
pub fn perturb_reward(r: f64, noise: RewardNoise, eps: f64) -> f64 {
    match noise {
        RewardNoise::Scale { .. } => r * eps,
        RewardNoise::Normal { .. } | RewardNoise::Uniform { .. } => r + eps,
    }
}

pub fn apply_noisy_reward<R: Rng + ?Sized>(r: f64, noise: RewardNoise, rng: &mut R) -> f64 {
    perturb_reward(r, noise, reward_epsilon(noise, rng))
}

/// Per-episode early termination, decided at reset: with probability `p` the
/// episode is cut at `T ~ U{a..=b}`. The gate and the step draw come from
/// separate streams, and `T` is drawn even when the gate stays closed.
pub fn early_termination_on_reset<G: Rng + ?Sized, N: Rng + ?Sized>(
    a: usize,
    b: usize,
    rate: NoiseRate,
    gate_rng: &mut G,
    noise_rng: &mut N,
) -> Option<usize> {
    let fired = gate_fires(rate, gate_rng);
    let step = noise_rng.random_range(a..=b);
    fired.then_some(step)
}

/// Per-step early termination: the current step ends the episode with probability `p`.
pub fn early_termination_per_step<R: Rng + ?Sized>(rate: NoiseRate, rng: &mut R) -> bool {
    gate_fires(rate, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{stream_rng, Seed, SeedStream};

    fn rng() -> rand_chacha::ChaCha8Rng {
        stream_rng(Seed(11), SeedStream::WrapperNoise, 0)
    }

    #[test]
    fn gate_boundaries() {
        let mut r = rng();
        assert!((0..10_000).all(|_| !gate_fires(NoiseRate::ZERO, &mut r)));
        assert!((0..10_000).all(|_| gate_fires(NoiseRate::ONE, &mut r)));
    }

    #[test]
    fn gate_consumes_one_draw_regardless_of_rate() {
        let mut a = rng();
        let mut b = rng();
        gate_fires(NoiseRate::ZERO, &mut a);
        gate_fires(NoiseRate::ONE, &mut b);
        let (x, y): (u64, u64) = (a.random(), b.random());
        assert_eq!(x, y);
    }

    #[test]
    fn injected_epsilon_examples() {
        assert_eq!(add_noise(&[1.0, 2.0], &[0.5, -0.5]), vec![1.5, 1.5]);
        assert_eq!(add_noise(&[3.0], &[0.0005]), vec![3.0005]);
        assert_eq!(scale_by(&[2.0, 4.0], &[0.5, 0.5]), vec![1.0, 2.0]);
        let scale = RewardNoise::Scale { alpha: 0.5, beta: 1.5 };
        assert!((perturb_reward(-10.0, scale, 1.2) - (-12.0)).abs() < 1e-12);
    }

    #[test]
    fn scalar_scale_shares_one_factor() {
        let mut r = rng();
        let o = [1.0, 2.0, -3.0];
        let out = apply_uniform_scale_obs(&o, 0.5, 1.5, false, &mut r);
        let eps = out[0] / o[0];
        assert!((0.5..1.5).contains(&eps));
        for (x, y) in o.iter().zip(&out) {
            assert!((x * eps - y).abs() < 1e-12);
        }
        let out = apply_uniform_scale_obs(&o, 0.5, 1.5, true, &mut r);
        let ratios: Vec<f64> = o.iter().zip(&out).map(|(x, y)| y / x).collect();
        assert!(ratios.iter().all(|e| (0.5..1.5).contains(e)));
        assert!(ratios.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn uniform_preset_stays_within_bounds() {
        let mut r = rng();
        let o = vec![0.25; 1000];
        let out = apply_uniform_noisy_obs(&o, -0.001, 0.001, &mut r);
        assert!(out.iter().zip(&o).all(|(y, x)| (y - x).abs() <= 0.001));
        let noise = RewardNoise::Uniform { alpha: -0.001, beta: 0.001 };
        assert!((0..1000).all(|_| (apply_noisy_reward(-1.0, noise, &mut r) + 1.0).abs() <= 0.001));
    }

    #[test]
    fn mixup_boundaries() {
        let cur = [2.0, 4.0];
        let prev = [0.0, 0.0];
        assert_eq!(apply_mixup_obs(&cur, &prev, 1.0), cur.to_vec());
        assert_eq!(apply_mixup_obs(&cur, &prev, 0.0), prev.to_vec());
        assert_eq!(apply_mixup_obs(&cur, &prev, 0.5), vec![1.0, 2.0]);
    }

    #[test]
    fn dropout_boundaries() {
        let mut r = rng();
        let o = [1.0, -2.0, 3.0];
        assert_eq!(apply_dropout_obs(&o, 1.0, &mut r), o.to_vec());
        assert_eq!(apply_dropout_obs(&o, 0.0, &mut r), vec![0.0; 3]);
    }

    #[test]
    fn early_termination_boundaries() {
        let mut g = rng();
        let mut n = stream_rng(Seed(11), SeedStream::WrapperGate, 0);
        assert_eq!(early_termination_on_reset(50, 50, NoiseRate::ONE, &mut g, &mut n), Some(50));
        assert_eq!(early_termination_on_reset(1, 100, NoiseRate::ZERO, &mut g, &mut n), None);
        for _ in 0..1000 {
            let t = early_termination_on_reset(3, 7, NoiseRate::ONE, &mut g, &mut n).unwrap();
            assert!((3..=7).contains(&t));
        }
        assert!(early_termination_per_step(NoiseRate::ONE, &mut g));
        assert!(!early_termination_per_step(NoiseRate::ZERO, &mut g));
    }
}
