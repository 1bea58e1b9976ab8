use super::config::{EarlyTerminationVariant, NoiseKind};

/// Wrapper settings used in the published experiments.
pub const PRESETS: &[NoiseKind] = &[
    NoiseKind::DropoutObservation { keep_prob: 0.1 },
    NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a: 1, b: 100 }),
    NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a: 50, b: 50 }),
    NoiseKind::MixupObservation { lambda: 0.0 },
    NoiseKind::MixupObservation { lambda: 0.5 },
    NoiseKind::NormalNoisyObservation { sigma: 0.001 },
    NoiseKind::NormalNoisyObservation { sigma: 1.0 },
    NoiseKind::NormalNoisyReward { sigma: 1.0 },
    NoiseKind::NormalNoisyReward { sigma: 0.001 },
    NoiseKind::UniformNoisyObservation {
        alpha: -0.001,
        beta: 0.001,
    },
    NoiseKind::UniformNoisyReward {
        alpha: -0.001,
        beta: 0.001,
    },
    NoiseKind::UniformScaleObservation {
        alpha: 0.5,
        beta: 1.5,
        per_dimension: false,
    },
    NoiseKind::UniformScaleObservation {
        alpha: 0.8,
        beta: 1.2,
        per_dimension: false,
    },
    NoiseKind::UniformScaleReward { alpha: 0.5, beta: 1.5 },
    NoiseKind::UniformScaleReward { alpha: 0.8, beta: 1.2 },
];

/// Look up a preset by label; whitespace is ignored, so
/// `RandomUniformScaleReward(0.5,1.5)` and `RandomUniformScaleReward (0.5, 1.5)` match.
pub fn preset(name: &str) -> Option<NoiseKind> {
    let squash = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
    let wanted = squash(name);
    PRESETS.iter().copied().find(|k| squash(&k.label()) == wanted)
}
