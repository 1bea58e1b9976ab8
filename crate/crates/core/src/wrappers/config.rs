use std::fmt;

use serde::{Deserialize, Serialize};

use super::presets;
use crate::env::Seed;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid `{param}`: {message}")]
pub struct ConfigError {
    pub param: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(param: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            param: param.into(),
            message: message.into(),
        }
    }
}

/// Probability `p` that a wrapper perturbs an eligible step (or episode).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct NoiseRate(f64);

impl NoiseRate {
    pub const ZERO: NoiseRate = NoiseRate(0.0);
    pub const ONE: NoiseRate = NoiseRate(1.0);

    pub fn new(p: f64) -> Result<Self, ConfigError> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(ConfigError::new("p", format!("noise rate must lie in [0, 1], got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for NoiseRate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        NoiseRate::new(f64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EarlyTerminationVariant {
    /// With probability `p`, an episode is cut at a step drawn uniformly from `[a, b]`.
    PerEpisode { a: usize, b: usize },
    /// Every step ends the episode with probability `p`.
    PerStep,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RewardNoise {
    Normal { sigma: f64 },
    Uniform { alpha: f64, beta: f64 },
    Scale { alpha: f64, beta: f64 },
}

/// The nine augmentation types and their parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseKind {
    NormalNoisyObservation { sigma: f64 },
    UniformNoisyObservation { alpha: f64, beta: f64 },
    UniformScaleObservation { alpha: f64, beta: f64, per_dimension: bool },
    MixupObservation { lambda: f64 },
    /// `keep_prob` is the probability that a dimension survives.
    DropoutObservation { keep_prob: f64 },
    NormalNoisyReward { sigma: f64 },
    UniformNoisyReward { alpha: f64, beta: f64 },
    UniformScaleReward { alpha: f64, beta: f64 },
    EarlyTermination(EarlyTerminationVariant),
}

pub const KIND_NAMES: [&str; 9] = [
    "RandomNormalNoisyObservation",
    "RandomUniformNoisyObservation",
    "RandomUniformScaleObservation",
    "RandomMixupObservation",
    "RandomDropoutObservation",
    "RandomNormalNoisyReward",
    "RandomUniformNoisyReward",
    "RandomUniformScaleReward",
    "RandomEarlyTermination",
];

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NormalNoisyObservation { .. } => KIND_NAMES[0],
            Self::UniformNoisyObservation { .. } => KIND_NAMES[1],
            Self::UniformScaleObservation { .. } => KIND_NAMES[2],
            Self::MixupObservation { .. } => KIND_NAMES[3],
            Self::DropoutObservation { .. } => KIND_NAMES[4],
            Self::NormalNoisyReward { .. } => KIND_NAMES[5],
            Self::UniformNoisyReward { .. } => KIND_NAMES[6],
            Self::UniformScaleReward { .. } => KIND_NAMES[7],
            Self::EarlyTermination(_) => KIND_NAMES[8],
        }
    }

    pub fn reward_noise(&self) -> Option<RewardNoise> {
        match *self {
            Self::NormalNoisyReward { sigma } => Some(RewardNoise::Normal { sigma }),
            Self::UniformNoisyReward { alpha, beta } => Some(RewardNoise::Uniform { alpha, beta }),
            Self::UniformScaleReward { alpha, beta } => Some(RewardNoise::Scale { alpha, beta }),
            _ => None,
        }
    }

    pub fn is_observation(&self) -> bool {
        matches!(
            self,
            Self::NormalNoisyObservation { .. }
                | Self::UniformNoisyObservation { .. }
                | Self::UniformScaleObservation { .. }
                | Self::MixupObservation { .. }
                | Self::DropoutObservation { .. }
        )
    }

    /// Names of the tunable hyperparameters of this kind.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            Self::NormalNoisyObservation { .. } | Self::NormalNoisyReward { .. } => &["sigma"],
            Self::UniformNoisyObservation { .. }
            | Self::UniformNoisyReward { .. }
            | Self::UniformScaleReward { .. } => &["alpha", "beta"],
            Self::UniformScaleObservation { .. } => &["alpha", "beta"],
            Self::MixupObservation { .. } => &["lambda"],
            Self::DropoutObservation { .. } => &["keep_prob"],
            Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { .. }) => &["a", "b"],
            Self::EarlyTermination(EarlyTerminationVariant::PerStep) => &[],
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(name: &str, v: f64) -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::new(name, format!("must be finite and > 0, got {v}")))
            }
        }
        fn unit(name: &str, v: f64) -> Result<(), ConfigError> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::new(name, format!("must lie in [0, 1], got {v}")))
            }
        }
        fn ordered(alpha: f64, beta: f64) -> Result<(), ConfigError> {
            if !alpha.is_finite() {
                return Err(ConfigError::new("alpha", format!("must be finite, got {alpha}")));
            }
            if !beta.is_finite() {
                return Err(ConfigError::new("beta", format!("must be finite, got {beta}")));
            }
            if alpha < beta {
                Ok(())
            } else {
                Err(ConfigError::new(
                    "alpha",
                    format!("alpha must be < beta, got alpha = {alpha}, beta = {beta}"),
                ))
            }
        }
        match *self {
            Self::NormalNoisyObservation { sigma } | Self::NormalNoisyReward { sigma } => {
                positive("sigma", sigma)
            }
            Self::UniformNoisyObservation { alpha, beta }
            | Self::UniformScaleObservation { alpha, beta, .. }
            | Self::UniformNoisyReward { alpha, beta }
            | Self::UniformScaleReward { alpha, beta } => ordered(alpha, beta),
            Self::MixupObservation { lambda } => unit("lambda", lambda),
            Self::DropoutObservation { keep_prob } => unit("keep_prob", keep_prob),
            Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, b }) => {
                if a == 0 {
                    Err(ConfigError::new("a", "termination step must be >= 1"))
                } else if a > b {
                    Err(ConfigError::new("a", format!("a must be <= b, got a = {a}, b = {b}")))
                } else {
                    Ok(())
                }
            }
            Self::EarlyTermination(EarlyTerminationVariant::PerStep) => Ok(()),
        }
    }

    /// Human-readable name with parameters, e.g. `RandomUniformScaleReward(0.5, 1.5)`.
    pub fn label(&self) -> String {
        let params = match *self {
            Self::NormalNoisyObservation { sigma } | Self::NormalNoisyReward { sigma } => num(sigma),
            Self::UniformNoisyObservation { alpha, beta }
            | Self::UniformNoisyReward { alpha, beta }
            | Self::UniformScaleReward { alpha, beta }
            | Self::UniformScaleObservation {
                alpha,
                beta,
                per_dimension: false,
            } => format!("{}, {}", num(alpha), num(beta)),
            Self::UniformScaleObservation {
                alpha,
                beta,
                per_dimension: true,
            } => format!("{}, {}, per-dim", num(alpha), num(beta)),
            Self::MixupObservation { lambda } => num(lambda),
            Self::DropoutObservation { keep_prob } => num(keep_prob),
            Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, b }) if a == b => {
                a.to_string()
            }
            Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, b }) => {
                format!("{a}, {b}")
            }
            Self::EarlyTermination(EarlyTerminationVariant::PerStep) => "per-step".into(),
        };
        format!("{}({params})", self.name())
    }

    /// Replace one real-valued hyperparameter, as used by sweeps.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<NoiseKind, ConfigError> {
        let mut kind = *self;
        let unknown = || {
            ConfigError::new(
                name,
                format!("{} has no parameter `{name}` (expected one of {:?})", self.name(), self.parameter_names()),
            )
        };
        let as_step = |v: f64| -> Result<usize, ConfigError> {
            if v >= 1.0 && v.fract() == 0.0 && v < 1e12 {
                Ok(v as usize)
            } else {
                Err(ConfigError::new(name, format!("must be a positive integer, got {v}")))
            }
        };
        match (&mut kind, name) {
            (Self::NormalNoisyObservation { sigma }, "sigma")
            | (Self::NormalNoisyReward { sigma }, "sigma") => *sigma = value,
            (Self::UniformNoisyObservation { alpha, .. }, "alpha")
            | (Self::UniformScaleObservation { alpha, .. }, "alpha")
            | (Self::UniformNoisyReward { alpha, .. }, "alpha")
            | (Self::UniformScaleReward { alpha, .. }, "alpha") => *alpha = value,
            (Self::UniformNoisyObservation { beta, .. }, "beta")
            | (Self::UniformScaleObservation { beta, .. }, "beta")
            | (Self::UniformNoisyReward { beta, .. }, "beta")
            | (Self::UniformScaleReward { beta, .. }, "beta") => *beta = value,
            (Self::MixupObservation { lambda }, "lambda") => *lambda = value,
            (Self::DropoutObservation { keep_prob }, "keep_prob") => *keep_prob = value,
            (Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, .. }), "a") => {
                *a = as_step(value)?
            }
            (Self::EarlyTermination(EarlyTerminationVariant::PerEpisode { b, .. }), "b") => {
                *b = as_step(value)?
            }
            _ => return Err(unknown()),
        }
        Ok(kind)
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.1}")
    } else if v.abs() >= 1e-6 && v.abs() < 1e15 {
        let s = format!("{v:.10}");
        s.trim_end_matches('0').to_owned()
    } else {
        format!("{v}")
    }
}

/// A fully validated wrapper configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WrapperSpec", into = "WrapperSpec")]
pub struct WrapperConfig {
    pub kind: NoiseKind,
    pub rate: NoiseRate,
    pub seed: Seed,
    /// Clamp perturbed observations into the inner observation box.
    pub clip_to_space: bool,
    /// Report early-termination cuts as `terminated` instead of `truncated`.
    pub treat_as_terminal: bool,
}

impl WrapperConfig {
    pub fn new(kind: NoiseKind, rate: NoiseRate, seed: Seed) -> Self {
        Self {
            kind,
            rate,
            seed,
            clip_to_space: false,
            treat_as_terminal: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.kind.validate()
    }

    pub fn with_rate(&self, rate: NoiseRate) -> Self {
        Self { rate, ..self.clone() }
    }
}

/// Flat key/value form of a wrapper configuration, as written in config files.
///
/// Either `kind` plus its parameters, or a `preset` name such as
/// `"RandomUniformScaleReward(0.5, 1.5)"`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrapperSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(alias = "eta", skip_serializing_if = "Option::is_none")]
    pub keep_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_dimension: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip_to_space: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub treat_as_terminal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl WrapperSpec {
    /// Resolve into a [`NoiseKind`] without looking at `p`, `seed` or flags.
    pub fn kind(&self) -> Result<NoiseKind, ConfigError> {
        let kind = match (&self.kind, &self.preset) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("preset", "give either `kind` or `preset`, not both"))
            }
            (None, None) => return Err(ConfigError::new("kind", "missing wrapper kind")),
            (None, Some(preset)) => {
                let given = self.parameter_keys();
                if let Some(k) = given.first() {
                    return Err(ConfigError::new(*k, "cannot override parameters of a preset"));
                }
                presets::preset(preset).ok_or_else(|| {
                    ConfigError::new("preset", format!("unknown preset `{preset}`"))
                })?
            }
            (Some(kind), None) => self.kind_from_parts(kind)?,
        };
        kind.validate()?;
        Ok(kind)
    }

    fn parameter_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        let mut push = |set: bool, k| {
            if set {
                keys.push(k)
            }
        };
        push(self.sigma.is_some(), "sigma");
        push(self.alpha.is_some(), "alpha");
        push(self.beta.is_some(), "beta");
        push(self.lambda.is_some(), "lambda");
        push(self.keep_prob.is_some(), "keep_prob");
        push(self.a.is_some(), "a");
        push(self.b.is_some(), "b");
        push(self.variant.is_some(), "variant");
        push(self.per_dimension.is_some(), "per_dimension");
        keys
    }

    fn kind_from_parts(&self, kind: &str) -> Result<NoiseKind, ConfigError> {
        fn need<T: Copy>(v: Option<T>, name: &str, kind: &str) -> Result<T, ConfigError> {
            v.ok_or_else(|| ConfigError::new(name, format!("required by {kind}")))
        }
        let (parsed, allowed): (NoiseKind, &[&str]) = match kind {
            "RandomNormalNoisyObservation" => (
                NoiseKind::NormalNoisyObservation {
                    sigma: need(self.sigma, "sigma", kind)?,
                },
                &["sigma"],
            ),
            "RandomUniformNoisyObservation" => (
                NoiseKind::UniformNoisyObservation {
                    alpha: need(self.alpha, "alpha", kind)?,
                    beta: need(self.beta, "beta", kind)?,
                },
                &["alpha", "beta"],
            ),
            "RandomUniformScaleObservation" => (
                NoiseKind::UniformScaleObservation {
                    alpha: need(self.alpha, "alpha", kind)?,
                    beta: need(self.beta, "beta", kind)?,
                    per_dimension: self.per_dimension.unwrap_or(false),
                },
                &["alpha", "beta", "per_dimension"],
            ),
            "RandomMixupObservation" => (
                NoiseKind::MixupObservation {
                    lambda: need(self.lambda, "lambda", kind)?,
                },
                &["lambda"],
            ),
            "RandomDropoutObservation" => (
                NoiseKind::DropoutObservation {
                    keep_prob: need(self.keep_prob, "keep_prob", kind)?,
                },
                &["keep_prob"],
            ),
            "RandomNormalNoisyReward" => (
                NoiseKind::NormalNoisyReward {
                    sigma: need(self.sigma, "sigma", kind)?,
                },
                &["sigma"],
            ),
            "RandomUniformNoisyReward" => (
                NoiseKind::UniformNoisyReward {
                    alpha: need(self.alpha, "alpha", kind)?,
                    beta: need(self.beta, "beta", kind)?,
                },
                &["alpha", "beta"],
            ),
            "RandomUniformScaleReward" => (
                NoiseKind::UniformScaleReward {
                    alpha: need(self.alpha, "alpha", kind)?,
                    beta: need(self.beta, "beta", kind)?,
                },
                &["alpha", "beta"],
            ),
            "RandomEarlyTermination" => match self.variant.as_deref().unwrap_or("per_episode") {
                "per_episode" => (
                    NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode {
                        a: need(self.a, "a", kind)?,
                        b: need(self.b, "b", kind)?,
                    }),
                    &["a", "b", "variant"],
                ),
                "per_step" => (
                    NoiseKind::EarlyTermination(EarlyTerminationVariant::PerStep),
                    &["variant"],
                ),
                other => {
                    return Err(ConfigError::new(
                        "variant",
                        format!("expected `per_episode` or `per_step`, got `{other}`"),
                    ))
                }
            },
            other => {
                return Err(ConfigError::new(
                    "kind",
                    format!("unknown wrapper kind `{other}` (see list-wrappers)"),
                ))
            }
        };
        if let Some(extra) = self.parameter_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(ConfigError::new(extra, format!("does not apply to {kind}")));
        }
        Ok(parsed)
    }
}

impl TryFrom<WrapperSpec> for WrapperConfig {
    type Error = ConfigError;

    fn try_from(spec: WrapperSpec) -> Result<Self, ConfigError> {
        let kind = spec.kind()?;
        let rate = NoiseRate::new(spec.p.unwrap_or(1.0))?;
        Ok(WrapperConfig {
            kind,
            rate,
            seed: Seed(spec.seed.unwrap_or(0)),
            clip_to_space: spec.clip_to_space.unwrap_or(false),
            treat_as_terminal: spec.treat_as_terminal.unwrap_or(false),
        })
    }
}

impl From<WrapperConfig> for WrapperSpec {
    fn from(c: WrapperConfig) -> Self {
        let mut spec = WrapperSpec {
            kind: Some(c.kind.name().to_owned()),
            p: Some(c.rate.value()),
            seed: Some(c.seed.0),
            clip_to_space: Some(c.clip_to_space),
            treat_as_terminal: Some(c.treat_as_terminal),
            ..Default::default()
        };
        match c.kind {
            NoiseKind::NormalNoisyObservation { sigma } | NoiseKind::NormalNoisyReward { sigma } => {
                spec.sigma = Some(sigma)
            }
            NoiseKind::UniformNoisyObservation { alpha, beta }
            | NoiseKind::UniformNoisyReward { alpha, beta }
            | NoiseKind::UniformScaleReward { alpha, beta } => {
                spec.alpha = Some(alpha);
                spec.beta = Some(beta);
            }
            NoiseKind::UniformScaleObservation {
                alpha,
                beta,
                per_dimension,
            } => {
                spec.alpha = Some(alpha);
                spec.beta = Some(beta);
                spec.per_dimension = Some(per_dimension);
            }
            NoiseKind::MixupObservation { lambda } => spec.lambda = Some(lambda),
            NoiseKind::DropoutObservation { keep_prob } => spec.keep_prob = Some(keep_prob),
            NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, b }) => {
                spec.variant = Some("per_episode".into());
                spec.a = Some(a);
                spec.b = Some(b);
            }
            NoiseKind::EarlyTermination(EarlyTerminationVariant::PerStep) => {
                spec.variant = Some("per_step".into());
            }
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<WrapperConfig, String> {
        toml::from_str::<WrapperConfig>(text).map_err(|e| e.to_string())
    }

    #[test]
    fn noise_rate_bounds() {
        assert!(NoiseRate::new(0.0).is_ok());
        assert!(NoiseRate::new(1.0).is_ok());
        assert!(NoiseRate::new(1.01).is_err());
        assert!(NoiseRate::new(-0.1).is_err());
        assert!(NoiseRate::new(f64::NAN).is_err());
    }

    #[test]
    fn parse_every_kind() {
        let cases = [
            ("kind = 'RandomNormalNoisyObservation'\nsigma = 0.001", "RandomNormalNoisyObservation(0.001)"),
            ("kind = 'RandomUniformNoisyObservation'\nalpha = -0.001\nbeta = 0.001", "RandomUniformNoisyObservation(-0.001, 0.001)"),
            ("kind = 'RandomUniformScaleObservation'\nalpha = 0.5\nbeta = 1.5\nper_dimension = true", "RandomUniformScaleObservation(0.5, 1.5, per-dim)"),
            ("kind = 'RandomMixupObservation'\nlambda = 0.0", "RandomMixupObservation(0.0)"),
            ("kind = 'RandomDropoutObservation'\nkeep_prob = 0.1", "RandomDropoutObservation(0.1)"),
            ("kind = 'RandomDropoutObservation'\neta = 0.1", "RandomDropoutObservation(0.1)"),
            ("kind = 'RandomNormalNoisyReward'\nsigma = 1.0", "RandomNormalNoisyReward(1.0)"),
            ("kind = 'RandomUniformNoisyReward'\nalpha = -0.001\nbeta = 0.001", "RandomUniformNoisyReward(-0.001, 0.001)"),
            ("kind = 'RandomUniformScaleReward'\nalpha = 0.8\nbeta = 1.2", "RandomUniformScaleReward(0.8, 1.2)"),
            ("kind = 'RandomEarlyTermination'\na = 50\nb = 50", "RandomEarlyTermination(50)"),
            ("kind = 'RandomEarlyTermination'\na = 1\nb = 100", "RandomEarlyTermination(1, 100)"),
            ("kind = 'RandomEarlyTermination'\nvariant = 'per_step'", "RandomEarlyTermination(per-step)"),
        ];
        for (text, label) in cases {
            let config = parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            assert_eq!(config.kind.label(), label);
            assert_eq!(config.rate, NoiseRate::ONE);
        }
    }

    #[test]
    fn errors_name_the_parameter() {
        let cases = [
            ("kind = 'RandomNormalNoisyObservation'\nsigma = 0.0", "`sigma`"),
            ("kind = 'RandomNormalNoisyObservation'", "`sigma`"),
            ("kind = 'RandomUniformNoisyReward'\nalpha = 1.0\nbeta = 1.0", "`alpha`"),
            ("kind = 'RandomMixupObservation'\nlambda = 1.5", "`lambda`"),
            ("kind = 'RandomDropoutObservation'\nkeep_prob = -0.1", "`keep_prob`"),
            ("kind = 'RandomEarlyTermination'\na = 0\nb = 3", "`a`"),
            ("kind = 'RandomEarlyTermination'\na = 5\nb = 3", "`a`"),
            ("kind = 'RandomEarlyTermination'\nvariant = 'sometimes'", "`variant`"),
            ("kind = 'RandomMixupObservation'\nlambda = 0.5\nsigma = 1.0", "`sigma`"),
            ("kind = 'RandomMixupObservation'\nlambda = 0.5\np = 2.0", "[0, 1]"),
            ("kind = 'Nope'", "`kind`"),
            ("preset = 'RandomUniformScaleReward(0.5, 1.5)'\nalpha = 0.1", "`alpha`"),
            ("preset = 'Nope(1)'", "`preset`"),
        ];
        for (text, needle) in cases {
            let err = parse(text).expect_err(text);
            assert!(err.contains(needle), "{text}: {err}");
        }
    }

    #[test]
    fn preset_with_rate_and_seed() {
        let c = parse("preset = 'RandomUniformScaleReward(0.5,1.5)'\np = 0.05\nseed = 9").unwrap();
        assert_eq!(c.kind, NoiseKind::UniformScaleReward { alpha: 0.5, beta: 1.5 });
        assert_eq!(c.rate.value(), 0.05);
        assert_eq!(c.seed, Seed(9));
    }

    #[test]
    fn json_roundtrip_uses_flat_keys() {
        let c = WrapperConfig::new(
            NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a: 1, b: 100 }),
            NoiseRate::new(0.2).unwrap(),
            Seed(3),
        );
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["kind"], "RandomEarlyTermination");
        assert_eq!(json["a"], 1);
        let back: WrapperConfig = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn with_parameter_sweeps() {
        let k = NoiseKind::UniformScaleReward { alpha: 0.5, beta: 1.5 };
        let k2 = k.with_parameter("beta", 1.2).unwrap();
        assert_eq!(k2, NoiseKind::UniformScaleReward { alpha: 0.5, beta: 1.2 });
        assert!(k.with_parameter("sigma", 1.0).is_err());
        let et = NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a: 1, b: 2 });
        assert!(et.with_parameter("b", 2.5).is_err());
        assert!(et.with_parameter("b", 7.0).is_ok());
    }
}
