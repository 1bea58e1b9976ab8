use noisyenv::env::{Action, Environment, Seed, StepResult};
use noisyenv::envs::{GridWorld, GridWorldSpec, PointMass, PointMassSpec};
use noisyenv::wrappers::{
    wrap, EarlyTerminationVariant, NoiseKind, NoiseRate, WrapperConfig, WrapperSpec,
};
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = NoiseKind> {
    let range = (-2.0f64..2.0, 0.01f64..2.0).prop_map(|(a, w)| (a, a + w));
    prop_oneof![
        (0.001f64..2.0).prop_map(|sigma| NoiseKind::NormalNoisyObservation { sigma }),
        range.clone().prop_map(|(alpha, beta)| NoiseKind::UniformNoisyObservation { alpha, beta }),
        (range.clone(), any::<bool>()).prop_map(|((alpha, beta), per_dimension)| {
            NoiseKind::UniformScaleObservation {
                alpha,
                beta,
                per_dimension,
            }
        }),
        (0.0f64..=1.0).prop_map(|lambda| NoiseKind::MixupObservation { lambda }),
        (0.0f64..=1.0).prop_map(|keep_prob| NoiseKind::DropoutObservation { keep_prob }),
        (0.001f64..2.0).prop_map(|sigma| NoiseKind::NormalNoisyReward { sigma }),
        range.clone().prop_map(|(alpha, beta)| NoiseKind::UniformNoisyReward { alpha, beta }),
        range.prop_map(|(alpha, beta)| NoiseKind::UniformScaleReward { alpha, beta }),
        (1usize..30, 0usize..30).prop_map(|(a, w)| NoiseKind::EarlyTermination(
            EarlyTerminationVariant::PerEpisode { a, b: a + w }
        )),
        Just(NoiseKind::EarlyTermination(EarlyTerminationVariant::PerStep)),
    ]
}

fn grid() -> GridWorld {
    GridWorld::new(GridWorldSpec {
        horizon: 40,
        ..GridWorldSpec::default()
    })
    .unwrap()
}

/// Drive `env` with a fixed action script for `steps` steps, resetting on episode end.
fn trace(env: &mut dyn Environment, seed: u64, steps: usize) -> Vec<(Vec<f64>, Option<StepResult>)> {
    let mut out = vec![(env.reset(Some(Seed(seed))), None)];
    for t in 0..steps {
        let step = env.step(&Action::Discrete((t * 7 + t / 3) % 4)).unwrap();
        let done = step.done();
        out.push((Vec::new(), Some(step)));
        if done {
            out.push((env.reset(None), None));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_rate_is_passthrough(kind in kind_strategy(), seed in any::<u64>(), env_seed in 0u64..1000) {
        let mut wrapped = wrap(grid(), WrapperConfig::new(kind, NoiseRate::ZERO, Seed(seed))).unwrap();
        prop_assert_eq!(trace(&mut wrapped, env_seed, 300), trace(&mut grid(), env_seed, 300));
        prop_assert!(wrapped.perturbation_log().is_zero());
    }

    #[test]
    fn log_counts_are_consistent(kind in kind_strategy(), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut wrapped = wrap(grid(), WrapperConfig::new(kind, NoiseRate::new(p).unwrap(), Seed(seed))).unwrap();
        trace(&mut wrapped, 0, 400);
        let log = wrapped.perturbation_log();
        prop_assert!(log.steps_perturbed <= log.steps_total || log.steps_total == 0);
        prop_assert!(log.episodes_perturbed <= log.episodes_total || log.episodes_total == 0);
    }

    #[test]
    fn same_seed_same_stream(kind in kind_strategy(), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let config = WrapperConfig::new(kind, NoiseRate::new(p).unwrap(), Seed(seed));
        let mut a = wrap(grid(), config.clone()).unwrap();
        let mut b = wrap(grid(), config).unwrap();
        prop_assert_eq!(trace(&mut a, 3, 200), trace(&mut b, 3, 200));
    }

    #[test]
    fn each_wrapper_touches_only_its_channel(kind in kind_strategy(), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut wrapped = wrap(grid(), WrapperConfig::new(kind, NoiseRate::new(p).unwrap(), Seed(seed))).unwrap();
        let mut clean = grid();
        let mut obs_w = wrapped.reset(Some(Seed(1)));
        let mut obs_c = clean.reset(Some(Seed(1)));
        if !kind.is_observation() {
            prop_assert_eq!(&obs_w, &obs_c);
        }
        for t in 0..200usize {
            let action = Action::Discrete((t * 5 + 1) % 4);
            let sw = wrapped.step(&action).unwrap();
            let sc = clean.step(&action).unwrap();
            if kind.reward_noise().is_none() {
                prop_assert_eq!(sw.reward, sc.reward);
            }
            if !kind.is_observation() {
                prop_assert_eq!(&sw.observation, &sc.observation);
            }
            match kind {
                NoiseKind::EarlyTermination(_) => {
                    prop_assert!(sw.terminated == sc.terminated);
                    prop_assert!(sw.truncated || !sc.truncated);
                }
                _ => {
                    prop_assert_eq!(sw.terminated, sc.terminated);
                    prop_assert_eq!(sw.truncated, sc.truncated);
                }
            }
            if sw.done() {
                obs_w = wrapped.reset(Some(Seed(t as u64)));
                obs_c = clean.reset(Some(Seed(t as u64)));
                if !kind.is_observation() {
                    prop_assert_eq!(&obs_w, &obs_c);
                }
            }
        }
    }

    #[test]
    fn per_episode_cut_bounds_length(a in 1usize..60, w in 0usize..60, seed in any::<u64>()) {
        let b = a + w;
        let kind = NoiseKind::EarlyTermination(EarlyTerminationVariant::PerEpisode { a, b });
        let mut env = wrap(
            PointMass::new(PointMassSpec { horizon: 1000, ..PointMassSpec::default() }).unwrap(),
            WrapperConfig::new(kind, NoiseRate::ONE, Seed(seed)),
        )
        .unwrap();
        for episode in 0..20 {
            env.reset(Some(Seed(episode)));
            let mut len = 0;
            loop {
                len += 1;
                if env.step(&Action::Continuous(vec![0.0])).unwrap().done() {
                    break;
                }
            }
            prop_assert!(len >= a && len <= b, "length {} outside [{}, {}]", len, a, b);
        }
    }

    #[test]
    fn clipped_observations_stay_in_bounds(sigma in 0.1f64..5.0, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let kind = NoiseKind::NormalNoisyObservation { sigma };
        let mut config = WrapperConfig::new(kind, NoiseRate::new(p).unwrap(), Seed(seed));
        config.clip_to_space = true;
        let mut env = wrap(grid(), config).unwrap();
        let space = env.observation_space();
        let (lo, hi) = space.bounds().expect("gridworld observations are bounded");
        let (lo, hi) = (lo.to_vec(), hi.to_vec());
        for (obs, step) in trace(&mut env, 0, 200) {
            let o = step.map_or(obs, |s| s.observation);
            for (i, x) in o.iter().enumerate() {
                prop_assert!(*x >= lo[i] && *x <= hi[i]);
            }
        }
    }

    #[test]
    fn spec_roundtrip(kind in kind_strategy(), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let config = WrapperConfig::new(kind, NoiseRate::new(p).unwrap(), Seed(seed));
        let spec = WrapperSpec::from(config.clone());
        prop_assert_eq!(WrapperConfig::try_from(spec).unwrap(), config);
    }
}

#[test]
fn mixup_matches_recorded_raw_stream() {
    let lambda = 0.3;
    let kind = NoiseKind::MixupObservation { lambda };
    let mut wrapped = wrap(grid(), WrapperConfig::new(kind, NoiseRate::ONE, Seed(2))).unwrap();
    let mut raw = grid();
    let mut prev = raw.reset(Some(Seed(0)));
    assert_eq!(wrapped.reset(Some(Seed(0))), prev);
    for t in 0..2_000usize {
        let action = Action::Discrete((t * 3 + t / 5) % 4);
        let r = raw.step(&action).unwrap();
        let w = wrapped.step(&action).unwrap();
        for i in 0..r.observation.len() {
            let expected = lambda * r.observation[i] + (1.0 - lambda) * prev[i];
            assert!((w.observation[i] - expected).abs() <= 4.0 * f64::EPSILON * expected.abs().max(1.0));
        }
        prev = r.observation.clone();
        if r.done() {
            prev = raw.reset(None);
            assert_eq!(wrapped.reset(None), prev);
        }
    }
}
