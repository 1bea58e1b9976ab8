use super::config::ExperimentConfig;
use super::record::RunRecord;
use super::run::{plan_runs, run_plan, RunSpec};
use super::summary::SummaryTable;
use super::HarnessError;

/// Runs for a sweep of wrapper hyperparameter `axis` over `values`: one
/// shared set of baselines, then every value crossed with every rate and
/// seed. Coupling rules from the config are applied to each value.
pub fn sweep_plan(config: &ExperimentConfig, axis: &str, values: &[f64]) -> Result<Vec<RunSpec>, HarnessError> {
    let wrapper = config
        .wrapper
        .as_ref()
        .ok_or_else(|| HarnessError::config("wrapper", "a sweep needs a [wrapper] section"))?;
    let names = wrapper.kind.parameter_names();
    if !names.contains(&axis) {
        return Err(HarnessError::UnknownAxis {
            axis: axis.to_owned(),
            kind: wrapper.kind.name().to_owned(),
            expected: names.iter().map(|s| s.to_string()).collect(),
        });
    }
    if values.is_empty() {
        return Err(HarnessError::config("values", "sweep needs at least one value"));
    }
    for c in &config.couplings {
        if c.param == axis {
            return Err(HarnessError::config("sweep.couple", format!("`{axis}` is the sweep axis")));
        }
        if !names.contains(&c.param.as_str()) {
            return Err(HarnessError::config(
                "sweep.couple",
                format!("{} has no parameter `{}`", wrapper.kind.name(), c.param),
            ));
        }
    }

    let mut plan: Vec<RunSpec> = plan_runs(config)
        .into_iter()
        .filter(|s| s.wrapper.is_none())
        .collect();
    for &v in values {
        let mut kind = wrapper.kind.with_parameter(axis, v)?;
        for c in &config.couplings {
            kind = kind.with_parameter(&c.param, c.value(v))?;
        }
        kind.validate()?;
        for &rate in &config.noise_rates {
            for &seed in &config.seeds {
                let mut w = wrapper.with_rate(rate);
                w.kind = kind;
                plan.push(RunSpec { seed, wrapper: Some(w) });
            }
        }
    }
    Ok(plan)
}

/// Execute a sweep and summarize it.
pub fn sweep(
    config: &ExperimentConfig,
    axis: &str,
    values: &[f64],
    workers: usize,
    threshold: f64,
) -> Result<(Vec<RunRecord>, SummaryTable), HarnessError> {
    let plan = sweep_plan(config, axis, values)?;
    let records = run_plan(config, &plan, workers)?;
    let table = SummaryTable::build(&records, threshold)?;
    Ok((records, table))
}
