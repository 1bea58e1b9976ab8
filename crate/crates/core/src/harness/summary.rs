use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::record::RunRecord;
use super::HarnessError;

pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("baseline mean is zero; improvement is undefined")]
pub struct DegenerateBaseline;

/// `100 * (noisy - baseline) / |baseline|`.
pub fn pct_improvement(baseline_mean: f64, noisy_mean: f64) -> Result<f64, DegenerateBaseline> {
    if baseline_mean == 0.0 || !baseline_mean.is_finite() {
        return Err(DegenerateBaseline);
    }
    Ok(100.0 * (noisy_mean - baseline_mean) / baseline_mean.abs())
}

/// Final returns of one (env, agent, wrapper, rate) group across seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub env: String,
    pub agent: String,
    pub wrapper: String,
    pub rate: Option<f64>,
    pub fingerprint: String,
    pub context: String,
    pub n_seeds: usize,
    pub mean_return: f64,
    /// Sample standard deviation (n - 1) across seeds.
    pub std_return: f64,
    pub baseline_mean: Option<f64>,
    pub baseline_std: Option<f64>,
    /// `None` for baseline rows, for a missing baseline, or a zero baseline mean.
    pub pct_improvement: Option<f64>,
}

/// Cross-environment view of one (agent, wrapper, rate).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub agent: String,
    pub wrapper: String,
    pub rate: f64,
    pub n_envs: usize,
    pub n_improved: usize,
    pub pct_envs_improved: f64,
    pub avg_pct_improvement: f64,
    /// Population standard deviation across environments.
    pub std_pct_improvement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryMetadata {
    pub pct_improvement: String,
    pub improved_rule: String,
    pub seed_std: String,
    pub env_std: String,
    pub threshold: f64,
}

impl SummaryMetadata {
    pub fn new(threshold: f64) -> Self {
        Self {
            pct_improvement: "100 * (noisy_mean - baseline_mean) / |baseline_mean|".into(),
            improved_rule: "pct_improvement >= 0".into(),
            seed_std: "sample (n - 1) across seeds".into(),
            env_std: "population (n) across environments".into(),
            threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub metadata: SummaryMetadata,
    pub summary: Vec<SummaryRow>,
    pub consistency: Vec<ConsistencyRow>,
}

impl SummaryTable {
    pub fn build(records: &[RunRecord], threshold: f64) -> Result<Self, HarnessError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(HarnessError::config("threshold", format!("must lie in [0, 1], got {threshold}")));
        }
        let summary = summarize(records)?;
        let consistency = consistency_table(&summary, threshold);
        Ok(Self {
            metadata: SummaryMetadata::new(threshold),
            summary,
            consistency,
        })
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub(crate) fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn rate_order(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    }
}

/// Group records by fingerprint and attach each group's baseline from the
/// same context. Rows are sorted by env, agent, context, then baseline
/// first, wrapper label and rate.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>, HarnessError> {
    let mut groups: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.fingerprint.as_str()).or_default().push(r);
    }
    let mut rows = Vec::with_capacity(groups.len());
    for (fp, group) in &groups {
        let first = group[0];
        let mut seeds: Vec<u64> = group.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        if seeds.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Malformed {
                path: fp.to_string().into(),
                message: "duplicate seed within one group".into(),
            });
        }
        if group.iter().any(|r| {
            r.context != first.context || r.wrapper != first.wrapper || r.rate != first.rate
        }) {
            return Err(HarnessError::Malformed {
                path: fp.to_string().into(),
                message: "records sharing a fingerprint disagree on context, wrapper or rate".into(),
            });
        }
        let finals: Vec<f64> = group.iter().map(|r| r.final_return).collect();
        rows.push(SummaryRow {
            env: first.env.clone(),
            agent: first.agent.clone(),
            wrapper: first.wrapper.clone(),
            rate: first.rate,
            fingerprint: fp.to_string(),
            context: first.context.clone(),
            n_seeds: group.len(),
            mean_return: mean(&finals),
            std_return: sample_std(&finals),
            baseline_mean: None,
            baseline_std: None,
            pct_improvement: None,
        });
    }

    let baselines: BTreeMap<String, (f64, f64)> = rows
        .iter()
        .filter(|r| r.rate.is_none())
        .map(|r| (r.context.clone(), (r.mean_return, r.std_return)))
        .collect();
    for row in rows.iter_mut().filter(|r| r.rate.is_some()) {
        if let Some(&(m, s)) = baselines.get(&row.context) {
            row.baseline_mean = Some(m);
            row.baseline_std = Some(s);
            row.pct_improvement = pct_improvement(m, row.mean_return).ok();
        }
    }
    rows.sort_by(|a, b| {
        (a.env.as_str(), a.agent.as_str(), a.context.as_str())
            .cmp(&(b.env.as_str(), b.agent.as_str(), b.context.as_str()))
            .then_with(|| a.rate.is_some().cmp(&b.rate.is_some()))
            .then_with(|| a.wrapper.cmp(&b.wrapper))
            .then_with(|| rate_order(a.rate, b.rate))
            .then_with(|| a.fingerprint.cmp(&b.fingerprint))
    });
    Ok(rows)
}

/// For each (agent, wrapper, rate), the share of environments where the
/// wrapper matched or beat the baseline. Only rows whose share reaches
/// `threshold` are returned.
pub fn consistency_table(rows: &[SummaryRow], threshold: f64) -> Vec<ConsistencyRow> {
    let mut groups: BTreeMap<(&str, &str, u64), Vec<f64>> = BTreeMap::new();
    for row in rows {
        if let (Some(rate), Some(pct)) = (row.rate, row.pct_improvement) {
            groups
                .entry((row.agent.as_str(), row.wrapper.as_str(), rate.to_bits()))
                .or_default()
                .push(pct);
        }
    }
    let mut out: Vec<ConsistencyRow> = groups
        .into_iter()
        .filter_map(|((agent, wrapper, rate_bits), pcts)| {
            let n_envs = pcts.len();
            let n_improved = pcts.iter().filter(|&&p| p >= 0.0).count();
            let included = n_improved as f64 >= threshold * n_envs as f64 - 1e-9;
            included.then(|| ConsistencyRow {
                agent: agent.to_owned(),
                wrapper: wrapper.to_owned(),
                rate: f64::from_bits(rate_bits),
                n_envs,
                n_improved,
                pct_envs_improved: 100.0 * n_improved as f64 / n_envs as f64,
                avg_pct_improvement: mean(&pcts),
                std_pct_improvement: population_std(&pcts),
            })
        })
        .collect();
    out.sort_by(|a, b| {
        a.agent
            .cmp(&b.agent)
            .then_with(|| a.wrapper.cmp(&b.wrapper))
            .then_with(|| a.rate.total_cmp(&b.rate))
    });
    out
}
