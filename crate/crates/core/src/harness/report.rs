use std::fs;
use std::path::{Path, PathBuf};

use super::record::RunRecord;
use super::summary::SummaryTable;
use super::HarnessError;

/// Paths written by [`report`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReportFiles {
    pub summary_csv: PathBuf,
    pub summary_json: PathBuf,
    pub consistency_csv: PathBuf,
    pub curves: Vec<PathBuf>,
}

const NA: &str = "N/A";

fn fixed1(v: f64) -> String {
    let s = format!("{v:.1}");
    // avoid "-0.0" for values that round to zero
    if s == "-0.0" {
        "0.0".into()
    } else {
        s
    }
}

fn opt1(v: Option<f64>) -> String {
    v.map_or_else(|| NA.to_owned(), fixed1)
}

fn rate2(v: Option<f64>) -> String {
    v.map_or_else(String::new, |r| format!("{r:.2}"))
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("records serialize");
    out.push(b'\n');
    out
}

/// Write one JSON file per record plus a `runs.csv` index into `dir`.
pub fn write_records(dir: &Path, records: &[RunRecord]) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut paths = Vec::with_capacity(records.len() + 1);
    for r in records {
        let path = dir.join(r.file_name());
        write(&path, &json_bytes(r))?;
        paths.push(path);
    }
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.fingerprint.clone(),
                r.env.clone(),
                r.agent.clone(),
                r.wrapper.clone(),
                rate2(r.rate),
                r.seed.to_string(),
                fixed1(r.final_return),
                r.curve.train_episodes.to_string(),
                r.curve.train_steps.to_string(),
                r.train_log.steps_perturbed.to_string(),
                r.train_log.steps_total.to_string(),
                r.train_log.episodes_perturbed.to_string(),
                r.train_log.episodes_total.to_string(),
            ]
        })
        .collect();
    let path = dir.join("runs.csv");
    write(
        &path,
        &csv_bytes(
            &[
                "fingerprint",
                "env",
                "agent",
                "wrapper",
                "rate",
                "seed",
                "final_return",
                "train_episodes",
                "train_steps",
                "steps_perturbed",
                "steps_total",
                "episodes_perturbed",
                "episodes_total",
            ],
            rows,
        ),
    )?;
    paths.push(path);
    Ok(paths)
}

/// Load every `run_*.json` in `dir`, ordered by file name.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let entries = fs::read_dir(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| HarnessError::io(dir, e))?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("run_") && name.ends_with(".json") {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(HarnessError::EmptyInput(dir.to_owned()));
    }
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
            let record: RunRecord = serde_json::from_str(&text).map_err(|e| HarnessError::Malformed {
                path: path.clone(),
                message: e.to_string(),
            })?;
            if record.curve.points.is_empty() {
                return Err(HarnessError::Malformed {
                    path,
                    message: "empty learning curve".into(),
                });
            }
            Ok(record)
        })
        .collect()
}

/// Aggregate the records in `input` and write summary, consistency and
/// learning-curve files into `output`.
pub fn report(input: &Path, output: &Path, threshold: f64) -> Result<(SummaryTable, ReportFiles), HarnessError> {
    let records = read_records(input)?;
    let table = SummaryTable::build(&records, threshold)?;
    fs::create_dir_all(output).map_err(|e| HarnessError::io(output, e))?;

    let summary_rows = table
        .summary
        .iter()
        .map(|r| {
            vec![
                r.env.clone(),
                r.agent.clone(),
                r.wrapper.clone(),
                rate2(r.rate),
                r.n_seeds.to_string(),
                fixed1(r.mean_return),
                fixed1(r.std_return),
                opt1(r.baseline_mean),
                opt1(r.baseline_std),
                opt1(r.pct_improvement),
                r.fingerprint.clone(),
            ]
        })
        .collect();
    let summary_csv = output.join("summary.csv");
    write(
        &summary_csv,
        &csv_bytes(
            &[
                "env",
                "agent",
                "wrapper",
                "rate",
                "n_seeds",
                "mean_return",
                "std_return_sample",
                "baseline_mean",
                "baseline_std_sample",
                "pct_improvement",
                "fingerprint",
            ],
            summary_rows,
        ),
    )?;

    let consistency_rows = table
        .consistency
        .iter()
        .map(|r| {
            vec![
                r.agent.clone(),
                r.wrapper.clone(),
                rate2(Some(r.rate)),
                r.n_envs.to_string(),
                r.n_improved.to_string(),
                fixed1(r.pct_envs_improved),
                fixed1(r.avg_pct_improvement),
                fixed1(r.std_pct_improvement),
            ]
        })
        .collect();
    let consistency_csv = output.join("consistency.csv");
    write(
        &consistency_csv,
        &csv_bytes(
            &[
                "agent",
                "wrapper",
                "rate",
                "n_envs",
                "n_improved",
                "pct_envs_improved",
                "avg_pct_improvement",
                "std_pct_improvement_population",
            ],
            consistency_rows,
        ),
    )?;

    let summary_json = output.join("summary.json");
    write(&summary_json, &json_bytes(&table))?;

    let mut curves = Vec::with_capacity(records.len());
    for r in &records {
        let rows = r
            .curve
            .points
            .iter()
            .map(|p| vec![p.progress.to_string(), fixed1(p.mean_return), fixed1(p.std_return)])
            .collect();
        let path = output.join(format!("curve_{}_{}.csv", r.fingerprint, r.seed));
        write(&path, &csv_bytes(&["progress", "mean_return", "std_return_sample"], rows))?;
        curves.push(path);
    }

    Ok((
        table,
        ReportFiles {
            summary_csv,
            summary_json,
            consistency_csv,
            curves,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_decimal_formatting() {
        assert_eq!(fixed1(20.3125), "20.3");
        assert_eq!(fixed1(-0.04), "0.0");
        assert_eq!(opt1(None), "N/A");
        assert_eq!(rate2(Some(0.1)), "0.10");
        assert_eq!(rate2(None), "");
    }

    #[test]
    fn labels_with_commas_are_quoted() {
        let bytes = csv_bytes(&["w"], vec![vec!["A(0.5, 1.5)".into()]]);
        assert_eq!(String::from_utf8(bytes).unwrap(), "w\n\"A(0.5, 1.5)\"\n");
    }
}
