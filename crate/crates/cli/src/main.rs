use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use noisyenv::agents::AGENT_NAMES;
use noisyenv::envs::ENV_NAMES;
use noisyenv::harness::{self, ExperimentConfig, HarnessError, SummaryTable, DEFAULT_THRESHOLD};
use noisyenv::wrappers::{KIND_NAMES, PRESETS};

#[derive(Parser)]
#[command(name = "noisyenv", version, about = "Train under noise, evaluate clean, tabulate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every baseline and noisy run of an experiment config
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output`
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Sweep one wrapper hyperparameter and summarize
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Aggregate run records into summary, consistency and curve files
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Defaults to the input directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List wrapper kinds and named presets
    ListWrappers,
    /// List registered environments and agents
    ListEnvs,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn print_table(table: &SummaryTable) {
    for row in &table.summary {
        let rate = row.rate.map_or_else(|| "-".to_owned(), |r| format!("{r:.2}"));
        let pct = row.pct_improvement.map_or_else(|| "N/A".to_owned(), |p| format!("{p:+.1}%"));
        println!(
            "{:<10} {:<10} {:<45} p={:<5} {:>10.1} ± {:<8.1} {}",
            row.env, row.agent, row.wrapper, rate, row.mean_return, row.std_return, pct
        );
    }
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config, out, workers } => {
            let config = ExperimentConfig::from_path(&config)?;
            let out = out.unwrap_or_else(|| config.output.clone());
            let workers = workers.or(config.workers).unwrap_or_else(default_workers);
            let records = harness::run_experiment(&config, workers)?;
            harness::write_records(&out, &records)?;
            println!("wrote {} run records to {}", records.len(), out.display());
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
            workers,
            threshold,
        } => {
            let config = ExperimentConfig::from_path(&config)?;
            let out = out.unwrap_or_else(|| config.output.clone());
            let workers = workers.or(config.workers).unwrap_or_else(default_workers);
            let (records, _) = harness::sweep(&config, &axis, &values, workers, threshold)?;
            harness::write_records(&out, &records)?;
            let (table, _) = harness::report(&out, &out, threshold)?;
            print_table(&table);
            println!("wrote {} run records and reports to {}", records.len(), out.display());
        }
        Command::Report { input, threshold, out } => {
            let out = out.unwrap_or_else(|| input.clone());
            let (table, files) = harness::report(&input, &out, threshold)?;
            print_table(&table);
            println!(
                "wrote {}, {}, {} and {} curve files",
                files.summary_csv.display(),
                files.summary_json.display(),
                files.consistency_csv.display(),
                files.curves.len()
            );
        }
        Command::ListWrappers => {
            println!("kinds:");
            for name in KIND_NAMES {
                println!("  {name}");
            }
            println!("presets:");
            for kind in PRESETS {
                println!("  {}", kind.label());
            }
        }
        Command::ListEnvs => {
            println!("environments:");
            for (name, about) in ENV_NAMES {
                println!("  {name:<10} {about}");
            }
            println!("agents:");
            for (name, about) in AGENT_NAMES {
                println!("  {name:<10} {about}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config_error() { 2 } else { 3 })
        }
    }
}
