use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ordinal_search::harness::{
    apply_filters, load_records, run_experiment, save_records, summarize, write_audit, write_curves, write_report,
    ExperimentConfig, Filter, HarnessError,
};

#[derive(Parser)]
#[command(name = "ordinal-bench", version, about = "Ordinal bandit and tree-search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write records.csv, summary.csv and ranks.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output` key, then `results`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
    },
    /// Summarise a records CSV.
    Report {
        records: PathBuf,
        /// Directory for summary.csv and ranks.csv; prints a table when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
    },
    /// Per-step curves of cumulative deaths and running value.
    Curves {
        records: PathBuf,
        /// Output CSV; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
    },
    /// Recompute Borda tables from the records and compare with incremental updates.
    Oracle {
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
    },
}

fn parse_filters(raw: &[String]) -> Result<Vec<Filter>, HarnessError> {
    raw.iter().map(|s| s.parse()).collect()
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| HarnessError::io(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run { config, out, seed, threads, filters } => {
            let mut config = ExperimentConfig::load(&config)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let filters = parse_filters(&filters)?;
            let dir = out.or_else(|| config.output.clone().map(PathBuf::from)).unwrap_or_else(|| "results".into());
            create_dir(&dir)?;
            let records = run_experiment(&config, &filters, threads)?;
            save_records(&dir.join("records.csv"), &records)?;
            let report = write_report(&dir, &records)?;
            print!("{}", report.render());
            eprintln!("{} records written to {}", records.len(), dir.display());
        }
        Command::Report { records, out, filters } => {
            let filters = parse_filters(&filters)?;
            let records = apply_filters(load_records(&records)?, &filters);
            match out {
                Some(dir) => {
                    create_dir(&dir)?;
                    print!("{}", write_report(&dir, &records)?.render());
                }
                None => print!("{}", summarize(&records)?.render()),
            }
        }
        Command::Curves { records, out, filters } => {
            let filters = parse_filters(&filters)?;
            let records = apply_filters(load_records(&records)?, &filters);
            write_curves(output(out.as_deref())?, &records)?;
        }
        Command::Oracle { records, out, filters } => {
            let filters = parse_filters(&filters)?;
            let records = apply_filters(load_records(&records)?, &filters);
            write_audit(output(out.as_deref())?, &records)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
