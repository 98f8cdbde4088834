//! `crawl`: run, sweep and plot crawl-gait scenarios.
//!
//! Exit codes: 0 when every run completed, 1 for configuration or input
//! errors, 2 when a run ended in a halt event.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crawl_core::io::{emit_log, format_sig, load_config, plot_csv, RunSummary, ScenarioConfig};
use crawl_core::sim::run_scenario;

#[derive(Parser, Debug)]
#[command(name = "crawl", version, about = "Deterministic crawl-gait scenario simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write log.csv, observer.csv, events.csv and summary.json.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `sim.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a scenario once per value of one parameter, in parallel.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// `<section.key>=<start>:<stop>:<step>` or `<section.key>=<v1>,<v2>,...`.
        #[arg(long)]
        param: String,
        /// Write each run's files into `<out>/run_<k>`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print selected columns of a log CSV as space-separated text.
    Plot {
        #[arg(long)]
        log: PathBuf,
        /// Comma-separated channel names, e.g. `t,fhat_x`.
        #[arg(long, value_delimiter = ',', required = true)]
        channels: Vec<String>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] crawl_core::io::IoError),
    #[error(transparent)]
    Sim(#[from] crawl_core::sim::SimError),
    #[error("--param: {0}")]
    Param(String),
}

/// Outcome of a command that did not fail outright.
enum Status {
    Completed,
    Halted,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Run { scenario, out, seed } => run(&scenario, &out, seed),
        Command::Sweep { scenario, param, out, seed } => sweep(&scenario, &param, out.as_deref(), seed),
        Command::Plot { log, channels } => plot(&log, &channels),
    };
    match result {
        Ok(Status::Completed) => ExitCode::SUCCESS,
        Ok(Status::Halted) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout; a closed pipe (`crawl plot ... | head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: stdout: {e}");
        }
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, CliError> {
    let mut cfg = load_config(path)?;
    if let Some(seed) = seed {
        cfg.sim.seed = seed;
    }
    Ok(cfg)
}

fn run(scenario: &Path, out: &Path, seed: Option<u64>) -> Result<Status, CliError> {
    let cfg = load(scenario, seed)?;
    let log = run_scenario(&cfg, cfg.sim.seed)?;
    let files = emit_log(&log, out)?;
    emit(&(RunSummary::from_log(&log).to_json() + "\n"));
    eprintln!("wrote {}", files.log.parent().unwrap_or(out).display());
    Ok(match &log.halt {
        Some(reason) => {
            eprintln!("halted: {reason}");
            Status::Halted
        }
        None => Status::Completed,
    })
}

/// Expands `start:stop:step` (inclusive) or a comma list into values.
fn sweep_values(range: &str) -> Result<Vec<String>, CliError> {
    if range.contains(':') {
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Param(format!("`{range}` is not start:stop:step")))?;
        let [start, stop, step] = parts[..] else {
            return Err(CliError::Param(format!("`{range}` is not start:stop:step")));
        };
        if !(step > 0.0) || stop < start {
            return Err(CliError::Param("needs step > 0 and stop >= start".into()));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| format_sig(start + k as f64 * step)).collect())
    } else {
        let values: Vec<String> = range.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(CliError::Param("no values given".into()));
        }
        Ok(values)
    }
}

fn sweep(scenario: &Path, param: &str, out: Option<&Path>, seed: Option<u64>) -> Result<Status, CliError> {
    let base = load(scenario, seed)?;
    let (path, range) = param.split_once('=').ok_or_else(|| CliError::Param("expected <path>=<range>".into()))?;
    let values = sweep_values(range)?;
    // Reject the whole sweep before running anything.
    let configs: Vec<ScenarioConfig> = values
        .iter()
        .map(|v| {
            let mut c = base.clone();
            c.set(path, v).map(|_| c)
        })
        .collect::<Result<_, _>>()?;

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(configs.len());
    let chunk = configs.len().div_ceil(workers);
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .chunks(chunk)
            .map(|batch| s.spawn(move || batch.iter().map(|c| run_scenario(c, c.sim.seed)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    });

    let mut table = format!("{path} distance min_margin grf_err_rms margin_violations touchdowns halt\n");
    let mut halted = false;
    for (k, (value, log)) in values.iter().zip(results).enumerate() {
        let log = log?;
        if let Some(dir) = out {
            emit_log(&log, &dir.join(format!("run_{k}")))?;
        }
        let s = RunSummary::from_log(&log);
        halted |= s.halt.is_some();
        table += &format!(
            "{} {} {} {} {} {} {}\n",
            value.replace(' ', "_"),
            format_sig(s.distance),
            s.min_margin.map_or("nan".into(), format_sig),
            format_sig(s.grf_err_rms),
            s.margin_violations,
            s.touchdowns,
            if s.halt.is_some() { "yes" } else { "no" },
        );
    }
    emit(&table);
    Ok(if halted { Status::Halted } else { Status::Completed })
}

fn plot(log: &Path, channels: &[String]) -> Result<Status, CliError> {
    let text = std::fs::read_to_string(log)
        .map_err(|e| crawl_core::io::IoError::Io(format!("{}: {e}", log.display())))?;
    let names: Vec<&str> = channels.iter().map(|c| c.trim()).collect();
    emit(&plot_csv(&text, &names)?);
    Ok(Status::Completed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_range_is_inclusive() {
        assert_eq!(sweep_values("0.1:0.3:0.1").unwrap(), ["0.1", "0.2", "0.3"]);
        assert_eq!(sweep_values("5:5:1").unwrap(), ["5"]);
    }

    #[test]
    fn list_range_keeps_words() {
        assert_eq!(sweep_values("on, off").unwrap(), ["on", "off"]);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        assert!(sweep_values("1:0:0.1").is_err());
        assert!(sweep_values("0:1:0").is_err());
        assert!(sweep_values("0:1").is_err());
        assert!(sweep_values(",").is_err());
    }
}
