//! `lgt`: run absolute-coordinate rigid-body scenarios and studies.

mod error;
mod output;
mod scenario;
mod study;

use clap::{Parser, Subcommand};
use error::CliError;
use output::{emit, fmt_f64, table_csv, trajectory_csv};
use scenario::Scenario;
use std::path::PathBuf;
use std::process::ExitCode;
use study::Member;

#[derive(Parser)]
#[command(name = "lgt", version, about = "Lie group integrators for rigid multibody scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; defaults to the scenario's `output_csv`, then stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the summary written to stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write its trajectory as CSV.
    Run { file: PathBuf },
    /// Global error against a reference at min(h)/10 and the fitted order.
    Convergence {
        file: PathBuf,
        /// Comma-separated step sizes in seconds.
        #[arg(long = "h", value_delimiter = ',', required = true)]
        h: Vec<f64>,
    },
    /// Run every combination and the quaternion baseline on one scenario.
    Compare {
        file: PathBuf,
        /// Comma-separated members (1a..2d, baseline); defaults to all.
        #[arg(long, value_delimiter = ',')]
        runs: Option<Vec<Member>>,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { file } => {
            let scenario = Scenario::load(file)?;
            let rec = study::run_config(&scenario, &scenario.config)?;
            let out = cli.out.clone().or_else(|| scenario.output_csv.clone());
            emit(&trajectory_csv(&rec), out.as_deref())?;
            if !cli.quiet {
                let last = rec.last();
                eprintln!(
                    "{} rows, t_end {} s, final |g| {:e}, final |A V| {:e}, max relative energy drift {:e}, max |‖Q‖−1| {}",
                    rec.rows.len(),
                    last.t,
                    last.gnorm,
                    last.gvnorm,
                    rec.max_relative_energy_drift(),
                    if last.qnorm_err.is_empty() { "n/a".into() } else { format!("{:e}", rec.max_qnorm_err()) },
                );
            }
        }
        Command::Convergence { file, h } => {
            let scenario = Scenario::load(file)?;
            let c = study::convergence(&scenario, h)?;
            let rows: Vec<Vec<String>> = c
                .h
                .iter()
                .zip(&c.error)
                .map(|(h, e)| vec![fmt_f64(*h), fmt_f64(*e), fmt_f64(c.slope), fmt_f64(c.r2)])
                .collect();
            let header = ["h_s", "global_error", "slope", "r2"].map(String::from);
            emit(&table_csv(&header, &rows), cli.out.as_deref())?;
            if !cli.quiet {
                eprintln!("combo {}: log-log slope {:.4}, R² {:.6}", scenario.config.combo, c.slope, c.r2);
            }
        }
        Command::Compare { file, runs } => {
            let scenario = Scenario::load(file)?;
            let members = runs.clone().unwrap_or_else(study::default_members);
            let c = study::compare(&scenario, &members)?;
            let mut header = vec!["run".to_string(), "max_qnorm_err".to_string()];
            header.extend(members.iter().map(|m| format!("gap_{m}")));
            let rows: Vec<Vec<String>> = members
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let mut r = vec![m.to_string(), fmt_f64(c.qnorm_err[i])];
                    r.extend(c.gaps[i].iter().map(|g| fmt_f64(*g)));
                    r
                })
                .collect();
            emit(&table_csv(&header, &rows), cli.out.as_deref())?;
            if !cli.quiet {
                let lgt_gap = members
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| matches!(m, Member::Combo(_)))
                    .flat_map(|(i, _)| {
                        let row = &c.gaps[i];
                        members
                            .iter()
                            .enumerate()
                            .filter(|(_, m)| matches!(m, Member::Combo(_)))
                            .map(move |(j, _)| row[j])
                    })
                    .fold(0.0, f64::max);
                eprintln!("max pairwise final-pose gap between combinations: {lgt_gap:e}");
                for (m, e) in members.iter().zip(&c.qnorm_err) {
                    if e.is_finite() {
                        let label = if *m == Member::Baseline { "before renormalization" } else { "no renormalization" };
                        eprintln!("{m}: max |‖Q‖−1| {e:e} ({label})");
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
