//! File formats and command-line front end for `wbcb-core`.
//!
//! Commands write their artifacts (codebook JSON, CSV tables) to the paths
//! given and a short human-readable summary to the supplied writer.
//! Exit codes: 0 success, 1 invalid configuration or codebook file, 2 I/O,
//! 3 solver failure or failed self-check.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod config;
mod error;
pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use wbcb_core::codebook::{design, evaluate, sweep, BeamsRule, EvaluationMode, SweepKind};
use wbcb_core::narrowband::narrowband_codebook;
use wbcb_core::selfcheck::run_self_checks;
use wbcb_core::zones::prop3_upper_bound;
use wbcb_core::{Codebook, SystemConfig};

pub use config::RunConfig;
pub use error::CliError;
pub use format::{codebook_from_json, codebook_to_json, LoadedCodebook};

#[derive(Debug, Parser)]
#[command(name = "wbcb", version, about = "Wideband analog beamforming codebook design")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Grid,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Narrowband,
    Wideband,
    Bound,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design a wideband codebook and write it as JSON.
    Design {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the narrowband array-response codebook as JSON.
    Baseline {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a codebook file.
    Eval {
        codebook: PathBuf,
        #[arg(long, value_enum, default_value = "grid")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-angle results as `phi_deg,gain,best_beam`.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Take `n_freq` and `n_angle` from this run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate worst cases over element counts and bandwidths.
    Sweep {
        config: PathBuf,
        /// Element counts: `a,b,c` or `start:end:step`.
        #[arg(long)]
        n_range: String,
        /// Bandwidths in GHz: `a,b,c` or `start:end:step`.
        #[arg(long)]
        b_range: String,
        #[arg(long, value_enum)]
        what: What,
        /// Output table `N,B_GHz,worst_case,bound`; standard output if absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Use `L = k·N` instead of the configured `l`.
        #[arg(long)]
        l_per_n: Option<usize>,
    },
    /// Run the numerical self-checks.
    Validate { config: PathBuf },
}

/// Parses `a,b,c` or `start:end:step` (inclusive).
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("malformed range {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, end, step] => {
            let (a, b, s): (f64, f64, f64) = (
                start.trim().parse().map_err(|_| bad())?,
                end.trim().parse().map_err(|_| bad())?,
                step.trim().parse().map_err(|_| bad())?,
            );
            if !(s > 0.0) || !(b >= a) {
                return Err(bad());
            }
            let n = ((b - a) / s + 1e-9).floor() as usize;
            (0..=n).map(|k| a + k as f64 * s).collect()
        }
        [list] => list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?,
        _ => return Err(bad()),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(values)
}

fn element_counts(text: &str) -> Result<Vec<usize>, CliError> {
    parse_range(text)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::Config(format!("element count {v} is not a positive integer")))
            }
        })
        .collect()
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn solver_err(e: wbcb_core::Error) -> CliError {
    CliError::Solver(e.to_string())
}

fn load_codebook(path: &Path) -> Result<LoadedCodebook, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    codebook_from_json(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Runs one command, printing its summary to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Design { config, out: path } => cmd_design(&config, &path, out),
        Command::Baseline { config, out: path } => cmd_baseline(&config, &path, out),
        Command::Eval {
            codebook,
            mode,
            seed,
            csv,
            config,
        } => cmd_eval(&codebook, mode, seed, csv.as_deref(), config.as_deref(), out),
        Command::Sweep {
            config,
            n_range,
            b_range,
            what,
            csv,
            l_per_n,
        } => cmd_sweep(&config, &n_range, &b_range, what, csv.as_deref(), l_per_n, out),
        Command::Validate { config } => cmd_validate(&config, out),
    }
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
}

fn print_warnings(cfg: &SystemConfig) {
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
}

fn report_codebook(cfg: &SystemConfig, cb: &Codebook, started: Instant, out: &mut dyn Write) -> Result<(), CliError> {
    let rep = evaluate(cfg, cb, EvaluationMode::Grid).map_err(solver_err)?;
    say(out, format_args!("delta_omega {:.9}", cb.partition.delta_omega))?;
    say(out, format_args!("upper bound {:.9}", prop3_upper_bound(&cb.partition)))?;
    say(
        out,
        format_args!(
            "worst case {:.9} at {:.6} deg",
            rep.worst_case.gain,
            rep.worst_case.phi.to_degrees()
        ),
    )?;
    say(out, format_args!("wall time {:.3} s", started.elapsed().as_secs_f64()))
}

pub fn cmd_design(config: &Path, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let run = RunConfig::load(config)?;
    let (cfg, solver) = (run.system()?, run.solver()?);
    print_warnings(&cfg);
    let d = design(&cfg, &solver).map_err(solver_err)?;
    write_file(path, &codebook_to_json(&cfg, &d.codebook))?;
    report_codebook(&cfg, &d.codebook, started, out)
}

pub fn cmd_baseline(config: &Path, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let run = RunConfig::load(config)?;
    let cfg = run.system()?;
    let cb = narrowband_codebook(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    write_file(path, &codebook_to_json(&cfg, &cb))?;
    report_codebook(&cfg, &cb, started, out)
}

pub fn cmd_eval(
    codebook: &Path,
    mode: Mode,
    seed: u64,
    csv_path: Option<&Path>,
    config: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load_codebook(codebook)?;
    let mut cfg = loaded.system;
    if let Some(p) = config {
        let run = RunConfig::load(p)?;
        cfg.freq_points = run.n_freq;
        cfg.angle_points = run.n_angle;
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let mode = match mode {
        Mode::Grid => EvaluationMode::Grid,
        Mode::Mc => EvaluationMode::MonteCarlo { seed },
    };
    let rep = evaluate(&cfg, &loaded.codebook, mode).map_err(solver_err)?;
    if let Some(p) = csv_path {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(["phi_deg", "gain", "best_beam"])?;
        for r in &rep.per_angle {
            w.write_record([
                format::csv_float(r.phi.to_degrees()),
                format::csv_float(r.gain),
                r.best_beam.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        write_file(p, &bytes)?;
    }
    say(
        out,
        format_args!(
            "worst case {:.9} at {:.6} deg over {} angles",
            rep.worst_case.gain,
            rep.worst_case.phi.to_degrees(),
            rep.per_angle.len()
        ),
    )
}

pub fn cmd_sweep(
    config: &Path,
    n_range: &str,
    b_range: &str,
    what: What,
    csv_path: Option<&Path>,
    l_per_n: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let run = RunConfig::load(config)?;
    let (base, solver) = (run.system()?, run.solver()?);
    let ns = element_counts(n_range)?;
    let bs: Vec<f64> = parse_range(b_range)?.into_iter().map(|g| g * 1e9).collect();
    let rule = match l_per_n {
        Some(0) => return Err(CliError::Config("--l-per-n must be positive".into())),
        Some(k) => BeamsRule::PerElement(k),
        None => BeamsRule::Fixed(base.beams),
    };
    let kind = match what {
        What::Narrowband => SweepKind::Narrowband,
        What::Wideband => SweepKind::Wideband,
        What::Bound => SweepKind::Bound,
    };
    let rows = sweep(&base, &solver, &ns, &bs, rule, kind).map_err(|e| match e {
        wbcb_core::Error::InvalidConfig(_) => CliError::Config(e.to_string()),
        other => solver_err(other),
    })?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["N", "B_GHz", "worst_case", "bound"])?;
    for r in &rows {
        w.write_record([
            r.elements.to_string(),
            format::csv_float(r.bandwidth_hz / 1e9),
            format::csv_float(r.worst_case),
            format::csv_float(r.bound),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    match csv_path {
        Some(p) => {
            write_file(p, &bytes)?;
            say(out, format_args!("{} rows written to {}", rows.len(), p.display()))
        }
        None => out.write_all(&bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn cmd_validate(config: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let run = RunConfig::load(config)?;
    let (cfg, solver) = (run.system()?, run.solver()?);
    let checks = run_self_checks(&cfg, &solver).map_err(solver_err)?;
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        say(out, format_args!("{tag} {}: {}", c.name, c.detail))?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}
