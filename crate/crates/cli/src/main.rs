mod config;
mod error;
mod examples;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;
use varlp::conditions::{run_check, ConditionReport};
use varlp::norms::{luxemburg_norm, NormResult};
use varlp::operators::{maximal, operator_norm_probe, ProbedOperator};
use varlp::rearrange::{rearrange, RearrangementProfile};
use varlp::GridFunction;

use config::{Cli, Command, Format, GridArgs, OutputArgs, RunConfig};
use error::{combined_verdict, verdict_exit_code, CliError, CliResult};
use output::{fmt_f, sink, write_json, write_reports_csv, write_table, ScanOutput};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let code = init_threads().and_then(|()| run(cli.command));
    match code {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("varlp-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("VARLP_THREADS") else { return Ok(()) };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("VARLP_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::Check { condition, run } => cmd_check(RunConfig::from_args(condition, &run)?),
        Command::Scan { condition, run } => cmd_scan(RunConfig::from_args(condition, &run)?),
        Command::Examples { m, output } => cmd_examples(m, &output),
        Command::Rearrange { input, output } => cmd_rearrange(&input, &output),
        Command::Norm { input, tol, output } => cmd_norm(&input, tol, &output),
        Command::Maximal { input, window_cap, probe_trials, output } => cmd_maximal(&input, window_cap, probe_trials, &output),
    }
}

fn cmd_check(cfg: RunConfig) -> CliResult<u8> {
    let [params] = cfg.params[..] else {
        return Err(CliError::Config("check takes a single value per parameter; use scan for grids".into()));
    };
    let report = run_check(cfg.condition, &cfg.exponent, &params, &cfg.probe, &cfg.rule)?.with_seed(cfg.seed);
    let mut w = sink(&cfg.out)?;
    match cfg.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => write_reports_csv(&mut *w, cfg.seed, &[(report.condition.clone(), &report)])?,
    }
    eprintln!(
        "{}: {} {} (aggregate {:e})",
        cfg.exponent_path.display(),
        report.condition,
        report.verdict.as_str(),
        report.aggregate
    );
    Ok(verdict_exit_code(report.verdict))
}

fn cmd_scan(cfg: RunConfig) -> CliResult<u8> {
    let reports: Vec<ConditionReport> = cfg
        .params
        .par_iter()
        .map(|p| run_check(cfg.condition, &cfg.exponent, p, &cfg.probe, &cfg.rule).map(|r| r.with_seed(cfg.seed)))
        .collect::<Result<_, _>>()?;
    let scan = ScanOutput::from_reports(cfg.condition.as_str(), cfg.seed, &reports);
    let mut w = sink(&cfg.out)?;
    match cfg.format {
        Format::Json => write_json(&mut *w, &scan)?,
        Format::Csv => scan.write_csv(&mut *w)?,
    }
    for s in &scan.summary {
        eprintln!(
            "lam={} tau={} r={} gamma0={} c={} p_inf={} alpha={} N={}: {} (aggregate {:e})",
            s.params.lam,
            s.params.tau,
            s.params.r,
            s.params.gamma0,
            s.params.c,
            s.params.p_inf,
            s.params.alpha,
            s.params.n_cutoff,
            s.verdict.as_str(),
            s.aggregate
        );
    }
    Ok(verdict_exit_code(combined_verdict(scan.summary.iter().map(|s| s.verdict))))
}

fn cmd_examples(m: usize, out: &OutputArgs) -> CliResult<u8> {
    if m == 0 {
        return Err(CliError::Config("m must be positive".into()));
    }
    let report = examples::run_battery(m, out.seed)?;
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => {
            let rows: Vec<(String, &ConditionReport)> = report
                .examples
                .iter()
                .flat_map(|ex| {
                    ex.entries
                        .iter()
                        .filter_map(move |e| e.report.as_ref().map(|r| (format!("{}:{}", ex.name, e.check), r)))
                })
                .collect();
            write_reports_csv(&mut *w, out.seed, &rows)?;
        }
    }
    for ex in &report.examples {
        for e in &ex.entries {
            match (&e.report, &e.error) {
                (Some(r), _) => eprintln!("{:<12} {:<18} {:<13} {:e}", ex.name, e.check, r.verdict.as_str(), r.aggregate),
                (None, Some(err)) => eprintln!("{:<12} {:<18} not applicable: {err}", ex.name, e.check),
                (None, None) => {}
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ProfileOutput {
    seed: u64,
    profile: RearrangementProfile,
}

fn cmd_rearrange(input: &GridArgs, out: &OutputArgs) -> CliResult<u8> {
    let f = input.function()?;
    let profile = rearrange(&f);
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => write_json(&mut *w, &ProfileOutput { seed: out.seed, profile })?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = profile
                .partition()
                .windows(2)
                .zip(&profile.values)
                .map(|(w, &v)| vec![fmt_f(w[0]), fmt_f(w[1]), fmt_f(v)])
                .collect();
            write_table(&mut *w, out.seed, &["t_start", "t_end", "value"], &rows)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct NormOutput {
    seed: u64,
    cells_per_side: usize,
    norm: NormResult,
}

fn cmd_norm(input: &GridArgs, tol: f64, out: &OutputArgs) -> CliResult<u8> {
    if input.exponent.is_none() {
        return Err(CliError::Config("norm needs --exponent".into()));
    }
    let f = match &input.function {
        Some(path) => Some(config::load_function(path)?),
        None => None,
    };
    let (_, p) = input.exponent_grid(f.as_ref())?.expect("exponent present");
    let f = f.unwrap_or_else(|| p.map(|_| 1.0));
    let norm = luxemburg_norm(&f, &p, tol)?;
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => write_json(&mut *w, &NormOutput { seed: out.seed, cells_per_side: f.cells_per_side, norm })?,
        Format::Csv => write_table(
            &mut *w,
            out.seed,
            &["value", "residual", "iterations"],
            &[vec![fmt_f(norm.value), fmt_f(norm.residual), norm.iterations.to_string()]],
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct MaximalOutput {
    seed: u64,
    window_cap: usize,
    function: GridFunction,
    maximal: GridFunction,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe_norm: Option<f64>,
}

fn cmd_maximal(input: &GridArgs, window_cap: Option<usize>, trials: Option<usize>, out: &OutputArgs) -> CliResult<u8> {
    let f = input.function()?;
    let cap = window_cap.unwrap_or(f.cells_per_side);
    let mf = maximal(&f, cap)?;
    let probe_norm = match trials {
        Some(t) => {
            let Some((p, _)) = input.exponent_grid(None)? else {
                return Err(CliError::Config("--probe-trials needs --exponent".into()));
            };
            let op = ProbedOperator::Maximal { window_cap: cap.min(input.m) };
            Some(operator_norm_probe(&p, &op, t, input.m, 1e-10, out.seed)?)
        }
        None => None,
    };
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => write_json(
            &mut *w,
            &MaximalOutput { seed: out.seed, window_cap: cap, function: f, maximal: mf, probe_norm },
        )?,
        Format::Csv => {
            if let Some(n) = probe_norm {
                writeln!(w, "# probe_norm={}", fmt_f(n))?;
            }
            let rows: Vec<Vec<String>> = (0..f.len())
                .map(|i| {
                    let x = f.cell_center(i).iter().map(|&c| fmt_f(c)).collect::<Vec<_>>().join(";");
                    vec![x, fmt_f(f.values[i]), fmt_f(mf.values[i])]
                })
                .collect();
            write_table(&mut *w, out.seed, &["cell_center", "f", "maximal"], &rows)?;
        }
    }
    Ok(0)
}
