//! Command-line surface and the validated run configuration built from it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use varlp::conditions::{CheckKind, ConditionParams, ProbeConfig, UinfMode, VerdictRule};
use varlp::{ExponentField, ExponentSpec, GridFunction};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "varlp-lab", version, about = "Probe maximal-operator conditions on variable-exponent Lebesgue spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one condition checker and write its report.
    Check {
        #[arg(value_parser = parse_kind)]
        condition: CheckKind,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run one checker over the Cartesian product of parameter grids.
    Scan {
        #[arg(value_parser = parse_kind)]
        condition: CheckKind,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the full battery on the built-in example exponents.
    Examples {
        /// Cells per cube side for the grid-based checkers.
        #[arg(long, default_value_t = 4096)]
        m: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the non-increasing rearrangement of a grid function.
    Rearrange {
        #[command(flatten)]
        input: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute one Luxemburg norm.
    Norm {
        #[command(flatten)]
        input: GridArgs,
        /// Relative tolerance of the norm.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the maximal function of a grid function, optionally probing the
    /// operator norm on L^p(·).
    Maximal {
        #[command(flatten)]
        input: GridArgs,
        /// Largest cube side in cells (defaults to the whole grid).
        #[arg(long)]
        window_cap: Option<usize>,
        /// Random trials for an operator-norm probe (needs --exponent).
        #[arg(long)]
        probe_trials: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Seed for every randomized probe; recorded in the report.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Exponent definition (JSON).
    #[arg(long)]
    pub exponent: Option<PathBuf>,
    /// Grid function (JSON with cube, cells_per_side, values).
    #[arg(long)]
    pub function: Option<PathBuf>,
    /// Cells per side when discretizing an exponent.
    #[arg(long, default_value_t = 256)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Exponent definition (JSON).
    #[arg(long)]
    pub exponent: PathBuf,
    /// Cells per cube side.
    #[arg(long, default_value_t = 4096)]
    pub m: usize,
    /// Dyadic depth of the cube families.
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    /// Nesting levels.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Base radius of the nested families.
    #[arg(long, default_value_t = 128.0)]
    pub r0: f64,
    /// Samples per side for lh0, lhinf and ussc.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Octaves by which apdot cubes shrink per level.
    #[arg(long, default_value_t = 4)]
    pub shrink: u32,
    #[arg(long, default_value = "levelset", value_parser = parse_mode)]
    pub mode: UinfMode,
    #[arg(long, default_value_t = 32)]
    pub quad_points: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.05)]
    pub plateau_tol: f64,
    #[arg(long, default_value_t = 2.0)]
    pub growth_factor: f64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Condition parameters. Each flag takes a comma-separated list; `check`
/// accepts a single value per flag.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(long, value_delimiter = ',')]
    pub lam: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub gamma0: Vec<f64>,
    #[arg(long = "K", value_delimiter = ',')]
    pub k: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p_inf: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long = "N", value_delimiter = ',')]
    pub n_cutoff: Vec<f64>,
}

fn parse_kind(s: &str) -> Result<CheckKind, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<UinfMode, String> {
    s.parse()
}

impl ParamArgs {
    /// Every parameter tuple of the grid, in lexicographic flag order.
    pub fn tuples(&self) -> Vec<ConditionParams> {
        let d = ConditionParams::default();
        let or = |v: &Vec<f64>, x: f64| if v.is_empty() { vec![x] } else { v.clone() };
        let mut out = vec![d];
        let axes: [(Vec<f64>, fn(&mut ConditionParams, f64)); 9] = [
            (or(&self.lam, d.lam), |p, x| p.lam = x),
            (or(&self.tau, d.tau), |p, x| p.tau = x),
            (or(&self.r, d.r), |p, x| p.r = x),
            (or(&self.gamma0, d.gamma0), |p, x| p.gamma0 = x),
            (or(&self.k, d.k), |p, x| p.k = x),
            (or(&self.c, d.c), |p, x| p.c = x),
            (or(&self.p_inf, d.p_inf), |p, x| p.p_inf = x),
            (or(&self.alpha, d.alpha), |p, x| p.alpha = x),
            (or(&self.n_cutoff, d.n_cutoff), |p, x| p.n_cutoff = x),
        ];
        for (values, set) in axes {
            out = out
                .into_iter()
                .flat_map(|base| {
                    values.iter().map(move |&x| {
                        let mut p = base;
                        set(&mut p, x);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

/// Everything a `check` or `scan` needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub exponent_path: PathBuf,
    pub exponent: ExponentField,
    pub condition: CheckKind,
    pub probe: ProbeConfig,
    pub params: Vec<ConditionParams>,
    pub rule: VerdictRule,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(condition: CheckKind, args: &RunArgs) -> CliResult<Self> {
        let exponent = load_exponent(&args.exponent)?;
        if args.m == 0 || args.samples < 2 || args.levels == 0 {
            return Err(CliError::Config("m, levels must be positive and samples at least 2".into()));
        }
        if !(args.r0 > 1.0) || !args.r0.is_finite() {
            return Err(CliError::Config(format!("r0 must exceed 1, got {}", args.r0)));
        }
        if !(args.tol > 0.0) || !(args.plateau_tol >= 0.0) || !(args.growth_factor > 1.0) {
            return Err(CliError::Config("tol > 0, plateau-tol >= 0 and growth-factor > 1 are required".into()));
        }
        let params = args.params.tuples();
        for p in &params {
            p.validate()?;
        }
        Ok(RunConfig {
            exponent_path: args.exponent.clone(),
            exponent,
            condition,
            probe: ProbeConfig {
                m: args.m,
                depth: args.depth,
                levels: args.levels,
                r0: args.r0,
                samples: args.samples,
                shrink: args.shrink,
                mode: args.mode,
                quad_points: args.quad_points,
                tol: args.tol,
            },
            params,
            rule: VerdictRule { plateau_tol: args.plateau_tol, growth_factor: args.growth_factor },
            seed: args.output.seed,
            out: args.output.out.clone(),
            format: args.output.format,
        })
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_exponent(path: &Path) -> CliResult<ExponentField> {
    let spec: ExponentSpec = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

pub fn load_function(path: &Path) -> CliResult<GridFunction> {
    let raw: GridFunction = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(GridFunction::new(raw.cube, raw.cells_per_side, raw.values)?)
}

impl GridArgs {
    /// The exponent discretized on its domain, or on the function's grid
    /// when both are given.
    pub fn exponent_grid(&self, f: Option<&GridFunction>) -> CliResult<Option<(ExponentField, GridFunction)>> {
        let Some(path) = &self.exponent else { return Ok(None) };
        let p = load_exponent(path)?;
        let g = match f {
            Some(f) => p.discretize(&f.cube, f.cells_per_side)?,
            None => p.discretize(p.domain(), self.m)?,
        };
        Ok(Some((p, g)))
    }

    /// The grid function to operate on: `--function`, or else the
    /// discretized exponent itself.
    pub fn function(&self) -> CliResult<GridFunction> {
        match (&self.function, &self.exponent) {
            (Some(path), _) => load_function(path),
            (None, Some(path)) => {
                let p = load_exponent(path)?;
                Ok(p.discretize(p.domain(), self.m)?)
            }
            (None, None) => Err(CliError::Config("one of --function or --exponent is required".into())),
        }
    }
}
