//! Built-in example exponents and the checker battery run on them.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use varlp::conditions::{run_check, CheckKind, ConditionParams, ConditionReport, ProbeConfig, VerdictRule};
use varlp::{Cube, ExponentField, ExponentSpec, PhiFamily};

use crate::error::CliResult;

/// One example exponent with the settings it is checked under.
pub struct Example {
    pub name: &'static str,
    pub description: &'static str,
    pub field: ExponentField,
    pub params: ConditionParams,
    /// Extra radial checks `(α, N)` beyond the default parameters.
    pub ussc_grid: Vec<(f64, f64)>,
}

pub fn catalogue() -> CliResult<Vec<Example>> {
    let line = |h: f64| Cube::centered(1, h);
    // the loglog-weighted sine integral has derivative envelope
    // |s'(t)| t log t = α₀|sin t| / log log t, below α once log log N ≥ α₀/α
    let sin_alpha = 0.5;
    let sin_integral = ExponentField::sin_integral(2.5, sin_alpha, E.exp(), PhiFamily::LogLog, line(4.0)?)?;
    Ok(vec![
        Example {
            name: "prototype",
            description: "p(x) = 2 + 1/log(e + |x|)",
            field: ExponentField::log_holder(2.0, line(4.0)?)?,
            // c^{1/|p - 2|} = (e + |x|)^{ln c} is integrable only for ln c < -1
            params: ConditionParams { c: (-2.0f64).exp(), ..ConditionParams::default() },
            ussc_grid: vec![],
        },
        Example {
            name: "sinloglog",
            description: "p(x) = 2.4 + 0.4 sin(log log |x|) for |x| > e, 2.4 inside",
            field: ExponentField::sin_log_log(2.4, 0.4, line(4.0)?)?,
            params: ConditionParams::default(),
            ussc_grid: vec![],
        },
        Example {
            name: "sinintegral",
            description: "p(x) = 2.5 + 0.5 ∫ sin y / (y log y log log y) dy from e^e to |x|",
            field: sin_integral.clone(),
            // the integral converges, so p has a limit at infinity
            params: ConditionParams { p_inf: sin_integral.eval_radius(1e300)?, ..ConditionParams::default() },
            ussc_grid: [0.1, 0.2, 0.4]
                .into_iter()
                .map(|a: f64| (a, (sin_alpha / a).exp().exp()))
                .collect(),
        },
        Example {
            name: "step",
            description: "p = 2 on x < 0, 3 on x >= 0",
            field: ExponentField::step(2.0, 3.0, 0.0, line(1.0)?)?,
            params: ConditionParams::default(),
            ussc_grid: vec![],
        },
    ])
}

/// Outcome of one checker on one example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryEntry {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRun {
    pub name: String,
    pub description: String,
    pub exponent: ExponentSpec,
    pub params: ConditionParams,
    pub config: ProbeConfig,
    pub entries: Vec<BatteryEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExamplesReport {
    pub seed: u64,
    pub examples: Vec<ExampleRun>,
}

pub fn run_battery(m: usize, seed: u64) -> CliResult<ExamplesReport> {
    let rule = VerdictRule::default();
    let cfg = ProbeConfig { m, ..ProbeConfig::default() };
    // a logarithmic LH₀ blow-up needs six refinements to double
    let lh0_cfg = ProbeConfig { levels: 6, ..cfg };
    let examples = catalogue()?
        .into_iter()
        .map(|ex| {
            let params = ex.params;
            let mut jobs: Vec<(String, CheckKind, ConditionParams)> =
                CheckKind::ALL.iter().map(|&k| (k.as_str().to_string(), k, params)).collect();
            for &(alpha, n_cutoff) in &ex.ussc_grid {
                jobs.push((format!("ussc(alpha={alpha})"), CheckKind::Ussc, ConditionParams { alpha, n_cutoff, ..params }));
            }
            let entries = jobs
                .par_iter()
                .map(|(label, kind, p)| {
                    let cfg = if *kind == CheckKind::Lh0 { &lh0_cfg } else { &cfg };
                    (label, run_check(*kind, &ex.field, p, cfg, &rule))
                })
                .map(|(label, outcome)| match outcome {
                    Ok(r) => BatteryEntry { check: label.clone(), report: Some(r.with_seed(seed)), error: None },
                    Err(e) => BatteryEntry { check: label.clone(), report: None, error: Some(e.to_string()) },
                })
                .collect();
            ExampleRun {
                name: ex.name.to_string(),
                description: ex.description.to_string(),
                exponent: ExponentSpec::from_field(&ex.field),
                params,
                config: cfg,
                entries,
            }
        })
        .collect();
    Ok(ExamplesReport { seed, examples })
}
