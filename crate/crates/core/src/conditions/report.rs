use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::Cube;

/// Scalar parameters shared by the checkers. Each checker reads only the
/// fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionParams {
    pub lam: f64,
    pub tau: f64,
    pub r: f64,
    pub gamma0: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub c: f64,
    pub p_inf: f64,
    pub alpha: f64,
    #[serde(rename = "N_cutoff")]
    pub n_cutoff: f64,
}

impl Default for ConditionParams {
    fn default() -> Self {
        ConditionParams {
            lam: 1.0 / 16.0,
            tau: 1.0 / 16.0,
            r: 1.5,
            gamma0: 0.25,
            k: 1.0,
            c: 0.5,
            p_inf: 2.0,
            alpha: 0.4,
            n_cutoff: std::f64::consts::E.powf(std::f64::consts::E),
        }
    }
}

impl ConditionParams {
    /// Checks every field against its admissible range.
    pub fn validate(&self) -> Result<()> {
        let open01 = |x: f64| x > 0.0 && x < 1.0;
        if !open01(self.lam) || !open01(self.tau) {
            return precondition(format!(
                "lam and tau must lie in (0, 1), got {} and {}",
                self.lam, self.tau
            ));
        }
        if !(self.r > 1.0) || !self.r.is_finite() {
            return precondition(format!("r must exceed 1, got {}", self.r));
        }
        if !(self.gamma0 > 0.0 && self.gamma0 < 0.5) {
            return precondition(format!("gamma0 must lie in (0, 1/2), got {}", self.gamma0));
        }
        if !(self.k >= 1.0) || !self.k.is_finite() {
            return precondition(format!("K must be at least 1, got {}", self.k));
        }
        if !open01(self.c) {
            return precondition(format!("c must lie in (0, 1), got {}", self.c));
        }
        if !(self.p_inf > 0.0) || !self.p_inf.is_finite() {
            return precondition(format!("p_inf must be positive, got {}", self.p_inf));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return precondition(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.n_cutoff > 1.0) || !self.n_cutoff.is_finite() {
            return precondition(format!("N must exceed 1, got {}", self.n_cutoff));
        }
        Ok(())
    }

    /// The extra constraint of the summation functionals: `λ, τ < γ₀`.
    pub fn validate_below_gamma0(&self) -> Result<()> {
        self.validate()?;
        if !(self.lam < self.gamma0 && self.tau < self.gamma0) {
            return precondition(format!(
                "lam = {} and tau = {} must be below gamma0 = {}",
                self.lam, self.tau, self.gamma0
            ));
        }
        Ok(())
    }
}

/// Numerical evidence about a condition; never a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Bounded => "bounded",
            Verdict::Growing => "growing",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bounded" => Ok(Verdict::Bounded),
            "growing" => Ok(Verdict::Growing),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}

/// Plateau and growth thresholds for turning level aggregates into a
/// [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictRule {
    /// Largest relative spread `(max - min) / max` counted as a plateau.
    pub plateau_tol: f64,
    /// Smallest `last / first` ratio counted as growth.
    pub growth_factor: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule { plateau_tol: 0.05, growth_factor: 2.0 }
    }
}

impl VerdictRule {
    /// `bounded` if the levels stay within `plateau_tol` of their maximum
    /// (or are all zero), `growing` if they never decrease and the last
    /// exceeds `growth_factor` times the first, `inconclusive` otherwise.
    /// A single nonzero level is inconclusive.
    pub fn classify(&self, levels: &[f64]) -> Verdict {
        if levels.is_empty() || levels.iter().any(|v| v.is_nan()) {
            return Verdict::Inconclusive;
        }
        let max = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = levels.iter().copied().fold(f64::INFINITY, f64::min);
        if max == 0.0 && min == 0.0 {
            return Verdict::Bounded;
        }
        if levels.len() < 2 {
            return Verdict::Inconclusive;
        }
        let monotone = levels.windows(2).all(|w| w[1] >= w[0]);
        let first = levels[0];
        let last = levels[levels.len() - 1];
        if monotone && last > self.growth_factor * first {
            return Verdict::Growing;
        }
        if max.is_finite() && max - min <= self.plateau_tol * max.abs() {
            return Verdict::Bounded;
        }
        Verdict::Inconclusive
    }
}

/// How per-cube terms combine into the aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    Sum,
    Sup,
}

/// One cube's contribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubeTerm {
    pub cube: Cube,
    /// Nesting level at which the cube enters.
    pub level: usize,
    pub term: f64,
}

/// Outcome of a condition check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub params: ConditionParams,
    pub seed: u64,
    pub aggregation: Aggregation,
    pub per_cube: Vec<CubeTerm>,
    /// Aggregate over the cubes of levels `0..=ℓ`, for each `ℓ`.
    pub levels: Vec<f64>,
    pub aggregate: f64,
    pub verdict: Verdict,
    pub notes: String,
}

impl ConditionReport {
    /// Builds a report whose levels and aggregate are folds of `per_cube`
    /// in order, so `aggregate == levels.last()` exactly. Terms must be
    /// sorted by level.
    pub fn assemble(
        condition: impl Into<String>,
        params: ConditionParams,
        aggregation: Aggregation,
        per_cube: Vec<CubeTerm>,
        rule: &VerdictRule,
        notes: impl Into<String>,
    ) -> Self {
        let n_levels = per_cube.iter().map(|t| t.level + 1).max().unwrap_or(0);
        let mut levels = Vec::with_capacity(n_levels);
        let mut acc = match aggregation {
            Aggregation::Sum => 0.0,
            Aggregation::Sup => f64::NEG_INFINITY,
        };
        let mut idx = 0;
        for l in 0..n_levels {
            while idx < per_cube.len() && per_cube[idx].level == l {
                acc = fold(aggregation, acc, per_cube[idx].term);
                idx += 1;
            }
            levels.push(acc);
        }
        debug_assert_eq!(idx, per_cube.len(), "terms must be sorted by level");
        let aggregate = levels.last().copied().unwrap_or(0.0);
        let verdict = rule.classify(&levels);
        ConditionReport {
            condition: condition.into(),
            params,
            seed: 0,
            aggregation,
            per_cube,
            levels,
            aggregate,
            verdict,
            notes: notes.into(),
        }
    }

    /// Recomputes the aggregate from `per_cube` (the declared fold).
    pub fn recomputed_aggregate(&self) -> f64 {
        let init = match self.aggregation {
            Aggregation::Sum => 0.0,
            Aggregation::Sup => f64::NEG_INFINITY,
        };
        if self.per_cube.is_empty() {
            return 0.0;
        }
        self.per_cube.iter().fold(init, |acc, t| fold(self.aggregation, acc, t.term))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Evaluates `term(level, cube)` over nested groups (in parallel) and
/// assembles the report.
pub(crate) fn leveled<F>(
    condition: &str,
    params: ConditionParams,
    aggregation: Aggregation,
    groups: &[Vec<Cube>],
    rule: &VerdictRule,
    notes: String,
    term: F,
) -> Result<ConditionReport>
where
    F: Fn(usize, &Cube) -> Result<f64> + Sync,
{
    let tagged: Vec<(usize, &Cube)> = groups
        .iter()
        .enumerate()
        .flat_map(|(l, g)| g.iter().map(move |c| (l, c)))
        .collect();
    let terms: Vec<f64> = tagged.par_iter().map(|&(l, q)| term(l, q)).collect::<Result<_>>()?;
    let per_cube = tagged
        .into_iter()
        .zip(terms)
        .map(|((level, cube), term)| CubeTerm { cube: cube.clone(), level, term })
        .collect();
    Ok(ConditionReport::assemble(condition, params, aggregation, per_cube, rule, notes))
}

fn fold(aggregation: Aggregation, acc: f64, term: f64) -> f64 {
    match aggregation {
        Aggregation::Sum => acc + term,
        Aggregation::Sup => acc.max(term),
    }
}
