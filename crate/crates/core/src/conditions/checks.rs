//! Leveled evidence runs for every condition: the entry point used by the
//! command-line tool and the acceptance battery.

use serde::{Deserialize, Serialize};

use super::kernel::LocalExponent;
use super::local::{a_ratio, lh0_constant, lhinf_constant, ninf_integral};
use super::radial::ussc_check;
use super::report::{leveled, Aggregation, ConditionParams, ConditionReport, VerdictRule};
use super::sums::{intcon_term, strf_term, weakf_term};
use super::uinf::{uinf_nested, UinfMode};
use crate::error::{precondition, Result};
use crate::exponent::ExponentField;
use crate::families::{log_doubling_radii, shrinking_centered, NestedFamilies};
use crate::geometry::Cube;

/// The conditions a [`run_check`] can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Lh0,
    Lhinf,
    Ninf,
    Apdot,
    Uinf,
    Ussc,
    Strf,
    Weakf,
    Intcon,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Lh0,
        CheckKind::Lhinf,
        CheckKind::Ninf,
        CheckKind::Apdot,
        CheckKind::Uinf,
        CheckKind::Ussc,
        CheckKind::Strf,
        CheckKind::Weakf,
        CheckKind::Intcon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Lh0 => "lh0",
            CheckKind::Lhinf => "lhinf",
            CheckKind::Ninf => "ninf",
            CheckKind::Apdot => "apdot",
            CheckKind::Uinf => "uinf",
            CheckKind::Ussc => "ussc",
            CheckKind::Strf => "strf",
            CheckKind::Weakf => "weakf",
            CheckKind::Intcon => "intcon",
        }
    }
}

impl std::str::FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// Resolution and nesting knobs shared by the leveled runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Cells per side of each cube (for `ninf`, of each dyadic shell).
    pub m: usize,
    /// Dyadic depth of the annular tilings and of the `apdot` centre lattice.
    pub depth: u32,
    /// Number of nesting levels.
    pub levels: usize,
    /// Base radius `R0`.
    pub r0: f64,
    /// Samples per side for `lh0`, `lhinf` and `ussc`.
    pub samples: usize,
    /// Octaves by which `apdot` cubes shrink per level.
    pub shrink: u32,
    pub mode: UinfMode,
    pub quad_points: usize,
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            m: 4096,
            depth: 2,
            levels: 4,
            r0: 128.0,
            samples: 256,
            shrink: 4,
            mode: UinfMode::Levelset,
            quad_points: 32,
            tol: 1e-10,
        }
    }
}

/// Runs `kind` on `p` over `cfg.levels` nested levels.
///
/// * `lh0`: the field's domain, sampled at `samples · 4^ℓ` points per side.
/// * `lhinf`, `ninf`: balls of radius `R0^(2^ℓ)` (each level doubles `log R`).
/// * `apdot`: cubes shrinking by `shrink` octaves per level, centred on the
///   depth-`depth` lattice of the domain.
/// * `uinf`, `strf`, `weakf`, `intcon`: annular dyadic families of radius
///   `R0 · 2^ℓ` with `m` cells per cube side.
/// * `ussc`: the radial criterion with `α` and `N` from `params`.
pub fn run_check(
    kind: CheckKind,
    p: &ExponentField,
    params: &ConditionParams,
    cfg: &ProbeConfig,
    rule: &VerdictRule,
) -> Result<ConditionReport> {
    params.validate()?;
    if cfg.levels == 0 {
        return precondition("at least one nesting level is required");
    }
    let n = p.dimension();
    let name = kind.as_str();
    let log_balls = || -> Result<Vec<Vec<Cube>>> {
        log_doubling_radii(cfg.r0, cfg.levels)?
            .into_iter()
            .map(|r| Ok(vec![Cube::centered(n, r)?]))
            .collect()
    };
    match kind {
        CheckKind::Lh0 => {
            let groups = vec![vec![p.domain().clone()]; cfg.levels];
            leveled(name, *params, Aggregation::Sup, &groups, rule, format!("samples={}·4^level", cfg.samples), |l, q| {
                lh0_constant(p, q, cfg.samples * 4usize.pow(l as u32))
            })
        }
        CheckKind::Lhinf => leveled(
            name,
            *params,
            Aggregation::Sup,
            &log_balls()?,
            rule,
            format!("radii R0^(2^level), R0={}", cfg.r0),
            |_, q| lhinf_constant(p, params.p_inf, q.side / 2.0, cfg.samples),
        ),
        CheckKind::Ninf => leveled(
            name,
            *params,
            Aggregation::Sup,
            &log_balls()?,
            rule,
            format!("partial integrals over radii R0^(2^level), R0={}, m={}", cfg.r0, cfg.m),
            |_, q| ninf_integral(p, params.c, params.p_inf, q.side / 2.0, cfg.m),
        ),
        CheckKind::Apdot => {
            let groups = shrinking_centered(p.domain(), cfg.depth, cfg.shrink, cfg.levels);
            leveled(name, *params, Aggregation::Sup, &groups, rule, format!("shrink={} octaves per level, m={}", cfg.shrink, cfg.m), |_, q| {
                a_ratio(p, q, cfg.m, cfg.tol)
            })
        }
        CheckKind::Uinf => {
            let nest = NestedFamilies::annular(n, cfg.r0, cfg.depth, cfg.levels)?;
            uinf_nested(p, &nest, cfg.m, params, cfg.mode, rule)
        }
        CheckKind::Strf | CheckKind::Weakf | CheckKind::Intcon => {
            params.validate_below_gamma0()?;
            let nest = NestedFamilies::annular(n, cfg.r0, cfg.depth, cfg.levels)?;
            nest.family(cfg.levels - 1)?;
            let ConditionParams { lam, tau, r, gamma0, .. } = *params;
            leveled(name, *params, Aggregation::Sum, &nest.groups, rule, format!("m={}", cfg.m), |_, q| {
                let local = LocalExponent::new(p, q, cfg.m)?;
                match kind {
                    CheckKind::Strf => strf_term(&local, lam, tau, r),
                    CheckKind::Weakf => weakf_term(&local, lam, tau, r),
                    _ => intcon_term(&local, lam, tau, r, gamma0, cfg.quad_points),
                }
            })
        }
        CheckKind::Ussc => ussc_check(p, params.alpha, params.n_cutoff, n, cfg.samples),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::Verdict;

    fn quick() -> ProbeConfig {
        ProbeConfig { m: 64, samples: 32, r0: 4.0, levels: 3, ..ProbeConfig::default() }
    }

    #[test]
    fn constant_exponent_passes_everything() {
        let p = ExponentField::constant(2.0, Cube::centered(1, 1.0).unwrap()).unwrap();
        let params = ConditionParams::default();
        for kind in CheckKind::ALL {
            let rep = run_check(kind, &p, &params, &quick(), &VerdictRule::default()).unwrap();
            assert_eq!(rep.verdict, Verdict::Bounded, "{}", kind.as_str());
            assert_eq!(rep.aggregate, rep.recomputed_aggregate());
            if kind != CheckKind::Apdot && kind != CheckKind::Ussc {
                assert_eq!(rep.aggregate, 0.0, "{}", kind.as_str());
            }
        }
    }

    #[test]
    fn step_exponent_fails_apdot_and_lh0() {
        let p = ExponentField::step(2.0, 3.0, 0.0, Cube::centered(1, 1.0).unwrap()).unwrap();
        let cfg = ProbeConfig { m: 2, samples: 16, ..ProbeConfig::default() };
        let params = ConditionParams::default();
        let rule = VerdictRule::default();
        assert_eq!(run_check(CheckKind::Apdot, &p, &params, &cfg, &rule).unwrap().verdict, Verdict::Growing);
        assert_eq!(run_check(CheckKind::Lh0, &p, &params, &cfg, &rule).unwrap().verdict, Verdict::Growing);
    }

    #[test]
    fn names_round_trip() {
        for kind in CheckKind::ALL {
            assert_eq!(kind.as_str().parse::<CheckKind>().unwrap(), kind);
        }
        assert!("nope".parse::<CheckKind>().is_err());
    }
}
