//! The U∞ functional: per-cube infima of `∫_{Q∖G}∫_{Q∖E} F^{1/r}` and their
//! sums over cube families.

use serde::{Deserialize, Serialize};

use super::kernel::{kernel_root, LocalExponent};
use super::report::{leveled, Aggregation, ConditionParams, ConditionReport, VerdictRule};
use crate::error::{precondition, Error, Result};
use crate::exponent::ExponentField;
use crate::families::NestedFamilies;
use crate::geometry::{aligned_count, Cube, CubeFamily};
use crate::rearrange::ProductGrid;

/// Largest cell count accepted by [`UinfMode::Bruteforce`].
pub const BRUTEFORCE_MAX_CELLS: usize = 12;

/// How the infimum over `E, G` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UinfMode {
    /// `E` on the largest values of `p`, `G` on the smallest: an upper bound.
    Levelset,
    /// Exhaustive over cell unions (small grids only): exact at the grid
    /// resolution.
    Bruteforce,
    /// The iterated-rearrangement integral: a lower bound.
    Rearrangement,
}

impl UinfMode {
    pub fn as_str(self) -> &'static str {
        match self {
            UinfMode::Levelset => "levelset",
            UinfMode::Bruteforce => "bruteforce",
            UinfMode::Rearrangement => "rearrangement",
        }
    }
}

impl std::str::FromStr for UinfMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "levelset" => Ok(UinfMode::Levelset),
            "bruteforce" => Ok(UinfMode::Bruteforce),
            "rearrangement" => Ok(UinfMode::Rearrangement),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

fn aligned(n: usize, frac: f64, name: &str) -> Result<usize> {
    aligned_count(frac, n).ok_or_else(|| {
        Error::Alignment(format!("{name} = {frac} does not select whole cells out of {n}"))
    })
}

/// `(1/|Q|) inf_{E,G} ∫_{Q∖G}∫_{Q∖E} F_{p,λ,τ}(x,y)^{1/r} dx dy` on a
/// localized exponent, evaluated according to `mode`.
pub fn uinf_local(local: &LocalExponent, lam: f64, tau: f64, r: f64, mode: UinfMode) -> Result<f64> {
    if !(lam > 0.0 && lam < 1.0 && tau > 0.0 && tau < 1.0) {
        return precondition(format!("lam and tau must lie in (0, 1), got {lam}, {tau}"));
    }
    if !(r > 1.0) {
        return precondition(format!("r must exceed 1, got {r}"));
    }
    let n = local.len();
    let ln_lam = lam.ln();
    let ln_tau = tau.ln();
    let inv_r = 1.0 / r;
    let v = &local.sorted;
    match mode {
        UinfMode::Levelset => {
            let kl = aligned(n, lam, "lam")?;
            let kt = aligned(n, tau, "tau")?;
            Ok(levelset_sum(v, kl, kt, ln_lam, ln_tau, inv_r) * local.volume() / (n * n) as f64)
        }
        UinfMode::Bruteforce => {
            let kl = aligned(n, lam, "lam")?;
            let kt = aligned(n, tau, "tau")?;
            if n > BRUTEFORCE_MAX_CELLS {
                return precondition(format!(
                    "bruteforce mode is limited to {BRUTEFORCE_MAX_CELLS} cells, got {n}"
                ));
            }
            Ok(bruteforce_sum(v, kl, kt, ln_lam, ln_tau, inv_r) * local.volume() / (n * n) as f64)
        }
        UinfMode::Rearrangement => {
            Ok(rearrangement_sum(local, lam, tau, ln_lam, ln_tau, inv_r) * local.volume())
        }
    }
}

/// Sum of `ψ(v_i, v_j)^{1/r}` over `i ≥ kl` (x outside the top `kl` cells)
/// and `j < n - kt` (y outside the bottom `kt` cells), in sorted order.
fn levelset_sum(v: &[f64], kl: usize, kt: usize, ln_lam: f64, ln_tau: f64, inv_r: f64) -> f64 {
    let n = v.len();
    let j_end = n - kt;
    let mut sum = 0.0;
    for i in kl..n {
        // ψ grows as β = v_j falls, so scan j downward and stop at underflow
        let mut row = 0.0;
        let mut first = true;
        for j in (i + 1..j_end).rev() {
            let term = kernel_root(v[i], v[j], ln_lam, ln_tau, inv_r);
            if term == 0.0 {
                if v[i] > v[j] || first {
                    break;
                }
                continue;
            }
            first = false;
            row += term;
        }
        if first && i + 1 < j_end && v[i] > v[j_end - 1] {
            // the largest term of this row underflowed, and rows only shrink
            break;
        }
        sum += row;
    }
    sum
}

/// Exact infimum over cell unions: every `E` is enumerated; for a fixed `E`
/// the best `G` drops the `kt` y-cells with the largest column sums.
fn bruteforce_sum(v: &[f64], kl: usize, kt: usize, ln_lam: f64, ln_tau: f64, inv_r: f64) -> f64 {
    let n = v.len();
    let kernel: Vec<f64> = (0..n * n)
        .map(|k| kernel_root(v[k / n], v[k % n], ln_lam, ln_tau, inv_r))
        .collect();
    let mut best = f64::INFINITY;
    let mut cols = vec![0.0; n];
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != kl {
            continue;
        }
        cols.iter_mut().for_each(|c| *c = 0.0);
        for x in (0..n).filter(|x| mask >> x & 1 == 0) {
            for (c, k) in cols.iter_mut().zip(&kernel[x * n..(x + 1) * n]) {
                *c += k;
            }
        }
        cols.sort_by(f64::total_cmp);
        let kept: f64 = cols[..n - kt].iter().sum();
        best = best.min(kept);
    }
    best
}

/// `∫_λ^1 ∫_τ^1 (F*)^{1/r}` in normalized variables, where on lattice cell
/// `(i, j)` the iterated rearrangement equals `τ^{Ψ_p(t,s)} λ^{Ψ_{p'}(s,t)}`
/// for `i + j < n - 1` and vanishes otherwise.
fn rearrangement_sum(local: &LocalExponent, lam: f64, tau: f64, ln_lam: f64, ln_tau: f64, inv_r: f64) -> f64 {
    let v = &local.sorted;
    let w = &local.sorted_conj;
    let n = v.len();
    let h = 1.0 / n as f64;
    let weight = |k: usize, lo: f64| -> f64 {
        let a = k as f64 * h;
        ((a + h).min(1.0) - a.max(lo)).max(0.0)
    };
    let i0 = ((lam * n as f64).floor() as usize).min(n - 1);
    let j0 = ((tau * n as f64).floor() as usize).min(n - 1);
    let mut sum = 0.0;
    for i in i0..n {
        let wi = weight(i, lam);
        if wi == 0.0 {
            continue;
        }
        let mut row = 0.0;
        let mut first = true;
        for j in j0..n {
            if i + j + 1 >= n {
                break;
            }
            let b = v[i];
            let a = v[n - 1 - j];
            if b <= a {
                break;
            }
            // Ψ_p(t,s) = A/(B-A); Ψ_{p'}(s,t) from the conjugate profile
            let bc = w[j];
            let ac = w[n - 1 - i];
            let psi = a / (b - a);
            let psi_c = ac / (bc - ac);
            let term = ((psi * ln_tau + psi_c * ln_lam) * inv_r).exp();
            if term == 0.0 {
                break;
            }
            first = false;
            row += weight(j, tau) * term;
        }
        if first {
            break;
        }
        sum += wi * row;
    }
    sum
}

/// U∞ term of `p` on `q` at resolution `m`.
pub fn uinf_term(
    p: &ExponentField,
    q: &Cube,
    m: usize,
    lam: f64,
    tau: f64,
    r: f64,
    mode: UinfMode,
) -> Result<f64> {
    uinf_local(&LocalExponent::new(p, q, m)?, lam, tau, r, mode)
}

/// The grid of `F_{p,λ,τ}` on `Q × Q` for a localized exponent given by its
/// cell values (unsorted).
pub fn f_grid(p: &crate::geometry::GridFunction, lam: f64, tau: f64) -> Result<ProductGrid> {
    let v = &p.values;
    ProductGrid::from_cells(p.cube.clone(), p.cells_per_side, |i, j| {
        super::kernel::f_kernel(v[i], v[j], lam, tau)
    })
}

/// Σ of U∞ terms over a single family.
pub fn uinf_sum(
    p: &ExponentField,
    family: &CubeFamily,
    m: usize,
    params: &ConditionParams,
    mode: UinfMode,
) -> Result<ConditionReport> {
    uinf_nested(
        p,
        &NestedFamilies::from_groups(vec![family.cubes().to_vec()]),
        m,
        params,
        mode,
        &VerdictRule::default(),
    )
}

/// U∞ sums over a nested sequence of families; level `ℓ` aggregates the
/// cubes of groups `0..=ℓ`.
pub fn uinf_nested(
    p: &ExponentField,
    nest: &NestedFamilies,
    m: usize,
    params: &ConditionParams,
    mode: UinfMode,
    rule: &VerdictRule,
) -> Result<ConditionReport> {
    params.validate_below_gamma0()?;
    if nest.levels() == 0 {
        return precondition("at least one nesting level is required");
    }
    nest.family(nest.levels() - 1)?;
    leveled(
        "uinf",
        *params,
        Aggregation::Sum,
        &nest.groups,
        rule,
        format!("mode={}, m={m}", mode.as_str()),
        |_, q| uinf_term(p, q, m, params.lam, params.tau, params.r, mode),
    )
}
