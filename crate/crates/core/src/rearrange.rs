//! Exact non-increasing rearrangements of piecewise-constant functions.
//!
//! A grid function with `N` cells of volume `v` rearranges to a step function
//! on `(0, Nv)` whose steps are the sorted cell values. Everything here is
//! computed by sorting, so identities can be asserted with `==`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::geometry::{Cube, GridFunction};

/// Non-increasing right-continuous step function on `(0, total_measure)`.
///
/// Step `i` covers `[breakpoints[i-1], breakpoints[i])` (with
/// `breakpoints[-1] = 0`) and takes the value `values[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearrangementProfile {
    pub total_measure: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl RearrangementProfile {
    /// Profile of the values `cells`, each carrying `1/len` of `total`.
    /// Values are sorted as given (no absolute value is taken).
    pub fn from_cells(cells: &[f64], total: f64) -> Self {
        let mut sorted = cells.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        Self::from_sorted(&sorted, total)
    }

    /// Builds a profile from values already in non-increasing order, merging
    /// runs of equal values into single steps.
    pub(crate) fn from_sorted(sorted: &[f64], total: f64) -> Self {
        let n = sorted.len();
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in sorted.iter().enumerate() {
            let end = (i + 1) as f64 / n as f64 * total;
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = end;
            } else {
                values.push(v);
                breakpoints.push(end);
            }
        }
        if let Some(last) = breakpoints.last_mut() {
            *last = total;
        }
        RearrangementProfile { total_measure: total, breakpoints, values }
    }

    /// Builds a profile from explicit `(width, value)` steps.
    fn from_steps(steps: impl IntoIterator<Item = (f64, f64)>, total: f64) -> Self {
        let mut breakpoints: Vec<f64> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut acc = 0.0;
        for (w, v) in steps {
            acc += w;
            if values.last() == Some(&v) {
                *breakpoints.last_mut().unwrap() = acc;
            } else {
                values.push(v);
                breakpoints.push(acc);
            }
        }
        if let Some(last) = breakpoints.last_mut() {
            *last = total;
        }
        RearrangementProfile { total_measure: total, breakpoints, values }
    }

    fn tolerance(&self) -> f64 {
        1e-12 * self.total_measure
    }

    /// Index of the step containing `t` (right-continuous; a `t` within
    /// rounding noise of a breakpoint counts as that breakpoint).
    fn step_index(&self, t: f64) -> usize {
        let eps = self.tolerance();
        self.breakpoints
            .partition_point(|&b| b <= t + eps)
            .min(self.values.len() - 1)
    }

    /// Right-continuous evaluation `f*(t)` for `0 < t < total_measure`.
    pub fn at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < self.total_measure) {
            return domain(format!(
                "profile is defined on (0, {}), got t = {t}",
                self.total_measure
            ));
        }
        Ok(self.values[self.step_index(t)])
    }

    /// Left limit `f*(t-)`.
    pub fn left_limit(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= self.total_measure) {
            return domain(format!(
                "left limit needs t in (0, {}], got {t}",
                self.total_measure
            ));
        }
        let eps = self.tolerance();
        let idx = self.breakpoints.partition_point(|&b| b < t - eps);
        Ok(self.values[idx.min(self.values.len() - 1)])
    }

    /// True if `t` is (within rounding noise) an interior breakpoint.
    pub fn is_breakpoint(&self, t: f64) -> bool {
        let eps = self.tolerance();
        self.breakpoints[..self.breakpoints.len() - 1]
            .iter()
            .any(|&b| (b - t).abs() <= eps)
    }

    /// Step boundaries including `0` and `total_measure`.
    pub fn partition(&self) -> Vec<f64> {
        std::iter::once(0.0).chain(self.breakpoints.iter().copied()).collect()
    }

    /// Midpoints of the steps; the canonical non-breakpoint sample points.
    pub fn step_midpoints(&self) -> Vec<f64> {
        self.partition().windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Exact `∫_a^b f*`, clamping the limits to `[0, total_measure]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let a = a.max(0.0);
        let b = b.min(self.total_measure);
        if b <= a {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut start = 0.0_f64;
        for (&end, &v) in self.breakpoints.iter().zip(&self.values) {
            let lo = start.max(a);
            let hi = end.min(b);
            if hi > lo {
                sum += (hi - lo) * v;
            }
            start = end;
            if start >= b {
                break;
            }
        }
        sum
    }

    /// Measure of `{f* > alpha}`.
    pub fn measure_above(&self, alpha: f64) -> f64 {
        let k = self.values.partition_point(|&v| v > alpha);
        if k == 0 {
            0.0
        } else {
            self.breakpoints[k - 1]
        }
    }

    /// Applies `phi` to every step value.
    pub fn map_values(&self, phi: impl Fn(f64) -> f64) -> Self {
        let widths = self.widths();
        Self::from_steps(
            widths.into_iter().zip(self.values.iter().map(|&v| phi(v))),
            self.total_measure,
        )
    }

    fn widths(&self) -> Vec<f64> {
        self.partition().windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Exact rearrangement of `|f|`. Ties keep cell order, which does not affect
/// the profile but fixes [`extremal_subset`].
pub fn rearrange(f: &GridFunction) -> RearrangementProfile {
    let abs: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    RearrangementProfile::from_cells(&abs, f.cube.volume())
}

/// Right-continuous evaluation of a profile.
pub fn profile_at(prof: &RearrangementProfile, t: f64) -> Result<f64> {
    prof.at(t)
}

fn distinct_sorted(f: &GridFunction) -> Result<Vec<f64>> {
    if f.values.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return precondition("composition lemmas need a finite non-negative f");
    }
    let mut vals = f.values.clone();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    Ok(vals)
}

fn sample_phi(phi: &impl Fn(f64) -> f64, vals: &[f64]) -> Result<Vec<f64>> {
    vals.iter()
        .map(|&v| {
            let y = phi(v);
            if !y.is_finite() {
                domain(format!("phi is not defined at {v}"))
            } else if y < 0.0 {
                domain(format!("phi must be non-negative on the range of f, phi({v}) = {y}"))
            } else {
                Ok(y)
            }
        })
        .collect()
}

/// Profile of `phi ∘ f` for a strictly increasing `phi`: the steps of `f*`
/// with `phi` applied.
pub fn compose_increasing(
    f: &GridFunction,
    phi: impl Fn(f64) -> f64,
) -> Result<RearrangementProfile> {
    let vals = distinct_sorted(f)?;
    let images = sample_phi(&phi, &vals)?;
    if images.windows(2).any(|w| !(w[0] < w[1])) {
        return precondition("phi is not strictly increasing on the range of f");
    }
    Ok(rearrange(f).map_values(phi))
}

/// Profile of `phi ∘ f` for a strictly decreasing `phi`: the steps of `f*`
/// in reverse order with `phi` applied, so that `ψ*(t) = phi(f*(|Q| - t))`
/// away from breakpoints.
pub fn compose_decreasing(
    f: &GridFunction,
    phi: impl Fn(f64) -> f64,
) -> Result<RearrangementProfile> {
    let vals = distinct_sorted(f)?;
    let images = sample_phi(&phi, &vals)?;
    if images.windows(2).any(|w| !(w[0] > w[1])) {
        return precondition("phi is not strictly decreasing on the range of f");
    }
    let prof = rearrange(f);
    let steps: Vec<(f64, f64)> = prof
        .widths()
        .into_iter()
        .zip(prof.values.iter().map(|&v| phi(v)))
        .rev()
        .collect();
    Ok(RearrangementProfile::from_steps(steps, prof.total_measure))
}

/// Profile of `f · χ{f > a}`.
pub fn restrict_above(f: &GridFunction, a: f64) -> Result<RearrangementProfile> {
    if f.values.iter().any(|&v| v < 0.0) {
        return precondition("restrict_above needs f >= 0");
    }
    if !(a >= 0.0) {
        return precondition(format!("threshold must be non-negative, got {a}"));
    }
    Ok(rearrange(f).map_values(|v| if v > a { v } else { 0.0 }))
}

fn check_fraction(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} must lie in (0, 1), got {x}"))
    }
}

/// `∫_{(1-λ)|Q|}^{|Q|} f*`, the infimum of `∫_E |f|` over `|E| = λ|Q|`.
/// A non-aligned `λ|Q|` splits the boundary step fractionally.
pub fn tail_integral_inf(f: &GridFunction, lam: f64) -> Result<f64> {
    check_fraction("lambda", lam)?;
    let prof = rearrange(f);
    let total = prof.total_measure;
    Ok(prof.integral((1.0 - lam) * total, total))
}

/// Which end of the distribution [`extremal_subset`] selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Cells with the smallest values.
    Low,
    /// Cells with the largest values.
    High,
}

/// Indices (ascending) of `λ·N` cells where `|f|` is smallest or largest.
/// Among equal values the lower cell index wins.
pub fn extremal_subset(f: &GridFunction, lam: f64, side: Side) -> Result<Vec<usize>> {
    let k = f.aligned_cell_count(lam).ok_or_else(|| {
        Error::Alignment(format!(
            "lambda = {lam} does not select a whole number of the {} cells",
            f.len()
        ))
    })?;
    Ok(extremal_indices(&f.values, k, side))
}

pub(crate) fn extremal_indices(values: &[f64], k: usize, side: Side) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    match side {
        Side::Low => order.sort_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs())),
        Side::High => order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs())),
    }
    let mut picked = order[..k].to_vec();
    picked.sort_unstable();
    picked
}

/// Function on `Q × Q` for a grid over `Q`: `values[i * N + j]` is the value
/// on (x-cell `i`) × (y-cell `j`), where `N = m^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductGrid {
    pub cube: Cube,
    pub cells_per_side: usize,
    pub values: Vec<f64>,
}

impl ProductGrid {
    pub fn new(cube: Cube, cells_per_side: usize, values: Vec<f64>) -> Result<Self> {
        let n = crate::geometry::cell_count(cube.dim(), cells_per_side)?;
        if cells_per_side == 0 || values.len() != n * n {
            return Err(Error::Shape(format!(
                "product grid over {n} cells needs {} values, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(ProductGrid { cube, cells_per_side, values })
    }

    /// Samples `f(x_i, y_j)` on a pair of grids sharing a cube.
    pub fn from_cells(
        cube: Cube,
        cells_per_side: usize,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = crate::geometry::cell_count(cube.dim(), cells_per_side)?;
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        ProductGrid::new(cube, cells_per_side, values)
    }

    /// Cells per factor.
    pub fn factor_len(&self) -> usize {
        (self.values.len() as f64).sqrt().round() as usize
    }
}

/// `f*(t, s)` on the uniform `N × N` lattice of `(0,|Q|)²`:
/// `values[i * N + j]` is the value for `t` in step `i`, `s` in step `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IteratedProfile {
    pub total_measure: f64,
    pub steps: usize,
    pub values: Vec<f64>,
}

impl IteratedProfile {
    fn index(&self, x: f64) -> Result<usize> {
        if !(x > 0.0 && x < self.total_measure) {
            return domain(format!(
                "iterated profile is defined on (0, {})^2, got {x}",
                self.total_measure
            ));
        }
        let pos = x / self.total_measure * self.steps as f64;
        let snapped = pos.round();
        let k = if (pos - snapped).abs() <= 1e-12 * self.steps as f64 {
            snapped
        } else {
            pos.floor()
        };
        Ok((k as usize).min(self.steps - 1))
    }

    /// Right-continuous evaluation in both variables.
    pub fn at(&self, t: f64, s: f64) -> Result<f64> {
        Ok(self.values[self.index(t)? * self.steps + self.index(s)?])
    }

    /// The profile in `s` for the `i`-th step in `t`.
    pub fn inner(&self, i: usize) -> RearrangementProfile {
        let row = &self.values[i * self.steps..(i + 1) * self.steps];
        RearrangementProfile::from_sorted(row, self.total_measure)
    }

    /// Outer profile `t ↦ f*(t, s)` at a fixed `s`.
    pub fn outer_at(&self, s: f64) -> Result<RearrangementProfile> {
        let j = self.index(s)?;
        let col: Vec<f64> = (0..self.steps).map(|i| self.values[i * self.steps + j]).collect();
        Ok(RearrangementProfile::from_sorted(&col, self.total_measure))
    }

    /// Exact `∫_a^b ∫_c^d f*(t, s) ds dt` with partial cells weighted by
    /// their covered fraction.
    pub fn integral(&self, a: f64, b: f64, c: f64, d: f64) -> f64 {
        let h = self.total_measure / self.steps as f64;
        let weights = |lo: f64, hi: f64| -> Vec<f64> {
            (0..self.steps)
                .map(|k| {
                    let cell_lo = k as f64 * h;
                    let cell_hi = cell_lo + h;
                    (hi.min(cell_hi) - lo.max(cell_lo)).max(0.0)
                })
                .collect()
        };
        let wt = weights(a, b);
        let ws = weights(c, d);
        let mut sum = 0.0;
        for (i, &a) in wt.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let row = &self.values[i * self.steps..(i + 1) * self.steps];
            sum += a * row.iter().zip(&ws).map(|(v, w)| v * w).sum::<f64>();
        }
        sum
    }
}

/// Rearranges in `x` for every fixed y-cell, then in `y` for every `t`-step.
pub fn iterated_rearrange(f: &ProductGrid) -> IteratedProfile {
    let n = f.factor_len();
    let mut cols = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        for (i, c) in col.iter_mut().enumerate() {
            *c = f.values[i * n + j].abs();
        }
        col.sort_by(|a, b| b.total_cmp(a));
        for i in 0..n {
            cols[i * n + j] = col[i];
        }
    }
    for row in cols.chunks_mut(n) {
        row.sort_by(|a, b| b.total_cmp(a));
    }
    IteratedProfile { total_measure: f.cube.volume(), steps: n, values: cols }
}

/// `∫_{(1-λ)|Q|}^{|Q|} ∫_{(1-τ)|Q|}^{|Q|} f*(t, s) ds dt`, a lower bound for
/// the infimum of `∫_E ∫_G |f|` over `|E| = λ|Q|`, `|G| = τ|Q|`.
pub fn iterated_tail_bound(f: &ProductGrid, lam: f64, tau: f64) -> Result<f64> {
    check_fraction("lambda", lam)?;
    check_fraction("tau", tau)?;
    let prof = iterated_rearrange(f);
    let q = prof.total_measure;
    Ok(prof.integral((1.0 - lam) * q, q, (1.0 - tau) * q, q))
}
