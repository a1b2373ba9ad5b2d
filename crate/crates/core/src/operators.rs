//! The maximal operator and averaging operators on grids, operator-norm
//! probes, and the slab subset of a cube away from the origin.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exponent::ExponentField;
use crate::families::dyadic_tiling;
use crate::geometry::{ravel, unravel, Cube, CubeFamily, GridFunction};
use crate::norms::luxemburg_norm;
use crate::rearrange::{extremal_indices, Side};

/// Inclusive prefix sums of `values` on an `m^n` grid, stored on an
/// `(m+1)^n` grid with a zero border.
fn prefix_sums(values: &[f64], dim: usize, m: usize) -> Vec<f64> {
    let w = m + 1;
    let mut s = vec![0.0; w.pow(dim as u32)];
    for (idx, &v) in values.iter().enumerate() {
        let c: Vec<usize> = unravel(idx, dim, m).into_iter().map(|c| c + 1).collect();
        s[ravel(&c, w)] = v;
    }
    let mut stride = 1;
    for _ in 0..dim {
        for k in 0..s.len() {
            if (k / stride) % w != 0 {
                s[k] += s[k - stride];
            }
        }
        stride *= w;
    }
    s
}

/// Averages over every `k`-cell cube inside the grid, indexed by the cube's
/// lowest cell on an `(m-k+1)^n` grid.
fn window_means(prefix: &[f64], dim: usize, m: usize, k: usize) -> Vec<f64> {
    let w = m + 1;
    let positions = m - k + 1;
    let vol = (k as f64).powi(dim as i32);
    (0..positions.pow(dim as u32))
        .map(|a| {
            let lo = unravel(a, dim, positions);
            // inclusion-exclusion over the 2^n corners
            let mut sum = 0.0;
            let mut corner = vec![0; dim];
            for bits in 0..1usize << dim {
                let mut sign = 1.0;
                for d in 0..dim {
                    if bits >> d & 1 == 1 {
                        corner[d] = lo[d] + k;
                    } else {
                        corner[d] = lo[d];
                        sign = -sign;
                    }
                }
                sum += sign * prefix[ravel(&corner, w)];
            }
            sum / vol
        })
        .collect()
}

/// `out[c] = max in[a]` over `a ∈ [c-k+1, c] ∩ [0, len_in)`, for `c < len_out`.
fn sliding_max(input: &[f64], k: usize, len_out: usize, out: &mut [f64]) {
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for c in 0..len_out {
        while next <= c && next < input.len() {
            while dq.back().is_some_and(|&b| input[b] <= input[next]) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&f| f + k <= c) {
            dq.pop_front();
        }
        out[c] = dq.front().map_or(f64::NEG_INFINITY, |&f| input[f]);
    }
}

/// Separable max filter taking the `(m-k+1)^n` window grid to the `m^n`
/// cell grid: each cell gets the largest mean among windows containing it.
fn spread_max(means: Vec<f64>, dim: usize, m: usize, k: usize) -> Vec<f64> {
    let mut shape = vec![m - k + 1; dim];
    let mut cur = means;
    for axis in 0..dim {
        let len_in = shape[axis];
        let mut new_shape = shape.clone();
        new_shape[axis] = m;
        let total: usize = new_shape.iter().product();
        let mut next = vec![0.0; total];
        let inner: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut line = vec![0.0; len_in];
        let mut out = vec![0.0; m];
        for o in 0..outer {
            for i in 0..inner {
                for (a, l) in line.iter_mut().enumerate() {
                    *l = cur[(o * len_in + a) * inner + i];
                }
                sliding_max(&line, k, m, &mut out);
                for (c, &v) in out.iter().enumerate() {
                    next[(o * m + c) * inner + i] = v;
                }
            }
        }
        cur = next;
        shape = new_shape;
    }
    cur
}

/// Uncentred discrete maximal function: for each cell, the largest mean of
/// `|f|` over cell-aligned cubes of side at most `window_cap` cells that
/// contain the cell and lie inside the grid.
pub fn maximal(f: &GridFunction, window_cap: usize) -> Result<GridFunction> {
    if window_cap == 0 {
        return precondition("window_cap must be at least 1");
    }
    let dim = f.dim();
    let m = f.cells_per_side;
    let abs: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    let prefix = prefix_sums(&abs, dim, m);
    let cap = window_cap.min(m);
    let out = (1..=cap)
        .into_par_iter()
        .map(|k| spread_max(window_means(&prefix, dim, m, k), dim, m, k))
        .reduce(
            || vec![0.0; abs.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        );
    GridFunction::new(f.cube.clone(), m, out)
}

fn block_indices(f: &GridFunction, q: &Cube) -> Result<Vec<usize>> {
    let block = f.aligned_block(q).ok_or_else(|| {
        Error::Alignment(format!("cube at {:?} with side {} is not made of whole grid cells", q.corner, q.side))
    })?;
    let dim = f.dim();
    let width = block[0].1 - block[0].0;
    Ok((0..width.pow(dim as u32))
        .map(|k| {
            let c: Vec<usize> = unravel(k, dim, width).iter().zip(&block).map(|(o, b)| b.0 + o).collect();
            ravel(&c, f.cells_per_side)
        })
        .collect())
}

/// `A_𝓕 f = Σ ⟨f⟩_Q χ_Q`: the mean of `f` on each family cube, 0 elsewhere.
pub fn averaging(f: &GridFunction, family: &CubeFamily) -> Result<GridFunction> {
    let mut out = vec![0.0; f.len()];
    for q in family.cubes() {
        let idx = block_indices(f, q)?;
        let mean = idx.iter().map(|&i| f.values[i]).sum::<f64>() / idx.len() as f64;
        for i in idx {
            out[i] = mean;
        }
    }
    GridFunction::new(f.cube.clone(), f.cells_per_side, out)
}

/// Operator probed by [`operator_norm_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbedOperator {
    Maximal { window_cap: usize },
    Averaging(CubeFamily),
}

impl ProbedOperator {
    fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        match self {
            ProbedOperator::Maximal { window_cap } => maximal(f, *window_cap),
            ProbedOperator::Averaging(family) => averaging(f, family),
        }
    }
}

/// Structured probe functions: for each cube (the family's, or a dyadic
/// tiling at depths 0..=3 for `M`), its indicator and the indicators of its
/// halves where `p` is largest and smallest, plus the sums of those halves.
fn structured_candidates(p: &GridFunction, op: &ProbedOperator) -> Vec<Vec<f64>> {
    let cubes: Vec<Cube> = match op {
        ProbedOperator::Averaging(family) => family.cubes().to_vec(),
        ProbedOperator::Maximal { .. } => (0..=3).flat_map(|d| dyadic_tiling(&p.cube, d)).collect(),
    };
    let mut out = Vec::new();
    let mut high_sum = vec![0.0; p.len()];
    let mut low_sum = vec![0.0; p.len()];
    for q in &cubes {
        let Ok(idx) = block_indices(p, q) else { continue };
        let mut ind = vec![0.0; p.len()];
        idx.iter().for_each(|&i| ind[i] = 1.0);
        out.push(ind);
        let local: Vec<f64> = idx.iter().map(|&i| p.values[i]).collect();
        let k = local.len() / 2;
        if k == 0 {
            continue;
        }
        for (side, acc) in [(Side::High, &mut high_sum), (Side::Low, &mut low_sum)] {
            let mut f = vec![0.0; p.len()];
            for j in extremal_indices(&local, k, side) {
                f[idx[j]] = 1.0;
                acc[idx[j]] = 1.0;
            }
            out.push(f);
        }
    }
    out.push(high_sum);
    out.push(low_sum);
    out.retain(|f| f.iter().any(|&v| v != 0.0));
    out
}

/// Largest `‖Tf‖_{p(·)} / ‖f‖_{p(·)}` over structured candidates and
/// `trials` random fields on the field's domain at `m` cells per side: a
/// lower bound for the operator norm. Extra trials only add candidates, so
/// the result never decreases in `trials`.
pub fn operator_norm_probe(
    p: &ExponentField,
    op: &ProbedOperator,
    trials: usize,
    m: usize,
    tol: f64,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return precondition("trials must be at least 1");
    }
    let pg = p.discretize(p.domain(), m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = structured_candidates(&pg, op);
    for _ in 0..trials {
        let sparsity: f64 = rng.gen_range(0.0..1.0);
        let spread: f64 = rng.gen_range(0.0..4.0);
        candidates.push(
            (0..pg.len())
                .map(|_| {
                    if rng.gen::<f64>() < sparsity {
                        0.0
                    } else {
                        (spread * rng.gen::<f64>()).exp() - 1.0 + f64::MIN_POSITIVE
                    }
                })
                .collect(),
        );
    }
    let ratios = candidates
        .into_par_iter()
        .map(|values| -> Result<f64> {
            let f = GridFunction::new(pg.cube.clone(), m, values)?;
            let nf = luxemburg_norm(&f, &pg, tol)?.value;
            if nf == 0.0 {
                return Ok(0.0);
            }
            Ok(luxemburg_norm(&op.apply(&f)?, &pg, tol)?.value / nf)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

/// A slab `E = {x ∈ Q : x_axis ∈ (lo, hi)}` with `|E| = δ|Q|`, and a bound
/// on `|x| / |y|` for `x ∈ Q`, `y ∈ Q ∖ E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slab {
    pub cube: Cube,
    pub axis: usize,
    pub interval: (f64, f64),
    /// `√n / δ`.
    pub ratio_bound: f64,
}

impl Slab {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.cube.contains(x) && x[self.axis] > self.interval.0 && x[self.axis] < self.interval.1
    }

    pub fn measure(&self) -> f64 {
        (self.interval.1 - self.interval.0) * self.cube.side.powi(self.cube.dim() as i32 - 1)
    }
}

/// Slab of relative measure `δ` on the face of `Q` nearest the origin.
///
/// With `ξ` the point of the closed cube nearest to 0 and `j₀` the axis of
/// its largest coordinate (ties to the lowest axis), the slab is the
/// `δ`-fraction of `Q` along `j₀` adjacent to the face through `ξ`.
pub fn slab_subset(q: &Cube, delta: f64) -> Result<Slab> {
    if !(delta > 0.0 && delta < 1.0) {
        return precondition(format!("delta must lie in (0, 1), got {delta}"));
    }
    if q.contains_open(&vec![0.0; q.dim()]) {
        return precondition("the origin lies inside the cube");
    }
    let h = q.side;
    let xi: Vec<f64> = q.corner.iter().map(|&a| 0.0f64.clamp(a, a + h)).collect();
    let mut axis = 0;
    for (j, v) in xi.iter().enumerate() {
        if v.abs() > xi[axis].abs() {
            axis = j;
        }
    }
    let a = q.corner[axis];
    let interval = if a >= 0.0 { (a, a + delta * h) } else { (a + (1.0 - delta) * h, a + h) };
    Ok(Slab {
        cube: q.clone(),
        axis,
        interval,
        ratio_bound: (q.dim() as f64).sqrt() / delta,
    })
}
