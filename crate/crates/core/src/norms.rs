//! Modular, Luxemburg norm and the duality pairing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exponent::conjugate_value;
use crate::geometry::GridFunction;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

/// Outcome of a Luxemburg norm computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    /// `|modular(f / value) - 1|`, zero when `value = 0`.
    pub residual: f64,
    pub iterations: usize,
}

fn check_exponent(p: &GridFunction) -> Result<()> {
    match p.values.iter().find(|&&q| !(q > 1.0 && q.is_finite())) {
        Some(q) => Err(Error::InvalidExponent(format!(
            "exponent values must lie in (1, inf), found {q}"
        ))),
        None => Ok(()),
    }
}

/// `∫ |f|^p`, an exact cell sum.
pub fn modular(f: &GridFunction, p: &GridFunction) -> Result<f64> {
    f.ensure_same_grid(p)?;
    check_exponent(p)?;
    Ok(scaled_modular(&f.values, &p.values, 1.0) * f.cell_volume())
}

/// `Σ (|f|/λ)^p` without the cell volume.
fn scaled_modular(f: &[f64], p: &[f64], lam: f64) -> f64 {
    f.iter()
        .zip(p)
        .map(|(&v, &q)| if v == 0.0 { 0.0 } else { (v.abs() / lam).powf(q) })
        .sum()
}

/// Luxemburg norm by bisection on the decreasing map `λ ↦ modular(f/λ)`.
/// Stops once the bracket is narrower than `tol · λ`.
pub fn luxemburg_norm(f: &GridFunction, p: &GridFunction, tol: f64) -> Result<NormResult> {
    f.ensure_same_grid(p)?;
    check_exponent(p)?;
    if !(tol > 0.0) {
        return precondition(format!("tolerance must be positive, got {tol}"));
    }
    let sup = f.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if sup == 0.0 {
        return Ok(NormResult { value: 0.0, residual: 0.0, iterations: 0 });
    }
    if !sup.is_finite() {
        return precondition("function values must be finite");
    }
    let vol = f.cell_volume();
    let q = f.cube.volume();
    let p_minus = p.min();
    let p_plus = p.max();
    let m = |lam: f64| scaled_modular(&f.values, &p.values, lam) * vol;

    let mut lo = sup * q.powf(-1.0 / p_minus) * 1e-3;
    let mut hi = sup * q.max(1.0).powf(1.0 / p_minus) * 1e3;
    let mut iterations = 0;
    while m(lo) <= 1.0 {
        lo *= 1e-3;
        iterations += 1;
        if iterations > MAX_ITERATIONS || lo == 0.0 {
            return Err(numerical("lower bracket never reached modular > 1", iterations, lo, hi));
        }
    }
    while m(hi) > 1.0 {
        hi *= 1e3;
        iterations += 1;
        if iterations > MAX_ITERATIONS || !hi.is_finite() {
            return Err(numerical("upper bracket never reached modular <= 1", iterations, lo, hi));
        }
    }
    // residual of the midpoint is about p₊ times the relative half-width
    let width_tol = tol / p_plus;
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width_tol * mid || mid <= lo || mid >= hi {
            let residual = (m(mid) - 1.0).abs();
            return Ok(NormResult { value: mid, residual, iterations });
        }
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(numerical("bisection did not converge", iterations, lo, hi));
        }
        if m(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

fn numerical(message: &str, iterations: usize, lo: f64, hi: f64) -> Error {
    Error::Numerical { message: message.into(), iterations, lo, hi }
}

/// Result of [`duality_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityOutcome {
    /// `‖f‖_{p(·)}`.
    pub norm: f64,
    /// Largest `∫|fg|` over all candidates with `‖g‖_{p'(·)} = 1`.
    pub best_pairing: f64,
    /// Pairing of the extremal shape `g ∝ |f|^{p-1}`.
    pub extremal_pairing: f64,
    /// Number of candidates tried.
    pub candidates: usize,
}

impl DualityOutcome {
    /// `pairing ≤ 2‖f‖` for the best candidate (hence for all).
    pub fn upper_holds(&self) -> bool {
        self.best_pairing <= 2.0 * self.norm * (1.0 + 1e-9)
    }

    /// `‖f‖/2 ≤ pairing` for the best candidate.
    pub fn lower_holds(&self) -> bool {
        self.best_pairing >= 0.5 * self.norm * (1.0 - 1e-9)
    }
}

/// Compares `‖f‖_{p(·)}` with `∫|fg|` over unit-norm `g` in `L^{p'(·)}`:
/// the extremal shape `|f|^{p-1}`, indicators of level sets of `|f|`, and
/// `trials` random non-negative fields drawn from `seed`.
pub fn duality_gap(
    f: &GridFunction,
    p: &GridFunction,
    trials: usize,
    seed: u64,
) -> Result<DualityOutcome> {
    let norm = luxemburg_norm(f, p, DEFAULT_TOL)?.value;
    let pc = p.map(conjugate_value);
    let vol = f.cell_volume();
    let pairing = |g: &GridFunction| -> Result<Option<f64>> {
        let gn = luxemburg_norm(g, &pc, DEFAULT_TOL)?.value;
        if gn == 0.0 {
            return Ok(None);
        }
        let s: f64 = f.values.iter().zip(&g.values).map(|(a, b)| (a * b).abs()).sum();
        Ok(Some(s * vol / gn))
    };

    let mut candidates = 0;
    let mut best = 0.0f64;
    let extremal = if norm == 0.0 {
        0.0
    } else {
        let g = f.zip_with(p, |v, q| (v.abs() / norm).powf(q - 1.0))?;
        pairing(&g)?.unwrap_or(0.0)
    };
    candidates += 1;
    best = best.max(extremal);

    let mut levels: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let stride = (levels.len() / 8).max(1);
    for &a in levels.iter().step_by(stride) {
        let g = f.map(|v| if v.abs() >= a { 1.0 } else { 0.0 });
        if let Some(x) = pairing(&g)? {
            best = best.max(x);
            candidates += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let values = (0..f.len()).map(|_| rng.gen::<f64>()).collect();
        let g = GridFunction::new(f.cube.clone(), f.cells_per_side, values)?;
        if let Some(x) = pairing(&g)? {
            best = best.max(x);
            candidates += 1;
        }
    }
    Ok(DualityOutcome { norm, best_pairing: best, extremal_pairing: extremal, candidates })
}
