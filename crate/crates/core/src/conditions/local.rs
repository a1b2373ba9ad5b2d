//! Pointwise regularity and integrability conditions: LH₀, LH∞, N∞ and the
//! `A_{p(·)}` ratio.

use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::exponent::ExponentField;
use crate::geometry::{ravel, unravel, Cube, GridFunction};
use crate::norms::luxemburg_norm;

/// Offsets `v` on the sample lattice used by [`lh0_constant`]: every `v` with
/// `‖v‖∞ ≤ 8`, plus `±2^k` along each axis, keeping `|v| h < 1/2`.
fn lh0_offsets(dim: usize, h: f64) -> Vec<Vec<i64>> {
    const NEAR: i64 = 8;
    let width = (2 * NEAR + 1) as usize;
    let mut out: Vec<Vec<i64>> = (0..width.pow(dim as u32))
        .map(|k| unravel(k, dim, width).into_iter().map(|c| c as i64 - NEAR).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|&c| c != 0))
        .collect();
    for axis in 0..dim {
        let mut step = 2 * NEAR;
        while (step as f64) * h < 0.5 {
            for sign in [-1, 1] {
                let mut v = vec![0; dim];
                v[axis] = sign * step;
                out.push(v);
            }
            step *= 2;
        }
    }
    out.retain(|v| norm_i(v) * h < 0.5);
    out
}

fn norm_i(v: &[i64]) -> f64 {
    v.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt()
}

/// Largest `|p(x) - p(y)| · (-log|x - y|)` over pairs of sample points in
/// `region` at distance below 1/2.
///
/// Samples sit at the cell centres of a `samples`-per-side grid; pairs are
/// all lattice neighbours within sup-distance 8 plus dyadic axis offsets.
pub fn lh0_constant(p: &ExponentField, region: &Cube, samples: usize) -> Result<f64> {
    if samples < 2 {
        return precondition(format!("lh0 needs at least 2 samples per side, got {samples}"));
    }
    let g = p.discretize(region, samples)?;
    let n = region.dim();
    let h = g.cell_side();
    let offsets = lh0_offsets(n, h);
    let m = samples as i64;
    let best = (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let coords: Vec<i64> = unravel(idx, n, samples).into_iter().map(|c| c as i64).collect();
            let px = g.values[idx];
            let mut best = 0.0f64;
            let mut other = vec![0usize; n];
            'offsets: for v in &offsets {
                for ((o, &c), &d) in other.iter_mut().zip(&coords).zip(v) {
                    let y = c + d;
                    if y < 0 || y >= m {
                        continue 'offsets;
                    }
                    *o = y as usize;
                }
                let dp = (px - g.values[ravel(&other, samples)]).abs();
                if dp > 0.0 {
                    best = best.max(dp * -(norm_i(v) * h).ln());
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}

/// Sample points for [`lhinf_constant`]: cell centres of `[-R, R]^n` inside
/// the ball, plus log-spaced points on both half axes of the first
/// coordinate.
fn lhinf_points(dim: usize, radius: f64, samples: usize) -> Result<Vec<Vec<f64>>> {
    let lattice = GridFunction::constant(Cube::centered(dim, radius)?, samples, 0.0)?;
    let mut pts: Vec<Vec<f64>> = (0..lattice.len())
        .map(|i| lattice.cell_center(i))
        .filter(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt() <= radius)
        .collect();
    let lo = radius.min(1.0) * 1e-3;
    let ratio = (radius / lo).ln() / (samples.max(2) - 1) as f64;
    for k in 0..samples.max(2) {
        let t = (lo.ln() + ratio * k as f64).exp().min(radius);
        for sign in [-1.0, 1.0] {
            let mut x = vec![0.0; dim];
            x[0] = sign * t;
            pts.push(x);
        }
    }
    Ok(pts)
}

/// Largest `|p(x) - p_∞| · log(e + |x|)` over sample points with
/// `|x| ≤ radius`.
pub fn lhinf_constant(p: &ExponentField, p_inf: f64, radius: f64, samples: usize) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return precondition(format!("radius must be positive and finite, got {radius}"));
    }
    if samples == 0 {
        return precondition("lhinf needs at least one sample per side");
    }
    let pts = lhinf_points(p.dimension(), radius, samples)?;
    pts.par_iter()
        .map(|x| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            Ok((p.eval(x)? - p_inf).abs() * (std::f64::consts::E + r).ln())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// `c^{1/|p - p_∞|}` with `c^∞ = 0`.
fn ninf_integrand(ln_c: f64, p: f64, p_inf: f64) -> f64 {
    let d = (p - p_inf).abs();
    if d == 0.0 {
        0.0
    } else {
        (ln_c / d).exp()
    }
}

/// Partial integral `∫_{|x| ≤ radius} c^{1/|p(x) - p_∞|} dx`.
///
/// The box `[-R, R]^n` is cut into dyadic sup-norm shells
/// `R/2^{k+1} ≤ ‖x‖∞ ≤ R/2^k` down to a core of half-width at most 1; each
/// shell and the core carry `m` cells per side of their outer box. Cells
/// enter the midpoint sum when their centre lies in the ball.
pub fn ninf_integral(p: &ExponentField, c: f64, p_inf: f64, radius: f64, m: usize) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return precondition(format!("c must lie in (0, 1), got {c}"));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return precondition(format!("radius must be positive and finite, got {radius}"));
    }
    if m == 0 || m % 4 != 0 {
        return precondition(format!("m must be a positive multiple of 4, got {m}"));
    }
    let n = p.dimension();
    let ln_c = c.ln();
    let shells = if radius > 1.0 { radius.log2().ceil() as u32 } else { 0 };
    let r_min = radius / 2f64.powi(shells as i32);
    let boxes: Vec<(f64, bool)> = (0..shells)
        .map(|k| (radius / 2f64.powi(k as i32), true))
        .chain(std::iter::once((r_min, false)))
        .collect();
    let total = boxes
        .par_iter()
        .map(|&(half, hollow)| -> Result<f64> {
            let outer = Cube::centered(n, half)?;
            let grid = GridFunction::constant(outer, m, 0.0)?;
            let vol = grid.cell_volume();
            let (lo, hi) = (m / 4, 3 * m / 4);
            let mut sum = 0.0;
            for idx in 0..grid.len() {
                let coords = grid.cell_coords(idx);
                if hollow && coords.iter().all(|&c| c >= lo && c < hi) {
                    continue;
                }
                let x = grid.cell_center(idx);
                if x.iter().map(|c| c * c).sum::<f64>().sqrt() > radius {
                    continue;
                }
                sum += ninf_integrand(ln_c, p.eval(&x)?, p_inf);
            }
            Ok(sum * vol)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(total.iter().sum())
}

/// `‖χ_Q‖_{p(·)} ‖χ_Q‖_{p'(·)} / |Q|` with `p` sampled on `m` cells per side.
pub fn a_ratio(p: &ExponentField, q: &Cube, m: usize, tol: f64) -> Result<f64> {
    if m == 0 {
        return precondition("a_ratio needs m >= 1");
    }
    let pg = p.discretize(q, m)?;
    let pc = pg.map(crate::exponent::conjugate_value);
    let one = GridFunction::constant(q.clone(), m, 1.0)?;
    let a = luxemburg_norm(&one, &pg, tol)?.value;
    let b = luxemburg_norm(&one, &pc, tol)?.value;
    Ok(a * b / q.volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn line(a: f64, b: f64) -> Cube {
        Cube::new(vec![a], b - a).unwrap()
    }

    #[test]
    fn constant_exponent_is_zero_everywhere() {
        let p = ExponentField::constant(2.5, Cube::centered(2, 4.0).unwrap()).unwrap();
        assert_eq!(lh0_constant(&p, &Cube::unit(2), 16).unwrap(), 0.0);
        assert_eq!(lhinf_constant(&p, 2.5, 4.0, 16).unwrap(), 0.0);
        assert_eq!(ninf_integral(&p, 0.5, 2.5, 10.0, 64).unwrap(), 0.0);
        let q = Cube::new(vec![0.3, -1.0], 0.7).unwrap();
        assert!((a_ratio(&p, &q, 8, 1e-12).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lh0_prototype_is_stable_and_step_grows() {
        let dom = line(0.0, 10.0);
        let p = ExponentField::log_holder(2.0, dom.clone()).unwrap();
        let a = lh0_constant(&p, &dom, 256).unwrap();
        let b = lh0_constant(&p, &dom, 512).unwrap();
        assert!(a > 0.0 && (a - b).abs() < 0.05 * b, "{a} {b}");

        let step = ExponentField::step(2.0, 3.0, 0.0, line(-1.0, 1.0)).unwrap();
        let dom = line(-1.0, 1.0);
        let vals: Vec<f64> = [16, 64, 256].iter().map(|&s| lh0_constant(&step, &dom, s).unwrap()).collect();
        // nearest straddling pair is at distance h = 2/s
        assert!((vals[0] - (8.0f64).ln()).abs() < 1e-12);
        assert!(vals[1] > vals[0] && vals[2] > vals[1]);
        assert!((vals[2] - (128.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn lhinf_prototype_product_is_one() {
        let p = ExponentField::log_holder(2.0, line(-1e6, 2e6)).unwrap();
        let v = lhinf_constant(&p, 2.0, 1e6, 64).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lhinf_sinloglog_grows() {
        let p = ExponentField::sin_log_log(2.4, 0.4, line(-1e60, 2e60)).unwrap();
        let a = lhinf_constant(&p, 2.4, 1e3, 64).unwrap();
        let b = lhinf_constant(&p, 2.4, 1e60, 64).unwrap();
        assert!(b > 2.0 * a, "{a} {b}");
    }

    #[test]
    fn ninf_closed_forms() {
        let p = ExponentField::log_holder(2.0, line(-1e4, 2e4)).unwrap();
        // c = e^-2: ∫_{-R}^{R} (e+|x|)^-2 = 2 (1/e - 1/(e+R))
        for r in [0.5, 3.0, 100.0, 1000.0] {
            let got = ninf_integral(&p, (-2.0f64).exp(), 2.0, r, 4096).unwrap();
            let want = 2.0 * (1.0 / E - 1.0 / (E + r));
            assert!((got - want).abs() < 1e-6 * want, "R={r}: {got} vs {want}");
        }
        // c = 1/2: ∫ (e+|x|)^{-log 2} = 2 ((e+R)^{1-log 2} - e^{1-log 2}) / (1 - log 2)
        let k = 1.0 - 2f64.ln();
        let r = 1000.0;
        let got = ninf_integral(&p, 0.5, 2.0, r, 4096).unwrap();
        let want = 2.0 * ((E + r).powf(k) - E.powf(k)) / k;
        assert!((got - want).abs() < 1e-6 * want);
    }

    #[test]
    fn ninf_two_dimensional_disc() {
        // c^{1/|p - p_inf|} ≡ c on the disc when |p - p_inf| = 1
        let p = ExponentField::constant(3.0, Cube::centered(2, 8.0).unwrap()).unwrap();
        let got = ninf_integral(&p, 0.5, 2.0, 5.0, 256).unwrap();
        let want = 0.5 * std::f64::consts::PI * 25.0;
        assert!((got - want).abs() < 2e-3 * want, "{got} vs {want}");
    }

    #[test]
    fn a_ratio_step_matches_modular_asymptotics() {
        let p = ExponentField::step(2.0, 3.0, 0.0, line(-1.0, 1.0)).unwrap();
        for k in [10, 16, 22] {
            let h = 2f64.powi(-k);
            let got = a_ratio(&p, &line(-h, h), 2, 1e-12).unwrap();
            // h λ^-2 + h λ^-3 = 1 and h μ^-2 + h μ^-3/2 = 1, solved by bisection
            let solve = |a: f64, b: f64| {
                let (mut lo, mut hi) = (1e-30f64, 10.0f64);
                for _ in 0..200 {
                    let mid = (lo * hi).sqrt();
                    if h * mid.powf(-a) + h * mid.powf(-b) > 1.0 { lo = mid } else { hi = mid }
                }
                lo
            };
            let want = solve(2.0, 3.0) * solve(2.0, 1.5) / (2.0 * h);
            assert!((got - want).abs() < 1e-9 * want, "{got} vs {want}");
            if k == 22 {
                // corrections of relative size h^(1/4) to the leading term
                assert!((got / (0.5 * h.powf(-1.0 / 6.0)) - 1.0).abs() < 0.05);
            }
        }
    }
}
