//! Radial exponents: the two-point decay criterion and the convexity
//! inequality behind it.

use super::report::{Aggregation, ConditionParams, ConditionReport, CubeTerm, Verdict, VerdictRule};
use crate::error::{precondition, Error, Result};
use crate::exponent::ExponentField;
use crate::geometry::Cube;

/// `δ^{1/x}` with `δ^∞ = 0`.
fn root_pow(ln_delta: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (ln_delta / x).exp()
    }
}

/// Checks `δ^{1/|a-b|} ≤ ½ (δ^{1/(2|a-ν|)} + δ^{1/(2|b-ν|)})` on every
/// triple `(a, b, ν)`. Returns `false` at the first violation.
pub fn convexity_bound_check(p_plus: f64, delta: f64, triples: &[(f64, f64, f64)]) -> Result<bool> {
    if !(p_plus > 1.0) || !p_plus.is_finite() {
        return precondition(format!("p_plus must be a finite value above 1, got {p_plus}"));
    }
    let cap = (-8.0 * p_plus).exp();
    if !(delta > 0.0 && delta <= cap) {
        return precondition(format!("delta must lie in (0, e^(-8 p_plus)] = (0, {cap:e}], got {delta}"));
    }
    let ld = delta.ln();
    Ok(triples.iter().all(|&(a, b, nu)| {
        let lhs = root_pow(ld, (a - b).abs());
        let rhs = 0.5 * (root_pow(ld, 2.0 * (a - nu).abs()) + root_pow(ld, 2.0 * (b - nu).abs()));
        lhs <= rhs * (1.0 + 1e-12)
    }))
}

/// Default upper end of `ln ln t` probed by [`ussc_check`].
const LOGLOG_SPAN: f64 = 6.5;
/// `ln ln t` at which `t` is near the largest finite double.
const MAX_LOGLOG: f64 = 6.55;

/// Radii for the decay check: `ln ln t` evenly spaced from `ln ln N` up to
/// `max(6.5, ln ln N + 1)`, cut at `t_max` and below overflow.
fn radii(n_cutoff: f64, t_max: f64, samples: usize) -> Vec<f64> {
    let u0 = n_cutoff.ln().ln();
    let u1 = LOGLOG_SPAN.max(u0 + 1.0).min(MAX_LOGLOG).min(t_max.ln().ln());
    let k = samples.max(2);
    (0..k)
        .map(|i| (u0 + (u1 - u0) * i as f64 / (k - 1) as f64).exp().exp())
        .collect()
}

/// Radial criterion for `p(x) = s(|x|)` on ℝⁿ.
///
/// Condition (a): `α < s₋ min(1, s₋ - 1) / n`. Condition (b): `|s(t₂) -
/// s(t₁)| ≤ α log(t₂/t₁) / log t₁` for `t₂ ≥ t₁ ≥ N`, checked through the
/// derivative envelope `|s'(t)| t log t ≤ α` when the family has a closed
/// form, and on sampled pairs otherwise. Each per-sample term is the ratio
/// of the observed quantity to its allowance; the verdict is `bounded`
/// (pass) when (a) holds and every ratio is at most `1 + 1e-9`, `growing`
/// (fail) otherwise.
pub fn ussc_check(s: &ExponentField, alpha: f64, n_cutoff: f64, n: usize, samples: usize) -> Result<ConditionReport> {
    if !(n_cutoff > 1.0) || !n_cutoff.is_finite() {
        return precondition(format!("N must exceed 1, got {n_cutoff}"));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return precondition(format!("alpha must be positive, got {alpha}"));
    }
    if n == 0 {
        return precondition("dimension n must be at least 1");
    }
    if samples < 2 {
        return precondition("ussc needs at least 2 samples");
    }
    let s = if s.dimension() == 1 {
        s.clone()
    } else {
        s.radial_profile()
            .ok_or_else(|| Error::Shape("ussc needs a radial or one-dimensional exponent".into()))?
    };
    let s_minus = s.range().0;
    let alpha_cap = s_minus * (s_minus - 1.0).min(1.0) / n as f64;
    let cond_a = alpha < alpha_cap;

    let derivative = s.envelope_ratio(n_cutoff.max(2.0)).is_some();
    let t_max = if derivative { f64::INFINITY } else { s.domain().max_norm() };
    if !(t_max > n_cutoff) || n_cutoff.ln().ln() >= MAX_LOGLOG {
        return precondition(format!("the sampled profile ends at {t_max}, below N = {n_cutoff}"));
    }
    let ts = radii(n_cutoff, t_max, samples);
    let mut per_cube = Vec::with_capacity(ts.len());
    let route;
    if derivative {
        route = "derivative";
        for w in ts.windows(2) {
            let term = w
                .iter()
                .map(|&t| s.envelope_ratio(t).unwrap_or(f64::INFINITY) / alpha)
                .fold(0.0, f64::max);
            per_cube.push(CubeTerm { cube: Cube::new(vec![w[0]], w[1] - w[0])?, level: 0, term });
        }
    } else {
        route = "two-point";
        const RATIOS: [f64; 6] = [1.001, 1.01, 1.1, 2.0, 10.0, 1e3];
        for w in ts.windows(2) {
            let t1 = w[0];
            let s1 = s.eval_radius(t1)?;
            let mut term = 0.0f64;
            for rho in RATIOS {
                let t2 = t1 * rho;
                if t2 > t_max {
                    break;
                }
                let allowance = alpha * rho.ln() / t1.ln();
                term = term.max((s.eval_radius(t2)? - s1).abs() / allowance);
            }
            per_cube.push(CubeTerm { cube: Cube::new(vec![t1], w[1] - t1)?, level: 0, term });
        }
    }
    let params = ConditionParams { alpha, n_cutoff, ..ConditionParams::default() };
    let mut report = ConditionReport::assemble(
        "ussc",
        params,
        Aggregation::Sup,
        per_cube,
        &VerdictRule::default(),
        format!(
            "route={route}; alpha bound {alpha_cap} ({}); worst envelope ratio over t >= N",
            if cond_a { "holds" } else { "violated" }
        ),
    );
    report.verdict = if cond_a && report.aggregate <= 1.0 + 1e-9 {
        Verdict::Bounded
    } else {
        Verdict::Growing
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::PhiFamily;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(r: f64) -> Cube {
        Cube::new(vec![0.0], r).unwrap()
    }

    #[test]
    fn convexity_degenerate_and_hand_case() {
        let d = (-24.0f64).exp();
        assert!(convexity_bound_check(3.0, d, &[(2.5, 2.5, 2.5)]).unwrap());
        assert!(convexity_bound_check(3.0, d, &[(3.0, 2.0, 2.5)]).unwrap());
        assert!(convexity_bound_check(3.0, 0.5, &[]).is_err());
    }

    #[test]
    fn convexity_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (lo, hi) = (1.2, 3.0);
        let triples: Vec<_> = (0..1000)
            .map(|_| (rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
            .collect();
        assert!(convexity_bound_check(hi, (-8.0 * hi).exp(), &triples).unwrap());
    }

    #[test]
    fn ussc_constant_and_families() {
        let c = ExponentField::constant(2.5, line(10.0)).unwrap();
        assert_eq!(ussc_check(&c, 0.5, 3.0, 1, 64).unwrap().verdict, Verdict::Bounded);

        let sll = ExponentField::sin_log_log(2.4, 0.4, line(10.0)).unwrap();
        let rep = ussc_check(&sll, 0.4, 16.0, 1, 512).unwrap();
        assert_eq!(rep.verdict, Verdict::Bounded);
        assert!(rep.aggregate <= 1.0 && rep.aggregate > 0.99);
        assert_eq!(rep.aggregate, rep.recomputed_aggregate());
        // α above s₋ min(1, s₋ - 1)/n = 2/3 in three dimensions
        assert_eq!(ussc_check(&sll, 0.7, 16.0, 3, 64).unwrap().verdict, Verdict::Growing);

        let sl = ExponentField::sin_log(2.4, 0.4, line(10.0)).unwrap();
        assert_eq!(ussc_check(&sl, 0.4, 16.0, 1, 512).unwrap().verdict, Verdict::Growing);
    }

    #[test]
    fn ussc_sinintegral_passes_for_large_n() {
        let p = ExponentField::sin_integral(2.5, 0.5, std::f64::consts::E.exp(), PhiFamily::LogLog, line(1e4)).unwrap();
        for alpha in [0.2, 0.5] {
            // |s'| t log t = 0.5 |sin t| / log log t ≤ α once log log N ≥ 0.5/α
            let n = (0.5f64 / alpha).exp().exp();
            assert_eq!(ussc_check(&p, alpha, n, 1, 256).unwrap().verdict, Verdict::Bounded);
        }
    }

    #[test]
    fn ussc_two_point_route() {
        use crate::geometry::GridFunction;
        let g = GridFunction::from_fn(Cube::new(vec![0.0], 1e6).unwrap(), 1000, |_| 2.0).unwrap();
        let p = ExponentField::grid(g).unwrap();
        let rep = ussc_check(&p, 0.5, 3.0, 1, 8).unwrap();
        assert!(rep.notes.contains("two-point"));
        assert_eq!(rep.verdict, Verdict::Bounded);
    }
}
