//! Acceptance battery: one PASS/FAIL line per criterion, with timings.

use std::f64::consts::E;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use varlp::conditions::uinf::{f_grid, uinf_local};
use varlp::conditions::{
    a_ratio, ninf_integral, run_check, ussc_check, CheckKind, ConditionParams, LocalExponent, ProbeConfig,
    UinfMode, Verdict, VerdictRule,
};
use varlp::exponent::conjugate_value;
use varlp::families::{dyadic_tiling, log_doubling_radii};
use varlp::norms::{duality_gap, luxemburg_norm};
use varlp::operators::{averaging, maximal, slab_subset};
use varlp::rearrange::{
    compose_decreasing, compose_increasing, iterated_rearrange, iterated_tail_bound, rearrange, ProductGrid,
};
use varlp::{Cube, CubeFamily, ExponentField, GridFunction};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_grid(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> GridFunction {
    let dim = rng.gen_range(1..=2);
    let m = if dim == 1 { rng.gen_range(1..=64) } else { rng.gen_range(1..=8) };
    let cube = Cube::new((0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect(), rng.gen_range(0.1..4.0)).unwrap();
    let n = (m as usize).pow(dim as u32);
    // a few repeated values so ties occur
    let pool: Vec<f64> = (0..rng.gen_range(1..=n)).map(|_| rng.gen_range(lo..hi)).collect();
    let values = (0..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
    GridFunction::new(cube, m, values).unwrap()
}

/// Non-breakpoint sample points of a step partition of `(0, total)`.
fn interior_points(partition: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    partition
        .windows(2)
        .flat_map(|w| {
            let (a, b) = (w[0], w[1]);
            vec![0.5 * (a + b), a + (b - a) * rng.gen_range(0.05..0.95)]
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..500 {
        let f = random_grid(&mut rng, -5.0, 5.0);
        let prof = rearrange(&f);
        let mut oracle: Vec<f64> = f.values.iter().map(|v| v.abs()).collect();
        oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let h = f.cube.volume() / f.len() as f64;
        for (k, &v) in oracle.iter().enumerate() {
            let t = (k as f64 + 0.5) * h;
            let got = prof.at(t).map_err(e2s)?;
            ensure(got == v, || format!("trial {trial}: f*({t}) = {got}, sorted oracle {v}"))?;
        }
        for _ in 0..20 {
            let alpha = rng.gen_range(-0.5..5.5);
            let count = f.values.iter().filter(|v| v.abs() > alpha).count();
            let direct = count as f64 / f.len() as f64 * f.cube.volume();
            let got = prof.measure_above(alpha);
            ensure(got == direct, || format!("trial {trial}: |{{f* > {alpha}}}| = {got}, |{{|f| > {alpha}}}| = {direct}"))?;
        }
    }
    Ok("500 grids match the sort oracle; 10000 thresholds equimeasurable".into())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..200 {
        let f = random_grid(&mut rng, 0.1, 5.0);
        let base = rearrange(&f);
        let inc = compose_increasing(&f, |x| x * x + x.ln_1p()).map_err(e2s)?;
        let dec = compose_decreasing(&f, |x| (-x).exp()).map_err(e2s)?;
        let total = base.total_measure;
        let mut part = base.partition();
        part.extend(dec.partition());
        part.sort_by(|a, b| a.partial_cmp(b).unwrap());
        part.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total);
        for t in interior_points(&part, &mut rng) {
            let f_t = base.at(t).map_err(e2s)?;
            ensure(inc.at(t).map_err(e2s)? == f_t * f_t + f_t.ln_1p(), || format!("trial {trial}: increasing identity fails at t = {t}"))?;
            let mirrored = (-base.at(total - t).map_err(e2s)?).exp();
            ensure(dec.at(t).map_err(e2s)? == mirrored, || format!("trial {trial}: decreasing identity fails at t = {t}"))?;
        }
    }
    // f = 1 on (0,1/2], 2 on (1/2,1), φ(x) = 1/x
    let f = GridFunction::new(Cube::unit(1), 2, vec![1.0, 2.0]).unwrap();
    let base = rearrange(&f);
    let psi = compose_decreasing(&f, |x| 1.0 / x).map_err(e2s)?;
    let mut failures = Vec::new();
    for k in 1..1000 {
        let t = k as f64 / 1000.0;
        if psi.at(t).map_err(e2s)? != 1.0 / base.at(1.0 - t).map_err(e2s)? {
            failures.push(t);
        }
    }
    ensure(failures == vec![0.5], || format!("1/f counterexample fails at {failures:?}, expected only t = 1/2"))?;
    Ok("200 instances exact off breakpoints; 1/f identity fails only at t = 1/2".into())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for trial in 0..200 {
        let p = random_grid(&mut rng, 1.05, 6.0);
        let pc = p.map(conjugate_value);
        let (prof, cprof) = (rearrange(&p), rearrange(&pc));
        let total = prof.total_measure;
        let mut part = cprof.partition();
        part.extend(prof.partition().iter().map(|t| total - t));
        part.sort_by(|a, b| a.partial_cmp(b).unwrap());
        part.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * total);
        for t in interior_points(&part, &mut rng) {
            let lhs = cprof.at(t).map_err(e2s)?;
            let rhs = conjugate_value(prof.at(total - t).map_err(e2s)?);
            ensure((lhs - rhs).abs() <= 1e-12 * rhs, || format!("trial {trial}: t = {t}: {lhs} vs {rhs}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-breakpoint points on 200 grids within 1e-12"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for trial in 0..100 {
        let m = rng.gen_range(2..=8);
        let q = Cube::new(vec![rng.gen_range(-2.0..2.0)], rng.gen_range(0.5..3.0)).unwrap();
        let p = GridFunction::from_fn(q, m, |_| 0.0).unwrap();
        let p = GridFunction::new(p.cube.clone(), m, (0..m).map(|_| rng.gen_range(1.3..4.0)).collect()).unwrap();
        let (lam, tau) = (rng.gen_range(0.05..0.6), rng.gen_range(0.05..0.6));
        let it = iterated_rearrange(&f_grid(&p, lam, tau).map_err(e2s)?);
        let local = LocalExponent::from_grid(&p);
        let vol = p.cube.volume();
        for i in 0..m {
            for j in 0..m {
                let (t, s) = ((i as f64 + 0.5) / m as f64, (j as f64 + 0.5) / m as f64);
                let got = it.at(t * vol, s * vol).map_err(e2s)?;
                if t + s >= 1.0 {
                    ensure(got == 0.0, || format!("trial {trial}: ({t},{s}) with t+s >= 1 gives {got}"))?;
                } else {
                    let psi = local.psi(t, s).map_err(e2s)?;
                    let psi_c = local.psi_conj(s, t).map_err(e2s)?;
                    let want = if psi.is_infinite() { 0.0 } else { tau.powf(psi) * lam.powf(psi_c) };
                    ensure((got - want).abs() <= 1e-10 * want.max(f64::MIN_POSITIVE), || {
                        format!("trial {trial}: ({t},{s}): iterated {got} vs closed form {want}")
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} lattice points on 100 grids"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut strict = 0;
    for trial in 0..50 {
        let m = rng.gen_range(2..=12);
        let values: Vec<f64> = (0..m).map(|_| rng.gen_range(1.2..4.0)).collect();
        let local = LocalExponent::from_grid(&GridFunction::new(Cube::unit(1), m, values).unwrap());
        for kl in 1..m {
            for kt in 1..m {
                let (lam, tau) = (kl as f64 / m as f64, kt as f64 / m as f64);
                let r = rng.gen_range(1.1..3.0);
                let low = uinf_local(&local, lam, tau, r, UinfMode::Rearrangement).map_err(e2s)?;
                let mid = uinf_local(&local, lam, tau, r, UinfMode::Bruteforce).map_err(e2s)?;
                let high = uinf_local(&local, lam, tau, r, UinfMode::Levelset).map_err(e2s)?;
                ensure(low <= mid * (1.0 + 1e-12) && mid <= high * (1.0 + 1e-12), || {
                    format!("trial {trial} (m={m}, kl={kl}, kt={kt}): {low} <= {mid} <= {high} violated")
                })?;
                if mid > low * (1.0 + 1e-9) {
                    strict += 1;
                }
            }
        }
    }
    // two squares (0,1)² ∪ (1,2)² in (0,2)², λ = 1/2, τ = 3/4
    let sq = ProductGrid::from_cells(Cube::new(vec![0.0], 2.0).unwrap(), 4, |i, j| {
        if (i < 2) == (j < 2) { 1.0 } else { 0.0 }
    })
    .map_err(e2s)?;
    let bound = iterated_tail_bound(&sq, 0.5, 0.75).map_err(e2s)?;
    let mut brute = f64::INFINITY;
    for e in 0u32..16 {
        for g in 0u32..16 {
            if e.count_ones() == 2 && g.count_ones() == 3 {
                let s: f64 = (0..4)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .filter(|&(i, j)| e >> i & 1 == 1 && g >> j & 1 == 1)
                    .map(|(i, j)| sq.values[i * 4 + j] * 0.25)
                    .sum();
                brute = brute.min(s);
            }
        }
    }
    ensure(bound == 0.0 && brute > 0.0, || format!("two squares: iterated {bound}, product infimum {brute}"))?;
    Ok(format!("ordering holds ({strict} random strict gaps); two squares: iterated 0 < product infimum {brute}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = random_grid(&mut rng, -3.0, 3.0);
        let q = rng.gen_range(1.1..6.0);
        let p = GridFunction::constant(f.cube.clone(), f.cells_per_side, q).unwrap();
        let want = (f.values.iter().map(|v| v.abs().powf(q)).sum::<f64>() * f.cell_volume()).powf(1.0 / q);
        let got = luxemburg_norm(&f, &p, 1e-12).map_err(e2s)?.value;
        let err = if want == 0.0 { got } else { (got - want).abs() / want };
        worst = worst.max(err);
    }
    ensure(worst <= 1e-8, || format!("constant exponent: relative error {worst:e}"))?;
    // two-valued: f ≡ a, p = p1 on measure μ1, p2 on μ2, solved in closed form
    let mut worst2 = 0.0f64;
    for _ in 0..100 {
        let a = rng.gen_range(0.1..10.0);
        let m = 2 * rng.gen_range(1..=16);
        let k = rng.gen_range(1..m);
        let side = rng.gen_range(0.2..5.0);
        let cube = Cube::new(vec![0.0], side).unwrap();
        let (mu1, mu2) = (k as f64 * side / m as f64, (m - k) as f64 * side / m as f64);
        let (kind, p1, p2) = [(0, 2.0, 3.0), (1, 2.0, 4.0), (2, 1.5, 3.0)][rng.gen_range(0..3)];
        let want = match kind {
            // λ³ - a²μ1 λ - a³μ2 = 0, depressed cubic with one positive root
            0 => {
                let (pp, qq) = (-a * a * mu1, -a * a * a * mu2);
                let disc = (qq / 2.0).powi(2) + (pp / 3.0).powi(3);
                if disc >= 0.0 {
                    (-qq / 2.0 + disc.sqrt()).cbrt() + (-qq / 2.0 - disc.sqrt()).cbrt()
                } else {
                    let r = (-pp / 3.0).sqrt();
                    2.0 * r * ((-qq / (2.0 * r.powi(3))).acos() / 3.0).cos()
                }
            }
            // λ⁴ - a²μ1 λ² - a⁴μ2 = 0
            1 => {
                let (b, c) = (a * a * mu1, a.powi(4) * mu2);
                ((b + (b * b + 4.0 * c).sqrt()) / 2.0).sqrt()
            }
            // u = (a/λ)^{3/2}: μ1 u + μ2 u² = 1
            _ => {
                let u = (-mu1 + (mu1 * mu1 + 4.0 * mu2).sqrt()) / (2.0 * mu2);
                a / u.powf(2.0 / 3.0)
            }
        };
        let pv: Vec<f64> = (0..m).map(|i| if i < k { p1 } else { p2 }).collect();
        let p = GridFunction::new(cube.clone(), m, pv).unwrap();
        let f = GridFunction::constant(cube, m, a).unwrap();
        let got = luxemburg_norm(&f, &p, 1e-12).map_err(e2s)?.value;
        worst2 = worst2.max((got - want).abs() / want);
    }
    ensure(worst2 <= 1e-8, || format!("two-valued: relative error {worst2:e}"))?;
    Ok(format!("constant worst {worst:.1e}; two-valued worst {worst2:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = 0.0f64;
    for trial in 0..1000 {
        let f = random_grid(&mut rng, -4.0, 4.0);
        if f.values.iter().all(|&v| v == 0.0) {
            continue;
        }
        let p = GridFunction::new(
            f.cube.clone(),
            f.cells_per_side,
            (0..f.len()).map(|_| rng.gen_range(1.1..5.0)).collect(),
        )
        .unwrap();
        let out = duality_gap(&f, &p, 4, trial).map_err(e2s)?;
        ensure(out.upper_holds(), || format!("trial {trial}: pairing {} > 2‖f‖ = {}", out.best_pairing, 2.0 * out.norm))?;
        ensure(out.extremal_pairing >= 0.5 * out.norm * (1.0 - 1e-9), || {
            format!("trial {trial}: extremal pairing {} < ‖f‖/2 = {}", out.extremal_pairing, 0.5 * out.norm)
        })?;
        min_ratio = min_ratio.min(out.extremal_pairing / out.norm);
        max_ratio = max_ratio.max(out.best_pairing / out.norm);
    }
    Ok(format!("pairing/‖f‖ within [{min_ratio:.3}, {max_ratio:.3}]"))
}

fn criterion_8() -> Outcome {
    let rule = VerdictRule::default();
    let params = ConditionParams::default();
    let m = 4096;
    let mut notes = Vec::new();

    // (a) log-Hölder prototype
    let proto = ExponentField::log_holder(2.0, Cube::centered(1, 1e17).unwrap()).map_err(e2s)?;
    let radii = log_doubling_radii(128.0, 4).map_err(e2s)?;
    let ninf: Vec<f64> = radii
        .iter()
        .map(|&r| ninf_integral(&proto, (-2.0f64).exp(), 2.0, r, m))
        .collect::<Result<_, _>>()
        .map_err(e2s)?;
    ensure(rule.classify(&ninf) == Verdict::Bounded, || format!("8a: prototype N∞ integrals {ninf:?} do not plateau"))?;
    let cfg = ProbeConfig { m, depth: 2, levels: 4, r0: 4.0, ..ProbeConfig::default() };
    let u = run_check(CheckKind::Uinf, &proto, &params, &cfg, &rule).map_err(e2s)?;
    ensure(u.verdict == Verdict::Bounded, || format!("8a: prototype U∞ levels {:?} do not plateau", u.levels))?;
    notes.push(format!("8a N∞ {:.4}→{:.4}, U∞ {:.3e}→{:.3e}", ninf[0], ninf[3], u.levels[0], u.levels[3]));

    // (b) sin log log
    let sll = ExponentField::sin_log_log(2.4, 0.4, Cube::centered(1, 1e100).unwrap()).map_err(e2s)?;
    let far = log_doubling_radii(1e9, 4).map_err(e2s)?;
    let mut worst_growth = f64::INFINITY;
    for c in [0.25, 0.5, 0.75] {
        for p_inf in [1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0] {
            let v: Vec<f64> = far
                .iter()
                .map(|&r| ninf_integral(&sll, c, p_inf, r, m))
                .collect::<Result<_, _>>()
                .map_err(e2s)?;
            for w in v.windows(2) {
                worst_growth = worst_growth.min(w[1] / w[0]);
                ensure(w[1] > 2.0 * w[0], || format!("8b: N∞ for c={c}, p∞={p_inf} does not double: {v:?}"))?;
            }
        }
    }
    let ussc = ussc_check(&sll, 0.5, E.powf(E), 1, 4096).map_err(e2s)?;
    ensure(ussc.verdict == Verdict::Bounded && ussc.aggregate <= 0.81, || {
        format!("8b: radial criterion {:?} with worst ratio {}", ussc.verdict, ussc.aggregate)
    })?;
    let u = run_check(CheckKind::Uinf, &sll, &params, &cfg, &rule).map_err(e2s)?;
    ensure(u.verdict == Verdict::Bounded, || format!("8b: sinloglog U∞ levels {:?} do not plateau", u.levels))?;
    notes.push(format!(
        "8b N∞ growth ≥ {worst_growth:.3}x/level, radial ratio {:.3}, U∞ {:.3e}→{:.3e}",
        ussc.aggregate, u.levels[0], u.levels[3]
    ));

    // (c) step exponent
    let step = ExponentField::step(2.0, 3.0, 0.0, Cube::centered(1, 1.0).unwrap()).map_err(e2s)?;
    let pts: Vec<(f64, f64)> = (20..=26)
        .map(|k| {
            let h = 2f64.powi(-k);
            a_ratio(&step, &Cube::centered(1, h).unwrap(), m, 1e-12).map(|r| (h.ln(), r.ln()))
        })
        .collect::<Result<_, _>>()
        .map_err(e2s)?;
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    ensure((slope + 1.0 / 6.0).abs() <= 0.02, || format!("8c: log-log slope {slope}"))?;
    notes.push(format!("8c slope {slope:.4}"));
    Ok(notes.join("; "))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let norm = |x: &[f64]| x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut worst = 0.0f64;
    for dim in 1..=3 {
        let mut made = 0;
        while made < 100 {
            let corner: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let q = Cube::new(corner, rng.gen_range(0.05..4.0)).unwrap();
            if q.contains(&vec![0.0; dim]) {
                continue;
            }
            made += 1;
            let delta = rng.gen_range(0.01..0.99);
            let s = slab_subset(&q, delta).map_err(e2s)?;
            ensure(s.measure() == delta * q.volume() || (s.measure() - delta * q.volume()).abs() <= 1e-14 * q.volume(), || {
                format!("|E| = {} but δ|Q| = {}", s.measure(), delta * q.volume())
            })?;
            let sample = |rng: &mut ChaCha8Rng, out: &mut [f64]| {
                for (o, &a) in out.iter_mut().zip(&q.corner) {
                    *o = a + q.side * rng.gen::<f64>();
                }
            };
            let (mut x, mut y) = (vec![0.0; dim], vec![0.0; dim]);
            let mut pairs = 0;
            while pairs < 10_000 {
                sample(&mut rng, &mut x);
                sample(&mut rng, &mut y);
                if s.contains(&y) {
                    continue;
                }
                pairs += 1;
                let ratio = norm(&x) / norm(&y);
                worst = worst.max(ratio / s.ratio_bound);
                ensure(ratio <= s.ratio_bound * (1.0 + 1e-12), || format!("n={dim}: ratio {ratio} > {}", s.ratio_bound))?;
            }
        }
    }
    Ok(format!("3 × 100 cubes × 10⁴ pairs; worst ratio / bound = {worst:.3}"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..100 {
        let dim = rng.gen_range(1..=2);
        let m = if dim == 1 { 64 } else { 16 };
        let cube = Cube::new(vec![0.0; dim], 1.0).unwrap();
        let f = GridFunction::new(cube.clone(), m, (0..m.pow(dim as u32)).map(|_| rng.gen_range(0.0..3.0)).collect()).unwrap();
        // random dyadic cubes at mixed depths, kept disjoint
        let mut cubes: Vec<Cube> = Vec::new();
        for _ in 0..rng.gen_range(1..8) {
            let depth = rng.gen_range(0..4);
            let tiles = dyadic_tiling(&cube, depth);
            let c = tiles[rng.gen_range(0..tiles.len())].clone();
            if cubes.iter().all(|d| !d.interiors_overlap(&c)) {
                cubes.push(c);
            }
        }
        let fam = CubeFamily::new(cubes).map_err(e2s)?;
        let a = averaging(&f, &fam).map_err(e2s)?;
        let mf = maximal(&f, m).map_err(e2s)?;
        for (i, (x, y)) in a.values.iter().zip(&mf.values).enumerate() {
            ensure(*x <= *y + 1e-12, || format!("trial {trial}: cell {i}: A f = {x} > M f = {y}"))?;
        }
    }
    let m = 1024;
    let chi = GridFunction::from_fn(Cube::new(vec![-4.0], 8.0).unwrap(), m, |x| {
        if x[0] > 0.0 && x[0] < 1.0 { 1.0 } else { 0.0 }
    })
    .unwrap();
    let mf = maximal(&chi, m).map_err(e2s)?;
    let h = 8.0 / m as f64;
    let exact = |x: f64| if x > 1.0 { 1.0 / x } else if x < 0.0 { 1.0 / (1.0 - x) } else { 1.0 };
    for i in 0..m {
        let x = chi.cell_center(i)[0];
        let (a, b) = (exact(x - 2.0 * h), exact(x + 2.0 * h));
        let v = mf.values[i];
        ensure(v >= a.min(b) - 1e-12 && v <= a.max(b) + 1e-12, || format!("Mχ at {x} = {v}, oracle in [{a}, {b}]"))?;
    }
    Ok("100 (f, family) pairs; Mχ_(0,1) within 2 cells of 1/x and 1/(1-x)".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "rearrangement exactness", Duration::from_secs(5), criterion_1),
        (2, "composition lemmas", Duration::from_secs(2), criterion_2),
        (3, "conjugate profile identity", Duration::from_secs(60), criterion_3),
        (4, "iterated rearrangement closed form", Duration::from_secs(30), criterion_4),
        (5, "U∞ mode ordering", Duration::from_secs(60), criterion_5),
        (6, "Luxemburg norm oracles", Duration::from_secs(5), criterion_6),
        (7, "duality sanity", Duration::from_secs(30), criterion_7),
        (8, "condition separations", Duration::from_secs(300), criterion_8),
        (9, "slab subset", Duration::from_secs(5), criterion_9),
        (10, "maximal and averaging", Duration::from_secs(10), criterion_10),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if elapsed <= budget => "PASS",
            _ => "FAIL",
        };
        let detail = match outcome {
            Ok(d) if elapsed <= budget => d,
            Ok(d) => format!("{d}; over budget {budget:?}"),
            Err(e) => e,
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} criterion {id} ({name}) [{:.2}s]: {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
