//! The kernel `F_{p,λ,τ}`, the oscillation functional `Ψ_{Q,p}` and the
//! closed forms built from the localized rearrangement `(pχ_Q)*`.

use crate::error::{domain, precondition, Result};
use crate::exponent::{conjugate_value, ExponentField};
use crate::geometry::{Cube, GridFunction};
use crate::rearrange::RearrangementProfile;

/// `base^exponent` with the conventions `1/0 = ∞` and `c^∞ = 0` for
/// `0 ≤ c < 1`. An infinite exponent on a base `≥ 1` is rejected.
pub fn pow_ext(base: f64, exponent: f64) -> Result<f64> {
    if exponent == f64::INFINITY {
        if (0.0..1.0).contains(&base) {
            Ok(0.0)
        } else {
            domain(format!("{base}^inf is undefined under the c^inf = 0 convention"))
        }
    } else {
        Ok(base.powf(exponent))
    }
}

/// `F_{p,λ,τ}(x,y) = (τ^{p_y} λ^{p_x(p_y - 1)})^{1/(p_x - p_y)}` on
/// `p_x > p_y`, zero elsewhere.
pub fn f_kernel(p_x: f64, p_y: f64, lam: f64, tau: f64) -> f64 {
    if p_x > p_y {
        ((p_y * tau.ln() + p_x * (p_y - 1.0) * lam.ln()) / (p_x - p_y)).exp()
    } else {
        0.0
    }
}

/// `ψ(α, β)^{1/r} = (τ^{β/(α-β)} λ^{α'/(β'-α')})^{1/r}` for `α > β`, else 0.
/// Equal to `F^{1/r}` at a pair of points with `p(x) = α`, `p(y) = β`.
#[inline]
pub(crate) fn kernel_root(alpha: f64, beta: f64, ln_lam: f64, ln_tau: f64, inv_r: f64) -> f64 {
    if alpha > beta {
        let a_c = alpha / (alpha - 1.0);
        let b_c = beta / (beta - 1.0);
        ((beta / (alpha - beta) * ln_tau + a_c / (b_c - a_c) * ln_lam) * inv_r).exp()
    } else {
        0.0
    }
}

/// An exponent localized to a cube: the sorted cell values of `p` and of
/// `p'` on the cube's grid, with their rearrangement profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalExponent {
    pub cube: Cube,
    /// Cell values of `p` in non-increasing order.
    pub sorted: Vec<f64>,
    /// Cell values of `p'` in non-increasing order.
    pub sorted_conj: Vec<f64>,
    pub profile: RearrangementProfile,
    pub conj_profile: RearrangementProfile,
}

impl LocalExponent {
    /// Discretizes `p` on `q` with `m` cells per side.
    pub fn new(p: &ExponentField, q: &Cube, m: usize) -> Result<Self> {
        if m == 0 {
            return precondition("resolution m must be at least 1");
        }
        Ok(Self::from_grid(&p.discretize(q, m)?))
    }

    pub fn from_grid(g: &GridFunction) -> Self {
        let mut sorted = g.values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut sorted_conj: Vec<f64> = g.values.iter().map(|&v| conjugate_value(v)).collect();
        sorted_conj.sort_by(|a, b| b.total_cmp(a));
        let total = g.cube.volume();
        LocalExponent {
            cube: g.cube.clone(),
            profile: RearrangementProfile::from_sorted(&sorted, total),
            conj_profile: RearrangementProfile::from_sorted(&sorted_conj, total),
            sorted,
            sorted_conj,
        }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.cube.volume()
    }

    /// `(pχ_Q)*(t|Q|)` for `t ∈ (0, 1)`.
    pub fn at(&self, t: f64) -> Result<f64> {
        self.profile.at(t * self.volume())
    }

    /// `(p'χ_Q)*(t|Q|)` for `t ∈ (0, 1)`.
    pub fn conj_at(&self, t: f64) -> Result<f64> {
        self.conj_profile.at(t * self.volume())
    }

    /// `Ψ_{Q,p}(λ, τ) = A / (B - A)` with `B = (pχ_Q)*(λ|Q|)` and
    /// `A = (pχ_Q)*((1-τ)|Q|)`; `+∞` when `B = A`.
    pub fn psi(&self, lam: f64, tau: f64) -> Result<f64> {
        check_pair(lam, tau)?;
        Ok(ratio(self.at(lam)?, self.at(1.0 - tau)?))
    }

    /// `Ψ_{Q,p'}(τ, λ)`, read from the profile of `p'`.
    pub fn psi_conj(&self, tau: f64, lam: f64) -> Result<f64> {
        check_pair(tau, lam)?;
        Ok(ratio(self.conj_at(tau)?, self.conj_at(1.0 - lam)?))
    }

    /// `ξ_Q(λ, τ, r)`.
    pub fn xi(&self, lam: f64, tau: f64, r: f64) -> Result<f64> {
        check_fraction_pair(lam, tau)?;
        let b = self.at(lam)?;
        let a = self.at(1.0 - tau)?;
        if b == a {
            return Ok(0.0);
        }
        Ok(((tau.ln() + (a - 1.0) * lam.ln()) / (r * (b - a))).exp())
    }

    /// `t_Q(λ, τ, r)`, the largest root of
    /// `τ^{1/r} (λ^{1/r} t)^A = K λ t^B`.
    pub fn t_q(&self, lam: f64, tau: f64, r: f64, k: f64) -> Result<f64> {
        check_fraction_pair(lam, tau)?;
        if !(k >= 1.0) {
            return precondition(format!("K must be at least 1, got {k}"));
        }
        let b = self.at(lam)?;
        let a = self.at(1.0 - tau)?;
        if b == a {
            return Ok(0.0);
        }
        let log_base = tau.ln() / r - k.ln() + (a / r - 1.0) * lam.ln();
        Ok((log_base / (b - a)).exp())
    }
}

fn ratio(b: f64, a: f64) -> f64 {
    if b > a {
        a / (b - a)
    } else {
        f64::INFINITY
    }
}

fn check_pair(lam: f64, tau: f64) -> Result<()> {
    if !(lam > 0.0 && tau > 0.0) {
        return domain(format!("arguments must be positive, got ({lam}, {tau})"));
    }
    if !(lam + tau < 1.0) {
        return domain(format!("Psi needs lam + tau < 1, got {lam} + {tau}"));
    }
    Ok(())
}

fn check_fraction_pair(lam: f64, tau: f64) -> Result<()> {
    if !(lam > 0.0 && lam < 0.5 && tau > 0.0 && tau < 0.5) {
        return precondition(format!("lam and tau must lie in (0, 1/2), got {lam}, {tau}"));
    }
    Ok(())
}

/// `Ψ_{Q,p}(λ, τ)` for `p` discretized on `q` at resolution `m`.
pub fn psi(p: &ExponentField, q: &Cube, m: usize, lam: f64, tau: f64) -> Result<f64> {
    LocalExponent::new(p, q, m)?.psi(lam, tau)
}

/// `ξ_Q(λ, τ, r)`; needs `1 < r ≤ p₋` on `q`.
pub fn xi_q(p: &ExponentField, q: &Cube, m: usize, lam: f64, tau: f64, r: f64) -> Result<f64> {
    let local = LocalExponent::new(p, q, m)?;
    check_r(&local, r)?;
    local.xi(lam, tau, r)
}

/// `t_Q(λ, τ, r)`; needs `1 < r ≤ p₋` on `q` and `K ≥ 1`.
pub fn t_q(p: &ExponentField, q: &Cube, m: usize, lam: f64, tau: f64, r: f64, k: f64) -> Result<f64> {
    let local = LocalExponent::new(p, q, m)?;
    check_r(&local, r)?;
    local.t_q(lam, tau, r, k)
}

fn check_r(local: &LocalExponent, r: f64) -> Result<()> {
    let p_minus = *local.sorted.last().unwrap();
    if !(r > 1.0 && r <= p_minus) {
        return precondition(format!("need 1 < r <= p_- = {p_minus}, got r = {r}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_valued() -> LocalExponent {
        LocalExponent::from_grid(&GridFunction::new(Cube::unit(1), 2, vec![2.0, 3.0]).unwrap())
    }

    #[test]
    fn kernel_values() {
        assert_eq!(f_kernel(2.5, 2.5, 0.1, 0.2), 0.0);
        assert_eq!(f_kernel(2.0, 3.0, 0.1, 0.2), 0.0);
        assert!((f_kernel(3.0, 2.0, 0.1, 0.1) / 1e-5 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_root_matches_kernel() {
        let (lam, tau, r) = (0.07, 0.2, 1.7);
        for (a, b) in [(3.0, 2.0), (2.2, 1.4), (5.0, 4.9)] {
            let direct = f_kernel(a, b, lam, tau).powf(1.0 / r);
            let root = kernel_root(a, b, lam.ln(), tau.ln(), 1.0 / r);
            assert!((direct - root).abs() <= 1e-13 * direct, "{direct} {root}");
        }
    }

    #[test]
    fn ext_power_convention() {
        assert_eq!(pow_ext(0.3, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(pow_ext(0.0, f64::INFINITY).unwrap(), 0.0);
        assert!(pow_ext(1.0, f64::INFINITY).is_err());
        assert_eq!(pow_ext(0.5, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn psi_two_valued() {
        let l = two_valued();
        assert_eq!(l.psi(0.25, 0.25).unwrap(), 2.0);
        // p' ∈ {2, 3/2}: B' = 2, A' = 3/2
        assert_eq!(l.psi_conj(0.25, 0.25).unwrap(), 3.0);
        assert_eq!((3.0 - 1.0) * 2.0, 1.0 + 3.0);
        assert!(matches!(l.psi(0.5, 0.5), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn psi_constant_is_infinite() {
        let p = ExponentField::constant(2.5, Cube::unit(1)).unwrap();
        assert_eq!(psi(&p, &Cube::unit(1), 8, 0.1, 0.2).unwrap(), f64::INFINITY);
        assert_eq!(t_q(&p, &Cube::unit(1), 8, 0.1, 0.2, 1.5, 1.0).unwrap(), 0.0);
        assert_eq!(xi_q(&p, &Cube::unit(1), 8, 0.1, 0.2, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn t_q_is_a_root_and_dominates() {
        let l = two_valued();
        let (lam, tau, r, k) = (0.1, 0.1, 1.5, 1.0);
        let t = l.t_q(lam, tau, r, k).unwrap();
        let (a, b) = (2.0, 3.0);
        let lhs = |t: f64| tau.powf(1.0 / r) * (lam.powf(1.0 / r) * t).powf(a);
        let rhs = |t: f64| k * lam * t.powf(b);
        assert!(t > 0.0 && t < 1.0);
        assert!((lhs(t) - rhs(t)).abs() <= 1e-10 * rhs(t));
        for i in 0..100 {
            let s = t + (1.0 - t) * i as f64 / 100.0;
            assert!(lhs(s) <= rhs(s) * (1.0 + 1e-12));
        }
        assert!(l.t_q(lam, tau, 2.5, 1.0).is_ok());
        let p = ExponentField::grid(GridFunction::new(Cube::unit(1), 2, vec![2.0, 3.0]).unwrap()).unwrap();
        assert!(t_q(&p, &Cube::unit(1), 2, lam, tau, 2.5, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn kernel_symmetry(jx in -3i32..=3, jy in -3i32..=3, lam in 0.01f64..0.99, tau in 0.01f64..0.99) {
            // p = 1 + 2^j has the exactly representable conjugate 1 + 2^-j
            let (px, py) = (1.0 + 2f64.powi(jx), 1.0 + 2f64.powi(jy));
            let lhs = f_kernel(px, py, lam, tau);
            let rhs = f_kernel(conjugate_value(py), conjugate_value(px), tau, lam);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300) + 1e-300);
        }

        #[test]
        fn kernel_symmetry_generic(px in 1.05f64..8.0, py in 1.05f64..8.0, lam in 0.01f64..0.99, tau in 0.01f64..0.99) {
            let lhs = f_kernel(px, py, lam, tau);
            let rhs = f_kernel(conjugate_value(py), conjugate_value(px), tau, lam);
            // rounding of p' is amplified by the exponent size and by 1/|p_x - p_y|
            let cond = lhs.ln().abs().min(800.0) * px.max(py) * px.max(py) / (px - py).abs().max(1e-3);
            prop_assert!((lhs - rhs).abs() <= 1e-15 * cond * lhs + 1e-300);
        }

        #[test]
        fn conjugate_identity_off_breakpoints(values in prop::collection::vec(1.2f64..5.0, 1..24), i in 0usize..64, j in 0usize..64) {
            let n = values.len();
            let g = GridFunction::new(Cube::unit(1), n, values).unwrap();
            let l = LocalExponent::from_grid(&g);
            // midpoints of the uniform cell lattice avoid every breakpoint
            let lam = ((i % n) as f64 + 0.5) / n as f64;
            let tau = ((j % n) as f64 + 0.5) / n as f64;
            prop_assume!(lam + tau < 1.0);
            let lhs = (l.at(lam).unwrap() - 1.0) * l.psi(lam, tau).unwrap();
            let rhs = 1.0 + l.psi_conj(tau, lam).unwrap();
            if lhs.is_infinite() || rhs.is_infinite() {
                prop_assert!(lhs.is_infinite() && rhs.is_infinite());
            } else {
                prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
            }
        }

        #[test]
        fn psi_monotone(values in prop::collection::vec(1.2f64..5.0, 2..24), a in 0.01f64..0.49, b in 0.01f64..0.49, sa in 0.0f64..1.0, sb in 0.0f64..1.0) {
            let n = values.len();
            let l = LocalExponent::from_grid(&GridFunction::new(Cube::unit(1), n, values).unwrap());
            let (t, s) = (a * sa.max(0.01), b * sb.max(0.01));
            prop_assert!(l.psi(t, s).unwrap() <= l.psi(a, b).unwrap());
        }
    }
}
