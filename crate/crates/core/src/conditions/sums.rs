//! The summation functionals over disjoint cube families.

use rayon::prelude::*;

use super::kernel::{pow_ext, LocalExponent};
use crate::error::{precondition, Result};
use crate::exponent::ExponentField;
use crate::geometry::CubeFamily;

fn check_below(lam: f64, tau: f64, gamma0: f64) -> Result<()> {
    if !(gamma0 > 0.0 && gamma0 < 0.5) {
        return precondition(format!("gamma0 must lie in (0, 1/2), got {gamma0}"));
    }
    if !(lam > 0.0 && tau > 0.0 && lam < gamma0 && tau < gamma0) {
        return precondition(format!("need 0 < lam, tau < gamma0 = {gamma0}, got {lam}, {tau}"));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if r > 1.0 && r.is_finite() {
        Ok(())
    } else {
        precondition(format!("r must exceed 1, got {r}"))
    }
}

/// `|Q| τ^{(1+Ψ_p(λ,τ))/r} λ^{(1+Ψ_{p'}(τ,λ))/r}`.
pub fn strf_term(local: &LocalExponent, lam: f64, tau: f64, r: f64) -> Result<f64> {
    let psi = local.psi(lam, tau)?;
    let psi_c = local.psi_conj(tau, lam)?;
    Ok(local.volume() * pow_ext(tau, (1.0 + psi) / r)? * pow_ext(lam, (1.0 + psi_c) / r)?)
}

/// `|Q| τλ τ^{Ψ_p(λ,τ)/r} λ^{Ψ_{p'}(τ,λ)/r}`.
pub fn weakf_term(local: &LocalExponent, lam: f64, tau: f64, r: f64) -> Result<f64> {
    let psi = local.psi(lam, tau)?;
    let psi_c = local.psi_conj(tau, lam)?;
    Ok(local.volume() * tau * lam * pow_ext(tau, psi / r)? * pow_ext(lam, psi_c / r)?)
}

/// `|Q| ∫_λ^{γ₀} ∫_τ^{γ₀} τ^{Ψ_p(t,s)/r} λ^{Ψ_{p'}(s,t)/r} ds dt` by the
/// midpoint rule on a `quad_points × quad_points` grid.
pub fn intcon_term(
    local: &LocalExponent,
    lam: f64,
    tau: f64,
    r: f64,
    gamma0: f64,
    quad_points: usize,
) -> Result<f64> {
    if quad_points == 0 {
        return precondition("quad_points must be at least 1");
    }
    let ht = (gamma0 - lam) / quad_points as f64;
    let hs = (gamma0 - tau) / quad_points as f64;
    let mut sum = 0.0;
    for i in 0..quad_points {
        let t = lam + (i as f64 + 0.5) * ht;
        for j in 0..quad_points {
            let s = tau + (j as f64 + 0.5) * hs;
            let psi = local.psi(t, s)?;
            let psi_c = local.psi_conj(s, t)?;
            sum += pow_ext(tau, psi / r)? * pow_ext(lam, psi_c / r)?;
        }
    }
    Ok(local.volume() * sum * ht * hs)
}

/// Lower end of the chain comparing the (intcon) integral with a
/// (weakf)-type product: `|Q| (λτ/4) (τ/2)^{Ψ_p(λ,τ)/r} (λ/2)^{Ψ_{p'}(τ,λ)/r}`,
/// which never exceeds `intcon_term` evaluated at `(λ/2, τ/2)`.
pub fn intcon_lower_bound(local: &LocalExponent, lam: f64, tau: f64, r: f64) -> Result<f64> {
    let psi = local.psi(lam, tau)?;
    let psi_c = local.psi_conj(tau, lam)?;
    Ok(local.volume()
        * (lam * tau / 4.0)
        * pow_ext(tau / 2.0, psi / r)?
        * pow_ext(lam / 2.0, psi_c / r)?)
}

fn family_sum<F>(p: &ExponentField, family: &CubeFamily, m: usize, term: F) -> Result<Vec<f64>>
where
    F: Fn(&LocalExponent) -> Result<f64> + Sync,
{
    family
        .cubes()
        .par_iter()
        .map(|q| term(&LocalExponent::new(p, q, m)?))
        .collect()
}

/// Per-cube (strf) terms.
pub fn strf_terms(p: &ExponentField, family: &CubeFamily, m: usize, lam: f64, tau: f64, r: f64) -> Result<Vec<f64>> {
    check_r(r)?;
    check_below(lam, tau, 0.5 - f64::EPSILON)?;
    family_sum(p, family, m, |l| strf_term(l, lam, tau, r))
}

/// Per-cube (weakf) terms.
pub fn weakf_terms(p: &ExponentField, family: &CubeFamily, m: usize, lam: f64, tau: f64, r: f64) -> Result<Vec<f64>> {
    check_r(r)?;
    check_below(lam, tau, 0.5 - f64::EPSILON)?;
    family_sum(p, family, m, |l| weakf_term(l, lam, tau, r))
}

/// Per-cube (intcon) terms.
#[allow(clippy::too_many_arguments)]
pub fn intcon_terms(
    p: &ExponentField,
    family: &CubeFamily,
    m: usize,
    lam: f64,
    tau: f64,
    r: f64,
    gamma0: f64,
    quad_points: usize,
) -> Result<Vec<f64>> {
    check_r(r)?;
    check_below(lam, tau, gamma0)?;
    family_sum(p, family, m, |l| intcon_term(l, lam, tau, r, gamma0, quad_points))
}

/// `Σ_Q |Q| τ^{(1+Ψ_p(λ,τ))/r} λ^{(1+Ψ_{p'}(τ,λ))/r}`.
pub fn sum_strf(p: &ExponentField, family: &CubeFamily, m: usize, lam: f64, tau: f64, r: f64) -> Result<f64> {
    Ok(strf_terms(p, family, m, lam, tau, r)?.iter().sum())
}

/// `Σ_Q |Q| τλ τ^{Ψ_p(λ,τ)/r} λ^{Ψ_{p'}(τ,λ)/r}`.
pub fn sum_weakf(p: &ExponentField, family: &CubeFamily, m: usize, lam: f64, tau: f64, r: f64) -> Result<f64> {
    Ok(weakf_terms(p, family, m, lam, tau, r)?.iter().sum())
}

/// `Σ_Q |Q| ∫_λ^{γ₀}∫_τ^{γ₀} τ^{Ψ_p(t,s)/r} λ^{Ψ_{p'}(s,t)/r} ds dt`.
#[allow(clippy::too_many_arguments)]
pub fn sum_intcon(
    p: &ExponentField,
    family: &CubeFamily,
    m: usize,
    lam: f64,
    tau: f64,
    r: f64,
    gamma0: f64,
    quad_points: usize,
) -> Result<f64> {
    Ok(intcon_terms(p, family, m, lam, tau, r, gamma0, quad_points)?.iter().sum())
}
