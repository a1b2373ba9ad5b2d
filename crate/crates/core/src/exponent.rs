//! Exponent functions `p(·)` on ℝⁿ: builtin analytic families, grid-sampled
//! exponents, conjugates, and their discretization onto cube grids.
//!
//! Every field satisfies `1 < p₋ ≤ p₊ < ∞`; this is checked when the field is
//! built, so evaluation never has to re-validate the range.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, precondition, Error, Result};
use crate::geometry::{Cube, GridFunction};
use crate::quad::GaussLegendre;

/// Monotone weight `φ` in the oscillatory-integral family
/// `s(t) = c + α ∫_{t0}^t sin y / (y log y φ(y)) dy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiFamily {
    /// `φ ≡ 1`.
    One,
    /// `φ(y) = log y`.
    Log,
    /// `φ(y) = log log y`.
    LogLog,
}

impl PhiFamily {
    pub fn eval(self, y: f64) -> f64 {
        match self {
            PhiFamily::One => 1.0,
            PhiFamily::Log => y.ln(),
            PhiFamily::LogLog => y.ln().ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhiFamily::One => "one",
            PhiFamily::Log => "log",
            PhiFamily::LogLog => "loglog",
        }
    }
}

/// Cumulative table of `∫_{t0}^{t0 + kπ} integrand` used by [`SinIntegral`].
#[derive(Debug)]
struct CumulativeTable {
    cum: Vec<f64>,
}

/// `s(t) = c + α ∫_{t0}^t sin y / (y log y φ(y)) dy` for `t > t0`, `c` below.
#[derive(Debug, Clone)]
pub struct SinIntegral {
    pub c: f64,
    pub alpha: f64,
    pub t0: f64,
    pub phi: PhiFamily,
    table: Arc<CumulativeTable>,
    rule: Arc<GaussLegendre>,
}

impl PartialEq for SinIntegral {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.alpha == other.alpha && self.t0 == other.t0 && self.phi == other.phi
    }
}

/// The precomputed table covers `[t0, T]` with `T` between these two radii;
/// beyond `T` the integral is continued by an asymptotic expansion.
const SIN_TABLE_MIN: f64 = 1e4;
const SIN_TABLE_MAX: f64 = 1e5;

impl SinIntegral {
    pub fn new(c: f64, alpha: f64, t0: f64, phi: PhiFamily, table_end: f64) -> Result<Self> {
        if !(t0 >= E) {
            return precondition(format!("sinintegral needs t0 >= e, got {t0}"));
        }
        if !(alpha > 0.0) || !alpha.is_finite() || !c.is_finite() {
            return precondition("sinintegral needs finite c and alpha > 0");
        }
        if !(phi.eval(t0) > 0.0) {
            return precondition(format!(
                "phi = {} must be positive at t0 = {t0}",
                phi.name()
            ));
        }
        let rule = GaussLegendre::new(12);
        let end = table_end.clamp(SIN_TABLE_MIN, SIN_TABLE_MAX).max(t0 + PI);
        let steps = ((end - t0) / PI).ceil() as usize + 1;
        let mut cum = Vec::with_capacity(steps + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for k in 0..steps {
            let a = t0 + k as f64 * PI;
            acc += rule.integrate(a, a + PI, |y| integrand(phi, y));
            cum.push(acc);
        }
        Ok(SinIntegral {
            c,
            alpha,
            t0,
            phi,
            table: Arc::new(CumulativeTable { cum }),
            rule: Arc::new(rule),
        })
    }

    /// `∫_{t0}^t sin y / (y log y φ(y)) dy`.
    fn raw_integral(&self, t: f64) -> f64 {
        if t <= self.t0 {
            return 0.0;
        }
        let cum = &self.table.cum;
        let last = cum.len() - 1;
        let end = self.t0 + last as f64 * PI;
        if t > end {
            return cum[last] + self.tail(t) - self.tail(end);
        }
        let k = (((t - self.t0) / PI).floor() as usize).min(last);
        let a = self.t0 + k as f64 * PI;
        let mut acc = cum[k];
        if t > a {
            acc += self.rule.integrate(a, t, |y| integrand(self.phi, y));
        }
        acc
    }

    /// Antiderivative of `sin y · w(y)` from three integrations by parts:
    /// `-cos·w + sin·w' + cos·w''`, accurate to `O(w''')`.
    fn tail(&self, y: f64) -> f64 {
        let l = y.ln();
        // first and second derivatives of log φ
        let (d1, d2) = match self.phi {
            PhiFamily::One => (0.0, 0.0),
            PhiFamily::Log => (1.0 / (y * l), -(l + 1.0) / (y * l).powi(2)),
            PhiFamily::LogLog => {
                let ll = l.ln();
                let q = 1.0 / (y * l * ll);
                (q, -q * q * (ll * (l + 1.0) + 1.0))
            }
        };
        let g1 = -1.0 / y - 1.0 / (y * l) - d1;
        let g2 = 1.0 / (y * y) + (l + 1.0) / (y * l).powi(2) - d2;
        let w = 1.0 / (y * l * self.phi.eval(y));
        let w1 = w * g1;
        let w2 = w * (g2 + g1 * g1);
        -y.cos() * w + y.sin() * w1 + y.cos() * w2
    }

    pub fn value(&self, t: f64) -> f64 {
        self.c + self.alpha * self.raw_integral(t)
    }

    /// Bound on `|s - c|` from the second mean value theorem: the weight
    /// `1/(y log y φ(y))` is positive and non-increasing, so every partial
    /// integral of `sin y` against it is at most twice its value at `t0`.
    pub fn amplitude_bound(&self) -> f64 {
        2.0 * self.alpha / (self.t0 * self.t0.ln() * self.phi.eval(self.t0))
    }
}

fn integrand(phi: PhiFamily, y: f64) -> f64 {
    y.sin() / (y * y.ln() * phi.eval(y))
}

/// The kinds of exponent the toolkit knows how to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentKind {
    Constant { value: f64 },
    /// `low` for `x₀ < jump`, `high` otherwise.
    Step { low: f64, high: f64, jump: f64 },
    /// `base + 1 / log(e + |x|)`.
    LogHolder { base: f64 },
    /// `c + α sin(log log |x|)` for `|x| > e`, `c` otherwise.
    SinLogLog { c: f64, alpha: f64 },
    /// `c + α sin(log |x|)` for `|x| > 1`, `c` otherwise.
    SinLog { c: f64, alpha: f64 },
    SinIntegral(SinIntegral),
    /// `s(|x|)` for a one-dimensional field `s`.
    Radial(Box<ExponentField>),
    Grid(GridFunction),
    /// `p(x) / (p(x) - 1)`.
    Conjugate(Box<ExponentField>),
}

/// An exponent `p(·)` with `1 < p₋ ≤ p₊ < ∞`, together with the dimension of
/// the ambient space and a bounding box of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentField {
    kind: ExponentKind,
    dimension: usize,
    domain: Cube,
    /// Closed interval containing every value of the field.
    range: (f64, f64),
}

impl ExponentField {
    fn build(kind: ExponentKind, dimension: usize, domain: Cube) -> Result<Self> {
        if dimension == 0 || domain.dim() != dimension {
            return Err(Error::Shape(format!(
                "domain box has dimension {}, field dimension {dimension}",
                domain.dim()
            )));
        }
        let range = kind_range(&kind)?;
        if !(range.0 > 1.0) || !range.1.is_finite() {
            return Err(Error::InvalidExponent(format!(
                "values must lie in (1, ∞); range is [{}, {}]",
                range.0, range.1
            )));
        }
        Ok(ExponentField { kind, dimension, domain, range })
    }

    pub fn constant(value: f64, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        Self::build(ExponentKind::Constant { value }, n, domain)
    }

    pub fn step(low: f64, high: f64, jump: f64, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        Self::build(ExponentKind::Step { low, high, jump }, n, domain)
    }

    pub fn log_holder(base: f64, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        Self::build(ExponentKind::LogHolder { base }, n, domain)
    }

    pub fn sin_log_log(c: f64, alpha: f64, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        Self::build(ExponentKind::SinLogLog { c, alpha }, n, domain)
    }

    pub fn sin_log(c: f64, alpha: f64, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        Self::build(ExponentKind::SinLog { c, alpha }, n, domain)
    }

    pub fn sin_integral(c: f64, alpha: f64, t0: f64, phi: PhiFamily, domain: Cube) -> Result<Self> {
        let n = domain.dim();
        let profile = SinIntegral::new(c, alpha, t0, phi, domain.max_norm())?;
        Self::build(ExponentKind::SinIntegral(profile), n, domain)
    }

    /// Radial exponent `s(|x|)` on ℝⁿ built from a one-dimensional profile.
    pub fn radial(profile: ExponentField, domain: Cube) -> Result<Self> {
        if profile.dimension != 1 {
            return Err(Error::Shape("radial wrapper needs a one-dimensional profile".into()));
        }
        let n = domain.dim();
        Self::build(ExponentKind::Radial(Box::new(profile)), n, domain)
    }

    /// Grid-sampled exponent; the grid cube is the domain.
    pub fn grid(values: GridFunction) -> Result<Self> {
        let n = values.dim();
        let domain = values.cube.clone();
        if values.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidExponent("grid exponent has non-finite cells".into()));
        }
        Self::build(ExponentKind::Grid(values), n, domain)
    }

    pub fn kind(&self) -> &ExponentKind {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn domain(&self) -> &Cube {
        &self.domain
    }

    /// A-priori bounds `[p₋, p₊]` (exact for every family except the
    /// oscillatory integral, where the amplitude bound is used).
    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    /// Same field with a different bounding box.
    pub fn with_domain(&self, domain: Cube) -> Result<Self> {
        if let ExponentKind::Grid(_) = self.kind {
            return Err(Error::Domain("grid-sampled fields carry their own domain".into()));
        }
        if domain.dim() != self.dimension {
            return Err(Error::Shape("domain dimension mismatch".into()));
        }
        let kind = match &self.kind {
            ExponentKind::SinIntegral(s) => ExponentKind::SinIntegral(SinIntegral::new(
                s.c,
                s.alpha,
                s.t0,
                s.phi,
                domain.max_norm(),
            )?),
            other => other.clone(),
        };
        Self::build(kind, self.dimension, domain)
    }

    /// Evaluates `p(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::Shape(format!(
                "point has {} coordinates, field dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        match &self.kind {
            ExponentKind::Grid(g) => match g.cell_of(x) {
                Some(i) => Ok(g.values[i]),
                None => domain(format!("point {x:?} lies outside the sampled cube")),
            },
            ExponentKind::Conjugate(inner) => inner.eval(x).map(conjugate_value),
            ExponentKind::Step { low, high, jump } => Ok(if x[0] < *jump { *low } else { *high }),
            _ => self.eval_radius(norm(x)),
        }
    }

    /// Evaluates a radial field at radius `t ≥ 0` (for one-dimensional fields
    /// this is the value at the point `t`).
    pub fn eval_radius(&self, t: f64) -> Result<f64> {
        match &self.kind {
            ExponentKind::Constant { value } => Ok(*value),
            ExponentKind::LogHolder { base } => Ok(base + 1.0 / (E + t).ln()),
            ExponentKind::SinLogLog { c, alpha } => {
                Ok(if t > E { c + alpha * t.ln().ln().sin() } else { *c })
            }
            ExponentKind::SinLog { c, alpha } => Ok(if t > 1.0 { c + alpha * t.ln().sin() } else { *c }),
            ExponentKind::SinIntegral(s) => Ok(s.value(t)),
            ExponentKind::Radial(profile) => profile.eval(&[t]),
            ExponentKind::Conjugate(inner) => inner.eval_radius(t).map(conjugate_value),
            ExponentKind::Step { .. } | ExponentKind::Grid(_) => {
                if self.dimension == 1 {
                    self.eval(&[t])
                } else {
                    Err(Error::Domain("field is not radial".into()))
                }
            }
        }
    }

    /// `|s'(t)| · t · log t` for radial families with a closed-form
    /// derivative; `None` when no derivative is available.
    pub fn envelope_ratio(&self, t: f64) -> Option<f64> {
        if !(t > 1.0) {
            return None;
        }
        let lt = t.ln();
        match &self.kind {
            ExponentKind::Constant { .. } => Some(0.0),
            ExponentKind::LogHolder { .. } => {
                let l = (E + t).ln();
                Some(t * lt / ((E + t) * l * l))
            }
            ExponentKind::SinLogLog { alpha, .. } => {
                Some(if t > E { alpha * lt.ln().cos().abs() } else { 0.0 })
            }
            ExponentKind::SinLog { alpha, .. } => Some(alpha * lt.cos().abs() * lt),
            ExponentKind::SinIntegral(s) => Some(if t > s.t0 {
                s.alpha * t.sin().abs() / s.phi.eval(t)
            } else {
                0.0
            }),
            ExponentKind::Radial(profile) => profile.envelope_ratio(t),
            ExponentKind::Conjugate(inner) => {
                // (p')' = -p' / (p - 1)^2
                let p = inner.eval_radius(t).ok()?;
                inner.envelope_ratio(t).map(|r| r / ((p - 1.0) * (p - 1.0)))
            }
            ExponentKind::Step { .. } | ExponentKind::Grid(_) => None,
        }
    }

    /// Samples the field at the cell centers of `region` with `m` cells per
    /// side.
    pub fn discretize(&self, region: &Cube, m: usize) -> Result<GridFunction> {
        if region.dim() != self.dimension {
            return Err(Error::Shape("region dimension does not match the field".into()));
        }
        GridFunction::try_from_fn(region.clone(), m, |x| self.eval(x))
    }

    /// Minimum and maximum of the discretization on `region`.
    pub fn essential_bounds(&self, region: &Cube, m: usize) -> Result<(f64, f64)> {
        if m == 0 {
            return precondition("essential_bounds needs m >= 1");
        }
        let g = self.discretize(region, m)?;
        Ok((g.min(), g.max()))
    }

    /// The conjugate exponent `p' = p / (p - 1)`.
    pub fn conjugate(&self) -> Result<ExponentField> {
        if !(self.range.0 > 1.0) {
            return Err(Error::InvalidExponent("conjugate needs p₋ > 1".into()));
        }
        match &self.kind {
            ExponentKind::Constant { value } => {
                Self::constant(conjugate_value(*value), self.domain.clone())
            }
            ExponentKind::Grid(g) => Self::grid(g.map(conjugate_value)),
            _ => Self::build(
                ExponentKind::Conjugate(Box::new(self.clone())),
                self.dimension,
                self.domain.clone(),
            ),
        }
    }

    /// The one-dimensional profile `s` of a radial field, if there is one.
    pub fn radial_profile(&self) -> Option<ExponentField> {
        match &self.kind {
            ExponentKind::Radial(p) => Some((**p).clone()),
            ExponentKind::Step { .. } | ExponentKind::Grid(_) if self.dimension > 1 => None,
            ExponentKind::Conjugate(inner) => inner.radial_profile().and_then(|p| p.conjugate().ok()),
            _ => {
                let dom = Cube::new(vec![0.0], self.domain.max_norm().max(1.0)).ok()?;
                if self.dimension == 1 {
                    Some(self.clone())
                } else {
                    let kind = match &self.kind {
                        ExponentKind::SinIntegral(s) => ExponentKind::SinIntegral(s.clone()),
                        k => k.clone(),
                    };
                    Self::build(kind, 1, dom).ok()
                }
            }
        }
    }
}

pub fn conjugate_value(p: f64) -> f64 {
    p / (p - 1.0)
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn kind_range(kind: &ExponentKind) -> Result<(f64, f64)> {
    let finite = |v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidExponent("parameters must be finite".into()))
        }
    };
    Ok(match kind {
        ExponentKind::Constant { value } => (finite(*value)?, *value),
        ExponentKind::Step { low, high, jump } => {
            finite(*jump)?;
            (finite(*low)?.min(finite(*high)?), low.max(*high))
        }
        ExponentKind::LogHolder { base } => (finite(*base)?, base + 1.0),
        ExponentKind::SinLogLog { c, alpha } | ExponentKind::SinLog { c, alpha } => {
            let a = finite(*alpha)?.abs();
            (finite(*c)? - a, c + a)
        }
        ExponentKind::SinIntegral(s) => {
            let a = s.amplitude_bound();
            (s.c - a, s.c + a)
        }
        ExponentKind::Radial(p) => p.range,
        ExponentKind::Grid(g) => (g.min(), g.max()),
        ExponentKind::Conjugate(inner) => {
            let (lo, hi) = inner.range;
            if !(lo > 1.0) {
                return Err(Error::InvalidExponent("conjugate needs p₋ > 1".into()));
            }
            (conjugate_value(hi), conjugate_value(lo))
        }
    })
}

/// Tower of exponentials: `e_0 = 1`, `e_{k+1} = exp(e_k)`.
pub fn exp_tower(k: usize) -> f64 {
    (0..k).fold(1.0, |acc, _| acc.exp())
}

/// Iterated logarithm `log_k t` (`log_0 t = t`).
pub fn iterated_log(k: usize, t: f64) -> f64 {
    (0..k).fold(t, |acc, _| acc.ln())
}

/// The envelope `b_{k,α}(t) = -(1/α) d/dt (log_k t)^{-α}`, written as
/// `1 / (t log t φ_{k,α}(t))`.
pub fn nekvinda_envelope(k: usize, alpha: f64, t: f64) -> Result<f64> {
    if k == 0 {
        return precondition("envelope order k must be at least 1");
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return precondition(format!("alpha must lie in (0, 1), got {alpha}"));
    }
    let ek = exp_tower(k);
    if !(t > ek) {
        return domain(format!("b_(k,alpha) is defined for t > e_{k} = {ek}, got {t}"));
    }
    let phi = match k {
        1 => t.ln().powf(alpha),
        _ => {
            let middle: f64 = (2..k).map(|j| iterated_log(j, t)).product();
            middle * iterated_log(k, t).powf(1.0 + alpha)
        }
    };
    Ok(1.0 / (t * t.ln() * phi))
}

/// On-disk exponent definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub dimension: usize,
    pub domain: Cube,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells_per_side: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<ExponentSpec>>,
}

impl ExponentSpec {
    fn param(&self, name: &str) -> Result<f64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("kind '{}' needs parameter '{name}'", self.kind)))
    }

    fn param_or(&self, name: &str, default: f64) -> f64 {
        self.params.get(name).copied().unwrap_or(default)
    }

    pub fn build(&self) -> Result<ExponentField> {
        if self.domain.dim() != self.dimension {
            return Err(Error::Shape(format!(
                "domain has {} coordinates but dimension is {}",
                self.domain.dim(),
                self.dimension
            )));
        }
        let dom = self.domain.clone();
        match self.kind.as_str() {
            "constant" => ExponentField::constant(self.param("value")?, dom),
            "step" => ExponentField::step(
                self.param("low")?,
                self.param("high")?,
                self.param_or("jump", 0.0),
                dom,
            ),
            "log_holder" => ExponentField::log_holder(self.param_or("base", 2.0), dom),
            "sinloglog" => ExponentField::sin_log_log(self.param("c")?, self.param("alpha")?, dom),
            "sinlog" => ExponentField::sin_log(self.param("c")?, self.param("alpha")?, dom),
            "sinintegral" => ExponentField::sin_integral(
                self.param("c")?,
                self.param_or("alpha", 1.0),
                self.param_or("t0", E),
                self.phi.unwrap_or(PhiFamily::One),
                dom,
            ),
            "radial" => {
                let inner = self
                    .inner
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("radial kind needs 'inner'".into()))?
                    .build()?;
                ExponentField::radial(inner, dom)
            }
            "conjugate" => self
                .inner
                .as_ref()
                .ok_or_else(|| Error::Precondition("conjugate kind needs 'inner'".into()))?
                .build()?
                .with_domain(dom.clone())
                .or_else(|_| Err(Error::Precondition("conjugate of a grid must be given as a grid".into())))?
                .conjugate(),
            "grid" => {
                let m = self
                    .cells_per_side
                    .ok_or_else(|| Error::Precondition("grid kind needs 'cells_per_side'".into()))?;
                let values = self
                    .values
                    .clone()
                    .ok_or_else(|| Error::Precondition("grid kind needs 'values'".into()))?;
                ExponentField::grid(GridFunction::new(dom, m, values)?)
            }
            other => precondition(format!("unknown exponent kind '{other}'")),
        }
    }

    pub fn from_field(field: &ExponentField) -> ExponentSpec {
        let mut spec = ExponentSpec {
            kind: String::new(),
            params: BTreeMap::new(),
            dimension: field.dimension,
            domain: field.domain.clone(),
            phi: None,
            cells_per_side: None,
            values: None,
            inner: None,
        };
        let mut set = |k: &str, v: f64| {
            spec.params.insert(k.to_string(), v);
        };
        let kind = match &field.kind {
            ExponentKind::Constant { value } => {
                set("value", *value);
                "constant"
            }
            ExponentKind::Step { low, high, jump } => {
                set("low", *low);
                set("high", *high);
                set("jump", *jump);
                "step"
            }
            ExponentKind::LogHolder { base } => {
                set("base", *base);
                "log_holder"
            }
            ExponentKind::SinLogLog { c, alpha } => {
                set("c", *c);
                set("alpha", *alpha);
                "sinloglog"
            }
            ExponentKind::SinLog { c, alpha } => {
                set("c", *c);
                set("alpha", *alpha);
                "sinlog"
            }
            ExponentKind::SinIntegral(s) => {
                set("c", s.c);
                set("alpha", s.alpha);
                set("t0", s.t0);
                "sinintegral"
            }
            ExponentKind::Radial(_) => "radial",
            ExponentKind::Grid(_) => "grid",
            ExponentKind::Conjugate(_) => "conjugate",
        };
        spec.kind = kind.to_string();
        match &field.kind {
            ExponentKind::SinIntegral(s) => spec.phi = Some(s.phi),
            ExponentKind::Radial(p) | ExponentKind::Conjugate(p) => {
                spec.inner = Some(Box::new(ExponentSpec::from_field(p)))
            }
            ExponentKind::Grid(g) => {
                spec.cells_per_side = Some(g.cells_per_side);
                spec.values = Some(g.values.clone());
            }
            _ => {}
        }
        spec
    }
}

impl Serialize for ExponentField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExponentSpec::from_field(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExponentField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        ExponentSpec::deserialize(de)?.build().map_err(serde::de::Error::custom)
    }
}
